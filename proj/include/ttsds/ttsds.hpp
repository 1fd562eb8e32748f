// Copyright 2026 The TTSDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TTSDS_TTSDS_HPP_
#define TTSDS_TTSDS_HPP_

#include "ttsds/distance.hpp"
#include "ttsds/error.hpp"
#include "ttsds/extract.hpp"
#include "ttsds/feature_store.hpp"
#include "ttsds/noise.hpp"
#include "ttsds/pitch.hpp"
#include "ttsds/registry.hpp"
#include "ttsds/scoring.hpp"
#include "ttsds/stats.hpp"
#include "ttsds/text_features.hpp"
#include "ttsds/wada_snr.hpp"
#include "ttsds/wav.hpp"

#endif  // TTSDS_TTSDS_HPP_
