// Copyright 2026 The dpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPM_MEASURES_JSON_HPP
#define DPM_MEASURES_JSON_HPP

// JSON forms used by the CLI:
//   GroundPoint      {"atom": 0} | {"cont": 0.25}
//   DiscreteMeasure  {"atoms": [{"point": <GroundPoint>, "w": 0.4}, ...]}
//   BaseModel        {"alpha": 2, "atom_probs": [0.3, 0.7],
//                     "diffuse_weight": 0}

#include <json.hpp>

#include "dpm/measures.hpp"

namespace dpm {

void to_json(nlohmann::json& j, const GroundPoint& x);
GroundPoint ground_point_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const DiscreteMeasure& mu);
DiscreteMeasure discrete_measure_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const BaseModel& model);
/// alpha may be omitted when fallback_alpha is given.
BaseModel base_model_from_json(const nlohmann::json& j,
                               double fallback_alpha = 1.0);

}  // namespace dpm

#endif  // DPM_MEASURES_JSON_HPP
