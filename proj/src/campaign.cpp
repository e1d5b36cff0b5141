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

#include "dpm/campaign.hpp"

#include <cstdlib>
#include <string>

namespace dpm {

unsigned default_jobs() {
  if (const char* env = std::getenv("DPM_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

StatBank::StatBank(std::vector<std::size_t> group_dims, std::size_t n_series)
    : series(n_series) {
  groups.reserve(group_dims.size());
  for (std::size_t d : group_dims) groups.emplace_back(d);
}

void StatBank::merge(const StatBank& other) {
  for (std::size_t i = 0; i < groups.size(); ++i) groups[i].merge(other.groups[i]);
  for (std::size_t i = 0; i < series.size(); ++i)
    series[i].insert(series[i].end(), other.series[i].begin(), other.series[i].end());
}

}  // namespace dpm
