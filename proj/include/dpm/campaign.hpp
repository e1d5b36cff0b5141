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

#ifndef DPM_CAMPAIGN_HPP
#define DPM_CAMPAIGN_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "dpm/rng.hpp"
#include "dpm/stats.hpp"

namespace dpm {

struct CampaignOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::uint64_t shard_size = 4096;
};

/// Workers to use when nothing was requested explicitly: DPM_JOBS if set and
/// positive, else the hardware concurrency, else 1.
unsigned default_jobs();

/// Stream id of shard `shard` under a verifier tag. The tag owns the high
/// 32 bits, the shard index the low 32.
inline std::uint64_t shard_stream(std::uint64_t tag, std::uint64_t shard) {
  return (tag & 0xFFFFFFFF00000000ULL) | (shard & 0xFFFFFFFFULL);
}

/// Runs `kernel(rng, acc)` opts.n times. Work is cut into fixed-size shards,
/// each with its own stream and accumulator copied from `prototype`; the
/// shard accumulators are merged in shard order, so the result depends only
/// on (seed, tag, n) and not on the number of workers.
///
/// Acc needs copy construction and merge(const Acc&).
template <class Acc, class Kernel>
Acc run_campaign(const CampaignOptions& opts, std::uint64_t tag,
                 const Acc& prototype, Kernel kernel) {
  const std::uint64_t shard_size = std::max<std::uint64_t>(1, opts.shard_size);
  const std::uint64_t shards = (opts.n + shard_size - 1) / shard_size;
  std::vector<Acc> parts(shards, prototype);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const std::uint64_t s = next.fetch_add(1);
      if (s >= shards) return;
      try {
        RngStream rng(opts.seed, shard_stream(tag, s));
        const std::uint64_t begin = s * shard_size;
        const std::uint64_t end = std::min(opts.n, begin + shard_size);
        Acc& acc = parts[s];
        for (std::uint64_t i = begin; i < end; ++i) kernel(rng, acc);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(shards);
        return;
      }
    }
  };

  const unsigned jobs = static_cast<unsigned>(
      std::clamp<std::uint64_t>(opts.jobs == 0 ? 1 : opts.jobs, 1,
                                std::max<std::uint64_t>(1, shards)));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  Acc total = prototype;
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// General-purpose accumulator: several co-moment groups plus raw sample
/// series (for KS tests). Series are concatenated in shard order.
struct StatBank {
  std::vector<CoMoments> groups;
  std::vector<std::vector<double>> series;

  StatBank() = default;
  StatBank(std::vector<std::size_t> group_dims, std::size_t n_series);

  void merge(const StatBank& other);
};

}  // namespace dpm

#endif  // DPM_CAMPAIGN_HPP
