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

#ifndef DPM_RNG_HPP
#define DPM_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace dpm {

/// Counter-based random stream (Philox4x32-10).
///
/// The 64-bit seed is the Philox key and the 64-bit stream id occupies the
/// upper half of the counter, so (seed, stream_id) fixes the sequence and
/// distinct stream ids never overlap. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1); safe to take the log of.
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// The raw bijection, exposed for known-answer tests.
  static Block philox4x32_10(Block counter, Key key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int next_ = 2;  // 64-bit words consumed from buffer_
};

/// Deterministic 64-bit mix of a label, used to give each verifier its own
/// range of stream ids.
std::uint64_t stream_tag(const char* label);

}  // namespace dpm

#endif  // DPM_RNG_HPP
