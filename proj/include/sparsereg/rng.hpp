// Copyright 2026 The sparsereg Authors.
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

#pragma once

#include <cstdint>

namespace sparsereg {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Counter-based generator: draw i of a stream is mix64(key + i * golden), so a
// stream is fully described by (key, counter) and never shares state with
// another. Streams are derived, not split from a running state:
//
//   key(seed, stream) = mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019)).
//
// Experiment sweeps derive the per-replication seed the same way
// (derive_seed), so results do not depend on scheduling or thread count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();              // (0, 1)
  double normal();               // standard normal, Box-Muller
  std::uint64_t below(std::uint64_t bound);  // uniform on [0, bound)

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace sparsereg
