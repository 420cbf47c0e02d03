/*
 * Copyright 2026 The SEAFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SEAFL_RNG_H_
#define SEAFL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace seafl {

using Rng = std::mt19937_64;

// Mixes a root seed with a list of stream identifiers (client id, purpose tag,
// dispatch counter, ...) into an independent 64-bit seed. Adding a stream
// never perturbs the seeds of existing streams.
std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> stream_ids);

inline Rng MakeRng(std::uint64_t root,
                   std::initializer_list<std::uint64_t> stream_ids) {
  return Rng(DeriveSeed(root, stream_ids));
}

// Purpose tags for DeriveSeed so streams used for different things never
// collide.
enum class StreamTag : std::uint64_t {
  kModelInit = 1,
  kData = 2,
  kPartition = 3,
  kDeviceDelay = 4,
  kTraining = 5,
  kServer = 6,
  kTestSplit = 7,
};

inline std::uint64_t Tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace seafl

#endif  // SEAFL_RNG_H_
