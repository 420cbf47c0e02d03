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

#ifndef SEAFL_WORKER_POOL_H_
#define SEAFL_WORKER_POOL_H_

#include <cstddef>
#include <functional>

namespace seafl {

// Runs body(i) for i in [0, count) on up to num_workers threads and returns
// once all calls finished. The first exception thrown by any call is
// rethrown on the caller. Results must be written to per-index slots; the
// call order across threads is unspecified.
void ParallelFor(std::size_t num_workers, std::size_t count,
                 const std::function<void(std::size_t)>& body);

}  // namespace seafl

#endif  // SEAFL_WORKER_POOL_H_
