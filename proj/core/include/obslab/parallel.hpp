// Copyright 2026 The obslab authors
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

#include <functional>

namespace obslab {

// Worker cap: OBSLAB_THREADS if set (clamped to [1, hardware]), else the
// hardware concurrency.
int worker_count();

// Static slot-parallel loop: task i writes only slot i of preallocated
// output, so results are independent of the thread count and schedule.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace obslab
