// Copyright 2026 The expertgame Authors
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

#ifndef EXPERTGAME_PARALLEL_H_
#define EXPERTGAME_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace expertgame {

// Process-wide worker count for the data-parallel helpers.  Defaults to the
// EXPERTGAME_THREADS environment variable when set, otherwise the hardware
// concurrency.  Outputs never depend on this value: parallel work writes to
// disjoint slots and reductions run afterwards in index order.
int ThreadCount();
void SetThreadCount(int n);  // n <= 0 restores the default

// Invokes fn(chunk) for every chunk in [0, num_chunks), distributing chunks
// over up to ThreadCount() workers.  fn must only write to state owned by
// its chunk; no ordering between chunks is guaranteed.  Exceptions thrown by
// fn are rethrown on the calling thread.
void ParallelChunks(int64_t num_chunks, const std::function<void(int64_t)>& fn);

}  // namespace expertgame

#endif  // EXPERTGAME_PARALLEL_H_
