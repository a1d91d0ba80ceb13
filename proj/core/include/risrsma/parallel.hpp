// SPDX-License-Identifier: Apache-2.0
//
// risrsma - robust beamforming for practical RIS-aided RSMA downlinks
// Copyright (C) 2026 The risrsma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <functional>

namespace risrsma {

/// Number of worker threads to use when the caller passes 0.
unsigned default_workers();

/// Calls body(i) for i in [0, count) on up to `workers` threads. Each index
/// runs exactly once; callers write into per-index slots so the reduction
/// order stays fixed regardless of the worker count. The first exception
/// thrown by a body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &body);

} // namespace risrsma
