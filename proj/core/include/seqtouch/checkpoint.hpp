// Copyright 2026 The seqtouch Authors
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

#ifndef SEQTOUCH_CHECKPOINT_HPP_
#define SEQTOUCH_CHECKPOINT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "seqtouch/params.hpp"

namespace seqtouch::ad {

// Flat binary checkpoint. Layout (little-endian):
//   magic "SEQTCKPT" | u32 version | u64 tensor count
//   per tensor: u32 name length | name bytes | u32 rank | u32 dims[rank]
//               | float64 payload
// Round-trips are byte-exact: save(load(f)) reproduces f bit for bit.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const ParamStore& params);

std::vector<std::pair<std::string, Tensor>> load_checkpoint(
    const std::string& path);

// Copies checkpoint values into an existing store. Names and shapes must
// match exactly in both directions; throws std::runtime_error otherwise.
void restore_checkpoint(const std::string& path, ParamStore& params);

}  // namespace seqtouch::ad

#endif  // SEQTOUCH_CHECKPOINT_HPP_
