// Copyright 2026 The RAIL Authors. All Rights Reserved.
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

#ifndef RAIL_SRC_CHECKPOINT_FORMAT_HPP_
#define RAIL_SRC_CHECKPOINT_FORMAT_HPP_

#include <cstdint>
#include <string_view>

namespace rail::detail {

// Adapter checkpoints: 8-byte magic, u32 version, u8 adapter kind, then the
// adapter-specific body (all little-endian, matrices row-major f64).
inline constexpr std::string_view kCheckpointMagic = "RAILCKP1";
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::uint8_t kPrimalCheckpoint = 1;
inline constexpr std::uint8_t kDualCheckpoint = 2;

}  // namespace rail::detail

#endif  // RAIL_SRC_CHECKPOINT_FORMAT_HPP_
