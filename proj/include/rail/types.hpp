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

#ifndef RAIL_TYPES_HPP_
#define RAIL_TYPES_HPP_

#include <Eigen/Core>

namespace rail {

// All solver arithmetic runs in double precision; features are promoted from
// their f32 on-disk representation at load time.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Position in the global class index space shared by every domain.
using ClassIndex = int;

}  // namespace rail

#endif  // RAIL_TYPES_HPP_
