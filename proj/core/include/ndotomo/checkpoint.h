// Copyright 2026 The ndotomo Authors
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

#ifndef NDOTOMO_CHECKPOINT_H
#define NDOTOMO_CHECKPOINT_H

#include <filesystem>
#include <iosfwd>

#include "ndotomo/ndo.h"

namespace ndotomo {

inline constexpr int kCheckpointVersion = 1;

// JSON document:
//   {"format": "ndotomo-checkpoint", "version": 1, "bit_order": "msb-first",
//    "n_visible": N, "n_hidden": nh, "n_aux": na,
//    "amplitude": {"W": [[..]], "U": [[..]], "b": [..], "c": [..], "d": [..]},
//    "phase":     {"W": [[..]], "U": [[..]], "b": [..], "c": [..]}}
// Numbers are written in shortest round-trip decimal form (at most 17
// significant digits), so load(save(p)) == p bit for bit.
void save_checkpoint(const NdoParams& params, std::ostream& out);
NdoParams load_checkpoint(std::istream& in);

void save_checkpoint(const NdoParams& params, const std::filesystem::path& path);
NdoParams load_checkpoint(const std::filesystem::path& path);

}  // namespace ndotomo

#endif  // NDOTOMO_CHECKPOINT_H
