// Copyright 2026 The kbgeo Authors
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

#ifndef KBGEO_MODEL_IO_H_
#define KBGEO_MODEL_IO_H_

#include <string>
#include <string_view>

#include "kbgeo/algebra.h"

namespace kbgeo {

// Line-oriented model files; '#' starts a comment.
//
//   signature
//     op neg 1
//     rel P 1
//   carrier: 0 1
//   op neg: 0 -> 1
//   op neg: 1 -> 0
//   rel P: 1
//   flag with_equality on
//
// Declarations follow `signature` and precede `carrier:`. Table rows list
// inputs separated by commas; a nullary row is written `op c: -> 0`.
// Errors carry the 1-based line number.
ModelPtr ParseModelText(std::string_view text);

// Throws Error(kIo) when the file cannot be read.
ModelPtr LoadModel(const std::string& path);

// Canonical text that ParseModelText reads back to an identical model.
std::string PrintModel(const Model& model);

}  // namespace kbgeo

#endif  // KBGEO_MODEL_IO_H_
