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

#ifndef KBGEO_REFERENCE_H_
#define KBGEO_REFERENCE_H_

// Direct Tarskian satisfaction, one point at a time. Used as an independent
// oracle for the bitset valuation; it shares no code with the kernels.

#include <span>

#include "kbgeo/algebra.h"
#include "kbgeo/formula.h"
#include "kbgeo/semantics.h"

namespace kbgeo::reference {

// Does the assignment `point` (VarSet order of `vars`) satisfy f in model?
bool Satisfies(const Formula& f, const Model& model, const VarSet& vars,
               std::span<const Elem> point);

// Val computed by calling Satisfies on every point.
PointSet ValReference(const Formula& f, const SpacePtr& space);

}  // namespace kbgeo::reference

#endif  // KBGEO_REFERENCE_H_
