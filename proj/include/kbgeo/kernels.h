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

#ifndef KBGEO_KERNELS_H_
#define KBGEO_KERNELS_H_

// Data-parallel inner loops over affine spaces. Every kernel has a serial
// twin in kernels::serial with the same contract; tests compare the two and
// the benchmark times them.

#include <cstddef>
#include <span>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/bitset.h"

namespace kbgeo {

class AffineSpace;

namespace kernels {

// Spaces smaller than this run serially even in the parallel kernels.
inline constexpr std::size_t kParallelThreshold = 1 << 12;

// Value of the term at every point of the space.
std::vector<Elem> TermTable(const Term& t, const AffineSpace& space);

// Points where (args[0][p], ..., args[k-1][p]) is in the relation table.
Bitset AtomTable(const Model& model, std::size_t rel,
                 std::span<const std::vector<Elem>> args);

Bitset EqualTable(std::span<const Elem> lhs, std::span<const Elem> rhs);

Bitset Cylindrify(const Bitset& a, const AffineSpace& space,
                  std::size_t coord);

// For every point mu of `from`, the index in `to` of the point
// x_i -> value of images[i] at mu.
std::vector<std::size_t> TransportMap(std::span<const Term> images,
                                      const AffineSpace& from,
                                      const AffineSpace& to);

// { p : a[map[p]] }.
Bitset Preimage(const Bitset& a, std::span<const std::size_t> map);

// { map[p] : a[p] } in a space of out_size points.
Bitset Image(const Bitset& a, std::span<const std::size_t> map,
             std::size_t out_size);

namespace serial {

std::vector<Elem> TermTable(const Term& t, const AffineSpace& space);
Bitset AtomTable(const Model& model, std::size_t rel,
                 std::span<const std::vector<Elem>> args);
Bitset EqualTable(std::span<const Elem> lhs, std::span<const Elem> rhs);
Bitset Cylindrify(const Bitset& a, const AffineSpace& space,
                  std::size_t coord);
std::vector<std::size_t> TransportMap(std::span<const Term> images,
                                      const AffineSpace& from,
                                      const AffineSpace& to);
Bitset Preimage(const Bitset& a, std::span<const std::size_t> map);
Bitset Image(const Bitset& a, std::span<const std::size_t> map,
             std::size_t out_size);

}  // namespace serial
}  // namespace kernels
}  // namespace kbgeo

#endif  // KBGEO_KERNELS_H_
