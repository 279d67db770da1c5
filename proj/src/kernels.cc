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

#include "kbgeo/kernels.h"

#include <cstdint>
#include <stdexcept>
#include <string>

#include "kbgeo/error.h"
#include "kbgeo/semantics.h"

namespace kbgeo {
namespace kernels {
namespace {

using Word = std::uint64_t;

std::size_t NumWords(std::size_t n) { return (n + 63) / 64; }

std::size_t OpIndex(const Model& model, const std::string& name) {
  auto op = model.signature().find_op(name);
  if (!op) {
    throw Error(ErrorKind::kUnknownSymbol, "unknown operation " + name);
  }
  return *op;
}

// Runs fn(i) for i in [0, n). Only opens a parallel region when asked, so
// small spaces pay nothing for the threading runtime.
template <typename Fn>
void ForRange(std::int64_t n, bool parallel, Fn fn) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  }
}

// Fills a bitset of n bits from a per-point predicate, one word per task.
template <typename Pred>
Bitset FillBits(std::size_t n, bool parallel, Pred pred) {
  Bitset out(n);
  Word* words = out.mutable_words().data();
  const auto nw = static_cast<std::int64_t>(NumWords(n));
  ForRange(nw, parallel, [&](std::int64_t w) {
    const std::size_t begin = static_cast<std::size_t>(w) * 64;
    const std::size_t end = std::min(n, begin + 64);
    Word bits = 0;
    for (std::size_t p = begin; p < end; ++p) {
      if (pred(p)) bits |= Word{1} << (p - begin);
    }
    words[w] = bits;
  });
  return out;
}

std::vector<Elem> TermTableImpl(const Term& t, const AffineSpace& space,
                                bool parallel) {
  const std::size_t n = space.size();
  const auto sn = static_cast<std::int64_t>(n);
  std::vector<Elem> out(n);
  if (t.is_var()) {
    auto coord = space.vars().index_of(t.name());
    if (!coord) {
      throw Error(ErrorKind::kVariable, "variable " + t.name() + " not in " +
                                            space.vars().to_string());
    }
    const std::size_t c = *coord;
    ForRange(sn, parallel, [&](std::int64_t p) {
      out[p] = space.coordinate(static_cast<std::size_t>(p), c);
    });
    return out;
  }
  const Model& model = *space.model();
  const std::size_t op = OpIndex(model, t.name());
  const std::vector<Elem>& table = model.op_table(op);
  const std::size_t k = t.args().size();
  if (k == 0) {
    out.assign(n, table[0]);
    return out;
  }
  std::vector<std::vector<Elem>> args;
  args.reserve(k);
  for (const Term& a : t.args()) {
    args.push_back(TermTableImpl(a, space, parallel));
  }
  const std::size_t base = space.base();
  ForRange(sn, parallel, [&](std::int64_t p) {
    std::size_t row = 0;
    for (std::size_t i = 0; i < k; ++i) row = row * base + args[i][p];
    out[p] = table[row];
  });
  return out;
}

Bitset AtomTableImpl(const Model& model, std::size_t rel,
                     std::span<const std::vector<Elem>> args, bool parallel) {
  const Bitset& table = model.rel_table(rel);
  const std::size_t base = model.carrier_size();
  const std::size_t n = args.empty() ? 0 : args[0].size();
  return FillBits(n, parallel, [&](std::size_t p) {
    std::size_t row = 0;
    for (const auto& col : args) row = row * base + col[p];
    return table.test(row);
  });
}

Bitset EqualTableImpl(std::span<const Elem> lhs, std::span<const Elem> rhs,
                      bool parallel) {
  if (lhs.size() != rhs.size()) {
    throw std::logic_error("EqualTable: column sizes differ");
  }
  return FillBits(lhs.size(), parallel,
                  [&](std::size_t p) { return lhs[p] == rhs[p]; });
}

Bitset CylindrifyImpl(const Bitset& a, const AffineSpace& space,
                      std::size_t coord, bool parallel) {
  const std::size_t n = space.size();
  const std::size_t stride = space.stride(coord);
  const std::size_t base = space.base();
  const std::size_t block = stride * base;
  return FillBits(n, parallel, [&](std::size_t p) {
    // First point of the fibre through p along `coord`.
    const std::size_t start = (p / block) * block + p % stride;
    for (std::size_t v = 0; v < base; ++v) {
      if (a.test(start + v * stride)) return true;
    }
    return false;
  });
}

std::vector<std::size_t> TransportMapImpl(std::span<const Term> images,
                                          const AffineSpace& from,
                                          const AffineSpace& to,
                                          bool parallel) {
  if (images.size() != to.dim()) {
    throw std::logic_error("TransportMap: image count differs from target dim");
  }
  const std::size_t n = from.size();
  const auto sn = static_cast<std::int64_t>(n);
  std::vector<std::size_t> map(n, 0);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::vector<Elem> col = TermTableImpl(images[i], from, parallel);
    const std::size_t stride = to.stride(i);
    ForRange(sn, parallel, [&](std::int64_t p) {
      map[p] += static_cast<std::size_t>(col[p]) * stride;
    });
  }
  return map;
}

Bitset PreimageImpl(const Bitset& a, std::span<const std::size_t> map,
                    bool parallel) {
  return FillBits(map.size(), parallel,
                  [&](std::size_t p) { return a.test(map[p]); });
}

Bitset ImageImpl(const Bitset& a, std::span<const std::size_t> map,
                 std::size_t out_size, bool parallel) {
  Bitset out(out_size);
  Word* words = out.mutable_words().data();
  const auto sn = static_cast<std::int64_t>(map.size());
  if (!parallel) {
    for (std::int64_t p = 0; p < sn; ++p) {
      if (!a.test(static_cast<std::size_t>(p))) continue;
      words[map[p] >> 6] |= Word{1} << (map[p] & 63);
    }
    return out;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < sn; ++p) {
    if (!a.test(static_cast<std::size_t>(p))) continue;
    const std::size_t q = map[p];
    const Word bit = Word{1} << (q & 63);
#pragma omp atomic
    words[q >> 6] |= bit;
  }
  return out;
}

bool Big(std::size_t n) { return n >= kParallelThreshold; }

}  // namespace

std::vector<Elem> TermTable(const Term& t, const AffineSpace& space) {
  return TermTableImpl(t, space, Big(space.size()));
}

Bitset AtomTable(const Model& model, std::size_t rel,
                 std::span<const std::vector<Elem>> args) {
  const std::size_t n = args.empty() ? 0 : args[0].size();
  return AtomTableImpl(model, rel, args, Big(n));
}

Bitset EqualTable(std::span<const Elem> lhs, std::span<const Elem> rhs) {
  return EqualTableImpl(lhs, rhs, Big(lhs.size()));
}

Bitset Cylindrify(const Bitset& a, const AffineSpace& space,
                  std::size_t coord) {
  return CylindrifyImpl(a, space, coord, Big(space.size()));
}

std::vector<std::size_t> TransportMap(std::span<const Term> images,
                                      const AffineSpace& from,
                                      const AffineSpace& to) {
  return TransportMapImpl(images, from, to, Big(from.size()));
}

Bitset Preimage(const Bitset& a, std::span<const std::size_t> map) {
  return PreimageImpl(a, map, Big(map.size()));
}

Bitset Image(const Bitset& a, std::span<const std::size_t> map,
             std::size_t out_size) {
  return ImageImpl(a, map, out_size, Big(map.size()));
}

namespace serial {

std::vector<Elem> TermTable(const Term& t, const AffineSpace& space) {
  return TermTableImpl(t, space, false);
}

Bitset AtomTable(const Model& model, std::size_t rel,
                 std::span<const std::vector<Elem>> args) {
  return AtomTableImpl(model, rel, args, false);
}

Bitset EqualTable(std::span<const Elem> lhs, std::span<const Elem> rhs) {
  return EqualTableImpl(lhs, rhs, false);
}

Bitset Cylindrify(const Bitset& a, const AffineSpace& space,
                  std::size_t coord) {
  return CylindrifyImpl(a, space, coord, false);
}

std::vector<std::size_t> TransportMap(std::span<const Term> images,
                                      const AffineSpace& from,
                                      const AffineSpace& to) {
  return TransportMapImpl(images, from, to, false);
}

Bitset Preimage(const Bitset& a, std::span<const std::size_t> map) {
  return PreimageImpl(a, map, false);
}

Bitset Image(const Bitset& a, std::span<const std::size_t> map,
             std::size_t out_size) {
  return ImageImpl(a, map, out_size, false);
}

}  // namespace serial
}  // namespace kernels
}  // namespace kbgeo
