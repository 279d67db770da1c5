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

#ifndef KBGEO_BITSET_H_
#define KBGEO_BITSET_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace kbgeo {

// Fixed-size bitset with a canonical word layout: bit i lives in word i/64 and
// every bit past size() is zero. Equality, ordering and hashing are therefore
// exact functions of the represented subset.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size, bool value = false);

  static Bitset Full(std::size_t size) { return Bitset(size, true); }

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void assign(std::size_t i, bool v) {
    if (v) {
      set(i);
    } else {
      reset(i);
    }
  }

  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }
  bool all() const { return count() == size_; }

  Bitset& operator&=(const Bitset& other);
  Bitset& operator|=(const Bitset& other);
  // Set difference: this \ other.
  Bitset& subtract(const Bitset& other);
  Bitset complement() const;

  bool is_subset_of(const Bitset& other) const;
  bool intersects(const Bitset& other) const;

  // Indices of set bits in increasing order.
  std::vector<std::size_t> indices() const;

  // Hex digits, most significant first, bit 0 = least significant.
  // Always ceil(size/4) digits (at least one).
  std::string to_hex() const;

  std::size_t hash() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& mutable_words() { return words_; }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator!=(const Bitset& a, const Bitset& b) { return !(a == b); }
  // Orders by size, then by the value of the bitset read as an unsigned
  // integer (bit 0 least significant).
  friend bool operator<(const Bitset& a, const Bitset& b);

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
inline Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace kbgeo

#endif  // KBGEO_BITSET_H_
