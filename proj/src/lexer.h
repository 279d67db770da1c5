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

#ifndef KBGEO_SRC_LEXER_H_
#define KBGEO_SRC_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "kbgeo/error.h"

namespace kbgeo::internal {

enum class Tok {
  kIdent,
  kLParen,
  kRParen,
  kComma,
  kDot,
  kBang,
  kAmp,
  kPipe,
  kArrow,
  kEq,
  kLBrace,
  kRBrace,
  kAssign,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 1-based column
};

std::vector<Token> Tokenize(std::string_view text);

[[noreturn]] void SyntaxError(std::size_t pos, const std::string& what);

// Cursor over a token stream shared by the term and formula parsers.
class TokenStream {
 public:
  explicit TokenStream(std::string_view text) : tokens_(Tokenize(text)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  Token next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++index_;
    return true;
  }
  Token expect(Tok kind, const char* what);

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace kbgeo::internal

namespace kbgeo {
class Term;
class Signature;
class VarSet;
namespace internal {
// Parses one term starting at the current token.
Term ParseTermFrom(TokenStream& ts, const Signature& sig, const VarSet& vars);
}  // namespace internal
}  // namespace kbgeo

#endif  // KBGEO_SRC_LEXER_H_
