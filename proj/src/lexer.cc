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

#include "lexer.h"

#include <cctype>

namespace kbgeo::internal {

void SyntaxError(std::size_t pos, const std::string& what) {
  throw Error(ErrorKind::kSyntax,
              "syntax error at position " + std::to_string(pos) + ": " + what);
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  };
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t pos = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), pos});
      i = j;
      continue;
    }
    auto single = [&](Tok kind) {
      out.push_back({kind, std::string(1, c), pos});
      ++i;
    };
    switch (c) {
      case '(': single(Tok::kLParen); continue;
      case ')': single(Tok::kRParen); continue;
      case ',': single(Tok::kComma); continue;
      case '.': single(Tok::kDot); continue;
      case '!': single(Tok::kBang); continue;
      case '&': single(Tok::kAmp); continue;
      case '|': single(Tok::kPipe); continue;
      case '=': single(Tok::kEq); continue;
      case '{': single(Tok::kLBrace); continue;
      case '}': single(Tok::kRBrace); continue;
      default: break;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::kArrow, "->", pos});
      i += 2;
      continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Tok::kAssign, ":=", pos});
      i += 2;
      continue;
    }
    SyntaxError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::kEnd, "", text.size() + 1});
  return out;
}

Token TokenStream::expect(Tok kind, const char* what) {
  if (!at(kind)) {
    const Token& t = peek();
    SyntaxError(t.pos, std::string("expected ") + what + ", found " +
                           (t.kind == Tok::kEnd ? std::string("end of input")
                                                : "'" + t.text + "'"));
  }
  return next();
}

}  // namespace kbgeo::internal
