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

#include "kbgeo/model_io.h"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "kbgeo/error.h"

namespace kbgeo {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> Words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// "a, b,c" -> {a, b, c}; empty text gives an empty list.
std::vector<std::string> CommaList(std::string_view s) {
  std::vector<std::string> out;
  const std::string t = Trim(s);
  if (t.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = t.find(',', start);
    out.push_back(Trim(std::string_view(t).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

class ModelParser {
 public:
  ModelPtr parse(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      std::string_view raw = text.substr(pos, end - pos);
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
        raw = raw.substr(0, hash);
      }
      const std::string line = Trim(raw);
      if (!line.empty()) {
        try {
          handle(line);
        } catch (const Error& e) {
          throw Error(e.kind(),
                      "line " + std::to_string(line_no) + ": " + e.what());
        }
      }
      pos = end + 1;
    }
    if (!builder_) {
      throw Error(ErrorKind::kValidation, "model file has no carrier line");
    }
    ModelPtr model = builder_->build();
    if (!with_equality_) model = model->with_equality(false);
    return model;
  }

 private:
  void handle(const std::string& line) {
    const std::vector<std::string> words = Words(line);
    const std::string& head = words[0];
    if (line == "signature") {
      if (builder_ || in_signature_) syntax("unexpected signature section");
      in_signature_ = true;
      return;
    }
    if (line.rfind("carrier:", 0) == 0) {
      if (builder_) syntax("duplicate carrier line");
      in_signature_ = false;
      builder_.emplace(Signature(ops_, rels_, true),
                       Words(std::string_view(line).substr(8)));
      return;
    }
    if (head == "flag") {
      if (words.size() != 3 || words[1] != "with_equality" ||
          (words[2] != "on" && words[2] != "off")) {
        syntax("expected 'flag with_equality on|off'");
      }
      with_equality_ = words[2] == "on";
      return;
    }
    const auto colon = line.find(':');
    if ((head == "op" || head == "rel") && colon == std::string::npos) {
      declare(words);
      return;
    }
    if (head == "op" || head == "rel") {
      if (!builder_) syntax("table row before the carrier line");
      const std::string name = Trim(std::string_view(line).substr(
          head.size(), colon - head.size()));
      const std::string body = line.substr(colon + 1);
      if (head == "rel") {
        builder_->add_tuple(name, CommaList(body));
        return;
      }
      const auto arrow = body.find("->");
      if (arrow == std::string::npos) syntax("op row needs '->'");
      const std::string out = Trim(std::string_view(body).substr(arrow + 2));
      if (out.empty()) syntax("op row has no output");
      builder_->set_op(name, CommaList(std::string_view(body).substr(0, arrow)),
                       out);
      return;
    }
    syntax("unrecognized line '" + line + "'");
  }

  void declare(const std::vector<std::string>& words) {
    if (!in_signature_) syntax("declaration outside the signature section");
    if (words.size() != 3) syntax("expected '" + words[0] + " NAME ARITY'");
    int arity = 0;
    try {
      std::size_t used = 0;
      arity = std::stoi(words[2], &used);
      if (used != words[2].size()) throw std::invalid_argument("arity");
    } catch (const std::exception&) {
      syntax("arity '" + words[2] + "' is not a number");
    }
    if (words[0] == "op") {
      ops_.push_back(OpSymbol{words[1], arity});
    } else {
      rels_.push_back(RelSymbol{words[1], arity});
    }
    Signature(ops_, rels_, true);  // validates names and arities early
  }

  [[noreturn]] static void syntax(const std::string& what) {
    throw Error(ErrorKind::kSyntax, what);
  }

  bool in_signature_ = false;
  bool with_equality_ = true;
  std::vector<OpSymbol> ops_;
  std::vector<RelSymbol> rels_;
  std::optional<ModelBuilder> builder_;
};

std::string JoinLabels(const Model& m, std::span<const Elem> elems,
                       const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i > 0) out += sep;
    out += m.label(elems[i]);
  }
  return out;
}

}  // namespace

ModelPtr ParseModelText(std::string_view text) {
  return ModelParser().parse(text);
}

ModelPtr LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseModelText(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string PrintModel(const Model& model) {
  const Signature& sig = model.signature();
  std::string out = "signature\n";
  for (const OpSymbol& op : sig.ops()) {
    out += "  op " + op.name + " " + std::to_string(op.arity) + "\n";
  }
  for (const RelSymbol& rel : sig.rels()) {
    out += "  rel " + rel.name + " " + std::to_string(rel.arity) + "\n";
  }
  out += "carrier:";
  for (const std::string& label : model.carrier()) out += " " + label;
  out += "\n";
  const std::size_t base = model.carrier_size();
  for (std::size_t o = 0; o < sig.ops().size(); ++o) {
    const std::size_t k = static_cast<std::size_t>(sig.ops()[o].arity);
    const std::vector<Elem>& table = model.op_table(o);
    std::vector<Elem> args(k);
    for (std::size_t row = 0; row < table.size(); ++row) {
      std::size_t r = row;
      for (std::size_t i = k; i-- > 0;) {
        args[i] = static_cast<Elem>(r % base);
        r /= base;
      }
      out += "op " + sig.ops()[o].name + ": " + JoinLabels(model, args, ",") +
             (k == 0 ? "-> " : " -> ") + model.label(table[row]) + "\n";
    }
  }
  for (std::size_t r = 0; r < sig.rels().size(); ++r) {
    for (const auto& tuple : model.rel_tuples(r)) {
      out += "rel " + sig.rels()[r].name + ": " +
             JoinLabels(model, tuple, ",") + "\n";
    }
  }
  out += std::string("flag with_equality ") +
         (sig.with_equality() ? "on" : "off") + "\n";
  return out;
}

}  // namespace kbgeo
