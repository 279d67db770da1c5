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

#include "kbgeo/reference.h"

#include <stdexcept>
#include <vector>

#include "kbgeo/error.h"

namespace kbgeo::reference {
namespace {

std::vector<Elem> EvalAll(const std::vector<Term>& terms, const Model& model,
                          const VarSet& vars, std::span<const Elem> point) {
  std::vector<Elem> out;
  out.reserve(terms.size());
  for (const Term& t : terms) out.push_back(EvalTerm(t, vars, point, model));
  return out;
}

bool Quantify(const Formula& f, const Model& model, const VarSet& vars,
              std::span<const Elem> point, bool universal) {
  auto coord = vars.index_of(f.name());
  if (!coord) {
    throw Error(ErrorKind::kVariable,
                "variable " + f.name() + " not in " + vars.to_string());
  }
  std::vector<Elem> mu(point.begin(), point.end());
  for (std::size_t v = 0; v < model.carrier_size(); ++v) {
    mu[*coord] = static_cast<Elem>(v);
    const bool sat = Satisfies(f.child(0), model, vars, mu);
    if (universal && !sat) return false;
    if (!universal && sat) return true;
  }
  return universal;
}

}  // namespace

bool Satisfies(const Formula& f, const Model& model, const VarSet& vars,
               std::span<const Elem> point) {
  switch (f.kind()) {
    case FormulaKind::kTrue:
      return true;
    case FormulaKind::kFalse:
      return false;
    case FormulaKind::kAtom: {
      auto rel = model.signature().find_rel(f.name());
      if (!rel) {
        throw Error(ErrorKind::kUnknownSymbol, "unknown relation " + f.name());
      }
      return model.holds(*rel, EvalAll(f.terms(), model, vars, point));
    }
    case FormulaKind::kEqual:
      return EvalTerm(f.terms()[0], vars, point, model) ==
             EvalTerm(f.terms()[1], vars, point, model);
    case FormulaKind::kNot:
      return !Satisfies(f.child(0), model, vars, point);
    case FormulaKind::kAnd:
      return Satisfies(f.child(0), model, vars, point) &&
             Satisfies(f.child(1), model, vars, point);
    case FormulaKind::kOr:
      return Satisfies(f.child(0), model, vars, point) ||
             Satisfies(f.child(1), model, vars, point);
    case FormulaKind::kImplies:
      return !Satisfies(f.child(0), model, vars, point) ||
             Satisfies(f.child(1), model, vars, point);
    case FormulaKind::kExists:
      return Quantify(f, model, vars, point, false);
    case FormulaKind::kForall:
      return Quantify(f, model, vars, point, true);
    case FormulaKind::kSubst: {
      // mu satisfies s_* u iff the composite point mu s satisfies u.
      const Substitution& s = f.substitution();
      const std::vector<Elem> composite =
          EvalAll(s.images(), model, vars, point);
      return Satisfies(f.child(0), model, s.source(), composite);
    }
  }
  throw std::logic_error("unhandled formula kind");
}

PointSet ValReference(const Formula& f, const SpacePtr& space) {
  Bitset bits(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) {
    const Point p = space->point(i);
    bits.assign(i, Satisfies(f, *space->model(), space->vars(), p.values));
  }
  return PointSet(space, std::move(bits));
}

}  // namespace kbgeo::reference
