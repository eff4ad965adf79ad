#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crnkit/decide.hpp"

namespace crnkit {

/// a . x <= b
struct ThresholdAtom {
  std::vector<Count> a;
  Count b = 0;
};

/// a . x == b (mod m), with m >= 2 and 0 <= b < m.
struct ModAtom {
  std::vector<Count> a;
  Count b = 0;
  Count m = 2;
};

using Atom = std::variant<ThresholdAtom, ModAtom>;

struct PredicateExpr {
  enum class Op { kAtom, kAnd, kOr, kNot };
  Op op = Op::kAtom;
  std::size_t atom = 0;  // index into Predicate::atoms for kAtom
  std::vector<PredicateExpr> children;

  static PredicateExpr leaf(std::size_t atom_index);
  static PredicateExpr all_of(std::vector<PredicateExpr> children);
  static PredicateExpr any_of(std::vector<PredicateExpr> children);
  static PredicateExpr negate(PredicateExpr child);
};

struct Predicate {
  std::vector<Atom> atoms;
  PredicateExpr expr;
  std::size_t arity = 0;
};

/// Raised when an atom's verdict is neither Accept nor Reject.
class UndecidedError : public Error {
 public:
  UndecidedError(const std::string& message, Verdict verdict)
      : Error(message), verdict_(std::move(verdict)) {}
  const Verdict& verdict() const { return verdict_; }

 private:
  Verdict verdict_;
};

/// Grammar: expr := mod(a1,...,an; b; m) | thr(a1,...,an; b)
///                | and(expr, ...) | or(expr, ...) | not(expr)
/// Mod residues are normalized into [0, m).
Predicate parse_predicate(std::string_view text);
std::string to_string(const Predicate& p);

/// Arithmetic meaning, used as the reference oracle.
bool holds(const Atom& atom, const std::vector<Count>& x);
bool holds(const Predicate& p, const std::vector<Count>& x);

/// Default input species names X1..Xn.
std::vector<std::string> default_input_names(std::size_t n);

/// Residue-token decider for a . x == b (mod m).
Crd compile_mod_atom(const std::vector<Count>& a, Count b, Count m,
                     std::vector<std::string> input_names = {});
/// Bounded-value token decider for a . x <= b.
Crd compile_threshold_atom(const std::vector<Count>& a, Count b,
                           std::vector<std::string> input_names = {});
Crd compile_atom(const Atom& atom, std::vector<std::string> input_names = {});

/// Evaluates `expr` over halting verdicts of the compiled atoms (one Crd per
/// atom, inputs in the same order). Throws UndecidedError when an atom's
/// verdict is Undecided or Inconclusive.
bool eval_predicate(const PredicateExpr& expr, const std::vector<Crd>& crds,
                    const std::vector<Count>& x, std::size_t bound);

}  // namespace crnkit
