#include "crnkit/predicate.hpp"

#include "crnkit/crn_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

namespace crnkit {

PredicateExpr PredicateExpr::leaf(std::size_t atom_index) {
  PredicateExpr e;
  e.op = Op::kAtom;
  e.atom = atom_index;
  return e;
}

PredicateExpr PredicateExpr::all_of(std::vector<PredicateExpr> children) {
  PredicateExpr e;
  e.op = Op::kAnd;
  e.children = std::move(children);
  return e;
}

PredicateExpr PredicateExpr::any_of(std::vector<PredicateExpr> children) {
  PredicateExpr e;
  e.op = Op::kOr;
  e.children = std::move(children);
  return e;
}

PredicateExpr PredicateExpr::negate(PredicateExpr child) {
  PredicateExpr e;
  e.op = Op::kNot;
  e.children.push_back(std::move(child));
  return e;
}

namespace {

Count floor_mod(Count x, Count m) {
  Count r = x % m;
  return r < 0 ? r + m : r;
}

Count dot(const std::vector<Count>& a, const std::vector<Count>& x) {
  if (a.size() != x.size()) throw ContractError("predicate arity mismatch");
  Count sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Count term;
    if (__builtin_mul_overflow(a[i], x[i], &term) || __builtin_add_overflow(sum, term, &sum)) {
      throw OverflowError("predicate evaluation overflows 64 bits");
    }
  }
  return sum;
}

class PredicateParser {
 public:
  explicit PredicateParser(std::string_view text) : text_(text) {}

  Predicate parse() {
    Predicate p;
    p.expr = expr(p);
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    bool first = true;
    for (const Atom& atom : p.atoms) {
      const std::size_t n = std::visit([](const auto& a) { return a.a.size(); }, atom);
      if (!first && n != p.arity) fail("atoms have different arities");
      p.arity = n;
      first = false;
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, 1, static_cast<int>(pos_) + 1);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool consume(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!consume(ch)) fail(std::string("expected '") + ch + "'");
  }
  std::string word() {
    skip();
    std::string w;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      w += text_[pos_++];
    }
    return w;
  }
  Count integer() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Count v = 0;
    const char* first = text_.data() + start;
    if (first < text_.data() + pos_ && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("expected an integer");
    }
    return v;
  }
  std::vector<Count> coefficients() {
    std::vector<Count> a{integer()};
    while (consume(',')) a.push_back(integer());
    return a;
  }

  PredicateExpr expr(Predicate& p) {
    const std::size_t start = pos_;
    const std::string w = word();
    expect('(');
    if (w == "mod") {
      ModAtom atom;
      atom.a = coefficients();
      expect(';');
      const Count b = integer();
      expect(';');
      atom.m = integer();
      if (atom.m < 2) fail("modulus must be at least 2");
      atom.b = floor_mod(b, atom.m);
      expect(')');
      p.atoms.emplace_back(std::move(atom));
      return PredicateExpr::leaf(p.atoms.size() - 1);
    }
    if (w == "thr") {
      ThresholdAtom atom;
      atom.a = coefficients();
      expect(';');
      atom.b = integer();
      expect(')');
      p.atoms.emplace_back(std::move(atom));
      return PredicateExpr::leaf(p.atoms.size() - 1);
    }
    if (w == "not") {
      PredicateExpr child = expr(p);
      expect(')');
      return PredicateExpr::negate(std::move(child));
    }
    if (w == "and" || w == "or") {
      std::vector<PredicateExpr> children;
      if (!consume(')')) {
        do {
          children.push_back(expr(p));
        } while (consume(','));
        expect(')');
      }
      return w == "and" ? PredicateExpr::all_of(std::move(children))
                        : PredicateExpr::any_of(std::move(children));
    }
    pos_ = start;
    fail("expected mod, thr, and, or, or not");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string join_coefficients(const std::vector<Count>& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out;
}

std::string expr_to_string(const Predicate& p, const PredicateExpr& e) {
  switch (e.op) {
    case PredicateExpr::Op::kAtom: {
      const Atom& atom = p.atoms[e.atom];
      if (const auto* t = std::get_if<ThresholdAtom>(&atom)) {
        return "thr(" + join_coefficients(t->a) + ";" + std::to_string(t->b) + ")";
      }
      const auto& m = std::get<ModAtom>(atom);
      return "mod(" + join_coefficients(m.a) + ";" + std::to_string(m.b) + ";" +
             std::to_string(m.m) + ")";
    }
    case PredicateExpr::Op::kNot:
      return "not(" + expr_to_string(p, e.children.front()) + ")";
    case PredicateExpr::Op::kAnd:
    case PredicateExpr::Op::kOr: {
      std::string out = e.op == PredicateExpr::Op::kAnd ? "and(" : "or(";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ",";
        out += expr_to_string(p, e.children[i]);
      }
      return out + ")";
    }
  }
  return "";
}

bool holds_expr(const Predicate& p, const PredicateExpr& e, const std::vector<Count>& x) {
  switch (e.op) {
    case PredicateExpr::Op::kAtom: return holds(p.atoms.at(e.atom), x);
    case PredicateExpr::Op::kNot: return !holds_expr(p, e.children.front(), x);
    case PredicateExpr::Op::kAnd:
      return std::all_of(e.children.begin(), e.children.end(),
                         [&](const PredicateExpr& c) { return holds_expr(p, c, x); });
    case PredicateExpr::Op::kOr:
      return std::any_of(e.children.begin(), e.children.end(),
                         [&](const PredicateExpr& c) { return holds_expr(p, c, x); });
  }
  return false;
}

std::vector<std::string> resolve_names(std::vector<std::string> names, std::size_t n) {
  if (names.empty()) return default_input_names(n);
  if (names.size() != n) throw ContractError("wrong number of input species names");
  return names;
}

// Adds the input species and checks them against the gadget's own names.
void add_inputs(CrnBuilder& b, const std::vector<std::string>& names,
                const std::vector<std::string>& reserved) {
  for (const auto& n : names) {
    if (std::find(reserved.begin(), reserved.end(), n) != reserved.end()) {
      throw ContractError("input species name '" + n + "' collides with a gadget species");
    }
    if (b.has_species(n)) throw ContractError("duplicate input species '" + n + "'");
    b.add_species(n);
  }
}

Crd make_crd(const Crn& crn, const std::vector<std::string>& inputs,
             const std::vector<std::string>& v0, const std::vector<std::string>& v1) {
  Crd crd;
  crd.crn = crn;
  for (const auto& n : inputs) crd.input.push_back(crn.species_index(n));
  for (const auto& n : v0) crd.voters0.push_back(crn.species_index(n));
  for (const auto& n : v1) crd.voters1.push_back(crn.species_index(n));
  crd.validate();
  return crd;
}

std::string value_token(Count u) {
  if (u == 0) return "V0";
  return u > 0 ? "Vp" + std::to_string(u) : "Vm" + std::to_string(-u);
}

}  // namespace

Predicate parse_predicate(std::string_view text) { return PredicateParser(text).parse(); }

std::string to_string(const Predicate& p) { return expr_to_string(p, p.expr); }

bool holds(const Atom& atom, const std::vector<Count>& x) {
  if (const auto* t = std::get_if<ThresholdAtom>(&atom)) return dot(t->a, x) <= t->b;
  const auto& m = std::get<ModAtom>(atom);
  return floor_mod(dot(m.a, x), m.m) == m.b;
}

bool holds(const Predicate& p, const std::vector<Count>& x) { return holds_expr(p, p.expr, x); }

std::vector<std::string> default_input_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

Crd compile_mod_atom(const std::vector<Count>& a, Count b, Count m,
                     std::vector<std::string> input_names) {
  if (m < 2) throw ContractError("modulus must be at least 2");
  if (b < 0 || b >= m) throw ContractError("residue must satisfy 0 <= b < m");
  if (a.empty()) throw ContractError("predicate needs at least one input species");
  input_names = resolve_names(std::move(input_names), a.size());

  auto token = [](Count i) { return "R" + std::to_string(i); };
  std::vector<std::string> tokens;
  for (Count i = 0; i < m; ++i) tokens.push_back(token(i));

  CrnBuilder builder;
  add_inputs(builder, input_names, tokens);
  for (const auto& t : tokens) builder.add_species(t);
  for (std::size_t i = 0; i < a.size(); ++i) {
    builder.add_reaction({{input_names[i], 1}}, {{token(floor_mod(a[i], m)), 1}});
  }
  for (Count i = 0; i < m; ++i) {
    for (Count j = i; j < m; ++j) {
      CrnBuilder::Side lhs = i == j ? CrnBuilder::Side{{token(i), 2}}
                                    : CrnBuilder::Side{{token(i), 1}, {token(j), 1}};
      builder.add_reaction(lhs, {{token((i + j) % m), 1}});
    }
  }
  std::vector<std::string> v0;
  for (Count i = 0; i < m; ++i) {
    if (i != b) v0.push_back(token(i));
  }
  return make_crd(builder.build(), input_names, v0, {token(b)});
}

Crd compile_threshold_atom(const std::vector<Count>& a, Count b,
                           std::vector<std::string> input_names) {
  if (a.empty()) throw ContractError("predicate needs at least one input species");
  input_names = resolve_names(std::move(input_names), a.size());
  constexpr Count kLimit = 1 << 20;
  if (b > kLimit || b < -kLimit) throw ContractError("threshold constant too large");

  const Count lpos = std::max<Count>(b + 1, 1);
  const Count lneg = std::max<Count>(-b, 1);
  Count spos = 2 * lpos - 1;
  Count sneg = 2 * lneg - 1;
  for (Count ai : a) {
    if (ai > kLimit || ai < -kLimit) throw ContractError("coefficient too large");
    spos = std::max(spos, ai);
    sneg = std::max(sneg, -ai);
  }
  if (spos + sneg > 512) throw ContractError("threshold gadget would be too large");

  std::vector<std::string> tokens;
  for (Count u = -sneg; u <= spos; ++u) tokens.push_back(value_token(u));

  CrnBuilder builder;
  add_inputs(builder, input_names, tokens);
  for (const auto& t : tokens) builder.add_species(t);
  for (std::size_t i = 0; i < a.size(); ++i) {
    builder.add_reaction({{input_names[i], 1}}, {{value_token(a[i]), 1}});
  }
  auto pair = [](Count u, Count v) {
    return u == v ? CrnBuilder::Side{{value_token(u), 2}}
                  : CrnBuilder::Side{{value_token(u), 1}, {value_token(v), 1}};
  };
  for (Count u = -sneg; u <= spos; ++u) {
    for (Count v = u; v <= spos; ++v) {
      const Count sum = u + v;
      const bool same_sign = (u > 0 && v > 0) || (u < 0 && v < 0);
      if (!same_sign) {
        builder.add_reaction(pair(u, v), {{value_token(sum), 1}});
        continue;
      }
      const Count cap = u > 0 ? spos : sneg;
      const Count low = u > 0 ? lpos : lneg;
      const Count small = std::min(std::abs(u), std::abs(v));
      if (std::abs(sum) <= cap) {
        builder.add_reaction(pair(u, v), {{value_token(sum), 1}});
      } else if (small < low) {
        // Rebalance so neither token stays below the decision threshold.
        const Count lo = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
        const Count hi = sum - lo;
        builder.add_reaction(pair(u, v), pair(std::min(lo, hi), std::max(lo, hi)));
      }
    }
  }
  std::vector<std::string> v0;
  std::vector<std::string> v1;
  for (Count u = -sneg; u <= spos; ++u) (u <= b ? v1 : v0).push_back(value_token(u));
  return make_crd(builder.build(), input_names, v0, v1);
}

Crd compile_atom(const Atom& atom, std::vector<std::string> input_names) {
  if (const auto* t = std::get_if<ThresholdAtom>(&atom)) {
    return compile_threshold_atom(t->a, t->b, std::move(input_names));
  }
  const auto& m = std::get<ModAtom>(atom);
  return compile_mod_atom(m.a, m.b, m.m, std::move(input_names));
}

namespace {

bool eval_node(const PredicateExpr& e, const std::vector<Crd>& crds,
               const std::vector<Count>& x, std::size_t bound,
               std::map<std::size_t, bool>& memo) {
  switch (e.op) {
    case PredicateExpr::Op::kAtom: {
      if (auto it = memo.find(e.atom); it != memo.end()) return it->second;
      if (e.atom >= crds.size()) throw ContractError("atom index out of range");
      const Crd& crd = crds[e.atom];
      const Verdict v = halting_verdict(crd, input_state(crd, x), bound);
      if (v.kind != VerdictKind::kAccept && v.kind != VerdictKind::kReject) {
        throw UndecidedError(std::string("atom verdict is ") + to_string(v.kind), v);
      }
      return memo[e.atom] = v.kind == VerdictKind::kAccept;
    }
    case PredicateExpr::Op::kNot:
      return !eval_node(e.children.front(), crds, x, bound, memo);
    case PredicateExpr::Op::kAnd:
    case PredicateExpr::Op::kOr: {
      const bool is_and = e.op == PredicateExpr::Op::kAnd;
      bool result = is_and;
      // Every child is evaluated so that undecided atoms always surface.
      for (const auto& c : e.children) {
        const bool r = eval_node(c, crds, x, bound, memo);
        result = is_and ? (result && r) : (result || r);
      }
      return result;
    }
  }
  return false;
}

}  // namespace

bool eval_predicate(const PredicateExpr& expr, const std::vector<Crd>& crds,
                    const std::vector<Count>& x, std::size_t bound) {
  std::map<std::size_t, bool> memo;
  return eval_node(expr, crds, x, bound, memo);
}

}  // namespace crnkit
