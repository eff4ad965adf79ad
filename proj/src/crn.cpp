#include "crnkit/crn.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "crnkit/linear_program.hpp"

namespace crnkit {

State::State(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (Count c : counts_) {
    if (c < 0) throw ContractError("state entries must be nonnegative");
  }
}

Count State::total() const {
  Count sum = 0;
  for (Count c : counts_) {
    if (__builtin_add_overflow(sum, c, &sum)) {
      throw OverflowError("molecule total overflows 64 bits");
    }
  }
  return sum;
}

bool State::is_zero() const {
  return std::all_of(counts_.begin(), counts_.end(), [](Count c) { return c == 0; });
}

std::size_t StateHash::operator()(const State& s) const noexcept {
  // FNV-1a over the raw counts.
  std::uint64_t h = 1469598103934665603ULL;
  for (Count c : s.counts()) {
    auto v = static_cast<std::uint64_t>(c);
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return static_cast<std::size_t>(h);
}

Reaction::Reaction(std::vector<Count> reactants, std::vector<Count> products,
                   double rate)
    : reactants_(std::move(reactants)), products_(std::move(products)), rate_(rate) {
  if (!(rate_ > 0)) throw ContractError("rate constant must be positive");
  if (reactants_.size() != products_.size()) {
    throw ContractError("reactant and product vectors differ in length");
  }
  for (std::size_t i = 0; i < reactants_.size(); ++i) {
    const Count r = reactants_[i];
    const Count p = products_[i];
    if (r < 0 || p < 0) throw ContractError("stoichiometric coefficients must be >= 0");
    if (r > kMaxCoefficient || p > kMaxCoefficient) {
      throw OverflowError("stoichiometric coefficient exceeds 2^31-1");
    }
    if (r > 0) reactant_terms_.push_back({i, r});
    if (p > 0) product_terms_.push_back({i, p});
    if (p != r) net_terms_.push_back({i, p - r});
    order_ += r;
  }
}

bool Reaction::is_catalytic() const {
  for (std::size_t i = 0; i < reactants_.size(); ++i) {
    if (reactants_[i] > 0 && products_[i] > 0) return true;
  }
  return false;
}

bool is_valid_species_name(std::string_view name) {
  if (name.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(name.front()))) return false;
  return std::none_of(name.begin(), name.end(),
                      [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

Crn::Crn(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (!is_valid_species_name(species_[i])) {
      throw ContractError("invalid species name '" + species_[i] + "'");
    }
    if (i > 0 && !(species_[i - 1] < species_[i])) {
      throw ContractError("species must be unique and lexicographically ordered");
    }
  }
  for (const auto& r : reactions_) {
    if (r.reactants().size() != species_.size()) {
      throw ContractError("reaction is not indexed by this species set");
    }
  }
}

std::optional<std::size_t> Crn::find_species(std::string_view name) const {
  auto it = std::lower_bound(species_.begin(), species_.end(), name,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == species_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - species_.begin());
}

std::size_t Crn::species_index(std::string_view name) const {
  auto i = find_species(name);
  if (!i) throw ContractError("unknown species '" + std::string(name) + "'");
  return *i;
}

CrnBuilder& CrnBuilder::add_species(const std::string& name) {
  if (!is_valid_species_name(name)) {
    throw ContractError("invalid species name '" + name + "'");
  }
  if (!has_species(name)) species_.push_back(name);
  return *this;
}

bool CrnBuilder::has_species(const std::string& name) const {
  return std::find(species_.begin(), species_.end(), name) != species_.end();
}

CrnBuilder& CrnBuilder::add_reaction(const Side& reactants, const Side& products,
                                     double rate) {
  for (const auto* side : {&reactants, &products}) {
    for (const auto& [name, coeff] : *side) {
      if (coeff < 0) throw ContractError("negative coefficient for '" + name + "'");
      add_species(name);
    }
  }
  reactions_.push_back({reactants, products, rate});
  return *this;
}

Crn CrnBuilder::build() const {
  std::vector<std::string> names = species_;
  std::sort(names.begin(), names.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;

  auto densify = [&](const Side& side) {
    std::vector<Count> v(names.size(), 0);
    for (const auto& [name, coeff] : side) {
      Count& slot = v[index.at(name)];
      if (__builtin_add_overflow(slot, coeff, &slot) || slot > kMaxCoefficient) {
        throw OverflowError("stoichiometric coefficient exceeds 2^31-1");
      }
    }
    return v;
  };
  std::vector<Reaction> reactions;
  reactions.reserve(reactions_.size());
  for (const auto& r : reactions_) {
    reactions.emplace_back(densify(r.reactants), densify(r.products), r.rate);
  }
  return Crn(std::move(names), std::move(reactions));
}

bool applicable(const State& c, const Reaction& alpha) {
  for (const Term& t : alpha.reactant_terms()) {
    if (c[t.species] < t.coeff) return false;
  }
  return true;
}

State apply(const State& c, const Reaction& alpha) {
  if (!applicable(c, alpha)) throw ContractError("reaction is not applicable to state");
  State next = c;
  for (const Term& t : alpha.net_terms()) {
    if (__builtin_add_overflow(next[t.species], t.coeff, &next[t.species])) {
      throw OverflowError("molecule count overflows 64 bits");
    }
  }
  return next;
}

std::vector<Count> StoichMatrix::column(std::size_t reaction) const {
  std::vector<Count> col(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, reaction);
  return col;
}

StoichMatrix stoichiometry(const Crn& crn) {
  StoichMatrix m(crn.species_count(), crn.reaction_count());
  for (std::size_t j = 0; j < crn.reaction_count(); ++j) {
    for (const Term& t : crn.reaction(j).net_terms()) m(t.species, j) = t.coeff;
  }
  return m;
}

std::optional<std::vector<Count>> conservation_vector(const Crn& crn) {
  // v = 1 + w with w >= 0 and M^T w = -M^T 1; v >= 1 captures strict positivity
  // because the constraint set is a cone.
  const std::size_t n = crn.species_count();
  const StoichMatrix m = stoichiometry(crn);
  LinearProgram lp;
  lp.variables = n;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    RationalVector row(n);
    Rational rhs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = m(i, j);
      rhs -= m(i, j);
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(rhs);
  }
  const LpResult r = solve(lp);
  if (r.status != LpStatus::kOptimal) return std::nullopt;

  using boost::multiprecision::cpp_int;
  cpp_int lcm = 1;
  for (const auto& w : r.x) {
    const cpp_int d = boost::multiprecision::denominator(w);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  std::vector<cpp_int> scaled;
  cpp_int g = 0;
  for (const auto& w : r.x) {
    Rational v = (w + 1) * Rational(lcm);
    cpp_int iv = boost::multiprecision::numerator(v);
    g = boost::multiprecision::gcd(g, iv);
    scaled.push_back(iv);
  }
  std::vector<Count> out;
  for (auto& v : scaled) {
    cpp_int q = v / g;
    if (q > cpp_int(std::numeric_limits<Count>::max())) {
      throw OverflowError("conservation vector entry exceeds 64 bits");
    }
    out.push_back(static_cast<Count>(q));
  }
  return out;
}

Crn split_catalysts(const Crn& crn) {
  CrnBuilder b;
  for (const auto& s : crn.species()) b.add_species(s);
  auto side_of = [&](const std::vector<Count>& v) {
    CrnBuilder::Side side;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > 0) side.emplace_back(crn.species_name(i), v[i]);
    }
    return side;
  };
  auto fresh = [&](std::size_t idx) {
    std::string name = "Q_" + std::to_string(idx);
    while (crn.find_species(name) || b.has_species(name)) name += "'";
    return name;
  };
  for (std::size_t j = 0; j < crn.reaction_count(); ++j) {
    const Reaction& r = crn.reaction(j);
    if (!r.is_catalytic()) {
      b.add_reaction(side_of(r.reactants()), side_of(r.products()), r.rate());
      continue;
    }
    const std::string q = fresh(j);
    b.add_reaction(side_of(r.reactants()), {{q, 1}}, r.rate());
    b.add_reaction({{q, 1}}, side_of(r.products()), r.rate());
  }
  return b.build();
}

}  // namespace crnkit
