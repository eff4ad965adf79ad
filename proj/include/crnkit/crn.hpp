#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crnkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad arguments, arity, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Count or coefficient arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

using Count = std::int64_t;

/// Upper bound on stoichiometric coefficients.
inline constexpr Count kMaxCoefficient = 2147483647;

/// Molecule counts indexed by the species of a Crn (a Petri-net marking).
class State {
 public:
  State() = default;
  explicit State(std::size_t species_count) : counts_(species_count, 0) {}
  explicit State(std::vector<Count> counts);

  std::size_t size() const { return counts_.size(); }
  Count operator[](std::size_t i) const { return counts_[i]; }
  Count& operator[](std::size_t i) { return counts_[i]; }
  const std::vector<Count>& counts() const { return counts_; }

  /// Number of molecules.
  Count total() const;
  bool is_zero() const;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;

 private:
  std::vector<Count> counts_;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

struct Term {
  std::size_t species;
  Count coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// A reaction (r, p) with rate constant k. Dense vectors are indexed by the
/// owning Crn's species; the sparse term lists are derived from them.
class Reaction {
 public:
  Reaction(std::vector<Count> reactants, std::vector<Count> products,
           double rate = 1.0);

  const std::vector<Count>& reactants() const { return reactants_; }
  const std::vector<Count>& products() const { return products_; }
  double rate() const { return rate_; }

  std::span<const Term> reactant_terms() const { return reactant_terms_; }
  std::span<const Term> product_terms() const { return product_terms_; }
  /// Nonzero entries of p - r.
  std::span<const Term> net_terms() const { return net_terms_; }

  /// ||r||: 1 for unimolecular, 2 for bimolecular.
  Count order() const { return order_; }
  bool is_mute() const { return reactants_ == products_; }
  /// Some species is both a reactant and a product.
  bool is_catalytic() const;

  friend bool operator==(const Reaction& a, const Reaction& b) {
    return a.reactants_ == b.reactants_ && a.products_ == b.products_ &&
           a.rate_ == b.rate_;
  }

 private:
  std::vector<Count> reactants_;
  std::vector<Count> products_;
  double rate_;
  Count order_ = 0;
  std::vector<Term> reactant_terms_;
  std::vector<Term> product_terms_;
  std::vector<Term> net_terms_;
};

/// A chemical reaction network: lexicographically ordered species plus an
/// ordered reaction list. Immutable once built.
class Crn {
 public:
  Crn() = default;
  /// `species` must be strictly increasing; reactions are indexed by it.
  Crn(std::vector<std::string> species, std::vector<Reaction> reactions);

  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }
  const std::vector<std::string>& species() const { return species_; }
  const std::string& species_name(std::size_t i) const { return species_[i]; }
  std::optional<std::size_t> find_species(std::string_view name) const;
  /// Throws ContractError for unknown names.
  std::size_t species_index(std::string_view name) const;

  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t i) const { return reactions_[i]; }

  State zero_state() const { return State(species_count()); }

  friend bool operator==(const Crn&, const Crn&) = default;

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
};

/// Incremental, name-based construction of a Crn. Species are sorted on
/// build(); reactions keep insertion order.
class CrnBuilder {
 public:
  using Side = std::vector<std::pair<std::string, Count>>;

  CrnBuilder& add_species(const std::string& name);
  CrnBuilder& add_reaction(const Side& reactants, const Side& products,
                           double rate = 1.0);
  bool has_species(const std::string& name) const;
  Crn build() const;

 private:
  struct PendingReaction {
    Side reactants;
    Side products;
    double rate;
  };
  std::vector<std::string> species_;
  std::vector<PendingReaction> reactions_;
};

bool is_valid_species_name(std::string_view name);

bool applicable(const State& c, const Reaction& alpha);
/// c - r + p. Throws ContractError when alpha is not applicable to c.
State apply(const State& c, const Reaction& alpha);

/// Species-by-reaction net change matrix.
class StoichMatrix {
 public:
  StoichMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count operator()(std::size_t species, std::size_t reaction) const {
    return entries_[species * cols_ + reaction];
  }
  Count& operator()(std::size_t species, std::size_t reaction) {
    return entries_[species * cols_ + reaction];
  }
  std::vector<Count> column(std::size_t reaction) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> entries_;
};

StoichMatrix stoichiometry(const Crn& crn);

/// A strictly positive integer vector v with v^T M = 0, if one exists.
std::optional<std::vector<Count>> conservation_vector(const Crn& crn);

/// Replaces each catalyst-like reaction (r, p) by (r, Q) and (Q, p) through a
/// fresh species Q. Other reactions are kept as they are.
Crn split_catalysts(const Crn& crn);

}  // namespace crnkit
