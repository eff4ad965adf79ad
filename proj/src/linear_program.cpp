#include "crnkit/linear_program.hpp"

#include <stdexcept>

namespace crnkit {

namespace {

// Dense tableau over `cols` structural columns. Row i holds B^-1 A | B^-1 b.
class Tableau {
 public:
  Tableau(std::vector<RationalVector> rows, std::vector<std::size_t> basis,
          std::size_t cols)
      : t_(std::move(rows)), basis_(std::move(basis)), cols_(cols) {}

  std::size_t row_count() const { return t_.size(); }
  const Rational& at(std::size_t r, std::size_t c) const { return t_[r][c]; }
  const Rational& rhs(std::size_t r) const { return t_[r][cols_]; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }

  void pivot(std::size_t pr, std::size_t pc) {
    Rational inv = Rational(1) / t_[pr][pc];
    for (auto& v : t_[pr]) v *= inv;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == pr || t_[r][pc] == 0) continue;
      Rational f = t_[r][pc];
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (t_[pr][c] != 0) t_[r][c] -= f * t_[pr][c];
      }
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Maximizes cost . x over columns [0, active). Returns false if unbounded.
  bool optimize(const RationalVector& cost, std::size_t active) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < active && !entering; ++j) {
        if (is_basic(j)) continue;
        Rational reduced = cost[j];
        for (std::size_t r = 0; r < t_.size(); ++r) {
          if (t_[r][j] != 0) reduced -= cost[basis_[r]] * t_[r][j];
        }
        if (reduced > 0) entering = j;
      }
      if (!entering) return true;
      const std::size_t j = *entering;
      std::optional<std::size_t> leaving;
      Rational best;
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (t_[r][j] <= 0) continue;
        Rational ratio = t_[r][cols_] / t_[r][j];
        if (!leaving || ratio < best ||
            (ratio == best && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, j);
    }
  }

  RationalVector solution(std::size_t n) const {
    RationalVector x(n, Rational(0));
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (basis_[r] < n) x[basis_[r]] = t_[r][cols_];
    }
    return x;
  }

 private:
  bool is_basic(std::size_t j) const {
    for (auto b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  std::vector<RationalVector> t_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  const std::size_t n = lp.variables;
  const std::size_t m = lp.rows.size();
  if (lp.rhs.size() != m) throw std::invalid_argument("lp: rhs size mismatch");
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw std::invalid_argument("lp: row size mismatch");
  }
  if (!lp.objective.empty() && lp.objective.size() != n) {
    throw std::invalid_argument("lp: objective size mismatch");
  }

  // Columns: n structural, m artificial, then rhs.
  const std::size_t cols = n + m;
  std::vector<RationalVector> rows(m, RationalVector(cols + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = lp.rhs[i] < 0;
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = flip ? Rational(-lp.rows[i][j]) : lp.rows[i][j];
    }
    rows[i][n + i] = 1;
    rows[i][cols] = flip ? Rational(-lp.rhs[i]) : lp.rhs[i];
    basis[i] = n + i;
  }
  Tableau tab(std::move(rows), std::move(basis), cols);

  RationalVector phase1(cols, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  tab.optimize(phase1, cols);

  for (std::size_t r = 0; r < tab.row_count(); ++r) {
    if (tab.basic(r) >= n && tab.rhs(r) != 0) return {LpStatus::kInfeasible, {}, {}};
  }
  // Pivot zero-level artificials out of the basis; redundant rows go away.
  for (std::size_t r = 0; r < tab.row_count();) {
    if (tab.basic(r) < n) {
      ++r;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j) {
      if (tab.at(r, j) != 0) col = j;
    }
    if (col) {
      tab.pivot(r, *col);
      ++r;
    } else {
      tab.drop_row(r);
    }
  }

  RationalVector cost(cols, Rational(0));
  for (std::size_t j = 0; j < lp.objective.size(); ++j) cost[j] = lp.objective[j];
  if (!tab.optimize(cost, n)) return {LpStatus::kUnbounded, {}, {}};

  LpResult result{LpStatus::kOptimal, tab.solution(n), Rational(0)};
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    result.value += lp.objective[j] * result.x[j];
  }
  return result;
}

std::optional<RationalVector> nonnegative_solution(
    const std::vector<RationalVector>& a, const RationalVector& b) {
  LinearProgram lp;
  lp.variables = a.empty() ? 0 : a.front().size();
  lp.rows = a;
  lp.rhs = b;
  LpResult r = solve(lp);
  if (r.status != LpStatus::kOptimal) return std::nullopt;
  return r.x;
}

}  // namespace crnkit
