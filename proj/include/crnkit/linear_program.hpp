#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace crnkit {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// maximize objective . x  subject to  rows . x = rhs,  x >= 0.
struct LinearProgram {
  std::size_t variables = 0;
  std::vector<RationalVector> rows;
  RationalVector rhs;
  RationalVector objective;  // empty means pure feasibility
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  RationalVector x;
  Rational value;
};

/// Exact two-phase primal simplex with Bland's rule (no cycling).
LpResult solve(const LinearProgram& lp);

/// Some x >= 0 with A x = b, or nullopt.
std::optional<RationalVector> nonnegative_solution(
    const std::vector<RationalVector>& a, const RationalVector& b);

}  // namespace crnkit
