#include <gtest/gtest.h>

#include <random>

#include "crnkit/linear_program.hpp"

using namespace crnkit;

TEST(Simplex, SmallOptimum) {
  // max x + y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6.
  LinearProgram lp;
  lp.variables = 4;
  lp.rows = {{1, 2, 1, 0}, {3, 1, 0, 1}};
  lp.rhs = {4, 6};
  lp.objective = {1, 1, 0, 0};
  const LpResult r = solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, Rational(14, 5));
  EXPECT_EQ(r.x[0], Rational(8, 5));
  EXPECT_EQ(r.x[1], Rational(6, 5));
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram infeasible;
  infeasible.variables = 2;
  infeasible.rows = {{1, 1}};
  infeasible.rhs = {-1};
  EXPECT_EQ(solve(infeasible).status, LpStatus::kInfeasible);

  LinearProgram unbounded;
  unbounded.variables = 2;
  unbounded.rows = {{1, -1}};
  unbounded.rhs = {0};
  unbounded.objective = {1, 0};
  EXPECT_EQ(solve(unbounded).status, LpStatus::kUnbounded);
}

TEST(Simplex, DegenerateRowsTerminate) {
  LinearProgram lp;
  lp.variables = 3;
  lp.rows = {{1, 1, 0}, {1, 1, 0}, {0, 1, 1}};
  lp.rhs = {1, 1, 1};
  lp.objective = {0, 0, 1};
  const LpResult r = solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, 1);
}

TEST(Simplex, RandomFeasibleSystemsAreSolvedExactly) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + gen() % 4, cols = 1 + gen() % 5;
    std::vector<RationalVector> a(rows, RationalVector(cols));
    RationalVector x0(cols), b(rows, 0);
    for (auto& v : x0) v = Rational(static_cast<long>(gen() % 5), 1 + static_cast<long>(gen() % 3));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] = static_cast<long>(gen() % 7) - 3;
        b[i] += a[i][j] * x0[j];
      }
    }
    const auto x = nonnegative_solution(a, b);
    ASSERT_TRUE(x);
    for (std::size_t i = 0; i < rows; ++i) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < cols; ++j) lhs += a[i][j] * (*x)[j];
      EXPECT_EQ(lhs, b[i]);
    }
    for (const auto& v : *x) EXPECT_GE(v, 0);
  }
}
