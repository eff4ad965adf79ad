#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "crnkit/crn.hpp"
#include "crnkit/decide.hpp"
#include "crnkit/linear_program.hpp"

namespace crnkit {

using Concentrations = std::vector<double>;

/// d[X]/dt = sum_alpha k_alpha M[X, alpha] prod_Y [Y]^r(Y).
Concentrations ode_rhs(const Crn& crn, const Concentrations& x);

/// Integration gave up because the step size collapsed.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

struct OdeOptions {
  double initial_step = 1e-3;
  /// Smallest step relative to max(1, |t|) before StiffnessError.
  double min_step = 1e-14;
  std::size_t max_steps = 5'000'000;
  /// Accepted steps with ||rhs||_inf < tol * max(1, ||x||_inf) needed to declare a fixpoint.
  std::size_t fixpoint_window = 10;
  bool stop_at_fixpoint = true;
};

struct OdeSample {
  double t;
  Concentrations x;  // clipped at zero
};

struct OdeResult {
  std::vector<OdeSample> samples;  // initial state plus every accepted step
  bool fixpoint = false;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Largest negative excursion removed by clipping.
  double max_clip = 0.0;

  const Concentrations& final_state() const { return samples.back().x; }
};

/// Adaptive Dormand-Prince 5(4) with mixed absolute/relative error tol.
OdeResult integrate(const Crn& crn, const Concentrations& x0, double t_end, double tol,
                    const OdeOptions& options = {});

/// A flux u >= 0 with c + M u = d, using only reactions applicable to c.
std::optional<RationalVector> straight_line_reach(const Crn& crn, const RationalVector& c,
                                                  const RationalVector& d);

/// Reactions whose reactant species all have positive concentration.
std::vector<bool> applicable_reactions(const Crn& crn, const RationalVector& c);

struct SegmentResult {
  enum class Kind { kReachable, kUnreachable, kInconclusive } kind = Kind::kUnreachable;
  std::vector<RationalVector> fluxes;  // one per segment
  std::vector<RationalVector> states;  // x_0 = c, ..., x_k = d
  /// Depth searched exhaustively without success.
  std::size_t depth_searched = 0;
  /// Set when a conservation vector separates c and d.
  bool conservation_excluded = false;
};

const char* to_string(SegmentResult::Kind kind);

/// Searches chains of at most max_segments straight-line steps, enumerating
/// the positivity pattern of each intermediate state. Gives up with
/// kInconclusive after max_programs linear programs.
SegmentResult segment_reach(const Crn& crn, const RationalVector& c, const RationalVector& d,
                            std::size_t max_segments, std::size_t max_programs = 200'000);

struct DualRailValue {
  double plus = 0.0;
  double minus = 0.0;
  double value() const { return plus - minus; }
};

/// A CRC over (plus, minus) species pairs.
struct DualRailCrc {
  Crc crc;
  std::vector<std::pair<std::size_t, std::size_t>> inputs;
  std::pair<std::size_t, std::size_t> output;
};

enum class EvalMode { kDiscrete, kContinuous };

/// Discrete mode requires integral inputs and an output-stable closure;
/// continuous mode integrates to a fixpoint.
DualRailValue dual_rail_eval(const DualRailCrc& gadget, const std::vector<DualRailValue>& inputs,
                             EvalMode mode, std::size_t bound = 1'000'000, double tol = 1e-10);

}  // namespace crnkit
