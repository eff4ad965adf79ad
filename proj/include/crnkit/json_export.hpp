#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "crnkit/continuous.hpp"
#include "crnkit/counter_automaton.hpp"
#include "crnkit/crn.hpp"
#include "crnkit/decide.hpp"
#include "crnkit/dsd.hpp"
#include "crnkit/reach.hpp"
#include "crnkit/stochastic.hpp"

namespace crnkit {

using Json = nlohmann::ordered_json;

/// {"A": 1, "C": 2}; zero counts are omitted.
Json state_json(const Crn& crn, const State& c);

Json verdict_json(const Crn& crn, const Verdict& v);
Json crc_verdict_json(const Crc& crc, const CrcVerdict& v);
Json speed_fault_json(const Crn& crn, const SpeedFaultResult& r);

Json reach_json(const Crn& crn, const ReachResult& r);
std::string reach_dot(const Crn& crn, const ReachResult& r);

/// Header "time,<species...>" then one row per recorded state.
std::string trajectory_csv(const Crn& crn, const Trajectory& t);
Json trajectory_json(const Crn& crn, const Trajectory& t);

std::string ode_csv(const Crn& crn, const OdeResult& r);

/// Rationals as decimal strings ("3/4" when not a terminating decimal).
std::string rational_string(const Rational& q);
Json segment_json(const Crn& crn, const SegmentResult& r);

Json time_estimate_json(const TimeEstimate& e);
Json distribution_json(const Crn& crn, const Distribution& d);
Json error_estimate_json(const ErrorEstimate& e);

Json dsd_json(const DsdProgram& prog);
std::string cosim_report_text(const DsdProgram& prog, const CosimReport& report);
Json cosim_json(const DsdProgram& prog, const CosimReport& report);

}  // namespace crnkit
