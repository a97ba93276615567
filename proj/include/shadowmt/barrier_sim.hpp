#pragma once

#include <cstdint>
#include <vector>

#include "shadowmt/closed_set.hpp"
#include "shadowmt/lift.hpp"
#include "shadowmt/plan.hpp"

namespace shadowmt {

enum class StopRule {
    Closed,  // stop on touching R_U, including at time 0
    Open,    // stop on strictly crossing into R_U; a start on a level of R_U does not count
};

struct SimConfig {
    std::uint64_t paths = 100000;
    double step = 1e-3;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 1000000;
    StopRule rule = StopRule::Closed;
    unsigned threads = 1;

    /// Throws OutOfRange unless paths >= 1, step > 0 and max_steps >= 1.
    void validate() const;
};

struct SimResult {
    /// Empirical (U, X0, X_tau) law, one slice per lift piece, mass 1/N per path.
    LiftedCoupling coupling;
    std::uint64_t unfinished = 0;
    double mean_start = 0.0;
    double mean_stop = 0.0;
    /// Standard error of mean_stop.
    double stderr_stop = 0.0;
    double mean_steps = 0.0;
};

/// Gaussian walk from X0 with variance `step` per move, stopped at the first
/// crossing of a level of R_U and snapped onto it. Throws MaxStepsExceeded if
/// more than 0.1% of the paths are still running after max_steps.
SimResult simulate(const Lift& l, const Barrier& b, const SimConfig& cfg);

struct CompareReport {
    /// coupling_distance between the projections.
    double projected = 0.0;
    /// cdf distance of the y-marginals on each of n equal u-bins.
    std::vector<double> bins;
    double worst_bin = 0.0;
};

CompareReport compare(const LiftedCoupling& emp, const LiftedCoupling& ref, int n_slabs);

struct OpenClosedReport {
    SimResult open;
    SimResult closed;
    double distance = 0.0;
};

/// Runs both stopping rules on the same seed.
OpenClosedReport open_vs_closed(const Lift& l, const Barrier& b, SimConfig cfg);

} // namespace shadowmt
