#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ruinlab/geometry.hpp"
#include "ruinlab/process.hpp"

namespace ruinlab {

/// Truncation policy for the infinite-horizon walk. A path stops (counted as
/// no ruin) either at max_steps or, checked every check_stride steps, when the
/// projection sits further below the target level than slack_multiplier times
/// the drift the remaining step budget could produce.
struct HorizonPolicy {
    std::size_t max_steps = 10000;
    double slack_multiplier = 30.0;
    std::size_t check_stride = 16;
};

/// Skeleton checks ruin only at claim epochs (the random-walk reduction);
/// the bridge modes add the probability of a mid-interval Brownian crossing,
/// exactly for single-direction gauges and as a union upper bound over
/// directions otherwise.
enum class BridgeMode { Skeleton, BridgeL1Exact, BridgeUnionBound };

std::string bridge_mode_name(BridgeMode mode);

struct EstimateWithCI {
    double estimate = 0.0;
    double std_err = 0.0;
    std::uint64_t n_paths = 0;
    /// Fraction of paths stopped by the hard max_steps cap (not by the slack
    /// rule); the observable part of the truncation bias.
    double truncation_bound = 0.0;
    bool truncation_warning = false;  // set when truncation_bound > 0.01
    std::uint64_t seed = 0;
    BridgeMode bridge_mode = BridgeMode::Skeleton;
};

struct WalkResult {
    bool ruined = false;
    std::size_t steps = 0;
    double max_projection = 0.0;
};

/// Probability that a Brownian bridge between levels (x - start_proj) and
/// (x - end_proj) over [0, theta] with the given variance rate hits zero:
/// exp(-2ab / (var_rate * theta)) when both gaps are positive, 1 when either
/// endpoint already reached the level, 0 without diffusion.
double bridge_crossing(double start_proj, double end_proj, double x, double var_rate, double theta);

/// Run one path of the claim-epoch walk against level x.
WalkResult simulate_walk(const RiskModel& model, const GaugeSet& gauge, double x,
                         const HorizonPolicy& policy, PathStreams& streams);

/// Ruin-probability estimate at a single level. Paths are independent of
/// worker count and schedule: path i draws from streams derived from
/// (seed, i), and partial sums merge in fixed block order.
EstimateWithCI estimate_ruin(const RiskModel& model, const GaugeSet& gauge, double x,
                             std::uint64_t n_paths, const HorizonPolicy& policy, BridgeMode mode,
                             std::uint64_t seed, unsigned threads = 0);

/// Estimates for a whole strictly-increasing grid on one shared path
/// ensemble: each walk runs once and is scored against every level through
/// its running projection maximum, so the returned estimates are monotone
/// non-increasing in x by construction.
std::vector<EstimateWithCI> estimate_curve(const RiskModel& model, const GaugeSet& gauge,
                                           const std::vector<double>& x_grid, std::uint64_t n_paths,
                                           const HorizonPolicy& policy, BridgeMode mode,
                                           std::uint64_t seed, unsigned threads = 0);

}  // namespace ruinlab
