#pragma once

#include <cstdint>
#include <string>

#include "ruinlab/distributions.hpp"
#include "ruinlab/geometry.hpp"
#include "ruinlab/numerics.hpp"

namespace ruinlab {

struct NetProfitViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Renewal inter-arrival law.
struct Interarrival {
    enum class Type { Exponential, Erlang, Deterministic, LogNormal };

    Type type = Type::Exponential;
    double rate = 1.0;     // Exponential / Erlang
    unsigned shape = 1;    // Erlang
    double value = 1.0;    // Deterministic
    double mu = 0.0;       // LogNormal
    double s = 1.0;        // LogNormal

    static Interarrival exponential(double rate);
    static Interarrival erlang(unsigned shape, double rate);
    static Interarrival deterministic(double value);
    static Interarrival log_normal(double mu, double s);

    double mean() const;
    double sample(RngStream& rng) const;
    std::string name() const;
};

/// Per-path random streams. Lane 0 drives inter-arrivals and claims, lane 1
/// drives Gaussian increments; a diffusion-free run never touches lane 1, so
/// claim paths coincide bitwise across diffusion settings under one master
/// seed.
struct PathStreams {
    RngStream shocks;
    RngStream gaussians;

    static PathStreams for_path(std::uint64_t master_seed, std::uint64_t path_index) {
        return {RngStream::substream(master_seed, path_index, 0),
                RngStream::substream(master_seed, path_index, 1)};
    }
};

/// One step of the claim-epoch random walk: W = X - theta * p - delta o dB.
struct Increment {
    Vec claim;      // X
    double theta;   // inter-arrival time
    Vec brownian;   // dB over the interval (zero when diffusion is off)
    Vec z;          // X - theta * p
    Vec w;          // z - delta o dB
};

/// Full surplus-process model: claims, renewal arrivals, premium rates,
/// capital allocation, diffusion coefficients and the Brownian drift and
/// covariance (both per unit time). Construction validates parameter signs,
/// factorizes the covariance, and enforces the net profit condition
/// c* = E[theta] p - E[X] + delta o (m E[theta]) > 0 componentwise, throwing
/// NetProfitViolation otherwise. Immutable afterwards.
class RiskModel {
public:
    RiskModel(ClaimModel claims, Interarrival interarrival, Vec premium, Allocation allocation,
              Vec delta, Vec brownian_drift, Matrix brownian_cov);

    std::size_t dim() const { return dim_; }
    const ClaimModel& claims() const { return claims_; }
    const Interarrival& interarrival() const { return interarrival_; }
    std::span<const double> premium() const { return premium_; }
    const Allocation& allocation() const { return allocation_; }
    std::span<const double> delta() const { return delta_; }
    std::span<const double> brownian_drift() const { return brownian_drift_; }
    const Matrix& brownian_cov() const { return brownian_cov_; }
    const Matrix& brownian_chol() const { return chol_; }

    /// True when some line carries a diffusion term; only then do walk steps
    /// consume Gaussian randomness.
    bool has_diffusion() const { return has_diffusion_; }

    /// c = E[theta] p - E[X]. Diffusion parameters play no role here.
    Vec drift_c() const { return c_; }

    /// c* = c + delta o mu with mu = m E[theta], the Brownian drift
    /// accumulated over one renewal interval.
    Vec drift_c_star() const { return c_star_; }

    double mean_interarrival() const { return mean_theta_; }
    Vec claim_mean() const { return claim_mean_; }

    Increment sample_increment(PathStreams& streams) const;

    std::string describe() const;

private:
    std::size_t dim_ = 0;
    ClaimModel claims_;
    Interarrival interarrival_;
    Vec premium_;
    Allocation allocation_;
    Vec delta_;
    Vec brownian_drift_;
    Matrix brownian_cov_;
    Matrix chol_;
    bool has_diffusion_ = false;
    double mean_theta_ = 0.0;
    Vec claim_mean_;
    Vec c_;
    Vec c_star_;
};

}  // namespace ruinlab
