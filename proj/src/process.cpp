#include "ruinlab/process.hpp"

#include <cmath>
#include <sstream>

namespace ruinlab {

Interarrival Interarrival::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("Interarrival: rate must be positive");
    Interarrival i;
    i.type = Type::Exponential;
    i.rate = rate;
    return i;
}

Interarrival Interarrival::erlang(unsigned shape, double rate) {
    if (shape < 1 || !(rate > 0.0)) throw std::invalid_argument("Interarrival: need shape >= 1, rate > 0");
    Interarrival i;
    i.type = Type::Erlang;
    i.shape = shape;
    i.rate = rate;
    return i;
}

Interarrival Interarrival::deterministic(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("Interarrival: deterministic time must be positive");
    Interarrival i;
    i.type = Type::Deterministic;
    i.value = value;
    return i;
}

Interarrival Interarrival::log_normal(double mu, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("Interarrival: lognormal s must be nonnegative");
    Interarrival i;
    i.type = Type::LogNormal;
    i.mu = mu;
    i.s = s;
    return i;
}

double Interarrival::mean() const {
    switch (type) {
        case Type::Exponential: return 1.0 / rate;
        case Type::Erlang: return static_cast<double>(shape) / rate;
        case Type::Deterministic: return value;
        case Type::LogNormal: return std::exp(mu + 0.5 * s * s);
    }
    return 0.0;
}

double Interarrival::sample(RngStream& rng) const {
    switch (type) {
        case Type::Exponential:
            return rng.exponential(rate);
        case Type::Erlang: {
            double t = 0.0;
            for (unsigned k = 0; k < shape; ++k) t += rng.exponential(rate);
            return t;
        }
        case Type::Deterministic:
            return value;
        case Type::LogNormal:
            return std::exp(mu + s * rng.normal());
    }
    return 0.0;
}

std::string Interarrival::name() const {
    std::ostringstream os;
    switch (type) {
        case Type::Exponential: os << "exponential(rate=" << rate << ")"; break;
        case Type::Erlang: os << "erlang(shape=" << shape << ",rate=" << rate << ")"; break;
        case Type::Deterministic: os << "deterministic(" << value << ")"; break;
        case Type::LogNormal: os << "lognormal(mu=" << mu << ",s=" << s << ")"; break;
    }
    return os.str();
}

RiskModel::RiskModel(ClaimModel claims, Interarrival interarrival, Vec premium,
                     Allocation allocation, Vec delta, Vec brownian_drift, Matrix brownian_cov)
    : dim_(claims.dim()),
      claims_(std::move(claims)),
      interarrival_(interarrival),
      premium_(std::move(premium)),
      allocation_(std::move(allocation)),
      delta_(std::move(delta)),
      brownian_drift_(std::move(brownian_drift)),
      brownian_cov_(std::move(brownian_cov)) {
    if (premium_.size() != dim_ || allocation_.dim() != dim_ || delta_.size() != dim_ ||
        brownian_drift_.size() != dim_ || brownian_cov_.n != dim_) {
        throw std::invalid_argument("RiskModel: dimension mismatch across components");
    }
    for (double p : premium_) {
        if (!(p > 0.0)) throw std::invalid_argument("RiskModel: premium rates must be positive");
    }
    for (double d : delta_) {
        if (!(d >= 0.0)) throw std::invalid_argument("RiskModel: diffusion coefficients must be nonnegative");
    }
    for (double m : brownian_drift_) {
        if (!(m >= 0.0)) throw std::invalid_argument("RiskModel: Brownian drift must be nonnegative");
    }
    chol_ = cholesky_psd(brownian_cov_);  // throws on indefinite input
    for (double d : delta_) has_diffusion_ = has_diffusion_ || d > 0.0;

    mean_theta_ = interarrival_.mean();
    claim_mean_ = claims_.mean_vector();  // throws InfiniteMeanError when heavy margins lack a mean

    c_.resize(dim_);
    c_star_.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        c_[j] = mean_theta_ * premium_[j] - claim_mean_[j];
        c_star_[j] = c_[j] + delta_[j] * brownian_drift_[j] * mean_theta_;
        if (!(c_star_[j] > 0.0)) {
            std::ostringstream os;
            os << "RiskModel: net profit condition fails on line " << j << " (c* = " << c_star_[j] << ")";
            throw NetProfitViolation(os.str());
        }
    }
}

Increment RiskModel::sample_increment(PathStreams& streams) const {
    Increment inc;
    inc.theta = interarrival_.sample(streams.shocks);
    inc.claim.resize(dim_);
    claims_.sample(streams.shocks, inc.claim);

    inc.brownian.assign(dim_, 0.0);
    if (has_diffusion_) {
        // dB ~ N(m * theta, Sigma * theta) built from the Cholesky factor.
        const double sq = std::sqrt(inc.theta);
        Vec xi(dim_);
        for (std::size_t j = 0; j < dim_; ++j) xi[j] = streams.gaussians.normal();
        for (std::size_t j = 0; j < dim_; ++j) {
            double g = 0.0;
            for (std::size_t k = 0; k <= j; ++k) g += chol_.at(j, k) * xi[k];
            inc.brownian[j] = brownian_drift_[j] * inc.theta + sq * g;
        }
    }

    inc.z.resize(dim_);
    inc.w.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        inc.z[j] = inc.claim[j] - inc.theta * premium_[j];
        inc.w[j] = inc.z[j] - delta_[j] * inc.brownian[j];
    }
    return inc;
}

std::string RiskModel::describe() const {
    std::ostringstream os;
    os << "claims=" << claims_.describe() << " arrivals=" << interarrival_.name();
    return os.str();
}

}  // namespace ruinlab
