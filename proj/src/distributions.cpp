#include "ruinlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ruinlab {

// ---------------------------------------------------------------------------
// MarginSpec
// ---------------------------------------------------------------------------

MarginSpec MarginSpec::pareto(double alpha, double sigma) {
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("Pareto: need alpha > 0, sigma > 0");
    MarginSpec m;
    m.type = Type::Pareto;
    m.alpha = alpha;
    m.sigma = sigma;
    return m;
}

MarginSpec MarginSpec::oscillating_pareto(double alpha, double sigma) {
    if (!(alpha > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("OscillatingPareto: need alpha > 0, sigma > 0");
    }
    MarginSpec m;
    m.type = Type::OscillatingPareto;
    m.alpha = alpha;
    m.sigma = sigma;
    // The modulated tail exp(-alpha t + sin t) is monotone iff alpha dominates
    // the unit-amplitude oscillation. Scan a log grid and reject violations.
    double prev = 1.0;
    for (int i = 1; i <= 4096; ++i) {
        const double t = 40.0 * static_cast<double>(i) / 4096.0;
        const double v = std::exp(-alpha * t + std::sin(t));
        if (v > prev * (1.0 + 1e-12)) {
            throw std::invalid_argument("OscillatingPareto: tail is not monotone for this alpha");
        }
        prev = v;
    }
    return m;
}

MarginSpec MarginSpec::exponential(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("Exponential: need beta > 0");
    MarginSpec m;
    m.type = Type::Exponential;
    m.beta = beta;
    return m;
}

double MarginSpec::tail(double x) const {
    switch (type) {
        case Type::Pareto:
            return (x <= sigma) ? 1.0 : std::pow(x / sigma, -alpha);
        case Type::OscillatingPareto: {
            if (x <= sigma) return 1.0;
            const double t = std::log(x / sigma);
            return std::min(1.0, std::exp(-alpha * t + std::sin(t)));
        }
        case Type::Exponential:
            return (x <= 0.0) ? 1.0 : std::exp(-beta * x);
    }
    return 0.0;
}

double MarginSpec::density(double x) const {
    switch (type) {
        case Type::Pareto:
            if (x < sigma) return 0.0;
            return (alpha / sigma) * std::pow(x / sigma, -alpha - 1.0);
        case Type::OscillatingPareto: {
            if (x < sigma) return 0.0;
            const double t = std::log(std::max(x, sigma) / sigma);
            return std::exp(-alpha * t + std::sin(t)) * (alpha - std::cos(t)) / std::max(x, sigma);
        }
        case Type::Exponential:
            return (x < 0.0) ? 0.0 : beta * std::exp(-beta * x);
    }
    return 0.0;
}

double MarginSpec::support_min() const {
    return (type == Type::Exponential) ? 0.0 : sigma;
}

double MarginSpec::quantile_upper(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("quantile_upper: u outside (0,1]");
    switch (type) {
        case Type::Pareto:
            if (alpha == 2.0) return sigma / std::sqrt(u);
            return sigma * std::pow(u, -1.0 / alpha);
        case Type::OscillatingPareto: {
            // Solve alpha*t - sin(t) = -ln(u) on t >= 0; the left side is
            // strictly increasing (alpha > 1), so a safeguarded Newton from a
            // bracketed start converges quickly.
            const double y = -std::log(u);
            if (y <= 0.0) return sigma;
            double lo = std::max(0.0, (y - 1.0) / alpha);
            double hi = (y + 1.0) / alpha;
            double t = y / alpha;
            for (int it = 0; it < 60; ++it) {
                const double g = alpha * t - std::sin(t) - y;
                if (std::fabs(g) < 1e-14 * (1.0 + y)) break;
                if (g > 0.0) hi = t; else lo = t;
                const double step = g / (alpha - std::cos(t));
                t -= step;
                if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
            }
            return sigma * std::exp(t);
        }
        case Type::Exponential:
            return -std::log(u) / beta;
    }
    return 0.0;
}

double MarginSpec::mean() const {
    switch (type) {
        case Type::Pareto:
            if (alpha <= 1.0) throw InfiniteMeanError("Pareto margin with alpha <= 1 has infinite mean");
            return alpha * sigma / (alpha - 1.0);
        case Type::OscillatingPareto: {
            if (alpha <= 1.0) throw InfiniteMeanError("OscillatingPareto margin with alpha <= 1 has infinite mean");
            // E[X] = sigma * (1 + int_0^inf exp(-(alpha-1)t + sin t) dt)
            const double a1 = alpha - 1.0;
            const QuadResult q = integrate_upper(
                [a1](double t) { return std::exp(-a1 * t + std::sin(t)); }, 0.0,
                QuadratureSpec{1e-12, 1e-15, 4000});
            return sigma * (1.0 + q.value);
        }
        case Type::Exponential:
            return 1.0 / beta;
    }
    return 0.0;
}

std::string MarginSpec::name() const {
    std::ostringstream os;
    switch (type) {
        case Type::Pareto: os << "pareto(alpha=" << alpha << ",sigma=" << sigma << ")"; break;
        case Type::OscillatingPareto: os << "oscillating_pareto(alpha=" << alpha << ",sigma=" << sigma << ")"; break;
        case Type::Exponential: os << "exponential(beta=" << beta << ")"; break;
    }
    return os.str();
}

TailFunction TailFunction::from_margin(const MarginSpec& m) {
    return TailFunction{m.support_min(), [m](double x) { return m.tail(x); }};
}

// ---------------------------------------------------------------------------
// ClaimModel construction
// ---------------------------------------------------------------------------

ClaimModel ClaimModel::independent(std::vector<MarginSpec> margins) {
    if (margins.empty()) throw std::invalid_argument("ClaimModel: no margins");
    ClaimModel m;
    m.variant_ = Variant::IndependentMargins;
    m.dim_ = margins.size();
    m.margins_ = std::move(margins);
    return m;
}

ClaimModel ClaimModel::common_shock(std::vector<MarginSpec> idiosyncratic, MarginSpec shock,
                                    double shock_weight) {
    if (idiosyncratic.empty()) throw std::invalid_argument("ClaimModel: no margins");
    if (!(shock_weight >= 0.0 && shock_weight <= 1.0)) {
        throw std::invalid_argument("ClaimModel: shock weight must lie in [0,1]");
    }
    ClaimModel m;
    m.variant_ = Variant::CommonShock;
    m.dim_ = idiosyncratic.size();
    m.margins_ = std::move(idiosyncratic);
    m.shock_ = shock;
    m.shock_weight_ = shock_weight;
    return m;
}

ClaimModel ClaimModel::spectral_product(MarginSpec radius, std::vector<double> dirichlet_alpha) {
    if (dirichlet_alpha.empty()) throw std::invalid_argument("ClaimModel: empty Dirichlet parameter");
    for (double a : dirichlet_alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("ClaimModel: Dirichlet parameters must be positive");
    }
    ClaimModel m;
    m.variant_ = Variant::SpectralProduct;
    m.dim_ = dirichlet_alpha.size();
    m.radius_ = radius;
    m.dirichlet_ = std::move(dirichlet_alpha);
    return m;
}

const MarginSpec& ClaimModel::margin(std::size_t j) const {
    if (j >= margins_.size()) throw std::out_of_range("ClaimModel::margin: index out of range");
    return margins_[j];
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

void ClaimModel::sample(RngStream& rng, std::span<double> out) const {
    if (out.size() != dim_) throw std::invalid_argument("ClaimModel::sample: output span has wrong size");
    switch (variant_) {
        case Variant::IndependentMargins:
            for (std::size_t j = 0; j < dim_; ++j) out[j] = margins_[j].quantile_upper(rng.uniform());
            break;
        case Variant::CommonShock: {
            const double u = rng.uniform();
            if (u < shock_weight_) {
                const double c = shock_.quantile_upper(rng.uniform());
                for (std::size_t j = 0; j < dim_; ++j) out[j] = c;
            } else {
                for (std::size_t j = 0; j < dim_; ++j) out[j] = margins_[j].quantile_upper(rng.uniform());
            }
            break;
        }
        case Variant::SpectralProduct: {
            const double r = radius_.quantile_upper(rng.uniform());
            double total = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                out[j] = sample_gamma(rng, dirichlet_[j]);
                total += out[j];
            }
            for (std::size_t j = 0; j < dim_; ++j) out[j] = r * out[j] / total;
            break;
        }
    }
}

std::vector<Vec> sample_claims(const ClaimModel& model, RngStream& rng, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sample_claims: n must be at least 1");
    std::vector<Vec> draws(n, Vec(model.dim()));
    for (auto& v : draws) model.sample(rng, v);
    return draws;
}

// ---------------------------------------------------------------------------
// Marginal tails and means
// ---------------------------------------------------------------------------

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// P(R * s > x) for s ~ Beta(a, b), R with survival rbar.
double beta_mixture_tail(const MarginSpec& radius, double a, double b, double x) {
    const double lnB = log_beta(a, b);
    const auto integrand = [&](double s) {
        if (s <= 0.0 || s >= 1.0) return 0.0;
        const double pdf = std::exp((a - 1.0) * std::log(s) + (b - 1.0) * std::log1p(-s) - lnB);
        return pdf * radius.tail(x / s);
    };
    const QuadResult q = integrate(integrand, 0.0, 1.0, QuadratureSpec{1e-9, 1e-14, 4000});
    return std::clamp(q.value, 0.0, 1.0);
}

}  // namespace

double ClaimModel::marginal_tail(std::size_t j, double x) const {
    if (j >= dim_) throw std::out_of_range("ClaimModel::marginal_tail: index out of range");
    switch (variant_) {
        case Variant::IndependentMargins:
            return margins_[j].tail(x);
        case Variant::CommonShock:
            return shock_weight_ * shock_.tail(x) + (1.0 - shock_weight_) * margins_[j].tail(x);
        case Variant::SpectralProduct: {
            if (dim_ == 1) return radius_.tail(x);
            if (x <= 0.0) return 1.0;
            const double total = std::accumulate(dirichlet_.begin(), dirichlet_.end(), 0.0);
            return beta_mixture_tail(radius_, dirichlet_[j], total - dirichlet_[j], x);
        }
    }
    return 0.0;
}

Vec ClaimModel::mean_vector() const {
    Vec mean(dim_, 0.0);
    switch (variant_) {
        case Variant::IndependentMargins:
            for (std::size_t j = 0; j < dim_; ++j) mean[j] = margins_[j].mean();
            break;
        case Variant::CommonShock: {
            const double shock_mean = shock_.mean();
            for (std::size_t j = 0; j < dim_; ++j) {
                mean[j] = shock_weight_ * shock_mean + (1.0 - shock_weight_) * margins_[j].mean();
            }
            break;
        }
        case Variant::SpectralProduct: {
            const double radius_mean = radius_.mean();
            const double total = std::accumulate(dirichlet_.begin(), dirichlet_.end(), 0.0);
            for (std::size_t j = 0; j < dim_; ++j) mean[j] = radius_mean * dirichlet_[j] / total;
            break;
        }
    }
    return mean;
}

// ---------------------------------------------------------------------------
// Gauge tails
// ---------------------------------------------------------------------------

namespace {

// Axis-aligned gauges: the entry event splits into independent per-coordinate
// exceedances, so the survival is one minus a product.
double axis_product_tail(const std::vector<MarginSpec>& margins, const GaugeSet& g, double x) {
    double keep = 1.0;
    for (std::size_t k = 0; k < g.direction_count(); ++k) {
        const auto p = g.direction(k);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] != 0.0) keep *= 1.0 - margins[i].tail(x / p[i]);
        }
    }
    return 1.0 - keep;
}

bool equal_component_directions(const GaugeSet& g, double& max_coeff) {
    max_coeff = 0.0;
    for (std::size_t k = 0; k < g.direction_count(); ++k) {
        const auto p = g.direction(k);
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (std::fabs(p[i] - p[0]) > 1e-13 * std::max(1.0, std::fabs(p[0]))) return false;
        }
        max_coeff = std::max(max_coeff, p[0]);
    }
    return max_coeff > 0.0;
}

}  // namespace

TailEstimate ClaimModel::gauge_tail_closed(const GaugeSet& gauge, double x) const {
    // Comonotone branch of the shock model enters along the diagonal.
    Vec ones(dim_, 1.0);
    switch (variant_) {
        case Variant::IndependentMargins: {
            if (dim_ == 1 && gauge.direction_count() == 1) {
                const double p = gauge.direction(0)[0];
                return {margins_[0].tail(x / p), 0.0, "closed_form"};
            }
            if (gauge.axis_aligned()) {
                return {axis_product_tail(margins_, gauge, x), 0.0, "closed_form"};
            }
            break;
        }
        case Variant::CommonShock: {
            const double diag = gauge.project(ones);
            const double shock_part = shock_.tail(x / diag);
            if (dim_ == 1 && gauge.direction_count() == 1) {
                const double p = gauge.direction(0)[0];
                const double idio = margins_[0].tail(x / p);
                return {shock_weight_ * shock_part + (1.0 - shock_weight_) * idio, 0.0, "closed_form"};
            }
            if (gauge.axis_aligned()) {
                const double idio = axis_product_tail(margins_, gauge, x);
                return {shock_weight_ * shock_part + (1.0 - shock_weight_) * idio, 0.0, "closed_form"};
            }
            break;
        }
        case Variant::SpectralProduct: {
            double coeff = 0.0;
            if (dim_ == 1 && gauge.direction_count() == 1) {
                return {radius_.tail(x / gauge.direction(0)[0]), 0.0, "closed_form"};
            }
            // Directions with equal components see only the radius: the
            // simplex factor projects to a constant.
            if (equal_component_directions(gauge, coeff)) {
                return {radius_.tail(x / coeff), 0.0, "closed_form"};
            }
            break;
        }
    }
    throw std::invalid_argument("gauge_tail: no closed form for this claim-model/gauge pair");
}

TailEstimate ClaimModel::gauge_tail_gridconv(const GaugeSet& gauge, double x,
                                             const GridConvolutionBackend& b) const {
    if (variant_ == Variant::CommonShock) {
        // Mixture: comonotone branch is closed form, the independent branch
        // goes through the grid.
        Vec ones(dim_, 1.0);
        const double shock_part = shock_.tail(x / gauge.project(ones));
        ClaimModel indep;
        indep.variant_ = Variant::IndependentMargins;
        indep.dim_ = dim_;
        indep.margins_ = margins_;
        const TailEstimate idio = indep.gauge_tail_gridconv(gauge, x, b);
        return {shock_weight_ * shock_part + (1.0 - shock_weight_) * idio.value,
                (1.0 - shock_weight_) * idio.error, idio.backend};
    }
    if (variant_ != Variant::IndependentMargins) {
        throw std::invalid_argument("gauge_tail: grid convolution needs independent margins");
    }
    if (gauge.direction_count() != 1 || dim_ > 2) {
        throw std::invalid_argument("gauge_tail: grid convolution covers single-direction gauges in d <= 2");
    }
    const auto p = gauge.direction(0);
    std::ostringstream label;
    label << "grid_convolution(step=" << b.step << ")";

    if (dim_ == 1) return {margins_[0].tail(x / p[0]), 0.0, label.str()};

    // Projection tail of Y1 + Y2 with Y_j = p_j X_j via the symmetric split
    //   P(S > x) = sum_j int_{L_j}^{x/2} f_j(t) Fbar_other(x - t) dt
    //            + Fbar_1(x/2) Fbar_2(x/2),
    // each integral on a log-spaced grid so both the support edge and the
    // slowly varying far factor are resolved.
    const double l1 = p[0] * margins_[0].support_min();
    const double l2 = p[1] * margins_[1].support_min();
    if (x <= l1 + l2) return {1.0, 0.0, label.str()};

    const auto scaled_tail = [&](std::size_t j, double t) { return margins_[j].tail(t / p[j]); };
    const auto scaled_density = [&](std::size_t j, double t) { return margins_[j].density(t / p[j]) / p[j]; };

    double value = scaled_tail(0, 0.5 * x) * scaled_tail(1, 0.5 * x);
    double sup_density = 0.0;
    double edge_error = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        const std::size_t o = 1 - j;
        const double lj = (j == 0) ? l1 : l2;
        double lo = lj;
        const double hi = 0.5 * x;
        if (hi <= lo) continue;
        if (lo <= 0.0) {
            // Exponential margins start at zero; the log grid needs a positive
            // foot. The skipped sliver is one rectangle wide and goes into the
            // error estimate.
            lo = hi * 1e-9;
            const double sliver = scaled_density(j, 0.5 * lo) * lo * scaled_tail(o, x - 0.5 * lo);
            value += sliver;
            edge_error += sliver;
        }
        const double span_log = std::log(hi / lo);
        const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(span_log / b.step)) + 1);
        const double h = span_log / static_cast<double>(n - 1);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = lo * std::exp(h * static_cast<double>(i));
            const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += w * scaled_density(j, t) * scaled_tail(o, x - t) * t;  // dt = t d(log t)
            sup_density = std::max(sup_density, scaled_density(j, t));
        }
        value += acc * h;
    }
    return {std::clamp(value, 0.0, 1.0), b.step * sup_density + edge_error, label.str()};
}

TailEstimate ClaimModel::gauge_tail_mc(const GaugeSet& gauge, double x,
                                       const MonteCarloBackend& b) const {
    if (b.n < 2) throw std::invalid_argument("gauge_tail: Monte Carlo backend needs n >= 2");
    RngStream rng(mix64(b.seed));
    std::ostringstream label;
    label << "monte_carlo(n=" << b.n << ",seed=" << b.seed << ")";

    if (variant_ == Variant::SpectralProduct && dim_ > 1) {
        // Conditional on the simplex direction the radius tail is exact, so
        // average it: lower variance and a smooth function of x.
        Vec s(dim_);
        double sum = 0.0, sum2 = 0.0;
        for (std::uint64_t i = 0; i < b.n; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                s[j] = sample_gamma(rng, dirichlet_[j]);
                total += s[j];
            }
            for (std::size_t j = 0; j < dim_; ++j) s[j] /= total;
            const double proj = gauge.project(s);
            const double v = proj > 0.0 ? radius_.tail(x / proj) : 0.0;
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / static_cast<double>(b.n);
        const double var = std::max(0.0, sum2 / static_cast<double>(b.n) - mean * mean);
        return {mean, std::sqrt(var / static_cast<double>(b.n)), label.str()};
    }

    Vec draw(dim_);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < b.n; ++i) {
        sample(rng, draw);
        if (gauge.project(draw) > x) ++hits;
    }
    const double mean = static_cast<double>(hits) / static_cast<double>(b.n);
    return {mean, std::sqrt(mean * (1.0 - mean) / static_cast<double>(b.n)), label.str()};
}

TailEstimate ClaimModel::gauge_tail(const GaugeSet& gauge, double x, const TailBackend& backend) const {
    if (gauge.dim() != dim_) throw std::invalid_argument("gauge_tail: dimension mismatch");
    if (!(x > 0.0)) throw std::invalid_argument("gauge_tail: x must be positive");
    return std::visit(
        [&](const auto& b) -> TailEstimate {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ClosedFormBackend>) {
                return gauge_tail_closed(gauge, x);
            } else if constexpr (std::is_same_v<T, GridConvolutionBackend>) {
                return gauge_tail_gridconv(gauge, x, b);
            } else {
                return gauge_tail_mc(gauge, x, b);
            }
        },
        backend);
}

std::string ClaimModel::describe() const {
    std::ostringstream os;
    switch (variant_) {
        case Variant::IndependentMargins:
            os << "independent[";
            for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << margins_[j].name();
            os << "]";
            break;
        case Variant::CommonShock:
            os << "common_shock(w=" << shock_weight_ << ",shock=" << shock_.name() << ")[";
            for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << margins_[j].name();
            os << "]";
            break;
        case Variant::SpectralProduct:
            os << "spectral(radius=" << radius_.name() << ",dirichlet=[";
            for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << dirichlet_[j];
            os << "])";
            break;
    }
    return os.str();
}

}  // namespace ruinlab
