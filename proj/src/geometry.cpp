#include "ruinlab/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ruinlab/numerics.hpp"

namespace ruinlab {

RuinSetSpec RuinSetSpec::sum_negative(std::size_t d) {
    RuinSetSpec s;
    s.kind = Kind::SumNegative;
    s.dim = d;
    return s;
}

RuinSetSpec RuinSetSpec::any_negative(std::size_t d) {
    RuinSetSpec s;
    s.kind = Kind::AnyNegative;
    s.dim = d;
    return s;
}

RuinSetSpec RuinSetSpec::custom(std::vector<Vec> dirs) {
    RuinSetSpec s;
    s.kind = Kind::CustomDirections;
    if (dirs.empty()) throw std::invalid_argument("RuinSetSpec: custom direction list is empty");
    s.dim = dirs.front().size();
    s.directions = std::move(dirs);
    return s;
}

std::string RuinSetSpec::kind_name() const {
    switch (kind) {
        case Kind::SumNegative: return "L1";
        case Kind::AnyNegative: return "L2";
        case Kind::CustomDirections: return "custom";
    }
    return "?";
}

Allocation::Allocation(Vec b) : b_(std::move(b)) {
    if (b_.empty()) throw std::invalid_argument("Allocation: empty weight vector");
    double sum = 0.0;
    for (double w : b_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("Allocation: weights must be positive and finite");
        }
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("Allocation: weights must sum to 1 (tolerance 1e-12)");
    }
}

GaugeSet::GaugeSet(const RuinSetSpec& ruin_set, const Allocation& allocation)
    : dim_(allocation.dim()), ruin_set_(ruin_set), allocation_(allocation) {
    if (ruin_set.dim != dim_) throw std::invalid_argument("GaugeSet: ruin set and allocation dimensions differ");
    const auto b = allocation.weights();

    std::vector<Vec> raw;
    switch (ruin_set.kind) {
        case RuinSetSpec::Kind::SumNegative:
            // b - L1 = { z : sum z_i > sum b_i = 1 }
            raw.push_back(Vec(dim_, 1.0));
            break;
        case RuinSetSpec::Kind::AnyNegative:
            // b - L2 = { z : z_i > b_i for some i }
            for (std::size_t i = 0; i < dim_; ++i) {
                Vec e(dim_, 0.0);
                e[i] = 1.0 / b[i];
                raw.push_back(std::move(e));
            }
            break;
        case RuinSetSpec::Kind::CustomDirections:
            raw = ruin_set.directions;
            break;
    }

    count_ = raw.size();
    dirs_.reserve(count_ * dim_);
    for (auto& p : raw) {
        if (p.size() != dim_) throw std::invalid_argument("GaugeSet: direction dimension mismatch");
        double pb = 0.0;
        bool nonzero = false;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
                throw std::invalid_argument("GaugeSet: directions must be nonnegative and finite");
            }
            if (p[i] > 0.0) nonzero = true;
            pb += p[i] * b[i];
        }
        if (!nonzero) throw std::invalid_argument("GaugeSet: zero direction vector");
        // Normalize so every direction satisfies p . b = 1; the threshold of A
        // then sits at 1 for all of them.
        for (std::size_t i = 0; i < dim_; ++i) dirs_.push_back(p[i] / pb);
    }

    axis_aligned_ = true;
    std::vector<bool> seen(dim_, false);
    for (std::size_t k = 0; k < count_ && axis_aligned_; ++k) {
        std::size_t nonzeros = 0, axis = 0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (dirs_[k * dim_ + i] != 0.0) {
                ++nonzeros;
                axis = i;
            }
        }
        if (nonzeros != 1 || seen[axis]) axis_aligned_ = false;
        else seen[axis] = true;
    }
}

std::span<const double> GaugeSet::direction(std::size_t k) const {
    return {dirs_.data() + k * dim_, dim_};
}

double GaugeSet::project(std::span<const double> z) const {
    if (z.size() != dim_) throw std::invalid_argument("GaugeSet::project: dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count_; ++k) {
        double s = 0.0;
        const double* p = dirs_.data() + k * dim_;
        for (std::size_t i = 0; i < dim_; ++i) s += p[i] * z[i];
        if (s > best) best = s;
    }
    return best;
}

bool GaugeSet::contains(std::span<const double> z, double x, std::span<const double> shift) const {
    if (!(x > 0.0)) throw std::invalid_argument("GaugeSet::contains: x must be positive");
    if (z.size() != dim_ || shift.size() != dim_) {
        throw std::invalid_argument("GaugeSet::contains: dimension mismatch");
    }
    for (std::size_t k = 0; k < count_; ++k) {
        double s = 0.0;
        const double* p = dirs_.data() + k * dim_;
        for (std::size_t i = 0; i < dim_; ++i) s += p[i] * (z[i] - shift[i]);
        if (s > x) return true;  // strict: A is open
    }
    return false;
}

bool GaugeSet::contains(std::span<const double> z, double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("GaugeSet::contains: x must be positive");
    if (z.size() != dim_) throw std::invalid_argument("GaugeSet::contains: dimension mismatch");
    return project(z) > x;
}

double entry_scale(const GaugeSet& gauge, std::span<const double> direction) {
    if (direction.size() != gauge.dim()) throw std::invalid_argument("entry_scale: dimension mismatch");
    double sum = 0.0;
    for (double v : direction) {
        if (!(v >= 0.0)) throw std::invalid_argument("entry_scale: direction must be nonnegative");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("entry_scale: direction must lie on the unit simplex (L1 norm 1)");
    }
    const double g = gauge.project(direction);
    if (!(g > 0.0)) {
        throw std::domain_error("entry_scale: direction never enters the set (infinite scale)");
    }
    return 1.0 / g;
}

}  // namespace ruinlab
