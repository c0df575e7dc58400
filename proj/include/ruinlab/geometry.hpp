#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ruinlab {

using Vec = std::vector<double>;

/// Ruin-set choice for the surplus process. SumNegative is total deficit
/// across all lines, AnyNegative is deficit on at least one line, and
/// CustomDirections supplies the half-space normals of a polyhedral set
/// directly.
struct RuinSetSpec {
    enum class Kind { SumNegative, AnyNegative, CustomDirections };

    Kind kind = Kind::SumNegative;
    std::size_t dim = 1;
    std::vector<Vec> directions;  // CustomDirections only; nonnegative, nonzero

    static RuinSetSpec sum_negative(std::size_t d);
    static RuinSetSpec any_negative(std::size_t d);
    static RuinSetSpec custom(std::vector<Vec> dirs);

    std::string kind_name() const;
};

/// Initial-capital split across the d lines: strictly positive weights that
/// sum to one (tolerance 1e-12).
class Allocation {
public:
    explicit Allocation(Vec b);

    std::span<const double> weights() const { return b_; }
    std::size_t dim() const { return b_.size(); }

private:
    Vec b_;
};

/// Entry-set gauge: the increasing open set A derived from a ruin set and an
/// allocation, encoded as A = { z : max_k p_k . z > 1 }. Directions are
/// rescaled at construction so that max_k p_k . b = 1, which turns every
/// scaled-set membership test z in x*A into the single comparison
/// project(z) > x. Immutable and safe to share across workers.
class GaugeSet {
public:
    GaugeSet(const RuinSetSpec& ruin_set, const Allocation& allocation);

    /// max_k p_k . z; for nonnegative z this is the scaling gauge of A
    /// (the largest u with z in u*A). May be nonpositive for signed walk
    /// states, meaning z lies outside x*A for every x > 0.
    double project(std::span<const double> z) const;

    /// Strict test z in x*A + shift, i.e. project(z - shift) > x. Requires x > 0.
    bool contains(std::span<const double> z, double x, std::span<const double> shift) const;
    bool contains(std::span<const double> z, double x) const;

    std::size_t dim() const { return dim_; }
    std::size_t direction_count() const { return count_; }
    std::span<const double> direction(std::size_t k) const;

    /// True when every direction touches exactly one coordinate and no
    /// coordinate twice (the AnyNegative family); enables product-form tails.
    bool axis_aligned() const { return axis_aligned_; }

    const RuinSetSpec& ruin_set() const { return ruin_set_; }
    const Allocation& allocation() const { return allocation_; }

private:
    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::vector<double> dirs_;  // count_ x dim_, row-major
    bool axis_aligned_ = false;
    RuinSetSpec ruin_set_;
    Allocation allocation_;
};

/// Smallest radial scale at which a unit-simplex direction enters A:
/// 1 / project(direction). Throws std::domain_error when the direction is
/// orthogonal to every gauge direction (the scale would be infinite).
double entry_scale(const GaugeSet& gauge, std::span<const double> direction);

}  // namespace ruinlab
