#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ruinlab {

// ---------------------------------------------------------------------------
// Deterministic random streams
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to derive stream seeds from (master, index, lane).
std::uint64_t mix64(std::uint64_t x);

/// xoshiro256++ stream with explicit seeding. Streams are cheap to construct,
/// so every Monte Carlo path owns private streams derived from the master seed
/// and the path index; results are then independent of worker count and
/// scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    /// Stream for a (path, lane) pair. Lanes keep independent randomness
    /// sources on separate streams: lane 0 carries inter-arrivals and claims,
    /// lane 1 carries Gaussian increments. A configuration without diffusion
    /// never touches lane 1, which keeps claim paths coupled across diffusion
    /// settings under a common master seed.
    static RngStream substream(std::uint64_t master, std::uint64_t index, std::uint64_t lane);

    std::uint64_t next_u64();

    /// Uniform draw on the open interval (0,1); one 64-bit word per draw.
    double uniform();

    /// Standard normal via the inverse-CDF transform; exactly one uniform per draw.
    double normal();

    double exponential(double rate);

private:
    std::uint64_t s_[4];
};

/// Inverse standard normal CDF (Wichura-style rational approximation,
/// absolute error below 1e-15 over (0,1)).
double inverse_normal_cdf(double p);

/// Gamma(shape, 1) sample; Marsaglia-Tsang squeeze with the boost trick for
/// shape < 1. Draw count per sample is variable.
double sample_gamma(RngStream& rng, double shape);

// ---------------------------------------------------------------------------
// Small dense matrices (d is the number of business lines, so tiny)
// ---------------------------------------------------------------------------

struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;  // row-major n*n

    Matrix() = default;
    explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
    static Matrix identity(std::size_t dim);

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Lower-triangular Cholesky factor of a PSD matrix. A singular but PSD input
/// gets a diagonal jitter; an indefinite input throws std::domain_error.
Matrix cholesky_psd(const Matrix& m, double jitter = 1e-12);

// ---------------------------------------------------------------------------
// Adaptive quadrature (Gauss-Kronrod 15/7)
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// Integral over [a, inf). Panels of geometrically growing width are added
/// until the running increment drops below rel_tol times the accumulated
/// value; the residual is bounded by last_increment / (1 - increment_ratio)
/// and folded into `error`. Fails (converged = false) when the increments do
/// not decay, which is how divergent tail integrals are detected.
QuadResult integrate_upper(const std::function<double(double)>& f, double a,
                           const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------
// Monotone piecewise-cubic interpolation (Fritsch-Carlson)
// ---------------------------------------------------------------------------

/// Shape-preserving interpolant; used to resample log-tabulated survival
/// curves onto linear grids without introducing oscillation.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, d_;
};

// ---------------------------------------------------------------------------
// FFT utilities
// ---------------------------------------------------------------------------

/// Linear convolution of two real sequences (FFTW backed, zero padded).
/// Output length is a.size() + b.size() - 1.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& s);

/// Shortest round-trip decimal text for a double, locale independent.
std::string format_double(double v);

/// n log-spaced points from lo to hi inclusive (n >= 2, 0 < lo < hi).
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace ruinlab
