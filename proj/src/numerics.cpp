#include "ruinlab/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace ruinlab {

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {
std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : s_) w = splitmix_next(st);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::substream(std::uint64_t master, std::uint64_t index, std::uint64_t lane) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ (index * 0xd6e8feb86659fd93ULL));
    h = mix64(h ^ (lane * 0xa0761d6478bd642fULL));
    return RngStream(h);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() {
    // 53 significand bits, offset by half an ulp so 0 and 1 are unreachable.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return inverse_normal_cdf(uniform()); }

double RngStream::exponential(double rate) { return -std::log(uniform()) / rate; }

// AS 241 PPND16.
double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                             1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                             4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                               3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                             4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                               6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                             2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                               2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                             5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                               1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                             5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

double sample_gamma(RngStream& rng, double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        const double u = rng.uniform();
        return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix cholesky_psd(const Matrix& m, double jitter) {
    const std::size_t n = m.n;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(m.at(i, i)));

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double bump = (attempt == 0) ? 0.0 : jitter * std::max(scale, 1.0);
        Matrix l(n);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = m.at(i, j) + ((i == j) ? bump : 0.0);
                for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
                if (i == j) {
                    // Tolerate tiny negative pivots from roundoff on singular
                    // PSD inputs; clearly negative pivots mean indefinite.
                    if (s < -1e-10 * std::max(scale, 1.0)) {
                        throw std::domain_error("cholesky_psd: matrix is not positive semi-definite");
                    }
                    if (s <= 0.0) {
                        ok = false;
                        break;
                    }
                    l.at(i, j) = std::sqrt(s);
                } else {
                    l.at(i, j) = s / l.at(j, j);
                }
            }
        }
        if (ok) return l;
    }
    // Jittered pass still hit a zero pivot: the matrix is identically zero on
    // some subspace; rebuild with zero columns for those pivots.
    Matrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                l.at(i, j) = (s > 0.0) ? std::sqrt(s) : 0.0;
            } else {
                l.at(i, j) = (l.at(j, j) > 0.0) ? s / l.at(j, j) : 0.0;
            }
        }
    }
    return l;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

// Gauss-Kronrod 15/7 nodes and weights (positive half).
constexpr double kGkNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kGkWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double gauss;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = kGkWeights[7] * f(c);
    double gauss = kGaussWeights[3] * f(c);
    evals += 1;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGkNodes[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        evals += 2;
        kron += kGkWeights[i] * (f1 + f2);
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
    return {kron * h, gauss * h};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           const QuadratureSpec& spec, int depth, int& splits, QuadResult& out) {
    const PanelResult p = gk15(f, a, b, out.evaluations);
    const double err = std::fabs(p.kronrod - p.gauss);
    if (err <= tol || depth >= 60 || splits >= spec.max_subdivisions) {
        out.value += p.kronrod;
        out.error += err;
        if (err > tol && depth >= 60) out.converged = false;
        if (err > tol && splits >= spec.max_subdivisions) out.converged = false;
        return;
    }
    ++splits;
    const double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, spec, depth + 1, splits, out);
    adapt(f, c, b, 0.5 * tol, spec, depth + 1, splits, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    QuadResult out;
    if (a == b) return out;
    const PanelResult coarse = gk15(f, a, b, out.evaluations);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(coarse.kronrod));
    int splits = 0;
    adapt(f, a, b, tol, spec, 0, splits, out);
    return out;
}

QuadResult integrate_upper(const std::function<double(double)>& f, double a,
                           const QuadratureSpec& spec) {
    QuadResult out;
    const double h0 = std::max(1.0, std::fabs(a)) * 0.5;
    double lo = a;
    double width = h0;
    double prev_inc = 0.0;
    bool have_prev = false;
    int flat = 0;
    for (int panel = 0; panel < 200; ++panel) {
        const double hi = lo + width;
        const QuadResult piece = integrate(f, lo, hi, spec);
        out.evaluations += piece.evaluations;
        out.error += piece.error;
        const double inc = piece.value;
        out.value += inc;
        const double mag = std::fabs(out.value);
        if (std::fabs(inc) < std::max(spec.abs_tol, spec.rel_tol * mag)) {
            // Tail cutoff rule: residual bounded by a geometric extrapolation
            // of the last increment.
            double ratio = have_prev && prev_inc != 0.0 ? std::fabs(inc / prev_inc) : 0.5;
            if (ratio >= 0.95) ratio = 0.95;
            out.error += std::fabs(inc) * ratio / (1.0 - ratio);
            return out;
        }
        if (have_prev && std::fabs(inc) >= std::fabs(prev_inc) * 0.999) {
            if (++flat >= 8) {
                out.converged = false;  // increments not decaying: divergent integral
                return out;
            }
        } else {
            flat = 0;
        }
        prev_inc = inc;
        have_prev = true;
        lo = hi;
        width *= 2.0;
    }
    out.converged = false;
    return out;
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation
// ---------------------------------------------------------------------------

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need matching xs/ys, n >= 2");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: x not strictly increasing");
    }
    d_.assign(n, 0.0);
    std::vector<double> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = slope[0];
    d_[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double h1 = x_[i] - x_[i - 1];
            const double h2 = x_[i + 1] - x_[i];
            const double w1 = 2.0 * h2 + h1;
            const double w2 = h2 + 2.0 * h1;
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
}

std::size_t MonotoneCubic::segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double dh00 = (6 * t2 - 6 * t) / h;
    const double dh10 = 3 * t2 - 4 * t + 1;
    const double dh01 = (-6 * t2 + 6 * t) / h;
    const double dh11 = 3 * t2 - 2 * t;
    return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

// ---------------------------------------------------------------------------
// FFT convolution
// ---------------------------------------------------------------------------

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    std::size_t n = 1;
    while (n < out_len) n <<= 1;

    std::vector<double> in_a(n, 0.0), in_b(n, 0.0);
    std::copy(a.begin(), a.end(), in_a.begin());
    std::copy(b.begin(), b.end(), in_b.begin());

    const std::size_t nc = n / 2 + 1;
    fftw_complex* fa = fftw_alloc_complex(nc);
    fftw_complex* fb = fftw_alloc_complex(nc);
    fftw_plan pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_a.data(), fa, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_b.data(), fb, FFTW_ESTIMATE);
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t i = 0; i < nc; ++i) {
        const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
        const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
        fa[i][0] = re;
        fa[i][1] = im;
    }
    std::vector<double> out(n, 0.0);
    fftw_plan pc = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, out.data(), FFTW_ESTIMATE);
    fftw_execute(pc);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pc);
    fftw_free(fa);
    fftw_free(fb);
    out.resize(out_len);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= inv;
    return out;
}

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw std::invalid_argument("geometric_grid: need 0 < lo < hi, n >= 2");
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.front() = lo;
    g.back() = hi;
    return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace ruinlab
