#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace p2dyn {

using Cx = std::complex<double>;
using CxTriple = std::array<Cx, 3>;

// ---- error types ------------------------------------------------------

struct ZeroVector : std::runtime_error {
    ZeroVector() : std::runtime_error("zero vector has no projective class") {}
};
struct NearChartBoundary : std::runtime_error {
    explicit NearChartBoundary(const std::string& m) : std::runtime_error(m) {}
};
struct DegreeMismatch : std::runtime_error {
    explicit DegreeMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateParameter : std::runtime_error {
    explicit DegenerateParameter(const std::string& m) : std::runtime_error(m) {}
};
struct DegreeUnsupported : std::runtime_error {
    explicit DegreeUnsupported(const std::string& m) : std::runtime_error(m) {}
};
struct SolverDivergence : std::runtime_error {
    explicit SolverDivergence(const std::string& m) : std::runtime_error(m) {}
};
struct BranchBudgetExceeded : std::runtime_error {
    explicit BranchBudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct GridTooCoarse : std::runtime_error {
    explicit GridTooCoarse(const std::string& m) : std::runtime_error(m) {}
};
struct EmptySlice : std::runtime_error {
    explicit EmptySlice(const std::string& m) : std::runtime_error(m) {}
};
struct NoPreimageInRegion : std::runtime_error {
    int step;
    NoPreimageInRegion(const std::string& m, int s) : std::runtime_error(m), step(s) {}
};
struct ChartBreakdown : std::runtime_error {
    explicit ChartBreakdown(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateSplitting : std::runtime_error {
    explicit DegenerateSplitting(const std::string& m) : std::runtime_error(m) {}
};
struct FrameNotFound : std::runtime_error {
    explicit FrameNotFound(const std::string& m) : std::runtime_error(m) {}
};
struct GraphEscapesBox : std::runtime_error {
    std::vector<Cx> offending;
    GraphEscapesBox(const std::string& m, std::vector<Cx> off)
        : std::runtime_error(m), offending(std::move(off)) {}
};
struct NewtonDivergence : std::runtime_error {
    explicit NewtonDivergence(const std::string& m) : std::runtime_error(m) {}
};
struct NoTransversalIntersection : std::runtime_error {
    explicit NoTransversalIntersection(const std::string& m) : std::runtime_error(m) {}
};
struct SeedBudgetExceeded : std::runtime_error {
    explicit SeedBudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct MassMismatch : std::runtime_error {
    explicit MassMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct UnsupportedMap : std::runtime_error {
    explicit UnsupportedMap(const std::string& m) : std::runtime_error(m) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// ---- deterministic rng ------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// sub-seed for task `index` of a seeded batch
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x51ED2701u));
}

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(g);
}

inline Cx unit_disk_sample(Rng& g) {
    for (;;) {
        double re = uniform(g, -1.0, 1.0), im = uniform(g, -1.0, 1.0);
        if (re * re + im * im <= 1.0) return {re, im};
    }
}

inline Cx gaussian_cx(Rng& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(g), n(g)};
}

// ---- 2x2 complex linear algebra ----------------------------------------

struct Mat2 {
    Cx a, b, c, d;  // [[a b],[c d]]

    Cx det() const { return a * d - b * c; }
    Cx tr() const { return a + d; }

    std::array<Cx, 2> apply(const std::array<Cx, 2>& v) const {
        return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
    }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 adjointH() const {  // conjugate transpose
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
};

inline std::array<Cx, 2> eigenvalues2(const Mat2& m) {
    Cx t = m.tr(), d = m.det();
    Cx s = std::sqrt(t * t - 4.0 * d);
    return {(t + s) / 2.0, (t - s) / 2.0};
}

// eigenvector for a given eigenvalue; falls back to an axis when the matrix
// is (numerically) a multiple of the identity
inline std::array<Cx, 2> eigenvector2(const Mat2& m, Cx lambda) {
    // rows of (m - lambda I): pick the larger one, solve for the kernel
    Cx r1a = m.a - lambda, r1b = m.b;
    Cx r2a = m.c, r2b = m.d - lambda;
    double n1 = std::abs(r1a) + std::abs(r1b);
    double n2 = std::abs(r2a) + std::abs(r2b);
    std::array<Cx, 2> v;
    if (n1 >= n2 && n1 > 0) v = {-r1b, r1a};
    else if (n2 > 0) v = {-r2b, r2a};
    else v = {Cx(1, 0), Cx(0, 0)};
    double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (n == 0) return {Cx(1, 0), Cx(0, 0)};
    return {v[0] / n, v[1] / n};
}

// singular values of a 2x2 complex matrix (descending)
inline std::array<double, 2> singular_values2(const Mat2& m) {
    Mat2 h = m.adjointH().mul(m);  // Hermitian PSD
    double p = h.a.real(), q = h.d.real();
    double off = std::abs(h.b);
    double tr = p + q;
    double disc = std::sqrt(std::max(0.0, (p - q) * (p - q) + 4.0 * off * off));
    double l1 = std::max(0.0, (tr + disc) / 2.0), l2 = std::max(0.0, (tr - disc) / 2.0);
    return {std::sqrt(l1), std::sqrt(l2)};
}

// solve 2x2 complex system M x = rhs (partial pivoting)
inline std::array<Cx, 2> solve2(const Mat2& m, const std::array<Cx, 2>& rhs) {
    Cx a = m.a, b = m.b, c = m.c, d = m.d, r0 = rhs[0], r1 = rhs[1];
    if (std::abs(a) < std::abs(c)) { std::swap(a, c); std::swap(b, d); std::swap(r0, r1); }
    if (std::abs(a) == 0.0) throw std::runtime_error("singular 2x2 solve");
    Cx f = c / a;
    Cx dd = d - f * b, rr = r1 - f * r0;
    Cx y = rr / dd;
    Cx x = (r0 - b * y) / a;
    return {x, y};
}

inline double hypot2(const std::array<Cx, 2>& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

// angle between complex lines spanned by a and b, in [0, pi/2]
inline double line_angle(const std::array<Cx, 2>& a, const std::array<Cx, 2>& b) {
    Cx ip = a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]);
    double na = hypot2(a), nb = hypot2(b);
    if (na == 0 || nb == 0) return 0.0;
    double c = std::abs(ip) / (na * nb);
    return std::acos(std::min(1.0, c));
}

inline bool finite(const Cx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace p2dyn
