#pragma once

#include <optional>

#include "p2dyn/endo.hpp"

namespace p2dyn {

// outward-rounded interval; every primitive inflates its result by 4 ulps
// in both directions, which dominates the ≤ 0.5 ulp rounding of each double
// operation (the enclosure soundness suite is the contract)
struct RealInterval {
    double lo = 0, hi = 0;

    static RealInterval point(double v) { return {v, v}; }
    static RealInterval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

RealInterval iadd(RealInterval a, RealInterval b);
RealInterval isub(RealInterval a, RealInterval b);
RealInterval imul(RealInterval a, RealInterval b);
RealInterval idiv(RealInterval a, RealInterval b);  // requires 0 outside b
RealInterval isquare(RealInterval a);
RealInterval isqrt(RealInterval a);  // requires a.lo >= 0 (clamped at 0)
RealInterval iscale(RealInterval a, double s);
RealInterval ineg(RealInterval a);
RealInterval imax(RealInterval a, RealInterval b);

struct ComplexBox {
    RealInterval re, im;

    static ComplexBox point(Cx z) { return {RealInterval::point(z.real()), RealInterval::point(z.imag())}; }
    bool contains(Cx z) const { return re.contains(z.real()) && im.contains(z.imag()); }
    Cx mid() const { return {re.mid(), im.mid()}; }
};

ComplexBox cadd(ComplexBox a, ComplexBox b);
ComplexBox csub(ComplexBox a, ComplexBox b);
ComplexBox cmul(ComplexBox a, ComplexBox b);
ComplexBox cdiv(ComplexBox a, ComplexBox b);  // requires 0 outside |b|
ComplexBox cscale(ComplexBox a, Cx s);
RealInterval cmod2(ComplexBox a);
RealInterval cmod(ComplexBox a);

// chart-anchored box: the chart coordinate is exactly 1, the two affine
// coordinates range over u and v (moduli bounded by 1 + 1e-9 at the root)
struct ProjBox {
    int chart = 0;
    ComplexBox u, v;

    CxTriple center() const;
};

RealInterval box_conic_defect(const ProjBox& box);

enum class CertStatus { Certified, Falsified, Unknown };

struct Certificate {
    CertStatus status = CertStatus::Unknown;
    long boxes_processed = 0;
    int max_depth_reached = 0;
    double bound_achieved = 0;  // max certified enclosure bound
    std::optional<ProjBox> witness;
    std::string note;
};

// Certified: every box meeting {conic_defect <= delta} has interval image
// defect <= margin (< delta), so F(U(delta)) is compactly inside U(delta).
// Falsified: a floating-point verified center with defect(p) <= delta and
// defect(f(p)) > delta.
Certificate certify_trapping(const HomPolyMap& f, double delta, double margin,
                             int max_depth);

// Certified: |chart determinant| enclosure < alpha on every box meeting
// {conic_defect <= delta_n}.  Falsified: verified center with sj_ratio > alpha.
Certificate certify_sj(const HomPolyMap& f, double alpha, double delta_n, int max_depth);

struct ConicWitness {
    // coefficients of the quadric through p: q_xy xy + q_zz z^2 + q_pp x_i^2
    Cx q_xy{1, 0}, q_zz{-1, 0};
    Cx q_pivot;     // coefficient of the pivot-coordinate square
    int pivot = 0;  // i with |a_i| maximal
    Cx c_value;     // a_x a_y - a_z^2 on the normalized representative
    double defect_bound = 0;  // certified sup of conic_defect over the quadric
    bool contained = false;
    double on_conic_residual = 0;
    long boxes_processed = 0;

    Cx quad_eval(const CxTriple& x) const;
};

// conic through p lying inside the region: every point of the quadric has
// conic_defect <= conic_defect(p) (1 + 1e-6), verified by interval
// subdivision of the three-chart cover
ConicWitness witness_conic(const ProjPoint& p, double delta, int max_depth = 10);

}  // namespace p2dyn
