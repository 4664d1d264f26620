#include "doctest.h"
#include "p2dyn/green.hpp"

using namespace p2dyn;

namespace {

Cx cx(double re, double im = 0) { return {re, im}; }

ProjPoint rand_point(Rng& g) {
    for (;;) {
        CxTriple t{gaussian_cx(g), gaussian_cx(g), gaussian_cx(g)};
        if (max_modulus(t) > 1e-3) return normalize(t);
    }
}

}  // namespace

TEST_SUITE_BEGIN("green");

TEST_CASE("green constant") {
    HomPolyMap sq = squaring_map(2);
    CHECK(green_constant(sq) == 0.0);  // max norm is preserved exactly

    HomPolyMap ft = family_ftheta(cx(0.01));
    double cf = green_constant(ft);
    CHECK(cf >= std::abs(std::log(0.99)));
    CHECK(cf < 10.0);

    // doubling all lift coefficients raises the constant by at least log 2
    // on a map whose log-norm range is one-sided
    std::vector<Monomial> P1{{{2, 0, 0}, cx(2)}};
    std::vector<Monomial> Q1{{{0, 2, 0}, cx(2)}};
    std::vector<Monomial> R1{{{0, 0, 2}, cx(2)}};
    std::vector<Monomial> P2{{{2, 0, 0}, cx(4)}};
    std::vector<Monomial> Q2{{{0, 2, 0}, cx(4)}};
    std::vector<Monomial> R2{{{0, 0, 2}, cx(4)}};
    HomPolyMap m1 = make_map(2, {P1, Q1, R1}, "s2", Family::generic, cx(0), false);
    HomPolyMap m2 = make_map(2, {P2, Q2, R2}, "s4", Family::generic, cx(0), false);
    CHECK(green_constant(m2) - green_constant(m1) >= std::log(2.0) - 1e-9);
}

TEST_CASE("squaring map has identically zero green function") {
    HomPolyMap sq = squaring_map(2);
    Rng g(31);
    for (int i = 0; i < 1000; ++i) {
        ProjPoint p = rand_point(g);
        GreenValue gv = green(sq, p, 20, 0.0);
        CHECK(gv.value == 0.0);
    }
}

TEST_CASE("telescoping Cauchy property and depth error bound") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    double c = green_constant(ft);
    Rng g(32);
    for (int i = 0; i < 50; ++i) {
        ProjPoint p = rand_point(g);
        for (int n : {5, 12, 25}) {
            GreenValue a = green(ft, p, n, c);
            GreenValue b = green(ft, p, n + 1, c);
            CHECK(std::abs(a.value - b.value) <= c / std::pow(2.0, n + 1) + 1e-15);
            GreenValue deep = green(ft, p, 50, c);
            CHECK(std::abs(a.value - deep.value) <= a.error_bound + 1e-15);
        }
    }

    ProjPoint ones = make_point(cx(1), cx(1), cx(1));
    GreenValue g30 = green(ft, ones, 30, c);
    GreenValue g60 = green(ft, ones, 60, c);
    CHECK(std::isfinite(g30.value));
    CHECK(g30.error_bound < 1e-8 * c);
    CHECK(std::abs(g30.value - g60.value) <= g30.error_bound);
}

TEST_CASE("functional equation") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    double c = green_constant(ft);
    const int n = 40;
    Rng g(33);
    for (int i = 0; i < 1000; ++i) {
        ProjPoint p = rand_point(g);
        GreenValue gp = green(ft, p, n, c);
        GreenValue gf = green(ft, eval(ft, p), n, c);
        double step = std::log(max_modulus(eval_lift(ft, p.c)));
        double residual = std::abs(2.0 * gp.value - gf.value - step);
        CHECK(residual <= 2.0 * gp.error_bound + 1e-14);
    }
}

TEST_CASE("slice mass: harmonic disk carries none") {
    HomPolyMap sq = squaring_map(2);
    DiskParam fatou = line_disk(cx(0), cx(0.1));
    SliceMassDetail d = slice_mass_detail(sq, fatou, 0.9, 20);
    CHECK(std::abs(d.mass) <= 1e-12);
    CHECK(std::abs(d.coarse) <= 1e-12);
}

TEST_CASE("slice mass: equilibrium measure of the doubling map") {
    HomPolyMap sq = squaring_map(2);
    DiskParam julia = line_disk(cx(0.5), cx(1), 64);
    // the slice on the line z = 0 is uniform on |w| = 1; the portion with
    // |t| <= r is the angular fraction of the circle |w - 0.5| <= r
    auto fraction = [](double r) {
        return std::acos(1.25 - r * r) / kPi;
    };
    double m9 = slice_mass(sq, julia, 0.9, 25);
    CHECK(m9 == doctest::Approx(fraction(0.9)).epsilon(0.05));
    double m56 = slice_mass(sq, julia, 0.56, 25);
    CHECK(m56 == doctest::Approx(fraction(0.56)).epsilon(0.05));
    CHECK(m9 >= m56);
    CHECK(m56 >= 0.0);
}

TEST_CASE("slice mass: conic arc against the circle prediction") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    double len = kPi / 2;
    DiskParam arc = conic_arc_disk(cx(1), len, 64);
    double beta = 2.0 * std::sin(len / 4);
    auto predicted = [&](double r) {
        double phi0 = 2.0 * std::asin(beta * r / 2.0);
        return 2.0 * phi0 / kPi;  // slice carries twice the w-angle fraction
    };
    double m = slice_mass(ft, arc, 0.9, 40);
    CHECK(m == doctest::Approx(predicted(0.9)).epsilon(0.05));
}

TEST_CASE("slice sample concentrates on the invariant circle") {
    HomPolyMap sq = squaring_map(2);
    DiskParam julia = line_disk(cx(0.5), cx(1), 96);
    EmpiricalMeasure mu = slice_sample(sq, julia, 25, 500, 7, SnapPolicy::none);
    CHECK(mu.total_mass() > 0.1);

    std::vector<ProjPoint> circle;
    for (int k = 0; k < 720; ++k)
        circle.push_back(make_point(cx(1), std::polar(1.0, 2 * kPi * k / 720), cx(0)));
    double near_weight = 0;
    for (auto& a : mu.atoms) {
        double best = 1.0;
        for (auto& q : circle) best = std::min(best, dist(a.p, q));
        if (best < 0.05) near_weight += a.w;
    }
    CHECK(near_weight >= 0.95 * mu.total_mass());

    DiskParam fatou = line_disk(cx(0), cx(0.1));
    CHECK_THROWS_AS(slice_sample(sq, fatou, 20, 100, 7), EmptySlice);
}

TEST_CASE("snapped conic atoms stay on the conic to machine precision") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    DiskParam arc = conic_arc_disk(cx(1), kPi / 2, 64);
    EmpiricalMeasure mu = slice_sample(ft, arc, 40, 300, 9);
    for (auto& a : mu.atoms) {
        CHECK(conic_defect(a.p) < 1e-14);
        // unit-modulus circle membership
        CHECK(std::abs(std::abs(a.p.c[2] / a.p.c[1]) - 1.0) < 1e-14);
    }
}

TEST_SUITE_END();
