#include "doctest.h"
#include "p2dyn/certify.hpp"

using namespace p2dyn;

namespace {

Cx cx(double re, double im = 0) { return {re, im}; }

RealInterval rand_interval(Rng& g, double span) {
    double a = uniform(g, -span, span), b = uniform(g, -span, span);
    return RealInterval::hull(a, b);
}

double rand_in(Rng& g, RealInterval r) { return uniform(g, r.lo, r.hi); }

}  // namespace

TEST_SUITE_BEGIN("certify");

TEST_CASE("interval primitives are enclosures") {
    Rng g(41);
    for (int i = 0; i < 10000; ++i) {
        RealInterval a = rand_interval(g, 3), b = rand_interval(g, 3);
        double x = rand_in(g, a), y = rand_in(g, b);
        CHECK(iadd(a, b).contains(x + y));
        CHECK(isub(a, b).contains(x - y));
        CHECK(imul(a, b).contains(x * y));
        CHECK(isquare(a).contains(x * x));
        if (b.lo > 0.1 || b.hi < -0.1) CHECK(idiv(a, b).contains(x / y));
        if (a.lo >= 0) CHECK(isqrt(a).contains(std::sqrt(x)));

        ComplexBox ca{a, b}, cb{rand_interval(g, 3), rand_interval(g, 3)};
        Cx za{rand_in(g, ca.re), rand_in(g, ca.im)};
        Cx zb{rand_in(g, cb.re), rand_in(g, cb.im)};
        CHECK(cadd(ca, cb).contains(za + zb));
        CHECK(csub(ca, cb).contains(za - zb));
        CHECK(cmul(ca, cb).contains(za * zb));
        CHECK(cmod(ca).contains(std::abs(za)));
        if (cmod2(cb).lo > 1e-3) CHECK(cdiv(ca, cb).contains(za / zb));
    }
}

TEST_CASE("box conic defect encloses sampled values") {
    // degenerate boxes
    ProjBox ones{0, ComplexBox::point(cx(1)), ComplexBox::point(cx(1))};
    RealInterval d1 = box_conic_defect(ones);
    CHECK(d1.lo <= 0.0);
    CHECK(d1.hi < 1e-14);

    ProjBox e2{2, ComplexBox::point(cx(0)), ComplexBox::point(cx(0))};
    RealInterval d2 = box_conic_defect(e2);
    CHECK(d2.contains(1.0));
    CHECK(d2.width() < 1e-13);

    // width-0.1 box around the conic point
    Rng g(42);
    for (int rep = 0; rep < 20; ++rep) {
        ProjBox box{0,
                    {RealInterval{0.95, 1.05}, RealInterval{-0.05, 0.05}},
                    {RealInterval{0.95, 1.05}, RealInterval{-0.05, 0.05}}};
        RealInterval d = box_conic_defect(box);
        CHECK(d.lo == 0.0);
        CHECK(d.hi < 0.5);
        for (int s = 0; s < 50; ++s) {
            Cx u{rand_in(g, box.u.re), rand_in(g, box.u.im)};
            Cx v{rand_in(g, box.v.re), rand_in(g, box.v.im)};
            CxTriple t = embed_chart(0, u, v);
            double exact = std::abs(t[2] * t[2] - t[0] * t[1]) /
                           (max_modulus(t) * max_modulus(t));
            CHECK(d.contains(exact));
        }
    }

    // random boxes, random charts
    for (int rep = 0; rep < 200; ++rep) {
        int chart = int(uniform(g, 0, 3));
        chart = std::min(chart, 2);
        ProjBox box{chart,
                    {rand_interval(g, 1), rand_interval(g, 1)},
                    {rand_interval(g, 1), rand_interval(g, 1)}};
        RealInterval d = box_conic_defect(box);
        for (int s = 0; s < 50; ++s) {
            Cx u{rand_in(g, box.u.re), rand_in(g, box.u.im)};
            Cx v{rand_in(g, box.v.re), rand_in(g, box.v.im)};
            CxTriple t = embed_chart(chart, u, v);
            double exact = std::abs(t[2] * t[2] - t[0] * t[1]) /
                           (max_modulus(t) * max_modulus(t));
            CHECK(d.contains(exact));
        }
    }
}

TEST_CASE("trapping certification of the conic region") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    Certificate cert = certify_trapping(ft, 0.05, 0.025, 14);
    CHECK(cert.status == CertStatus::Certified);
    // analytic chain: image defect <= 2 delta |theta| / (1 - delta)
    CHECK(cert.bound_achieved < 0.025);

    // weaker margin at the same depth stays certified
    Certificate weaker = certify_trapping(ft, 0.05, 0.035, 14);
    CHECK(weaker.status == CertStatus::Certified);

    // soundness spot check
    Rng g(43);
    for (int i = 0; i < 10000; ++i) {
        ProjPoint p = sample_in_region(0.05, g);
        CHECK(conic_defect(eval(ft, p)) <= 0.025 + 1e-9);
    }
}

TEST_CASE("trapping fails for large theta") {
    HomPolyMap ft = family_ftheta(cx(0.9));
    Certificate cert = certify_trapping(ft, 0.05, 0.025, 10);
    CHECK(cert.status != CertStatus::Certified);
    if (cert.status == CertStatus::Falsified) {
        REQUIRE(cert.witness.has_value());
        ProjPoint c = normalize(cert.witness->center());
        CHECK(conic_defect(c) <= 0.05);
        CHECK(conic_defect(eval(ft, c)) > 0.05);
    }
    // oracle: a sampled counterexample exists
    Rng g(44);
    bool found = false;
    for (int i = 0; i < 20000 && !found; ++i) {
        ProjPoint p = sample_in_region(0.05, g);
        found = conic_defect(eval(ft, p)) > 0.05;
    }
    CHECK(found);
}

TEST_CASE("trapping falsified for the squaring map") {
    // z^4 - x^2 y^2 = (z^2 - xy)(z^2 + xy): the image defect doubles near
    // z^2 = xy, so points with defect just under delta escape
    HomPolyMap sq = squaring_map(2);
    Certificate cert = certify_trapping(sq, 0.05, 0.025, 10);
    CHECK(cert.status == CertStatus::Falsified);
    REQUIRE(cert.witness.has_value());
    ProjPoint c = normalize(cert.witness->center());
    CHECK(conic_defect(c) <= 0.05);
    CHECK(conic_defect(eval(sq, c)) > 0.05);
}

TEST_CASE("jacobian smallness certification") {
    HomPolyMap ft = family_ftheta(cx(0.01));
    Certificate ok = certify_sj(ft, 0.2, 0.05, 12);
    CHECK(ok.status == CertStatus::Certified);
    CHECK(ok.bound_achieved < 0.2);

    // sampling oracle: sj_ratio stays well below 0.2 on the region
    Rng g(45);
    double mx = 0;
    for (int i = 0; i < 10000; ++i) {
        ProjPoint p = sample_in_region(0.05, g);
        mx = std::max(mx, sj_ratio(ft, p));
    }
    CHECK(mx < 0.06);

    Certificate bad = certify_sj(ft, 0.01, 0.05, 12);
    CHECK(bad.status == CertStatus::Falsified);
    REQUIRE(bad.witness.has_value());
    ProjPoint w = normalize(bad.witness->center());
    CHECK(conic_defect(w) <= 0.05);
    CHECK(sj_ratio(ft, w) > 0.01);

    HomPolyMap sq = squaring_map(2);
    Certificate sqc = certify_sj(sq, 3.0, 0.05, 12);
    CHECK(sqc.status == CertStatus::Falsified);
    REQUIRE(sqc.witness.has_value());
    ProjPoint ws = normalize(sqc.witness->center());
    CHECK(sj_ratio(sq, ws) > 3.0);
}

TEST_CASE("witness conic through region points") {
    // on the conic itself
    ProjPoint ones = make_point(cx(1), cx(1), cx(1));
    ConicWitness w1 = witness_conic(ones, 0.05);
    CHECK(w1.contained);
    CHECK(w1.defect_bound <= 1e-12);
    CHECK(w1.on_conic_residual < 1e-12);
    CHECK(std::abs(w1.c_value) < 1e-15);

    ProjPoint e0 = make_point(cx(1), cx(0), cx(0));
    ConicWitness w0 = witness_conic(e0, 0.05);
    CHECK(w0.contained);
    CHECK(std::abs(w0.c_value) == 0.0);  // degenerate member z^2 = xy

    // defect delta/2, pivot 0
    double delta = 0.05;
    ProjPoint mid = make_point(cx(1), cx(0.9), std::sqrt(Cx(0.9 + delta / 2, 0)));
    REQUIRE(mid.pivot == 0);
    REQUIRE(conic_defect(mid) == doctest::Approx(delta / 2).epsilon(1e-10));
    ConicWitness wm = witness_conic(mid, delta);
    CHECK(wm.contained);
    CHECK(wm.defect_bound <= conic_defect(mid) * (1 + 1e-6) + 1e-15);
    CHECK(wm.on_conic_residual < 1e-12);

    // verify the sup over sampled conic points matches the certified bound
    Rng g(46);
    double worst = 0;
    for (int i = 0; i < 4000; ++i) {
        // parametrize the quadric xy - z^2 = c x^2 through [1 : y0 : z0]:
        // points [1 : y : z(y)] with z^2 = y - c
        Cx y{uniform(g, -3, 3), uniform(g, -3, 3)};
        Cx z = std::sqrt(y - wm.c_value);
        ProjPoint q = make_point(cx(1), y, z);
        CHECK(std::abs(wm.quad_eval(CxTriple{cx(1), y, z})) < 1e-12);
        worst = std::max(worst, conic_defect(q));
    }
    CHECK(worst <= wm.defect_bound + 1e-12);
}

TEST_SUITE_END();
