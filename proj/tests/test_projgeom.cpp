#include "doctest.h"
#include "p2dyn/projgeom.hpp"

using namespace p2dyn;

static ProjPoint rand_point(Rng& g) {
    for (;;) {
        CxTriple t{gaussian_cx(g), gaussian_cx(g), gaussian_cx(g)};
        if (max_modulus(t) > 1e-3) return normalize(t);
    }
}

TEST_SUITE_BEGIN("projgeom");

TEST_CASE("normalize picks the max-modulus pivot, smallest index on ties") {
    ProjPoint a = make_point({2, 0}, {0, 0}, {0, 0});
    CHECK(a.pivot == 0);
    CHECK(a.c[0] == Cx(1, 0));
    CHECK(a.c[1] == Cx(0, 0));
    CHECK(a.c[2] == Cx(0, 0));

    ProjPoint b = make_point({0, 0}, {0, 3}, {0, 0});
    CHECK(b.pivot == 1);
    CHECK(b.c[1] == Cx(1, 0));
    CHECK(std::abs(b.c[0]) == 0.0);
    CHECK(std::abs(b.c[2]) == 0.0);

    ProjPoint c = make_point({0, 2}, {1, 0}, {0, 0});
    CHECK(c.pivot == 0);  // |2i| > |1|
    CHECK(c.c[0] == Cx(1, 0));
    CHECK(std::abs(c.c[1] - Cx(0, -0.5)) < 1e-16);  // 1/(2i) = -i/2

    // exact tie: smaller index wins
    ProjPoint t = make_point({0, 1}, {1, 0}, {0, 0});
    CHECK(t.pivot == 0);

    CHECK_THROWS_AS(make_point({0, 0}, {0, 0}, {0, 0}), ZeroVector);
}

TEST_CASE("normalize invariants and idempotence on random input") {
    Rng g(11);
    for (int i = 0; i < 2000; ++i) {
        ProjPoint p = rand_point(g);
        CHECK(p.c[p.pivot] == Cx(1, 0));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p.c[k]) <= 1.0);
        ProjPoint q = normalize(p.c);
        CHECK(q.pivot == p.pivot);
        for (int k = 0; k < 3; ++k) {
            CHECK(q.c[k].real() == p.c[k].real());
            CHECK(q.c[k].imag() == p.c[k].imag());
        }
    }
}

TEST_CASE("dist examples") {
    ProjPoint e0 = make_point({1, 0}, {0, 0}, {0, 0});
    ProjPoint e1 = make_point({0, 0}, {1, 0}, {0, 0});
    ProjPoint m = make_point({1, 0}, {1, 0}, {0, 0});
    CHECK(dist(e0, e0) == 0.0);
    CHECK(dist(e0, e1) == doctest::Approx(1.0).epsilon(1e-15));

    // oracle: direct cross-product evaluation
    CxTriple w = cross(e0.c, m.c);
    double nw = std::sqrt(std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]));
    double expect = nw / std::sqrt(2.0);
    CHECK(expect == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(dist(e0, m) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("dist is scale invariant, symmetric, and weakly triangular") {
    Rng g(12);
    for (int i = 0; i < 10000; ++i) {
        ProjPoint p = rand_point(g), q = rand_point(g), r = rand_point(g);
        CHECK(dist(p, q) == dist(q, p));  // exact: cross product only flips sign
        CHECK(dist(p, r) <= 2.0 * (dist(p, q) + dist(q, r)) + 1e-15);
        Cx lambda = gaussian_cx(g);
        if (std::abs(lambda) > 1e-3) {
            ProjPoint ps = normalize({lambda * p.c[0], lambda * p.c[1], lambda * p.c[2]});
            CHECK(dist(ps, q) == doctest::Approx(dist(p, q)).epsilon(1e-14));
        }
    }
}

TEST_CASE("chart projections") {
    ProjPoint e0 = make_point({1, 0}, {0, 0}, {0, 0});
    AffinePair a = to_chart(e0, 0);
    CHECK(a.u == Cx(0, 0));
    CHECK(a.v == Cx(0, 0));

    ProjPoint ones = make_point({1, 0}, {1, 0}, {1, 0});
    AffinePair b = to_chart(ones, 2);
    CHECK(std::abs(b.u - Cx(1, 0)) < 1e-15);
    CHECK(std::abs(b.v - Cx(1, 0)) < 1e-15);

    ProjPoint c = make_point({1, 0}, {-1, 0}, {0, 0});
    AffinePair d = to_chart(c, 0);
    CHECK(std::abs(d.u - Cx(-1, 0)) < 1e-15);
    CHECK(std::abs(d.v) < 1e-15);

    CHECK_THROWS_AS(to_chart(e0, 1), NearChartBoundary);

    Rng g(13);
    for (int i = 0; i < 1000; ++i) {
        ProjPoint p = rand_point(g);
        for (int chart = 0; chart < 3; ++chart) {
            if (std::abs(p.c[chart]) < 1e-6) continue;
            CHECK(dist(from_chart(to_chart(p, chart)), p) < 1e-14);
        }
    }
}

TEST_CASE("conic defect") {
    CHECK(conic_defect(make_point({1, 0}, {1, 0}, {1, 0})) == 0.0);
    CHECK(conic_defect(make_point({1, 0}, {1, 0}, {0, 0})) == doctest::Approx(1.0));
    CHECK(conic_defect(make_point({0, 0}, {0, 0}, {1, 0})) == doctest::Approx(1.0));

    // invariance of the normalized-representative convention
    Rng g(14);
    for (int i = 0; i < 2000; ++i) {
        ProjPoint p = rand_point(g);
        Cx lambda = gaussian_cx(g);
        if (std::abs(lambda) < 1e-3) continue;
        CxTriple raw{lambda * p.c[0], lambda * p.c[1], lambda * p.c[2]};
        double direct = std::abs(raw[2] * raw[2] - raw[0] * raw[1]) /
                        (max_modulus(raw) * max_modulus(raw));
        CHECK(conic_defect(p) == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_SUITE_END();
