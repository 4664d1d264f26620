#include "p2dyn/endo.hpp"

#include <algorithm>

namespace p2dyn {

static void build_caches(HomPolyMap& f) {
    for (int k = 0; k < 3; ++k) {
        f.hp[k] = HPoly::from_monomials(f.degree, f.comp[k]);
        f.dp[k][0] = f.hp[k].dx();
        f.dp[k][1] = f.hp[k].dy();
        f.dp[k][2] = f.hp[k].dz();
    }
}

HomPolyMap make_map(int degree, std::array<std::vector<Monomial>, 3> comps,
                    std::string label, Family fam, Cx theta, bool check_nondegenerate) {
    if (degree < 2) throw DegreeMismatch("degree must be >= 2");
    HomPolyMap f;
    f.degree = degree;
    f.comp = std::move(comps);
    f.label = std::move(label);
    f.family = fam;
    f.theta = theta;
    build_caches(f);
    if (check_nondegenerate && fam == Family::generic) {
        // probabilistic common-zero check on random unit vectors
        Rng g(0x5EEDBA5Eull);
        for (int s = 0; s < 64; ++s) {
            CxTriple v{gaussian_cx(g), gaussian_cx(g), gaussian_cx(g)};
            double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
            for (auto& z : v) z /= n;
            CxTriple w = eval_lift(f, v);
            if (max_modulus(w) < 1e-12)
                throw DegenerateParameter("components appear to share a zero");
        }
    }
    return f;
}

static int monomial_degree(const Monomial& m) { return m.e[0] + m.e[1] + m.e[2]; }

HomPolyMap family_f0(const std::vector<Monomial>& P, const std::vector<Monomial>& Q, int d) {
    for (auto& m : P)
        if (monomial_degree(m) != d) throw DegreeMismatch("P is not homogeneous of degree d");
    for (auto& m : Q)
        if (monomial_degree(m) != d) throw DegreeMismatch("Q is not homogeneous of degree d");
    std::vector<Monomial> R{{{0, 0, d}, Cx(1, 0)}};
    return make_map(d, {P, Q, R}, "f0", Family::f0);
}

HomPolyMap family_ftheta(Cx theta) {
    if (theta == Cx(0, 0))
        throw DegenerateParameter("theta = 0 degenerates at [0:0:1]");
    std::vector<Monomial> X{{{2, 0, 0}, Cx(1, 0)}};
    std::vector<Monomial> Y{{{0, 2, 0}, Cx(1, 0)}};
    std::vector<Monomial> Z{{{1, 1, 0}, Cx(1, 0) - theta}, {{0, 0, 2}, theta}};
    return make_map(2, {X, Y, Z}, "Ftheta", Family::ftheta, theta);
}

HomPolyMap squaring_map(int d) {
    std::vector<Monomial> P{{{d, 0, 0}, Cx(1, 0)}};
    std::vector<Monomial> Q{{{0, d, 0}, Cx(1, 0)}};
    HomPolyMap f = family_f0(P, Q, d);
    f.label = "squaring";
    return f;
}

CxTriple eval_lift(const HomPolyMap& f, const CxTriple& v) {
    return {f.hp[0].eval(v), f.hp[1].eval(v), f.hp[2].eval(v)};
}

ProjPoint eval(const HomPolyMap& f, const ProjPoint& p) {
    return normalize(eval_lift(f, p.c));
}

std::array<CxTriple, 3> lift_jacobian(const HomPolyMap& f, const CxTriple& v) {
    std::array<CxTriple, 3> D;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) D[k][j] = f.dp[k][j].eval(v);
    return D;
}

Cx lift_jacobian_det(const HomPolyMap& f, const CxTriple& v) {
    auto D = lift_jacobian(f, v);
    return D[0][0] * (D[1][1] * D[2][2] - D[1][2] * D[2][1]) -
           D[0][1] * (D[1][0] * D[2][2] - D[1][2] * D[2][0]) +
           D[0][2] * (D[1][0] * D[2][1] - D[1][1] * D[2][0]);
}

Mat2 chart_jacobian(const HomPolyMap& f, const ProjPoint& p, int src_chart, int dst_chart) {
    Cx s = p.c[src_chart];
    if (std::abs(s) < 1e-6)
        throw NearChartBoundary("source chart coordinate modulus below 1e-6");
    CxTriple v{p.c[0] / s, p.c[1] / s, p.c[2] / s};
    CxTriple W = eval_lift(f, v);
    auto D = lift_jacobian(f, v);
    Cx den = W[dst_chart];
    if (std::abs(den) < 1e-9 * std::max(1e-300, max_modulus(W)))
        throw ChartBreakdown("target chart coordinate vanishes");
    auto ss = chart_slots(src_chart);
    auto ds = chart_slots(dst_chart);
    Cx a0 = W[ds[0]] / den, a1 = W[ds[1]] / den;
    Mat2 J;
    Cx cols[2][2];
    for (int c = 0; c < 2; ++c) {
        CxTriple delta{D[0][ss[c]], D[1][ss[c]], D[2][ss[c]]};
        cols[c][0] = (delta[ds[0]] - a0 * delta[dst_chart]) / den;
        cols[c][1] = (delta[ds[1]] - a1 * delta[dst_chart]) / den;
    }
    J.a = cols[0][0];
    J.b = cols[1][0];
    J.c = cols[0][1];
    J.d = cols[1][1];
    return J;
}

JacobianData jacobian(const HomPolyMap& f, const ProjPoint& p) {
    JacobianData jd;
    jd.src_chart = p.pivot;
    ProjPoint fp = eval(f, p);
    jd.dst_chart = fp.pivot;
    jd.chart_jac = chart_jacobian(f, p, jd.src_chart, jd.dst_chart);
    jd.chart_det = jd.chart_jac.det();
    jd.lift_det = lift_jacobian_det(f, p.c);
    return jd;
}

double sj_ratio(const HomPolyMap& f, const ProjPoint& p) {
    return std::abs(jacobian(f, p).chart_det);
}

// ---- preimages -----------------------------------------------------------

std::optional<ProjPoint> newton_polish_preimage(const HomPolyMap& f, const ProjPoint& start,
                                                const ProjPoint& q, double tol, int max_steps) {
    int jq = q.pivot;
    auto ds = chart_slots(jq);
    Cx q0 = q.c[ds[0]], q1 = q.c[ds[1]];

    auto residual = [&](const ProjPoint& p, std::array<Cx, 2>& r) -> bool {
        CxTriple W = eval_lift(f, p.c);
        Cx den = W[jq];
        if (std::abs(den) < 1e-12 * std::max(1e-300, max_modulus(W))) return false;
        r = {W[ds[0]] / den - q0, W[ds[1]] / den - q1};
        return true;
    };

    ProjPoint p = start;
    std::array<Cx, 2> r;
    if (!residual(p, r)) return std::nullopt;
    double rn = hypot2(r);
    // iterate past the residual tolerance until steps stall: multiple roots
    // converge linearly and need the extra iterations to pin the point
    for (int it = 0; it < std::max(max_steps, 60) && rn > 0; ++it) {
        Mat2 J;
        std::array<Cx, 2> step;
        try {
            J = chart_jacobian(f, p, p.pivot, jq);
            step = solve2(J, r);
        } catch (const std::runtime_error&) {
            break;
        }
        AffinePair a = to_chart(p, p.pivot);
        if (hypot2(step) < 1e-16 * (1.0 + std::abs(a.u) + std::abs(a.v))) break;
        double lambda = 1.0;
        bool moved = false;
        for (int h = 0; h < 8; ++h) {
            ProjPoint cand;
            try {
                cand = from_chart({a.chart, a.u - lambda * step[0], a.v - lambda * step[1]});
            } catch (const ZeroVector&) {
                lambda *= 0.5;
                continue;
            }
            std::array<Cx, 2> rc;
            if (residual(cand, rc)) {
                double rcn = hypot2(rc);
                if (rcn <= rn || h == 7) {
                    p = cand;
                    r = rc;
                    rn = rcn;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;  // damping on residual increase
        }
        if (!moved) break;
    }
    return rn < tol ? std::optional<ProjPoint>(p) : std::nullopt;
}

PreimageResult preimages(const HomPolyMap& f, const ProjPoint& q) {
    int d = f.degree;
    if (d > 3) throw DegreeUnsupported("preimage solver supports degree <= 3");
    const int D2 = d * d;
    int jq = q.pivot;
    auto ds = chart_slots(jq);

    // pencil equations F_i - q_i F_j = 0
    HPoly G1 = f.hp[ds[0]].sub(f.hp[jq].scaled(q.c[ds[0]]));
    HPoly G2 = f.hp[ds[1]].sub(f.hp[jq].scaled(q.c[ds[1]]));

    std::vector<ProjPoint> polished;
    bool complete = true;

    for (int attempt = 0; attempt < 5; ++attempt) {
        Rng g(derive_seed(0xC0FFEEull, attempt));
        std::array<CxTriple, 3> L;
        for (int c = 0; c < 3; ++c) L[c] = {gaussian_cx(g), gaussian_cx(g), gaussian_cx(g)};

        HPoly H1 = G1.compose_linear(L);
        HPoly H2 = G2.compose_linear(L);

        // resultant in z as a univariate polynomial in lambda = x/y,
        // recovered by evaluation at scaled roots of unity
        int n = D2;
        int m = n + 1;
        double rho = 1.07;
        std::vector<Cx> vals(m);
        for (int j = 0; j < m; ++j) {
            Cx lam = std::polar(rho, 2 * kPi * j / m);
            vals[j] = sylvester_resultant(H1.z_poly(lam, Cx(1, 0)), d,
                                          H2.z_poly(lam, Cx(1, 0)), d);
        }
        std::vector<Cx> coef(m, Cx(0, 0));
        for (int k = 0; k < m; ++k) {
            Cx acc(0, 0);
            for (int j = 0; j < m; ++j)
                acc += vals[j] * std::polar(1.0, -2 * kPi * j * k / m);
            coef[k] = acc / double(m) / std::pow(rho, k);
        }
        double cmax = 0;
        for (auto& z : coef) cmax = std::max(cmax, std::abs(z));
        if (cmax == 0 || std::abs(coef[n]) < 1e-10 * cmax) continue;  // bad frame, retry

        std::vector<Cx> lams = poly_roots(coef);
        if (int(lams.size()) != n) continue;

        polished.clear();
        complete = true;
        for (Cx lam : lams) {
            std::vector<Cx> az = H1.z_poly(lam, Cx(1, 0));
            std::vector<Cx> bz = H2.z_poly(lam, Cx(1, 0));
            std::vector<Cx> zs = poly_roots(az);
            const std::vector<Cx>* other = &bz;
            if (zs.empty()) {
                zs = poly_roots(bz);
                other = &az;
            }
            if (zs.empty()) {
                complete = false;
                continue;
            }
            Cx zbest = zs[0];
            double best = std::abs(poly_eval(*other, zs[0]));
            for (size_t i = 1; i < zs.size(); ++i) {
                double sc = std::abs(poly_eval(*other, zs[i]));
                if (sc < best) { best = sc; zbest = zs[i]; }
            }
            CxTriple vp{lam, Cx(1, 0), zbest};
            CxTriple v{L[0][0] * vp[0] + L[1][0] * vp[1] + L[2][0] * vp[2],
                       L[0][1] * vp[0] + L[1][1] * vp[1] + L[2][1] * vp[2],
                       L[0][2] * vp[0] + L[1][2] * vp[1] + L[2][2] * vp[2]};
            ProjPoint cand;
            try {
                cand = normalize(v);
            } catch (const ZeroVector&) {
                complete = false;
                continue;
            }
            auto res = newton_polish_preimage(f, cand, q);
            if (res && dist(eval(f, *res), q) < 1e-8) {
                polished.push_back(*res);
            } else {
                complete = false;
            }
        }
        if (complete && int(polished.size()) == D2) break;
    }

    // dedupe with multiplicity, then merge near-critical clusters
    auto cluster = [](std::vector<std::pair<ProjPoint, int>> pts, double tol) {
        std::vector<std::pair<ProjPoint, int>> out;
        for (auto& it : pts) {
            bool merged = false;
            for (auto& o : out) {
                if (dist(it.first, o.first) < tol) {
                    o.second += it.second;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.push_back(it);
        }
        return out;
    };

    std::vector<std::pair<ProjPoint, int>> raw;
    raw.reserve(polished.size());
    for (auto& p : polished) raw.push_back({p, 1});
    PreimageResult result;
    result.points = cluster(cluster(raw, 1e-9), 1e-6);
    result.complete = complete && result.total_multiplicity() == D2;

    // deterministic order
    std::sort(result.points.begin(), result.points.end(), [](const auto& a, const auto& b) {
        auto key = [](const ProjPoint& p) {
            return std::array<double, 6>{p.c[0].real(), p.c[0].imag(), p.c[1].real(),
                                         p.c[1].imag(), p.c[2].real(), p.c[2].imag()};
        };
        return key(a.first) < key(b.first);
    });
    return result;
}

// ---- small topological degree probe ---------------------------------------

ProjPoint sample_in_region(double delta, Rng& rng) {
    for (int tries = 0; tries < 64; ++tries) {
        int chart = int(uniform(rng, 0.0, 3.0));
        chart = std::min(chart, 2);
        double mag = delta * uniform(rng, 0.0, 0.999);
        Cx eta = std::polar(mag, uniform(rng, 0.0, 2 * kPi));
        CxTriple t;
        if (chart == 2) {
            Cx u = std::polar(uniform(rng, 0.75, 1.0), uniform(rng, 0.0, 2 * kPi));
            Cx v = (Cx(1, 0) - eta) / u;
            t = embed_chart(2, u, v);
        } else {
            Cx v = unit_disk_sample(rng);
            Cx u = v * v + eta;
            t = embed_chart(chart, u, v);
        }
        ProjPoint p = normalize(t);
        if (conic_defect(p) <= delta) return p;
    }
    throw std::runtime_error("region sampler failed");
}

TopDegreeReport small_topdegree_probe(const HomPolyMap& f, double delta, int n,
                                      int sample_count, std::uint64_t seed) {
    TopDegreeReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.sample_count = sample_count;
    rep.seed = seed;
    long dn = 1;
    for (int i = 0; i < n; ++i) dn *= f.degree;
    rep.dn = dn;

    double branches = n * std::log(double(f.degree) * f.degree);
    if (branches > std::log(1e6)) throw BranchBudgetExceeded("preimage tree too large");

    if (sample_count == 0) {
        rep.no_data = true;
        rep.predicate_holds = true;  // vacuous
        return rep;
    }

    for (int s = 0; s < sample_count; ++s) {
        Rng rng(derive_seed(seed, s));
        ProjPoint p0 = sample_in_region(delta, rng);
        ProjPoint q = p0;
        for (int i = 0; i < n; ++i) q = eval(f, q);

        std::vector<ProjPoint> level{q};
        for (int depth = 0; depth < n; ++depth) {
            std::vector<ProjPoint> next;
            for (auto& node : level) {
                PreimageResult pr = preimages(f, node);
                if (!pr.complete) rep.solver_complete = false;
                for (auto& it : pr.points) next.push_back(it.first);
            }
            // fibers as point sets
            std::vector<ProjPoint> dedup;
            for (auto& p : next) {
                bool found = false;
                for (auto& o : dedup)
                    if (dist(p, o) < 1e-9) { found = true; break; }
                if (!found) dedup.push_back(p);
            }
            level = std::move(dedup);
        }
        int count = 0;
        for (auto& p : level)
            if (conic_defect(p) <= delta) ++count;
        rep.max_count = std::max(rep.max_count, count);
        rep.histogram[count]++;
    }
    rep.predicate_holds = rep.max_count < rep.dn;
    return rep;
}

}  // namespace p2dyn
