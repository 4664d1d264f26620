#include "p2dyn/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace p2dyn {

// ---- outward rounding ------------------------------------------------------

static double step_up(double x) {
    for (int i = 0; i < 4; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
    return x;
}
static double step_dn(double x) {
    for (int i = 0; i < 4; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
    return x;
}
static RealInterval inflate(double lo, double hi) { return {step_dn(lo), step_up(hi)}; }

RealInterval iadd(RealInterval a, RealInterval b) { return inflate(a.lo + b.lo, a.hi + b.hi); }
RealInterval isub(RealInterval a, RealInterval b) { return inflate(a.lo - b.hi, a.hi - b.lo); }

RealInterval imul(RealInterval a, RealInterval b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return inflate(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

RealInterval idiv(RealInterval a, RealInterval b) {
    if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval division by zero");
    double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return inflate(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

RealInterval isquare(RealInterval a) {
    if (a.lo <= 0 && a.hi >= 0) return inflate(0.0, std::max(a.lo * a.lo, a.hi * a.hi));
    double p1 = a.lo * a.lo, p2 = a.hi * a.hi;
    return inflate(std::min(p1, p2), std::max(p1, p2));
}

RealInterval isqrt(RealInterval a) {
    double lo = std::sqrt(std::max(0.0, a.lo));
    double hi = std::sqrt(std::max(0.0, a.hi));
    RealInterval r = inflate(lo, hi);
    r.lo = std::max(0.0, r.lo);
    return r;
}

RealInterval iscale(RealInterval a, double s) { return imul(a, RealInterval::point(s)); }
RealInterval ineg(RealInterval a) { return {-a.hi, -a.lo}; }
RealInterval imax(RealInterval a, RealInterval b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

ComplexBox cadd(ComplexBox a, ComplexBox b) { return {iadd(a.re, b.re), iadd(a.im, b.im)}; }
ComplexBox csub(ComplexBox a, ComplexBox b) { return {isub(a.re, b.re), isub(a.im, b.im)}; }

ComplexBox cmul(ComplexBox a, ComplexBox b) {
    return {isub(imul(a.re, b.re), imul(a.im, b.im)),
            iadd(imul(a.re, b.im), imul(a.im, b.re))};
}

RealInterval cmod2(ComplexBox a) { return iadd(isquare(a.re), isquare(a.im)); }
RealInterval cmod(ComplexBox a) { return isqrt(cmod2(a)); }

ComplexBox cdiv(ComplexBox a, ComplexBox b) {
    RealInterval m2 = cmod2(b);
    if (m2.lo <= 0) throw std::domain_error("complex box division by zero");
    ComplexBox conj{b.re, ineg(b.im)};
    ComplexBox num = cmul(a, conj);
    return {idiv(num.re, m2), idiv(num.im, m2)};
}

ComplexBox cscale(ComplexBox a, Cx s) { return cmul(a, ComplexBox::point(s)); }

// ---- chart boxes -------------------------------------------------------------

CxTriple ProjBox::center() const { return embed_chart(chart, u.mid(), v.mid()); }

static std::array<ComplexBox, 3> box_coords(const ProjBox& box) {
    std::array<ComplexBox, 3> t;
    auto s = chart_slots(box.chart);
    t[box.chart] = ComplexBox::point(Cx(1, 0));
    t[s[0]] = box.u;
    t[s[1]] = box.v;
    return t;
}

RealInterval box_conic_defect(const ProjBox& box) {
    auto t = box_coords(box);
    ComplexBox num = csub(cmul(t[2], t[2]), cmul(t[0], t[1]));
    RealInterval nmod = cmod(num);
    RealInterval m = imax(cmod(t[0]), imax(cmod(t[1]), cmod(t[2])));
    RealInterval m2 = isquare(m);
    RealInterval d = idiv(nmod, m2);
    d.lo = std::max(0.0, d.lo);
    return d;
}

// ---- interval polynomials -----------------------------------------------------

namespace {

struct BTerm {
    int a = 0, b = 0;
    ComplexBox c;
};
struct BPoly {
    std::vector<BTerm> terms;
    int max_a = 0, max_b = 0;

    ComplexBox eval(const ComplexBox& u, const ComplexBox& v) const {
        std::vector<ComplexBox> pu(max_a + 1), pv(max_b + 1);
        pu[0] = pv[0] = ComplexBox::point(Cx(1, 0));
        for (int i = 1; i <= max_a; ++i) pu[i] = cmul(pu[i - 1], u);
        for (int i = 1; i <= max_b; ++i) pv[i] = cmul(pv[i - 1], v);
        ComplexBox acc = ComplexBox::point(Cx(0, 0));
        for (auto& t : terms) acc = cadd(acc, cmul(t.c, cmul(pu[t.a], pv[t.b])));
        return acc;
    }

    BPoly du() const {
        BPoly r;
        for (auto& t : terms) {
            if (t.a == 0) continue;
            BTerm d{t.a - 1, t.b, cscale(t.c, Cx(double(t.a), 0))};
            r.terms.push_back(d);
            r.max_a = std::max(r.max_a, d.a);
            r.max_b = std::max(r.max_b, d.b);
        }
        return r;
    }
    BPoly dv() const {
        BPoly r;
        for (auto& t : terms) {
            if (t.b == 0) continue;
            BTerm d{t.a, t.b - 1, cscale(t.c, Cx(double(t.b), 0))};
            r.terms.push_back(d);
            r.max_a = std::max(r.max_a, d.a);
            r.max_b = std::max(r.max_b, d.b);
        }
        return r;
    }
};

BPoly bp_merge(const BPoly& p) {
    BPoly r;
    for (auto& t : p.terms) {
        bool merged = false;
        for (auto& o : r.terms)
            if (o.a == t.a && o.b == t.b) {
                o.c = cadd(o.c, t.c);
                merged = true;
                break;
            }
        if (!merged) r.terms.push_back(t);
        r.max_a = std::max(r.max_a, t.a);
        r.max_b = std::max(r.max_b, t.b);
    }
    return r;
}

BPoly bp_mul(const BPoly& p, const BPoly& q) {
    BPoly r;
    for (auto& a : p.terms)
        for (auto& b : q.terms) r.terms.push_back({a.a + b.a, a.b + b.b, cmul(a.c, b.c)});
    return bp_merge(r);
}

BPoly bp_sub(const BPoly& p, const BPoly& q) {
    BPoly r = p;
    for (auto& t : q.terms) {
        BTerm n = t;
        n.c = csub(ComplexBox::point(Cx(0, 0)), t.c);
        r.terms.push_back(n);
    }
    return bp_merge(r);
}

// mean-value form: f(box) within f(center) + fu(box) (u - cu) + fv(box) (v - cv);
// intersected with the naive range, which is tighter on fat boxes
ComplexBox eval_centered(const BPoly& f, const BPoly& fu, const BPoly& fv,
                         const ComplexBox& u, const ComplexBox& v) {
    ComplexBox naive = f.eval(u, v);
    ComplexBox cu = ComplexBox::point(u.mid()), cv = ComplexBox::point(v.mid());
    ComplexBox centered = cadd(f.eval(cu, cv),
                               cadd(cmul(fu.eval(u, v), csub(u, cu)),
                                    cmul(fv.eval(u, v), csub(v, cv))));
    ComplexBox out;
    out.re = {std::max(naive.re.lo, centered.re.lo), std::min(naive.re.hi, centered.re.hi)};
    out.im = {std::max(naive.im.lo, centered.im.lo), std::min(naive.im.hi, centered.im.hi)};
    return out;
}

// trivariate homogeneous with interval coefficients, for sound expansion of
// coefficient products such as Z^2 - XY (the cancellations happen here)
struct ITri {
    int deg = 0;
    std::vector<ComplexBox> coef;

    static ITri zero(int d) {
        return {d, std::vector<ComplexBox>(HPoly::tri_size(d), ComplexBox::point(Cx(0, 0)))};
    }
    int idx(int i, int j) const { return i * (deg + 1) - i * (i - 1) / 2 + j; }

    static ITri from(const HPoly& p) {
        ITri r = zero(p.deg);
        for (int i = 0; i <= p.deg; ++i)
            for (int j = 0; j <= p.deg - i; ++j)
                r.coef[r.idx(i, j)] = ComplexBox::point(p.coef[p.idx(i, j)]);
        return r;
    }
    ITri mul(const ITri& o) const {
        ITri r = zero(deg + o.deg);
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; j <= deg - i; ++j)
                for (int p = 0; p <= o.deg; ++p)
                    for (int q = 0; q <= o.deg - p; ++q) {
                        int ri = i + p, rj = j + q;
                        r.coef[r.idx(ri, rj)] =
                            cadd(r.coef[r.idx(ri, rj)],
                                 cmul(coef[idx(i, j)], o.coef[o.idx(p, q)]));
                    }
        return r;
    }
    ITri sub(const ITri& o) const {
        ITri r = *this;
        for (size_t m = 0; m < coef.size(); ++m) r.coef[m] = csub(r.coef[m], o.coef[m]);
        return r;
    }
    BPoly restrict_chart(int chart) const {
        BPoly out;
        auto s = chart_slots(chart);
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; j <= deg - i; ++j) {
                int e[3] = {i, j, deg - i - j};
                ComplexBox c = coef[idx(i, j)];
                if (c.re.lo == 0 && c.re.hi == 0 && c.im.lo == 0 && c.im.hi == 0) continue;
                BTerm t;
                t.a = e[s[0]];
                t.b = e[s[1]];
                t.c = c;
                out.terms.push_back(t);
                out.max_a = std::max(out.max_a, t.a);
                out.max_b = std::max(out.max_b, t.b);
            }
        return out;
    }
};

struct ChartData {
    std::array<BPoly, 3> F;
    std::array<BPoly, 3> dFu, dFv;
    BPoly q_img, q_img_du, q_img_dv;
    // determinant numerator toward target chart j: chart_det = N_j / W_j^3
    std::array<BPoly, 3> det_num, det_num_du, det_num_dv;
};

struct Engine {
    const HomPolyMap* map = nullptr;
    std::array<ChartData, 3> charts;
};

Engine build_engine(const HomPolyMap& f) {
    Engine e;
    e.map = &f;
    ITri X = ITri::from(f.hp[0]), Y = ITri::from(f.hp[1]), Z = ITri::from(f.hp[2]);
    ITri qimg = Z.mul(Z).sub(X.mul(Y));
    for (int c = 0; c < 3; ++c) {
        auto s = chart_slots(c);
        for (int k = 0; k < 3; ++k) {
            e.charts[c].F[k] = ITri::from(f.hp[k]).restrict_chart(c);
            e.charts[c].dFu[k] = ITri::from(f.dp[k][s[0]]).restrict_chart(c);
            e.charts[c].dFv[k] = ITri::from(f.dp[k][s[1]]).restrict_chart(c);
        }
        e.charts[c].q_img = qimg.restrict_chart(c);
        e.charts[c].q_img_du = e.charts[c].q_img.du();
        e.charts[c].q_img_dv = e.charts[c].q_img.dv();
        for (int j = 0; j < 3; ++j) {
            auto ds = chart_slots(j);
            const BPoly& A = e.charts[c].F[ds[0]];
            const BPoly& B = e.charts[c].F[ds[1]];
            const BPoly& C = e.charts[c].F[j];
            const BPoly &Au = e.charts[c].dFu[ds[0]], &Av = e.charts[c].dFv[ds[0]];
            const BPoly &Bu = e.charts[c].dFu[ds[1]], &Bv = e.charts[c].dFv[ds[1]];
            const BPoly &Cu = e.charts[c].dFu[j], &Cv = e.charts[c].dFv[j];
            BPoly m_ab = bp_sub(bp_mul(Au, Bv), bp_mul(Av, Bu));
            BPoly m_ac = bp_sub(bp_mul(Au, Cv), bp_mul(Av, Cu));
            BPoly m_bc = bp_sub(bp_mul(Bu, Cv), bp_mul(Bv, Cu));
            BPoly n = bp_sub(bp_mul(C, m_ab), bp_mul(B, m_ac));
            n = bp_merge(n);
            BPoly n2 = bp_mul(A, m_bc);
            for (auto& t : n2.terms) n.terms.push_back(t);
            n = bp_merge(n);
            e.charts[c].det_num[j] = n;
            e.charts[c].det_num_du[j] = n.du();
            e.charts[c].det_num_dv[j] = n.dv();
        }
    }
    return e;
}

const double kRootPad = 1e-9;

ProjBox root_box(int chart) {
    RealInterval r{-1 - kRootPad, 1 + kRootPad};
    return {chart, {r, r}, {r, r}};
}

int widest_dim(const ProjBox& b) {
    double w[4] = {b.u.re.width(), b.u.im.width(), b.v.re.width(), b.v.im.width()};
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (w[i] > w[best]) best = i;
    return best;
}

std::pair<ProjBox, ProjBox> split_box(const ProjBox& b) {
    ProjBox lo = b, hi = b;
    switch (widest_dim(b)) {
        case 0: {
            double m = b.u.re.mid();
            lo.u.re.hi = m;
            hi.u.re.lo = m;
            break;
        }
        case 1: {
            double m = b.u.im.mid();
            lo.u.im.hi = m;
            hi.u.im.lo = m;
            break;
        }
        case 2: {
            double m = b.v.re.mid();
            lo.v.re.hi = m;
            hi.v.re.lo = m;
            break;
        }
        default: {
            double m = b.v.im.mid();
            lo.v.im.hi = m;
            hi.v.im.lo = m;
        }
    }
    return {lo, hi};
}

bool image_defect_bound(const Engine& e, const ProjBox& box, RealInterval& out) {
    const ChartData& cd = e.charts[box.chart];
    RealInterval num =
        cmod(eval_centered(cd.q_img, cd.q_img_du, cd.q_img_dv, box.u, box.v));
    RealInterval m = imax(cmod(cd.F[0].eval(box.u, box.v)),
                          imax(cmod(cd.F[1].eval(box.u, box.v)),
                               cmod(cd.F[2].eval(box.u, box.v))));
    if (m.lo <= 0) return false;
    out = idiv(num, isquare(m));
    out.lo = std::max(0.0, out.lo);
    return true;
}

ProjPoint box_center_point(const ProjBox& box) { return normalize(box.center()); }

// candidate counterexample points seeded by a box: its center plus center
// projections onto defect shells inside the region
std::vector<ProjPoint> probe_candidates(const ProjBox& box, double delta) {
    std::vector<ProjPoint> out;
    Cx u = box.u.mid(), v = box.v.mid();
    auto push = [&](const CxTriple& t) {
        try {
            out.push_back(normalize(t));
        } catch (const ZeroVector&) {
        }
    };
    push(embed_chart(box.chart, u, v));
    for (double frac : {0.9, 0.45}) {
        if (box.chart == 2) {
            if (std::abs(u) < 0.4) continue;
            Cx num = Cx(1, 0) - u * v;
            Cx phase = std::abs(num) > 1e-14 ? num / std::abs(num) : Cx(1, 0);
            Cx vs = (Cx(1, 0) - phase * frac * delta) / u;
            push(embed_chart(2, u, vs));
        } else {
            Cx num = v * v - u;
            Cx phase = std::abs(num) > 1e-14 ? num / std::abs(num) : Cx(1, 0);
            Cx us = v * v - phase * frac * delta;
            push(embed_chart(box.chart, us, v));
        }
    }
    return out;
}

ProjBox point_box(const ProjPoint& p) {
    AffinePair a = to_chart(p, p.pivot);
    return {a.chart, ComplexBox::point(a.u), ComplexBox::point(a.v)};
}

}  // namespace

// ---- trapping certification -----------------------------------------------------

Certificate certify_trapping(const HomPolyMap& f, double delta, double margin,
                             int max_depth) {
    if (!(0 < margin && margin < delta && delta < 1))
        throw std::invalid_argument("need 0 < margin < delta < 1");
    Engine e = build_engine(f);
    Certificate cert;
    cert.status = CertStatus::Certified;

    std::optional<ProjBox> falsified;
    std::optional<ProjBox> unknown;

    auto falsify_probe = [&](const ProjBox& box) {
        for (const ProjPoint& c : probe_candidates(box, delta)) {
            if (conic_defect(c) > delta) continue;
            if (conic_defect(eval(f, c)) > delta) {  // escape from the region itself
                falsified = point_box(c);
                return true;
            }
        }
        return false;
    };

    // depth counts full generations: one generation bisects each of the four
    // real dimensions once (widest first)
    std::function<void(const ProjBox&, int)> visit = [&](const ProjBox& box, int bis) {
        if (falsified) return;
        ++cert.boxes_processed;
        cert.max_depth_reached = std::max(cert.max_depth_reached, bis / 4);

        RealInterval src = box_conic_defect(box);
        if (src.lo > delta) return;  // disjoint from the region

        if (falsify_probe(box)) return;

        RealInterval img;
        if (image_defect_bound(e, box, img) && img.hi <= margin) {
            cert.bound_achieved = std::max(cert.bound_achieved, img.hi);
            return;
        }
        if (bis >= 4 * max_depth) {
            if (!unknown) unknown = box;
            return;
        }
        auto halves = split_box(box);
        visit(halves.first, bis + 1);
        visit(halves.second, bis + 1);
    };

    for (int chart = 0; chart < 3 && !falsified; ++chart) visit(root_box(chart), 0);

    if (falsified) {
        cert.status = CertStatus::Falsified;
        cert.witness = falsified;
        cert.note = "center re-verified in floating point";
    } else if (unknown) {
        cert.status = CertStatus::Unknown;
        cert.witness = unknown;
        cert.note = "depth cap reached";
    }
    return cert;
}

// ---- jacobian smallness certification ----------------------------------------------

Certificate certify_sj(const HomPolyMap& f, double alpha, double delta_n, int max_depth) {
    if (!(alpha > 0) || !(0 < delta_n && delta_n < 1))
        throw std::invalid_argument("need alpha > 0 and 0 < delta_n < 1");
    Engine e = build_engine(f);
    Certificate cert;
    cert.status = CertStatus::Certified;

    std::optional<ProjBox> falsified;
    std::optional<ProjBox> unknown;
    bool chart_breakdown = false;

    auto falsify_probe = [&](const ProjBox& box) {
        for (const ProjPoint& c : probe_candidates(box, delta_n)) {
            if (conic_defect(c) > delta_n) continue;
            try {
                if (sj_ratio(f, c) > alpha) {
                    falsified = point_box(c);
                    return true;
                }
            } catch (const std::runtime_error&) {
            }
        }
        return false;
    };

    // upper bound of |chart determinant| toward the max-modulus target chart:
    // switching the target to the true pivot multiplies the determinant by
    // (|W_j| / |W_pivot|)^3 <= 1, so any admissible target bounds it above.
    // The determinant is N_j / W_j^3 with N_j expanded symbolically, so the
    // coefficient cancellations are captured before the interval evaluation.
    auto det_bound = [&](const ProjBox& box, RealInterval& out) {
        const ChartData& cd = e.charts[box.chart];
        std::array<ComplexBox, 3> W;
        for (int k = 0; k < 3; ++k) W[k] = cd.F[k].eval(box.u, box.v);
        int j = 0;
        double best = -1;
        for (int k = 0; k < 3; ++k) {
            double lo = cmod(W[k]).lo;
            if (lo > best) { best = lo; j = k; }
        }
        if (best < 1e-6) return false;
        RealInterval num = cmod(
            eval_centered(cd.det_num[j], cd.det_num_du[j], cd.det_num_dv[j], box.u, box.v));
        RealInterval wj = cmod(W[j]);
        RealInterval den = imul(wj, imul(wj, wj));
        out = idiv(num, den);
        out.lo = std::max(0.0, out.lo);
        return true;
    };

    std::function<void(const ProjBox&, int)> visit = [&](const ProjBox& box, int bis) {
        if (falsified) return;
        ++cert.boxes_processed;
        cert.max_depth_reached = std::max(cert.max_depth_reached, bis / 4);

        RealInterval src = box_conic_defect(box);
        if (src.lo > delta_n) return;

        if (falsify_probe(box)) return;

        RealInterval det;
        bool have = det_bound(box, det);
        if (have && det.hi < alpha) {
            cert.bound_achieved = std::max(cert.bound_achieved, det.hi);
            return;
        }
        if (bis >= 4 * max_depth) {
            if (!unknown) unknown = box;
            if (!have) chart_breakdown = true;
            return;
        }
        auto halves = split_box(box);
        visit(halves.first, bis + 1);
        visit(halves.second, bis + 1);
    };

    for (int chart = 0; chart < 3 && !falsified; ++chart) visit(root_box(chart), 0);

    if (falsified) {
        cert.status = CertStatus::Falsified;
        cert.witness = falsified;
        cert.note = "center re-verified in floating point";
    } else if (unknown) {
        cert.status = CertStatus::Unknown;
        cert.witness = unknown;
        cert.note = chart_breakdown ? "chart breakdown" : "depth cap reached";
    }
    return cert;
}

// ---- rational hull witness conic -----------------------------------------------------

Cx ConicWitness::quad_eval(const CxTriple& x) const {
    return q_xy * x[0] * x[1] + q_zz * x[2] * x[2] + q_pivot * x[pivot] * x[pivot];
}

ConicWitness witness_conic(const ProjPoint& p, double delta, int max_depth) {
    if (!(conic_defect(p) < delta))
        throw std::invalid_argument("point is not in the region at level delta");
    ConicWitness w;
    w.pivot = p.pivot;
    w.c_value = p.c[0] * p.c[1] - p.c[2] * p.c[2];
    w.q_pivot = -w.c_value;
    w.on_conic_residual = std::abs(w.quad_eval(p.c));

    // on the quadric, z^2 - xy = -c x_pivot^2 identically, so the defect is
    // |c| |x_pivot|^2 / max(|x|,|y|,|z|)^2; certify the ratio <= 1 + 1e-6
    const double ratio_cap = 1.0 + 1e-6;
    double cmag = std::abs(w.c_value);
    bool all_ok = true;

    std::function<void(const ProjBox&, int)> visit = [&](const ProjBox& box, int depth) {
        if (!all_ok) return;
        ++w.boxes_processed;
        auto t = box_coords(box);
        ComplexBox q = csub(cmul(t[0], t[1]), cmul(t[2], t[2]));
        q = csub(q, cscale(cmul(t[w.pivot], t[w.pivot]), w.c_value));
        if (!q.re.contains(0.0) || !q.im.contains(0.0)) return;  // quadric misses box

        // pointwise |x_i|^2 / max(|x|,|y|,|z|)^2 <= min(|x_i|^2, 1): the max
        // includes |x_i| itself and, in a chart box, the coordinate 1
        RealInterval num = cmod2(t[w.pivot]);
        double ratio_hi = std::min(num.hi, 1.0);
        if (ratio_hi <= ratio_cap) return;
        if (depth >= 4 * max_depth) {
            all_ok = false;
            return;
        }
        auto halves = split_box(box);
        visit(halves.first, depth + 1);
        visit(halves.second, depth + 1);
    };

    for (int chart = 0; chart < 3 && all_ok; ++chart) visit(root_box(chart), 0);

    w.defect_bound = cmag * ratio_cap;
    w.contained = all_ok && w.defect_bound <= conic_defect(p) * (1.0 + 1e-6) + 1e-15 &&
                  w.defect_bound < delta;
    return w;
}

}  // namespace p2dyn
