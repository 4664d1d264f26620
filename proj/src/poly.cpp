#include "p2dyn/poly.hpp"

#include <algorithm>

namespace p2dyn {

Cx poly_eval(const std::vector<Cx>& c, Cx t) {
    Cx acc(0, 0);
    for (size_t m = c.size(); m-- > 0;) acc = acc * t + c[m];
    return acc;
}

std::vector<Cx> poly_derivative(const std::vector<Cx>& c) {
    if (c.size() <= 1) return {Cx(0, 0)};
    std::vector<Cx> d(c.size() - 1);
    for (size_t m = 1; m < c.size(); ++m) d[m - 1] = c[m] * double(m);
    return d;
}

static std::vector<Cx> trim(const std::vector<Cx>& c) {
    size_t n = c.size();
    double mx = 0;
    for (auto& z : c) mx = std::max(mx, std::abs(z));
    if (mx == 0) return {};
    while (n > 1 && std::abs(c[n - 1]) <= 1e-14 * mx) --n;
    return std::vector<Cx>(c.begin(), c.begin() + n);
}

std::vector<Cx> poly_roots(const std::vector<Cx>& cin, int max_iters) {
    std::vector<Cx> c = trim(cin);
    if (c.size() <= 1) return {};
    int n = int(c.size()) - 1;
    Cx lead = c[n];
    for (auto& z : c) z /= lead;

    double radius = 0;
    for (int m = 0; m < n; ++m) radius = std::max(radius, std::abs(c[m]));
    radius = 1.0 + radius;

    auto run = [&](double phase) {
        std::vector<Cx> r(n);
        Cx w = std::polar(0.9 * radius, phase);
        Cx g = std::polar(1.0, 2 * kPi / n + 0.13);  // avoid symmetric lock-in
        Cx cur = w;
        for (int i = 0; i < n; ++i) { r[i] = cur; cur *= g; }
        for (int it = 0; it < max_iters; ++it) {
            double moved = 0;
            for (int i = 0; i < n; ++i) {
                Cx num = poly_eval(c, r[i]);
                Cx den(1, 0);
                for (int j = 0; j < n; ++j)
                    if (j != i) den *= (r[i] - r[j]);
                if (std::abs(den) < 1e-300) { den = Cx(1e-300, 0); }
                Cx delta = num / den;
                r[i] -= delta;
                moved = std::max(moved, std::abs(delta));
            }
            if (moved < 1e-14 * radius) break;
        }
        return r;
    };

    auto residual = [&](const std::vector<Cx>& r) {
        double res = 0;
        for (auto& z : r) res = std::max(res, std::abs(poly_eval(c, z)));
        return res;
    };

    std::vector<Cx> r = run(0.41);
    if (residual(r) > 1e-8 * std::pow(radius, n)) {
        std::vector<Cx> r2 = run(1.77);
        if (residual(r2) < residual(r)) r = r2;
    }
    return r;
}

// ---- HPoly --------------------------------------------------------------

HPoly HPoly::from_monomials(int d, const std::vector<Monomial>& ms) {
    HPoly p = HPoly::zero(d);
    for (auto& m : ms) {
        if (m.e[0] + m.e[1] + m.e[2] != d)
            throw DegreeMismatch("monomial total degree does not match");
        p.add(m.e[0], m.e[1], m.c);
    }
    return p;
}

Cx HPoly::eval(const CxTriple& v) const {
    std::vector<Cx> px(deg + 1), py(deg + 1), pz(deg + 1);
    px[0] = py[0] = pz[0] = Cx(1, 0);
    for (int m = 1; m <= deg; ++m) {
        px[m] = px[m - 1] * v[0];
        py[m] = py[m - 1] * v[1];
        pz[m] = pz[m - 1] * v[2];
    }
    Cx acc(0, 0);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            Cx co = coef[idx(i, j)];
            if (co == Cx(0, 0)) continue;
            acc += co * px[i] * py[j] * pz[deg - i - j];
        }
    return acc;
}

HPoly HPoly::mul(const HPoly& o) const {
    HPoly r = HPoly::zero(deg + o.deg);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            Cx a = coef[idx(i, j)];
            if (a == Cx(0, 0)) continue;
            for (int p = 0; p <= o.deg; ++p)
                for (int q = 0; q <= o.deg - p; ++q) {
                    Cx b = o.coef[o.idx(p, q)];
                    if (b == Cx(0, 0)) continue;
                    r.add(i + p, j + q, a * b);
                }
        }
    return r;
}

HPoly HPoly::sub(const HPoly& o) const {
    if (deg != o.deg) throw DegreeMismatch("HPoly::sub degree mismatch");
    HPoly r = *this;
    for (size_t m = 0; m < coef.size(); ++m) r.coef[m] -= o.coef[m];
    return r;
}

HPoly HPoly::scaled(Cx s) const {
    HPoly r = *this;
    for (auto& z : r.coef) z *= s;
    return r;
}

HPoly HPoly::dx() const {
    HPoly r = HPoly::zero(std::max(0, deg - 1));
    if (deg == 0) return r;
    for (int i = 1; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j)
            r.add(i - 1, j, coef[idx(i, j)] * double(i));
    return r;
}

HPoly HPoly::dy() const {
    HPoly r = HPoly::zero(std::max(0, deg - 1));
    if (deg == 0) return r;
    for (int i = 0; i <= deg; ++i)
        for (int j = 1; j <= deg - i; ++j)
            r.add(i, j - 1, coef[idx(i, j)] * double(j));
    return r;
}

HPoly HPoly::dz() const {
    HPoly r = HPoly::zero(std::max(0, deg - 1));
    if (deg == 0) return r;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            int k = deg - i - j;
            if (k >= 1) r.add(i, j, coef[idx(i, j)] * double(k));
        }
    return r;
}

HPoly HPoly::compose_linear(const std::array<CxTriple, 3>& Lcols) const {
    // v -> L v means x' = row of L... here Lcols[j] is the image of e_j, so
    // the substituted variable x = sum_j Lrow... build the three linear forms
    // l_r(v) = sum_j L[r][j] v_j with L[r][j] = Lcols[j][r].
    auto lin = [&](int r) {
        HPoly l = HPoly::zero(1);
        l.add(1, 0, Lcols[0][r]);
        l.add(0, 1, Lcols[1][r]);
        l.add(0, 0, Lcols[2][r]);
        return l;
    };
    HPoly lx = lin(0), ly = lin(1), lz = lin(2);

    // powers up to deg
    std::vector<HPoly> pwx{HPoly::zero(0)}, pwy{HPoly::zero(0)}, pwz{HPoly::zero(0)};
    pwx[0].coef[0] = pwy[0].coef[0] = pwz[0].coef[0] = Cx(1, 0);
    for (int m = 1; m <= deg; ++m) {
        pwx.push_back(pwx[m - 1].mul(lx));
        pwy.push_back(pwy[m - 1].mul(ly));
        pwz.push_back(pwz[m - 1].mul(lz));
    }
    HPoly r = HPoly::zero(deg);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            Cx co = coef[idx(i, j)];
            if (co == Cx(0, 0)) continue;
            HPoly term = pwx[i].mul(pwy[j]).mul(pwz[deg - i - j]).scaled(co);
            for (size_t m = 0; m < r.coef.size(); ++m) r.coef[m] += term.coef[m];
        }
    return r;
}

std::vector<Cx> HPoly::z_poly(Cx x0, Cx y0) const {
    std::vector<Cx> out(deg + 1, Cx(0, 0));
    std::vector<Cx> px(deg + 1), py(deg + 1);
    px[0] = py[0] = Cx(1, 0);
    for (int m = 1; m <= deg; ++m) { px[m] = px[m - 1] * x0; py[m] = py[m - 1] * y0; }
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            int k = deg - i - j;
            out[k] += coef[idx(i, j)] * px[i] * py[j];
        }
    return out;
}

std::vector<Monomial> HPoly::monomials() const {
    std::vector<Monomial> out;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) {
            Cx co = coef[idx(i, j)];
            if (co != Cx(0, 0)) out.push_back({{i, j, deg - i - j}, co});
        }
    return out;
}

Cx sylvester_resultant(const std::vector<Cx>& a, int dega,
                       const std::vector<Cx>& b, int degb) {
    int n = dega + degb;
    std::vector<Cx> ap(a), bp(b);
    ap.resize(dega + 1, Cx(0, 0));
    bp.resize(degb + 1, Cx(0, 0));
    std::vector<Cx> M(size_t(n) * n, Cx(0, 0));
    auto at = [&](int r, int c) -> Cx& { return M[size_t(r) * n + c]; };
    for (int r = 0; r < degb; ++r)
        for (int m = 0; m <= dega; ++m)
            at(r, r + m) = ap[dega - m];
    for (int r = 0; r < dega; ++r)
        for (int m = 0; m <= degb; ++m)
            at(degb + r, r + m) = bp[degb - m];

    // LU with partial pivoting
    Cx det(1, 0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(at(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > best) { best = std::abs(at(r, col)); piv = r; }
        if (best == 0.0) return Cx(0, 0);
        if (piv != col) {
            for (int c = col; c < n; ++c) std::swap(at(piv, c), at(col, c));
            det = -det;
        }
        det *= at(col, col);
        for (int r = col + 1; r < n; ++r) {
            Cx f = at(r, col) / at(col, col);
            for (int c = col; c < n; ++c) at(r, c) -= f * at(col, c);
        }
    }
    return det;
}

}  // namespace p2dyn
