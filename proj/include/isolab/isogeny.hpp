#pragma once

#include <map>
#include <optional>

#include "isolab/curve.hpp"
#include "isolab/poly.hpp"

namespace isolab {

template <class F> struct RationalMap {
    Poly<F> num, den;
};

/// Separable degree-ell isogeny in short Weierstrass coordinates:
/// (x, y) -> (mx.num/mx.den (x), y * my.num/my.den (x)).
template <class F> struct Isogeny {
    Curve<F> domain, codomain;
    u64 ell = 0;
    Poly<F> kernel; // monic, degree (ell-1)/2, or degree 1 for ell = 2
    RationalMap<F> mx, my;
};

/// Division polynomial tables with y^2 = x^3 + ax + b substituted away:
/// psi_n = W[n](x) for n odd, psi_n = 2y V[n](x) for n even.
template <class F> struct DivisionPolys {
    std::vector<Poly<F>> W, V;
    Poly<F> f; // x^3 + ax + b
};

template <class F> DivisionPolys<F> division_poly_tables(const Curve<F> &C, int nmax) {
    const F &fld = C.field;
    auto e = [&](i128 v) { return fld.from_int(v); };
    DivisionPolys<F> T;
    int cap = std::max(nmax + 3, 6);
    T.W.assign(cap, poly_zero(fld));
    T.V.assign(cap, poly_zero(fld));
    T.f = poly_from(fld, {C.b, C.a, fld.zero(), fld.one()});
    Poly<F> f2 = poly_mul(fld, T.f, T.f);
    auto a = C.a, b = C.b;
    T.W[1] = poly_const(fld, fld.one());
    // 3x^4 + 6a x^2 + 12b x - a^2
    T.W[3] = poly_from(fld, {fld.neg(fld.mul(a, a)), fld.mul(e(12), b), fld.mul(e(6), a),
                             fld.zero(), e(3)});
    T.V[0] = poly_zero(fld);
    T.V[2] = poly_const(fld, fld.one());
    // 2(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
    {
        auto a2 = fld.mul(a, a);
        auto c0 = fld.neg(fld.add(fld.mul(e(8), fld.mul(b, b)), fld.mul(a2, a)));
        auto c1 = fld.neg(fld.mul(e(4), fld.mul(a, b)));
        auto c2 = fld.neg(fld.mul(e(5), a2));
        auto c3 = fld.mul(e(20), b);
        auto c4 = fld.mul(e(5), a);
        T.V[4] = poly_scale(fld,
                            poly_from(fld, {c0, c1, c2, c3, c4, fld.zero(), fld.one()}), e(2));
    }
    Poly<F> sixteen_f2 = poly_scale(fld, f2, e(16));
    auto W = [&](int i) -> const Poly<F> & { return T.W[i]; };
    auto V = [&](int i) -> const Poly<F> & { return T.V[i]; };
    for (int n = 5; n <= nmax; ++n) {
        if (n & 1) {
            int m = (n - 1) / 2;
            if (m % 2 == 0) {
                auto t1 = poly_mul(fld, sixteen_f2,
                                   poly_mul(fld, V(m + 2),
                                            poly_mul(fld, V(m), poly_mul(fld, V(m), V(m)))));
                auto t2 = poly_mul(fld, W(m - 1),
                                   poly_mul(fld, W(m + 1),
                                            poly_mul(fld, W(m + 1), W(m + 1))));
                T.W[n] = poly_sub(fld, t1, t2);
            } else {
                auto t1 = poly_mul(fld, W(m + 2),
                                   poly_mul(fld, W(m), poly_mul(fld, W(m), W(m))));
                auto t2 = poly_mul(fld, sixteen_f2,
                                   poly_mul(fld, V(m - 1),
                                            poly_mul(fld, V(m + 1),
                                                     poly_mul(fld, V(m + 1), V(m + 1)))));
                T.W[n] = poly_sub(fld, t1, t2);
            }
        } else {
            int m = n / 2;
            if (m % 2 == 0) {
                auto t1 = poly_mul(fld, V(m + 2), poly_mul(fld, W(m - 1), W(m - 1)));
                auto t2 = poly_mul(fld, V(m - 2), poly_mul(fld, W(m + 1), W(m + 1)));
                T.V[n] = poly_mul(fld, V(m), poly_sub(fld, t1, t2));
            } else {
                auto t1 = poly_mul(fld, W(m + 2), poly_mul(fld, V(m - 1), V(m - 1)));
                auto t2 = poly_mul(fld, W(m - 2), poly_mul(fld, V(m + 1), V(m + 1)));
                T.V[n] = poly_mul(fld, W(m), poly_sub(fld, t1, t2));
            }
        }
    }
    return T;
}

/// psi_i^2 as a polynomial in x alone.
template <class F> Poly<F> psi_sq(const F &fld, const DivisionPolys<F> &T, int i) {
    if (i & 1)
        return poly_mul(fld, T.W[i], T.W[i]);
    auto v2 = poly_mul(fld, T.V[i], T.V[i]);
    return poly_scale(fld, poly_mul(fld, T.f, v2), fld.from_int(4));
}

/// psi_{i-1} psi_{i+1} as a polynomial in x alone.
template <class F> Poly<F> psi_prod_adj(const F &fld, const DivisionPolys<F> &T, int i) {
    if (i & 1) {
        auto vv = poly_mul(fld, T.V[i - 1], T.V[i + 1]);
        return poly_scale(fld, poly_mul(fld, T.f, vv), fld.from_int(4));
    }
    return poly_mul(fld, T.W[i - 1], T.W[i + 1]);
}

/// x-only division polynomial of odd prime ell; roots are the x-coordinates
/// of the nonzero ell-torsion.
template <class F> Poly<F> division_polynomial(const Curve<F> &C, u64 ell) {
    require(ell % 2 == 1 && is_prime_u64(ell), Errc::BadInput, "ell must be an odd prime");
    require(ell != C.field.characteristic(), Errc::BadInput, "ell equals the characteristic");
    auto T = division_poly_tables(C, int(ell));
    return T.W[ell];
}

template <class F> Point<F> push_point(const Isogeny<F> &phi, const Point<F> &P) {
    const F &f = phi.domain.field;
    require(is_on_curve(phi.domain, P), Errc::PointNotOnCurve, "point not on isogeny domain");
    if (P.inf)
        return Point<F>::infinity();
    auto den = poly_eval(f, phi.mx.den, P.x);
    if (f.is_zero(den))
        return Point<F>::infinity(); // kernel
    auto x2 = f.div(poly_eval(f, phi.mx.num, P.x), den);
    auto y2 = f.mul(P.y, f.div(poly_eval(f, phi.my.num, P.x), poly_eval(f, phi.my.den, P.x)));
    return Point<F>::affine(x2, y2);
}

/// Velu-Kohel isogeny from a monic kernel polynomial.  The construction is
/// validated on random points; an invalid subgroup candidate throws.
template <class F>
Isogeny<F> velu(const Curve<F> &C, const Poly<F> &h_in, u64 ell, int n_test = 10) {
    const F &fld = C.field;
    auto e = [&](i128 v) { return fld.from_int(v); };
    Poly<F> h = poly_monic(fld, h_in);
    Isogeny<F> phi{C, C, ell, h, {}, {}};
    Poly<F> f = poly_from(fld, {C.b, C.a, fld.zero(), fld.one()});
    if (ell == 2) {
        require(h.degree() == 1, Errc::InvalidKernel, "degree-2 kernel must be linear");
        auto x0 = fld.neg(h.c[0]);
        require(fld.is_zero(poly_eval(fld, f, x0)), Errc::InvalidKernel,
                "kernel root is not 2-torsion");
        auto t = fld.add(fld.mul(e(3), fld.mul(x0, x0)), C.a);
        auto w = fld.mul(x0, t);
        auto A2 = fld.sub(C.a, fld.mul(e(5), t));
        auto B2 = fld.sub(C.b, fld.mul(e(7), w));
        try {
            phi.codomain = make_curve(fld, A2, B2);
        } catch (const Error &) {
            fail(Errc::InvalidKernel, "singular codomain");
        }
        phi.mx.num = poly_from(fld, {t, fld.neg(x0), fld.one()});
        phi.mx.den = h;
        phi.my.num = poly_sub(fld, poly_mul(fld, h, h), poly_const(fld, t));
        phi.my.den = poly_mul(fld, h, h);
    } else {
        int n = h.degree();
        require(u64(2 * n + 1) == ell, Errc::InvalidKernel, "kernel degree mismatch");
        auto sigma1 = n >= 1 ? fld.neg(h.c[n - 1]) : fld.zero();
        auto sigma2 = n >= 2 ? h.c[n - 2] : fld.zero();
        auto sigma3 = n >= 3 ? fld.neg(h.c[n - 3]) : fld.zero();
        auto p2 = fld.sub(fld.mul(sigma1, sigma1), fld.mul(e(2), sigma2));
        auto p3 = fld.add(fld.sub(fld.mul(sigma1, fld.mul(sigma1, sigma1)),
                                  fld.mul(e(3), fld.mul(sigma1, sigma2))),
                          fld.mul(e(3), sigma3));
        auto t = fld.add(fld.mul(e(6), p2), fld.mul(e(2 * n), C.a));
        auto w = fld.add(fld.add(fld.mul(e(10), p3), fld.mul(e(6), fld.mul(C.a, sigma1))),
                         fld.mul(e(4 * n), C.b));
        auto A2 = fld.sub(C.a, fld.mul(e(5), t));
        auto B2 = fld.sub(C.b, fld.mul(e(7), w));
        try {
            phi.codomain = make_curve(fld, A2, B2);
        } catch (const Error &) {
            fail(Errc::InvalidKernel, "singular codomain");
        }
        Poly<F> hp = poly_derivative(fld, h);
        Poly<F> hpp = poly_derivative(fld, hp);
        Poly<F> h2 = poly_mul(fld, h, h);
        // X = [ (ell x - 2 sigma1) h^2 - 2(3x^2 + a) h' h + 4 f (h'^2 - h h'') ] / h^2
        Poly<F> lin = poly_from(fld, {fld.neg(fld.mul(e(2), sigma1)), e(i128(ell))});
        Poly<F> qa = poly_from(fld, {C.a, fld.zero(), e(3)});
        Poly<F> term1 = poly_mul(fld, lin, h2);
        Poly<F> term2 = poly_scale(fld, poly_mul(fld, qa, poly_mul(fld, hp, h)), e(2));
        Poly<F> term3 = poly_scale(
            fld, poly_mul(fld, f, poly_sub(fld, poly_mul(fld, hp, hp), poly_mul(fld, h, hpp))),
            e(4));
        phi.mx.num = poly_add(fld, poly_sub(fld, term1, term2), term3);
        phi.mx.den = h2;
        // Y = y (N' h - 2 N h') / h^3
        Poly<F> Np = poly_derivative(fld, phi.mx.num);
        phi.my.num = poly_sub(fld, poly_mul(fld, Np, h),
                              poly_scale(fld, poly_mul(fld, phi.mx.num, hp), e(2)));
        phi.my.den = poly_mul(fld, h2, h);
    }
    // probabilistic homomorphism validation
    Rng rng(0x51ab5eedULL ^ (u64(fld.hash(h.c[0])) * 0x9e3779b97f4a7c15ULL) ^ ell);
    for (int i = 0; i < n_test; ++i) {
        Point<F> P = random_point(C, rng), Q = random_point(C, rng);
        Point<F> fP = push_point(phi, P), fQ = push_point(phi, Q);
        if (!is_on_curve(phi.codomain, fP) || !is_on_curve(phi.codomain, fQ))
            fail(Errc::InvalidKernel, "image not on codomain");
        Point<F> lhs = push_point(phi, point_add(C, P, Q));
        Point<F> rhs = point_add(phi.codomain, fP, fQ);
        bool same = lhs.inf ? rhs.inf
                            : (!rhs.inf && fld.eq(lhs.x, rhs.x) && fld.eq(lhs.y, rhs.y));
        if (!same)
            fail(Errc::InvalidKernel, "homomorphism test failed");
    }
    return phi;
}

namespace isodetail {

/// Try to produce the rational kernel polynomial of the subgroup generated by
/// a torsion point whose x-coordinate is a root of the irreducible factor g
/// of psi_ell.  Works in A = F[x]/(g); the subgroup is F-rational iff every
/// coefficient of prod (X - x(iP)) collapses to a constant of A.
template <class F>
std::optional<Poly<F>> kernel_from_factor(const F &fld, const DivisionPolys<F> &T,
                                          const Poly<F> &g, int n) {
    // x(iP) = x - psi_{i-1} psi_{i+1} / psi_i^2, evaluated at the symbolic root
    std::vector<Poly<F>> xs;
    xs.push_back(poly_mod(fld, poly_x(fld), g));
    for (int i = 2; i <= n; ++i) {
        Poly<F> num = poly_mod(fld, psi_prod_adj(fld, T, i), g);
        Poly<F> den = poly_mod(fld, psi_sq(fld, T, i), g);
        Poly<F> ratio = poly_mulmod(fld, num, poly_invmod(fld, den, g), g);
        xs.push_back(poly_sub(fld, xs[0], ratio));
    }
    // expand prod (X - x_i); coef[d] lives in A = F[x]/(g)
    std::vector<Poly<F>> coef;
    coef.push_back(poly_const(fld, fld.one()));
    for (int i = 0; i < n; ++i) {
        std::vector<Poly<F>> next(coef.size() + 1, poly_zero(fld));
        for (size_t d = 0; d < coef.size(); ++d) {
            next[d + 1] = poly_add(fld, next[d + 1], coef[d]);
            next[d] = poly_sub(fld, next[d], poly_mulmod(fld, coef[d], xs[i], g));
        }
        coef = std::move(next);
    }
    Poly<F> h;
    h.c.resize(n + 1, fld.zero());
    for (int d = 0; d <= n; ++d) {
        if (coef[d].degree() > 0)
            return std::nullopt; // subgroup not rational over F
        h.c[d] = coef[d].is_zero() ? fld.zero() : coef[d].c[0];
    }
    return poly_trim(fld, std::move(h));
}

template <class F> std::vector<u64> poly_key(const F &fld, const Poly<F> &p) {
    std::vector<u64> k;
    for (auto &c : p.c)
        k.push_back(fld.hash(c));
    return k;
}

} // namespace isodetail

/// All monic kernel polynomials of F-rational order-ell subgroups of C.
/// Strategy: factor psi_ell up to degree (ell-1)/2 and grow each candidate
/// subgroup from a single symbolic torsion point; candidates are confirmed
/// by the Velu construction's homomorphism test.
template <class F>
std::vector<Poly<F>> kernel_polynomials(const Curve<F> &C, u64 ell, u64 ell_bound = 97) {
    const F &fld = C.field;
    require(is_prime_u64(ell), Errc::BadInput, "ell must be prime");
    require(ell != fld.characteristic(), Errc::BadInput, "ell equals the characteristic");
    require(ell <= ell_bound, Errc::BadInput, "ell exceeds the configured bound");
    std::vector<Poly<F>> kernels;
    Rng rng(0xb10cf00dULL ^ ell ^ fld.hash(C.a) ^ (fld.hash(C.b) << 1));
    if (ell == 2) {
        Poly<F> f = poly_from(fld, {C.b, C.a, fld.zero(), fld.one()});
        auto roots = poly_roots(fld, f, rng);
        std::sort(roots.begin(), roots.end(),
                  [&](auto x, auto y) { return fld.hash(x) < fld.hash(y); });
        for (auto r : roots)
            kernels.push_back(poly_from(fld, {fld.neg(r), fld.one()}));
        return kernels;
    }
    int n = int(ell - 1) / 2;
    auto T = division_poly_tables(C, int(ell));
    Poly<F> psi = poly_monic(fld, T.W[ell]);
    auto [factors, rest] = poly_factors_up_to(fld, psi, n, rng);
    (void)rest; // factors of degree > (ell-1)/2 cannot divide a kernel polynomial
    std::map<std::vector<u64>, Poly<F>> found;
    for (auto &g : factors) {
        auto h = isodetail::kernel_from_factor(fld, T, g, n);
        if (!h)
            continue;
        auto key = isodetail::poly_key(fld, *h);
        if (found.count(key))
            continue;
        try {
            velu(C, *h, ell); // validation gate
        } catch (const Error &e) {
            if (e.code() == Errc::InvalidKernel)
                continue;
            throw;
        }
        found.emplace(std::move(key), *h);
    }
    for (auto &[k, h] : found)
        kernels.push_back(h);
    return kernels;
}

/// Composition check used by tests: the dual of an edge multiplies by ell.
template <class F>
bool edges_compose_to_multiplication(const Curve<F> &E, const Isogeny<F> &phi,
                                     const Isogeny<F> &dual, int samples, Rng &rng) {
    for (int i = 0; i < samples; ++i) {
        Point<F> P = random_point(E, rng);
        Point<F> lhs = push_point(dual, push_point(phi, P));
        Point<F> rhs = scalar_mul(E, i128(phi.ell), P);
        bool same = lhs.inf ? rhs.inf
                            : (!rhs.inf && E.field.eq(lhs.x, rhs.x) &&
                               (E.field.eq(lhs.y, rhs.y) || E.field.eq(lhs.y, E.field.neg(rhs.y))));
        if (!same)
            return false;
    }
    return true;
}

} // namespace isolab
