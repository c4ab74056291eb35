#pragma once

#include <algorithm>
#include <vector>

#include "isolab/arith.hpp"
#include "isolab/errors.hpp"
#include "isolab/rng.hpp"

namespace isolab {

/// Dense univariate polynomial over a field F, coefficients ascending,
/// no trailing zeros.  degree(0) = -1.
template <class F> struct Poly {
    std::vector<typename F::Elem> c;
    int degree() const { return int(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

template <class F> Poly<F> poly_trim(const F &f, Poly<F> p) {
    while (!p.c.empty() && f.is_zero(p.c.back()))
        p.c.pop_back();
    return p;
}

template <class F> Poly<F> poly_from(const F &f, std::vector<typename F::Elem> c) {
    Poly<F> p{std::move(c)};
    return poly_trim(f, std::move(p));
}

template <class F> Poly<F> poly_zero(const F &) { return {}; }

template <class F> Poly<F> poly_const(const F &f, typename F::Elem a) {
    return poly_from(f, {a});
}

template <class F> Poly<F> poly_x(const F &f) { return poly_from(f, {f.zero(), f.one()}); }

template <class F> bool poly_eq(const F &f, const Poly<F> &a, const Poly<F> &b) {
    if (a.c.size() != b.c.size())
        return false;
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!f.eq(a.c[i], b.c[i]))
            return false;
    return true;
}

template <class F> Poly<F> poly_add(const F &f, const Poly<F> &a, const Poly<F> &b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), f.zero());
    for (size_t i = 0; i < a.c.size(); ++i)
        r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i)
        r.c[i] = f.add(r.c[i], b.c[i]);
    return poly_trim(f, std::move(r));
}

template <class F> Poly<F> poly_sub(const F &f, const Poly<F> &a, const Poly<F> &b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), f.zero());
    for (size_t i = 0; i < a.c.size(); ++i)
        r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i)
        r.c[i] = f.sub(r.c[i], b.c[i]);
    return poly_trim(f, std::move(r));
}

template <class F> Poly<F> poly_scale(const F &f, const Poly<F> &a, typename F::Elem s) {
    if (f.is_zero(s))
        return {};
    Poly<F> r = a;
    for (auto &x : r.c)
        x = f.mul(x, s);
    return r;
}

template <class F> Poly<F> poly_mul(const F &f, const Poly<F> &a, const Poly<F> &b) {
    if (a.is_zero() || b.is_zero())
        return {};
    Poly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, f.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (f.is_zero(a.c[i]))
            continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = f.add(r.c[i + j], f.mul(a.c[i], b.c[j]));
    }
    return poly_trim(f, std::move(r));
}

template <class F>
std::pair<Poly<F>, Poly<F>> poly_divrem(const F &f, Poly<F> a, const Poly<F> &b) {
    require(!b.is_zero(), Errc::BadInput, "division by zero polynomial");
    int db = b.degree();
    if (a.degree() < db)
        return {{}, std::move(a)};
    auto lead_inv = f.inv(b.c.back());
    Poly<F> q;
    q.c.assign(a.degree() - db + 1, f.zero());
    for (int i = a.degree(); i >= db; --i) {
        if (f.is_zero(a.c[i]))
            continue;
        auto coef = f.mul(a.c[i], lead_inv);
        q.c[i - db] = coef;
        for (int j = 0; j <= db; ++j)
            a.c[i - db + j] = f.sub(a.c[i - db + j], f.mul(coef, b.c[j]));
    }
    return {poly_trim(f, std::move(q)), poly_trim(f, std::move(a))};
}

template <class F> Poly<F> poly_mod(const F &f, const Poly<F> &a, const Poly<F> &b) {
    return poly_divrem(f, a, b).second;
}

template <class F> Poly<F> poly_mulmod(const F &f, const Poly<F> &a, const Poly<F> &b, const Poly<F> &m) {
    return poly_mod(f, poly_mul(f, a, b), m);
}

template <class F> Poly<F> poly_monic(const F &f, const Poly<F> &a) {
    if (a.is_zero() || f.eq(a.c.back(), f.one()))
        return a;
    return poly_scale(f, a, f.inv(a.c.back()));
}

template <class F> Poly<F> poly_gcd(const F &f, Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto r = poly_mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(f, a);
}

template <class F> Poly<F> poly_derivative(const F &f, const Poly<F> &a) {
    Poly<F> r;
    if (a.degree() < 1)
        return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i)
        r.c[i - 1] = f.mul(a.c[i], f.from_int(i128(i)));
    return poly_trim(f, std::move(r));
}

template <class F> typename F::Elem poly_eval(const F &f, const Poly<F> &a, typename F::Elem x) {
    auto r = f.zero();
    for (size_t i = a.c.size(); i-- > 0;)
        r = f.add(f.mul(r, x), a.c[i]);
    return r;
}

/// base^e mod m, e up to 2^127.
template <class F> Poly<F> poly_powmod(const F &f, Poly<F> base, u128 e, const Poly<F> &m) {
    Poly<F> r = poly_const(f, f.one());
    base = poly_mod(f, base, m);
    while (e) {
        if (e & 1)
            r = poly_mulmod(f, r, base, m);
        base = poly_mulmod(f, base, base, m);
        e >>= 1;
    }
    return r;
}

/// Extended Euclid inverse of a mod m (m irreducible in our uses).
template <class F> Poly<F> poly_invmod(const F &f, const Poly<F> &a, const Poly<F> &m) {
    Poly<F> r0 = m, r1 = poly_mod(f, a, m);
    Poly<F> t0 = poly_zero(f), t1 = poly_const(f, f.one());
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divrem(f, r0, r1);
        auto t2 = poly_sub(f, t0, poly_mul(f, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    require(r0.degree() == 0, Errc::BadInput, "non-invertible element in poly_invmod");
    return poly_mod(f, poly_scale(f, t0, f.inv(r0.c[0])), m);
}

// ---- factorization ------------------------------------------------------

namespace polydetail {

/// p-th root of a coefficient (Frobenius inverse): identity on F_p, x -> x^p on F_{p^2}.
template <class F> typename F::Elem pth_root(const F &f, typename F::Elem a) {
    u128 q = f.size();
    u64 p = f.characteristic();
    if (q == p)
        return a;
    return f.pow(a, p); // q = p^2
}

} // namespace polydetail

/// Largest squarefree divisor.
template <class F> Poly<F> poly_squarefree_part(const F &f, const Poly<F> &a) {
    if (a.degree() <= 0)
        return poly_monic(f, a);
    Poly<F> d = poly_derivative(f, a);
    if (d.is_zero()) {
        // a = g(x^p)
        u64 p = f.characteristic();
        Poly<F> g;
        g.c.resize(a.degree() / int(p) + 1, f.zero());
        for (size_t i = 0; i < g.c.size(); ++i)
            g.c[i] = polydetail::pth_root(f, a.c[i * p]);
        return poly_squarefree_part(f, poly_trim(f, std::move(g)));
    }
    Poly<F> g = poly_gcd(f, a, d);
    Poly<F> sf = poly_divrem(f, a, g).first;
    if (g.degree() > 0) {
        // factors killed by the derivative may hide in g
        Poly<F> rest = poly_squarefree_part(f, g);
        Poly<F> extra = poly_divrem(f, rest, poly_gcd(f, rest, sf)).first;
        sf = poly_mul(f, sf, extra);
    }
    return poly_monic(f, sf);
}

/// x^q mod m for q = |F|.
template <class F> Poly<F> poly_frobenius(const F &f, const Poly<F> &m) {
    return poly_powmod(f, poly_x(f), f.size(), m);
}

/// Distinct-degree stage: returns pairs (d, product of irreducible factors of
/// degree d) for d <= dmax, plus the unsplit remainder of higher degree.
/// Input must be squarefree and monic.
template <class F>
std::pair<std::vector<std::pair<int, Poly<F>>>, Poly<F>>
poly_ddf_up_to(const F &f, Poly<F> a, int dmax) {
    std::vector<std::pair<int, Poly<F>>> out;
    if (a.degree() <= 0)
        return {out, a};
    Poly<F> h = poly_mod(f, poly_frobenius(f, a), a); // x^(q^d) mod a, d = 1
    for (int d = 1; d <= dmax && a.degree() >= d; ++d) {
        if (d > 1)
            h = poly_powmod(f, h, f.size(), a);
        Poly<F> g = poly_gcd(f, poly_sub(f, h, poly_x(f)), a);
        if (g.degree() > 0) {
            out.push_back({d, g});
            a = poly_divrem(f, a, g).first;
            h = poly_mod(f, h, a);
        }
        if (a.degree() == 0)
            break;
    }
    return {out, a};
}

/// Cantor-Zassenhaus split of a product of degree-d irreducibles.
template <class F>
void poly_edf(const F &f, const Poly<F> &a, int d, Rng &rng, std::vector<Poly<F>> &out) {
    if (a.degree() == d) {
        out.push_back(poly_monic(f, a));
        return;
    }
    for (;;) {
        Poly<F> r;
        r.c.resize(a.degree());
        for (auto &x : r.c)
            x = f.sample(rng);
        r = poly_trim(f, std::move(r));
        if (r.degree() < 1)
            continue;
        // t = r^((q^d - 1)/2) via the norm chain r^(1 + q + ... + q^(d-1))
        Poly<F> s = poly_mod(f, r, a), acc = s;
        for (int i = 1; i < d; ++i) {
            s = poly_powmod(f, s, f.size(), a);
            acc = poly_mulmod(f, acc, s, a);
        }
        Poly<F> t = poly_powmod(f, acc, (f.size() - 1) / 2, a);
        Poly<F> g = poly_gcd(f, poly_sub(f, t, poly_const(f, f.one())), a);
        if (g.degree() > 0 && g.degree() < a.degree()) {
            poly_edf(f, g, d, rng, out);
            poly_edf(f, poly_divrem(f, a, g).first, d, rng, out);
            return;
        }
    }
}

/// Irreducible factors of degree <= dmax of a squarefree monic polynomial,
/// plus the unsplit high-degree remainder (second component).
template <class F>
std::pair<std::vector<Poly<F>>, Poly<F>>
poly_factors_up_to(const F &f, const Poly<F> &a, int dmax, Rng &rng) {
    auto [stages, rest] = poly_ddf_up_to(f, poly_monic(f, a), dmax);
    std::vector<Poly<F>> out;
    for (auto &[d, prod] : stages)
        poly_edf(f, prod, d, rng, out);
    return {out, rest};
}

/// All roots in F with multiplicity (ascending by a field-specific hash order
/// is not guaranteed; callers sort when they need canonical output).
template <class F>
std::vector<typename F::Elem> poly_roots(const F &f, const Poly<F> &a, Rng &rng) {
    std::vector<typename F::Elem> roots;
    if (a.degree() <= 0)
        return roots;
    Poly<F> sf = poly_squarefree_part(f, a);
    Poly<F> frob = poly_mod(f, poly_frobenius(f, sf), sf);
    Poly<F> lin = poly_gcd(f, poly_sub(f, frob, poly_x(f)), sf);
    std::vector<Poly<F>> split;
    if (lin.degree() > 0)
        poly_edf(f, lin, 1, rng, split);
    for (auto &g : split) {
        auto r = f.neg(g.c[0]);
        // multiplicity by repeated division
        Poly<F> cur = a;
        int mult = 0;
        Poly<F> factor = poly_from(f, {g.c[0], f.one()});
        for (;;) {
            auto [q, rem] = poly_divrem(f, cur, factor);
            if (!rem.is_zero())
                break;
            ++mult;
            cur = q;
        }
        for (int i = 0; i < mult; ++i)
            roots.push_back(r);
    }
    return roots;
}

} // namespace isolab
