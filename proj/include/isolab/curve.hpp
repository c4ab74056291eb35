#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>

#include "isolab/arith.hpp"
#include "isolab/errors.hpp"
#include "isolab/poly.hpp"
#include "isolab/prime_field.hpp"
#include "isolab/quad_ext_field.hpp"
#include "isolab/rng.hpp"

namespace isolab {

template <class F> struct Point {
    bool inf = true;
    typename F::Elem x{};
    typename F::Elem y{};
    static Point infinity() { return {}; }
    static Point affine(typename F::Elem x, typename F::Elem y) { return {false, x, y}; }
};

/// y^2 = x^3 + a x + b over F, char > 3, nonsingular.
template <class F> struct Curve {
    F field;
    typename F::Elem a{};
    typename F::Elem b{};
    mutable std::optional<std::pair<u64, i64>> cached_count; // (order, trace), set once
};

struct PointCount {
    u64 order = 0;
    i64 trace = 0;
};

/// j, t, d_pi = t^2 - 4q, c_pi, fundamental d_K with d_pi = c_pi^2 d_K.
struct CurveInvariants {
    u64 j = 0;
    i64 trace = 0;
    i64 d_pi = 0;
    u64 c_pi = 1;
    i64 d_K = 0;
};

template <class F> Curve<F> make_curve(const F &f, typename F::Elem a, typename F::Elem b) {
    require(f.characteristic() > 3, Errc::BadInput, "characteristic must exceed 3");
    auto disc = f.add(f.mul(f.from_int(4), f.mul(a, f.mul(a, a))),
                      f.mul(f.from_int(27), f.mul(b, b)));
    require(!f.is_zero(disc), Errc::BadInput, "singular curve");
    return Curve<F>{f, a, b, std::nullopt};
}

template <class F> typename F::Elem curve_rhs(const Curve<F> &C, typename F::Elem x) {
    const F &f = C.field;
    return f.add(f.mul(x, f.mul(x, x)), f.add(f.mul(C.a, x), C.b));
}

template <class F> bool is_on_curve(const Curve<F> &C, const Point<F> &P) {
    if (P.inf)
        return true;
    const F &f = C.field;
    return f.eq(f.mul(P.y, P.y), curve_rhs(C, P.x));
}

template <class F> Point<F> point_neg(const Curve<F> &C, const Point<F> &P) {
    if (P.inf)
        return P;
    return Point<F>::affine(P.x, C.field.neg(P.y));
}

template <class F> Point<F> point_add(const Curve<F> &C, const Point<F> &P, const Point<F> &Q) {
    const F &f = C.field;
    require(is_on_curve(C, P) && is_on_curve(C, Q), Errc::PointNotOnCurve, "point not on curve");
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    if (f.eq(P.x, Q.x)) {
        if (!f.eq(P.y, Q.y) || f.is_zero(P.y))
            return Point<F>::infinity();
        // doubling
        auto num = f.add(f.mul(f.from_int(3), f.mul(P.x, P.x)), C.a);
        auto lam = f.div(num, f.mul(f.from_int(2), P.y));
        auto x3 = f.sub(f.mul(lam, lam), f.add(P.x, Q.x));
        auto y3 = f.sub(f.mul(lam, f.sub(P.x, x3)), P.y);
        return Point<F>::affine(x3, y3);
    }
    auto lam = f.div(f.sub(Q.y, P.y), f.sub(Q.x, P.x));
    auto x3 = f.sub(f.mul(lam, lam), f.add(P.x, Q.x));
    auto y3 = f.sub(f.mul(lam, f.sub(P.x, x3)), P.y);
    return Point<F>::affine(x3, y3);
}

namespace curvedetail {
// addition without the on-curve precondition re-check (hot loops)
template <class F> Point<F> add_unchecked(const Curve<F> &C, const Point<F> &P, const Point<F> &Q) {
    const F &f = C.field;
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    if (f.eq(P.x, Q.x)) {
        if (!f.eq(P.y, Q.y) || f.is_zero(P.y))
            return Point<F>::infinity();
        auto num = f.add(f.mul(f.from_int(3), f.mul(P.x, P.x)), C.a);
        auto lam = f.div(num, f.mul(f.from_int(2), P.y));
        auto x3 = f.sub(f.mul(lam, lam), f.add(P.x, Q.x));
        auto y3 = f.sub(f.mul(lam, f.sub(P.x, x3)), P.y);
        return Point<F>::affine(x3, y3);
    }
    auto lam = f.div(f.sub(Q.y, P.y), f.sub(Q.x, P.x));
    auto x3 = f.sub(f.mul(lam, lam), f.add(P.x, Q.x));
    auto y3 = f.sub(f.mul(lam, f.sub(P.x, x3)), P.y);
    return Point<F>::affine(x3, y3);
}
} // namespace curvedetail

template <class F> Point<F> scalar_mul(const Curve<F> &C, i128 k, const Point<F> &P) {
    require(is_on_curve(C, P), Errc::PointNotOnCurve, "point not on curve");
    Point<F> base = P;
    if (k < 0) {
        base = point_neg(C, base);
        k = -k;
    }
    Point<F> r = Point<F>::infinity();
    while (k) {
        if (k & 1)
            r = curvedetail::add_unchecked(C, r, base);
        base = curvedetail::add_unchecked(C, base, base);
        k >>= 1;
    }
    return r;
}

template <class F> typename F::Elem j_invariant(const Curve<F> &C) {
    const F &f = C.field;
    auto a3 = f.mul(f.from_int(4), f.mul(C.a, f.mul(C.a, C.a)));
    auto b2 = f.mul(f.from_int(27), f.mul(C.b, C.b));
    return f.div(f.mul(f.from_int(1728), a3), f.add(a3, b2));
}

template <class F> Curve<F> quadratic_twist(const Curve<F> &C) {
    const F &f = C.field;
    // twist by the smallest non-residue u: (a, b) -> (a u^2, b u^3)
    typename F::Elem u;
    if constexpr (std::is_same_v<F, PrimeField>) {
        u = f.smallest_nonresidue();
    } else {
        u = [&] {
            for (u128 i = 0;; ++i) {
                auto e = f.nth_element(i);
                if (!f.is_zero(e) && !f.is_square(e))
                    return e;
            }
        }();
    }
    auto u2 = f.mul(u, u);
    return make_curve(f, f.mul(C.a, u2), f.mul(C.b, f.mul(u2, u)));
}

template <class F> Curve<F> curve_from_j(const F &f, typename F::Elem j, bool other_twist = false) {
    Curve<F> C = [&] {
        if (f.is_zero(j))
            return make_curve(f, f.zero(), f.one()); // j = 0
        if (f.eq(j, f.from_int(1728)))
            return make_curve(f, f.one(), f.zero()); // j = 1728
        auto k = f.div(j, f.sub(f.from_int(1728), j));
        return make_curve(f, f.mul(f.from_int(3), k), f.mul(f.from_int(2), k));
    }();
    return other_twist ? quadratic_twist(C) : C;
}

template <class F> Curve<F> random_curve(const F &f, Rng &rng) {
    for (;;) {
        auto a = f.sample(rng);
        auto b = f.sample(rng);
        auto disc = f.add(f.mul(f.from_int(4), f.mul(a, f.mul(a, a))),
                          f.mul(f.from_int(27), f.mul(b, b)));
        if (!f.is_zero(disc))
            return Curve<F>{f, a, b, std::nullopt};
    }
}

template <class F> Point<F> random_point(const Curve<F> &C, Rng &rng) {
    const F &f = C.field;
    for (;;) {
        auto x = f.sample(rng);
        auto rhs = curve_rhs(C, x);
        if (!f.is_square(rhs))
            continue;
        auto y = f.sqrt(rhs);
        if (rng.next() & 1)
            y = f.neg(y);
        return Point<F>::affine(x, y);
    }
}

namespace curvedetail {

inline u64 isqrt_u64(u64 n) {
    u64 r = u64(std::sqrt(double(n)));
    while (r > 0 && r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

/// All k in [lo, hi] with k*P = infinity, via baby-step giant-step.
template <class F>
std::vector<u64> multiples_of_point_order(const Curve<F> &C, const Point<F> &P, u64 lo, u64 hi) {
    const F &f = C.field;
    u64 width = hi - lo + 1;
    u64 m = isqrt_u64(width) + 1;
    std::unordered_map<u64, std::vector<u64>> baby; // hash(x) -> j list
    Point<F> bj = Point<F>::infinity();
    std::vector<Point<F>> babies(m);
    for (u64 j = 0; j < m; ++j) {
        babies[j] = bj;
        baby[bj.inf ? ~u64(0) : f.hash(bj.x)].push_back(j);
        bj = add_unchecked(C, bj, P);
    }
    Point<F> giant = scalar_mul(C, i128(m), P);
    Point<F> cur = scalar_mul(C, i128(lo), P);
    std::vector<u64> hits;
    for (u64 i = 0; lo + i * m <= hi; ++i) {
        // want k = lo + i*m + j with (lo + i*m)P + jP = O, i.e. jP = -cur
        Point<F> target = point_neg(C, cur);
        auto it = baby.find(target.inf ? ~u64(0) : f.hash(target.x));
        if (it != baby.end()) {
            for (u64 j : it->second) {
                const Point<F> &B = babies[j];
                bool match = target.inf ? B.inf
                                        : (!B.inf && f.eq(B.x, target.x) && f.eq(B.y, target.y));
                u64 k = lo + i * m + j;
                if (match && k >= lo && k <= hi)
                    hits.push_back(k);
            }
        }
        cur = add_unchecked(C, cur, giant);
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

template <class F> PointCount count_exhaustive(const Curve<F> &C) {
    const F &f = C.field;
    u128 q = f.size();
    u64 n = 1; // infinity
    for (u128 i = 0; i < q; ++i) {
        auto x = f.nth_element(i);
        auto rhs = curve_rhs(C, x);
        if (f.is_zero(rhs))
            n += 1;
        else if (f.is_square(rhs))
            n += 2;
    }
    PointCount pc;
    pc.order = n;
    pc.trace = i64(q) + 1 - i64(n);
    return pc;
}

} // namespace curvedetail

/// Baby-step giant-step order finding over the Hasse interval, disambiguated
/// with extra random points and the quadratic twist.
template <class F> PointCount count_points_bsgs(const Curve<F> &C) {
    const F &f = C.field;
    u64 q = u64(f.size());
    PointCount pc;
    u64 s = curvedetail::isqrt_u64(4 * q);
    while (u128(s) * s < 4 * u128(q))
        ++s; // s = ceil(2 sqrt q)
    u64 lo = q + 1 - s, hi = q + 1 + s;
    Curve<F> Ct = quadratic_twist(C);
    Rng rng(0x6f9a3c2d1e08b745ULL ^ q);
    // N lies in [lo, hi]; every sampled point order divides N (resp. the
    // twist order 2q + 2 - N).  Intersect the resulting candidate sets.
    std::vector<u64> candidates;
    bool have = false;
    for (int round = 0; round < 8; ++round) {
        for (int side = 0; side < 2; ++side) {
            const Curve<F> &E = side ? Ct : C;
            Point<F> P = random_point(E, rng);
            auto hits = curvedetail::multiples_of_point_order(E, P, lo, hi);
            require(!hits.empty(), Errc::AmbiguousOrder, "no order candidate in Hasse interval");
            if (side) {
                for (auto &h : hits)
                    h = 2 * q + 2 - h;
                std::sort(hits.begin(), hits.end());
            }
            if (!have) {
                candidates = hits;
                have = true;
            } else {
                std::vector<u64> merged;
                std::set_intersection(candidates.begin(), candidates.end(), hits.begin(),
                                      hits.end(), std::back_inserter(merged));
                candidates = std::move(merged);
            }
            require(!candidates.empty(), Errc::AmbiguousOrder, "order candidates eliminated");
            if (candidates.size() == 1) {
                pc.order = candidates[0];
                pc.trace = i64(q) + 1 - i64(pc.order);
                return pc;
            }
        }
    }
    fail(Errc::AmbiguousOrder, "point counting failed to disambiguate");
}

/// #E(F_q) and the Frobenius trace.  Exhaustive for q <= 10^4, otherwise
/// baby-step giant-step over the Hasse interval with twist disambiguation.
template <class F> PointCount count_points(const Curve<F> &C, u64 q_bound = 1000000000ULL) {
    if (C.cached_count)
        return {C.cached_count->first, C.cached_count->second};
    const F &f = C.field;
    require(f.size() <= q_bound, Errc::BadInput, "field size exceeds point-counting bound");
    PointCount pc =
        f.size() <= 10000 ? curvedetail::count_exhaustive(C) : count_points_bsgs(C);
    C.cached_count = {pc.order, pc.trace};
    return pc;
}

/// Order of P given the group order N.
template <class F> u64 point_order(const Curve<F> &C, const Point<F> &P, u64 N) {
    u64 ord = N;
    auto fac = factor_int(N);
    for (auto [p, e] : fac.factors) {
        for (int i = 0; i < e; ++i) {
            u64 t = ord / u64(p);
            if (scalar_mul(C, i128(t), P).inf)
                ord = t;
            else
                break;
        }
    }
    return ord;
}

/// Invariants of an ordinary curve over a prime field.
inline CurveInvariants curve_invariants(const Curve<PrimeField> &C, u64 factor_budget = 1000000) {
    const PrimeField &f = C.field;
    u64 q = f.modulus();
    PointCount pc = count_points(C);
    require(pc.trace % i64(q) != 0, Errc::SupersingularCurve, "curve is supersingular");
    CurveInvariants inv;
    inv.j = j_invariant(C);
    inv.trace = pc.trace;
    i128 dpi = i128(pc.trace) * pc.trace - i128(4) * q;
    inv.d_pi = i64(dpi);
    auto [c, d0] = square_part(u128(-dpi), factor_budget);
    if (d0 % 4 == 3) {
        inv.d_K = -i64(d0);
        inv.c_pi = u64(c);
    } else {
        inv.d_K = -4 * i64(d0);
        require(c % 2 == 0, Errc::BadInput, "conductor parity violation");
        inv.c_pi = u64(c / 2);
    }
    return inv;
}

} // namespace isolab
