#!/usr/bin/env python3
"""Regenerates data/modular_polynomials.txt (classical modular polynomials
Phi_l for l in {2,3,5,7}) from scratch, using exact integer q-expansions.

Method: compute j(q) from Eisenstein series, form the power sums of the
l+1 conjugate series {j(l*tau), j((tau+k)/l)} in the variable t = q^(1/l),
recover the elementary symmetric functions by Newton's identities, and
express each as an integer polynomial in j.  The root-of-unity twists
collapse because sum_k f(zeta^k t) = l * (part of f supported on t^(l*n)),
so the whole computation stays in Z.

Sanity gates (script aborts if any fails):
  - every exact division (by 1728, by k in Newton, series inversion) is exact
  - each symmetric function is supported on integral powers of q
  - the final coefficient table is symmetric in X, Y
  - Kronecker congruence: Phi_l(X,Y) == (X^l - Y)(X - Y^l) mod l
  - Phi_2 matches its textbook form
"""

import sys
from collections import defaultdict

PRIMES = [2, 3, 5, 7]
OUT = "data/modular_polynomials.txt"


class Laurent:
    """Integer Laurent series sum c[n] t^n, dict-backed, truncated above `hi`."""

    def __init__(self, coeffs=None, hi=0):
        self.c = defaultdict(int)
        self.hi = hi
        if coeffs:
            for n, v in coeffs.items():
                if v and n <= hi:
                    self.c[n] = v

    def copy(self):
        r = Laurent(hi=self.hi)
        r.c = defaultdict(int, self.c)
        return r

    def __add__(self, o):
        hi = min(self.hi, o.hi)
        r = Laurent(hi=hi)
        for n, v in self.c.items():
            if n <= hi:
                r.c[n] += v
        for n, v in o.c.items():
            if n <= hi:
                r.c[n] += v
        r.trim()
        return r

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, k):
        r = Laurent(hi=self.hi)
        for n, v in self.c.items():
            r.c[n] = v * k
        r.trim()
        return r

    def __mul__(self, o):
        # a product coefficient at n is complete only if both factors are
        # known on the whole range it draws from
        v1min = self.valuation() or 0
        v2min = o.valuation() or 0
        hi = min(self.hi + v2min, o.hi + v1min)
        r = Laurent(hi=hi)
        for n1, v1 in self.c.items():
            for n2, v2 in o.c.items():
                n = n1 + n2
                if n <= hi:
                    r.c[n] += v1 * v2
        r.trim()
        return r

    def trim(self):
        for n in [n for n, v in self.c.items() if v == 0]:
            del self.c[n]

    def valuation(self):
        return min(self.c) if self.c else None

    def coeff(self, n):
        return self.c.get(n, 0)

    def is_zero(self):
        return not self.c


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def j_series(nmax):
    """j(q) = 1/q + 744 + ... as Laurent in q, coefficients for q^n, n <= nmax."""
    hi = nmax + 2
    e4 = Laurent({0: 1}, hi)
    e6 = Laurent({0: 1}, hi)
    for n in range(1, hi + 1):
        e4.c[n] = 240 * sigma(3, n)
        e6.c[n] = -504 * sigma(5, n)
    e4cubed = e4 * e4 * e4
    delta_num = e4cubed - e6 * e6
    delta = Laurent(hi=hi)
    for n, v in delta_num.c.items():
        q, r = divmod(v, 1728)
        assert r == 0, "1728 division not exact"
        delta.c[n] = q
    # delta = q * u with u a unit; invert u over Z
    assert delta.coeff(1) == 1 and delta.valuation() == 1
    u = Laurent({n - 1: v for n, v in delta.c.items()}, hi)
    uinv = Laurent({0: 1}, hi)
    for n in range(1, hi + 1):
        s = sum(u.coeff(k) * uinv.coeff(n - k) for k in range(1, n + 1))
        uinv.c[n] = -s
    uinv.trim()
    j = Laurent(hi=nmax)
    prod = e4cubed * uinv
    for n, v in prod.c.items():
        if n - 1 <= nmax:
            j.c[n - 1] = v
    j.trim()
    assert j.coeff(-1) == 1 and j.coeff(0) == 744 and j.coeff(1) == 196884
    return j


def substitute_power(s, m, hi):
    """s(q) -> s(t^m), truncated at t^hi."""
    r = Laurent(hi=hi)
    for n, v in s.c.items():
        if n * m <= hi:
            r.c[n * m] = v
    r.trim()
    return r


def l_supported_times_l(s, l):
    """l * (part of s supported on exponents divisible by l), same variable."""
    r = Laurent(hi=s.hi)
    for n, v in s.c.items():
        if n % l == 0:
            r.c[n] = v * l
    r.trim()
    return r


def to_q_variable(s, l, hi_q):
    hi = min(hi_q, s.hi // l)
    assert hi >= 2, f"insufficient guard precision (valid to q^{hi})"
    r = Laurent(hi=hi)
    for n, v in s.c.items():
        assert n % l == 0, f"series not supported on q-integral powers (t^{n})"
        if n // l <= hi:
            r.c[n // l] = v
    r.trim()
    return r


def as_j_polynomial(s, j, maxdeg):
    """Write Laurent series s(q) as an integer polynomial in j(q)."""
    out = {}
    jpow = {0: Laurent({0: 1}, j.hi)}
    for d in range(1, maxdeg + 1):
        jpow[d] = jpow[d - 1] * j
    rem = s.copy()
    while not rem.is_zero() and rem.valuation() < 0:
        m = -rem.valuation()
        assert m <= maxdeg, f"pole order {m} exceeds expected degree {maxdeg}"
        a = rem.coeff(-m)
        out[m] = a
        rem = rem - jpow[m].scale(a)
    if not rem.is_zero():
        assert rem.valuation() >= 0
        c0 = rem.coeff(0)
        if c0:
            out[0] = c0
        rem.c.pop(0, None)
        assert rem.hi >= 2, "no guard band left in remainder"
        # positive-power tail must vanish: it is the truncation guard band
        assert rem.is_zero(), f"series not a polynomial in j: tail {dict(rem.c)}"
    return out


def modular_polynomial(l):
    guard = 6  # extra q-coefficients kept to detect truncation errors
    hi_q = guard
    # power chains reach valuation -(l+1)*l^2 in t; keep enough headroom that
    # every intermediate product stays valid up to t^(l*guard)
    hi_t = l * guard + (l + 1) * l * l
    nmax_j = hi_t + 2
    j = j_series(nmax_j)

    # root series in t = q^(1/l):  g = j(tau/l) as series in t; j(l*tau) in t
    g = Laurent(hi=hi_t)
    for n, v in j.c.items():
        if n <= hi_t:
            g.c[n] = v
    jl = substitute_power(j, l * l, hi_t)

    # power sums p_i over all l+1 roots, in t
    p = {}
    gp = Laurent({0: 1}, hi_t)
    jlp = Laurent({0: 1}, hi_t)
    for i in range(1, l + 2):
        gp = gp * g
        jlp = jlp * jl
        p[i] = jlp + l_supported_times_l(gp, l)

    # Newton's identities -> elementary symmetric functions e_i, in t
    e = {0: Laurent({0: 1}, hi_t)}
    for k in range(1, l + 2):
        acc = Laurent(hi=hi_t)
        for m in range(1, k + 1):
            term = e[k - m] * p[m]
            acc = acc + (term if m % 2 == 1 else term.scale(-1))
        ek = Laurent(hi=hi_t)
        for n, v in acc.c.items():
            q, r = divmod(v, k)
            assert r == 0, "Newton identity division not exact"
            ek.c[n] = q
        ek.trim()
        e[k] = ek

    # coefficients of Phi in X: X^(l+1) + sum (-1)^i e_i X^(l+1-i), e_i as poly in j
    table = defaultdict(int)  # (deg_X, deg_Y) -> coeff
    table[(l + 1, 0)] = 1
    for i in range(1, l + 2):
        ei_q = to_q_variable(e[i], l, hi_q)
        poly = as_j_polynomial(ei_q, j, l + 1)
        sign = -1 if i % 2 == 1 else 1
        for dY, cc in poly.items():
            table[(l + 1 - i, dY)] += sign * cc

    # X <-> Y symmetry
    for (u, v), cc in list(table.items()):
        assert table.get((v, u), 0) == cc, f"asymmetry at {(u, v)}"
    # Kronecker congruence mod l
    kron = defaultdict(int)
    kron[(l, 0)] += 1
    kron[(0, l)] += 1
    kron[(l, l)] -= 0  # placeholder for readability
    # (X^l - Y)(X - Y^l) = X^(l+1) - X^l Y^l - X Y + Y^(l+1)
    ref = {(l + 1, 0): 1, (l, l): -1, (1, 1): -1, (0, l + 1): 1}
    keys = set(table) | set(ref)
    for k2 in keys:
        assert (table.get(k2, 0) - ref.get(k2, 0)) % l == 0, f"Kronecker fails at {k2}"
    return {k2: v for k2, v in table.items() if v != 0}


def check_phi2(t):
    ref = {
        (3, 0): 1, (0, 3): 1, (2, 2): -1,
        (2, 1): 1488, (1, 2): 1488,
        (2, 0): -162000, (0, 2): -162000,
        (1, 1): 40773375,
        (1, 0): 8748000000, (0, 1): 8748000000,
        (0, 0): -157464000000000,
    }
    assert t == ref, "Phi_2 does not match its textbook form"


def main():
    tables = {}
    for l in PRIMES:
        tables[l] = modular_polynomial(l)
        print(f"Phi_{l}: {len(tables[l])} nonzero coefficients")
    check_phi2(tables[2])
    with open(OUT, "w") as f:
        f.write("# Classical modular polynomials Phi_l(X, Y).\n")
        f.write("# Format: 'l <ell>' then '<i> <j> <coefficient>' with i >= j\n")
        f.write("# (the symmetric entry is implied). '#' starts a comment.\n")
        for l in PRIMES:
            f.write(f"l {l}\n")
            for (u, v) in sorted(tables[l], reverse=True):
                if u >= v:
                    f.write(f"{u} {v} {tables[l][(u, v)]}\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    sys.exit(main())
