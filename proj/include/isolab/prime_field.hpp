#pragma once

#include <cstdint>

#include "isolab/arith.hpp"
#include "isolab/errors.hpp"
#include "isolab/rng.hpp"

namespace isolab {

/// F_p for an odd prime p <= 2^61.  Elements are canonical residues in [0, p);
/// the cap keeps every product inside unsigned 128-bit arithmetic.
class PrimeField {
  public:
    using Elem = u64;

    explicit PrimeField(u64 p) : p_(p) {
        require(p > 2 && p <= (u64(1) << 61), Errc::BadInput, "modulus out of range");
        require(is_prime_u64(p), Errc::BadInput, "modulus is not prime");
    }

    u64 modulus() const { return p_; }
    u64 characteristic() const { return p_; }
    u128 size() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem from_int(i128 v) const {
        i128 r = v % i128(p_);
        if (r < 0)
            r += p_;
        return Elem(r);
    }

    Elem add(Elem a, Elem b) const {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const { return mulmod(a, b, p_); }
    Elem sqr(Elem a) const { return mul(a, a); }

    Elem pow(Elem a, u128 e) const {
        Elem r = 1, base = a;
        while (e) {
            if (e & 1)
                r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        require(a != 0, Errc::BadInput, "inverse of zero");
        i64 t = 0, newt = 1;
        i64 r = i64(p_), newr = i64(a);
        while (newr != 0) {
            i64 q = r / newr;
            t -= q * newt;
            std::swap(t, newt);
            r -= q * newr;
            std::swap(r, newr);
        }
        return t < 0 ? Elem(t + i64(p_)) : Elem(t);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    /// Legendre symbol as {-1, 0, 1}.
    int legendre(Elem a) const {
        if (a == 0)
            return 0;
        return pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
    }

    bool is_square(Elem a) const { return a == 0 || legendre(a) == 1; }

    /// Tonelli-Shanks square root; requires is_square(a).
    Elem sqrt(Elem a) const {
        require(is_square(a), Errc::BadInput, "sqrt of non-residue");
        if (a == 0)
            return 0;
        if ((p_ & 3) == 3)
            return pow(a, (p_ + 1) / 4);
        u64 q = p_ - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        Elem z = smallest_nonresidue();
        Elem m = Elem(s), c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
        while (t != 1) {
            Elem tt = t;
            u64 i = 0;
            while (tt != 1) {
                tt = mul(tt, tt);
                ++i;
            }
            Elem b = c;
            for (u64 k = 0; k + i + 1 < m; ++k)
                b = mul(b, b);
            m = Elem(i);
            c = mul(b, b);
            t = mul(t, c);
            r = mul(r, b);
        }
        return r;
    }

    Elem smallest_nonresidue() const {
        for (u64 a = 2;; ++a)
            if (legendre(a) == -1)
                return a;
    }

    Elem sample(Rng &rng) const { return rng.below(p_); }

    /// Deterministic enumeration support (0, 1, ..., p-1).
    u128 element_count() const { return p_; }
    Elem nth_element(u128 i) const { return Elem(i); }

    u64 hash(Elem a) const { return a; }

    i64 lift_signed(Elem a) const {
        // representative in (-p/2, p/2]
        return a * 2 > p_ ? i64(a) - i64(p_) : i64(a);
    }

  private:
    u64 p_;
};

} // namespace isolab
