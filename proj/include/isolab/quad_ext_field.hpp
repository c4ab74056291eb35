#pragma once

#include <cstdint>

#include "isolab/prime_field.hpp"

namespace isolab {

/// Element a + b*w of F_{p^2} = F_p(w), w^2 = a fixed non-residue.
struct Fp2 {
    u64 a = 0;
    u64 b = 0;
    bool operator==(const Fp2 &o) const { return a == o.a && b == o.b; }
};

/// F_{p^2} built on the smallest quadratic non-residue of the base field.
class QuadExtField {
  public:
    using Elem = Fp2;

    explicit QuadExtField(const PrimeField &base) : base_(base), nr_(base.smallest_nonresidue()) {}

    const PrimeField &base() const { return base_; }
    u64 nonresidue() const { return nr_; }
    u64 characteristic() const { return base_.modulus(); }
    u128 size() const { return u128(base_.modulus()) * base_.modulus(); }

    Elem zero() const { return {0, 0}; }
    Elem one() const { return {1, 0}; }
    bool is_zero(Elem x) const { return x.a == 0 && x.b == 0; }
    bool eq(Elem x, Elem y) const { return x == y; }

    Elem embed(u64 v) const { return {v % base_.modulus(), 0}; }
    Elem from_int(i128 v) const { return {base_.from_int(v), 0}; }
    Elem make(u64 a, u64 b) const { return {a % base_.modulus(), b % base_.modulus()}; }

    Elem add(Elem x, Elem y) const { return {base_.add(x.a, y.a), base_.add(x.b, y.b)}; }
    Elem sub(Elem x, Elem y) const { return {base_.sub(x.a, y.a), base_.sub(x.b, y.b)}; }
    Elem neg(Elem x) const { return {base_.neg(x.a), base_.neg(x.b)}; }

    Elem mul(Elem x, Elem y) const {
        u64 aa = base_.mul(x.a, y.a);
        u64 bb = base_.mul(x.b, y.b);
        u64 ab = base_.add(base_.mul(x.a, y.b), base_.mul(x.b, y.a));
        return {base_.add(aa, base_.mul(nr_, bb)), ab};
    }
    Elem sqr(Elem x) const { return mul(x, x); }

    Elem pow(Elem x, u128 e) const {
        Elem r = one(), b = x;
        while (e) {
            if (e & 1)
                r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    Elem conj(Elem x) const { return {x.a, base_.neg(x.b)}; }

    u64 norm(Elem x) const {
        // a^2 - nr*b^2
        return base_.sub(base_.mul(x.a, x.a), base_.mul(nr_, base_.mul(x.b, x.b)));
    }

    Elem inv(Elem x) const {
        require(!is_zero(x), Errc::BadInput, "inverse of zero");
        u64 n = base_.inv(norm(x));
        Elem c = conj(x);
        return {base_.mul(c.a, n), base_.mul(c.b, n)};
    }

    Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }

    bool is_square(Elem x) const {
        if (is_zero(x))
            return true;
        return eq(pow(x, (size() - 1) / 2), one());
    }

    /// Square root via Tonelli-Shanks on the cyclic group of order p^2 - 1.
    Elem sqrt(Elem x) const {
        require(is_square(x), Errc::BadInput, "sqrt of non-residue");
        if (is_zero(x))
            return zero();
        u128 q = size() - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        Elem z = nonresidue_elem();
        int m = s;
        Elem c = pow(z, q), t = pow(x, q), r = pow(x, (q + 1) / 2);
        while (!eq(t, one())) {
            Elem tt = t;
            int i = 0;
            while (!eq(tt, one())) {
                tt = mul(tt, tt);
                ++i;
            }
            Elem b = c;
            for (int k = 0; k + i + 1 < m; ++k)
                b = mul(b, b);
            m = i;
            c = mul(b, b);
            t = mul(t, c);
            r = mul(r, b);
        }
        return r;
    }

    Elem sample(Rng &rng) const { return {rng.below(base_.modulus()), rng.below(base_.modulus())}; }

    u128 element_count() const { return size(); }
    Elem nth_element(u128 i) const {
        u64 p = base_.modulus();
        return {u64(i % p), u64(i / p)};
    }

    u64 hash(Elem x) const {
        // injective for p < 2^32, which also makes hash-sorted output canonical
        if (base_.modulus() < (u64(1) << 32))
            return (x.b << 32) | x.a;
        return x.a * 0x9e3779b97f4a7c15ULL ^ (x.b + 0x517cc1b727220a95ULL);
    }

  private:
    Elem nonresidue_elem() const {
        // deterministic scan for a non-square in F_{p^2}
        u64 p = base_.modulus();
        for (u64 b = 1; b < p; ++b)
            for (u64 a = 0; a < p; ++a) {
                Elem z{a, b};
                if (!is_square(z))
                    return z;
            }
        fail(Errc::BadInput, "no non-residue found");
    }

    PrimeField base_;
    u64 nr_;
};

} // namespace isolab
