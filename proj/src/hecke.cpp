#include "isolab/hecke.hpp"

#include <cmath>
#include <mutex>

namespace isolab {

const std::vector<u64> &shared_primes(u64 m) {
    static std::vector<u64> primes;
    static u64 built_to = 0;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (m > built_to) {
        u64 target = std::max<u64>(2 * built_to, m);
        primes = primes_up_to(target);
        built_to = target;
    }
    return primes;
}

HeckeContext::HeckeContext(const ClassGroup &G) : G_(&G), chars_(characters(G)) {}

const HeckeContext::PrimeLocal &HeckeContext::prime_local(u64 p) const {
    auto it = plocal_.find(p);
    if (it != plocal_.end())
        return it->second;
    PrimeLocal L;
    L.sym = kronecker(G_->discriminant(), p);
    L.conductor = (u64(G_->conductor()) % p == 0);
    if (!L.conductor && L.sym >= 0) {
        auto gen = prime_form(G_->discriminant(), p);
        require(gen.has_value(), Errc::BadInput, "prime form expected to exist");
        L.g = G_->index_of(gen->form);
        L.ginv = G_->inv(L.g);
    }
    return plocal_.emplace(p, L).first->second;
}

std::vector<std::pair<size_t, int>> HeckeContext::local_ideals(u64 p, int k) const {
    if (k == 0)
        return {{G_->identity_index(), 1}};
    auto key = std::make_pair(p, k);
    auto it = local_cache_.find(key);
    if (it != local_cache_.end())
        return it->second;
    std::map<size_t, int> acc;
    const auto &L = prime_local(p);
    if (k == 1) {
        if (!L.conductor && L.sym == 1) {
            acc[L.g] += 1;
            acc[L.ginv] += 1;
        } else if (!L.conductor && L.sym == 0) {
            acc[L.g] += 1;
        }
    } else {
        // an ideal of norm p^k splits off a maximal principal part p^i O; the
        // primitive rest corresponds to b mod p^j with p^j | N(b + tau)
        i64 D = G_->discriminant();
        i64 s = ((D % 2) + 2) % 2;
        i128 n0 = (i128(s) - D) / 4;
        for (int i = 0; 2 * i <= k; ++i) {
            int j = k - 2 * i;
            if (j == 0) {
                acc[G_->identity_index()] += 1;
                continue;
            }
            u128 pj = 1;
            for (int t = 0; t < j; ++t)
                pj *= p;
            require(pj <= 10000000, Errc::BadInput, "prime power scan bound exceeded");
            for (u64 b = 0; b < u64(pj); ++b) {
                i128 val = i128(b) * b + i128(s) * b + n0;
                if (((val % i128(pj)) + i128(pj)) % i128(pj) != 0)
                    continue;
                i64 B = 2 * i64(b) + s;
                i128 num = i128(B) * B - D;
                require(num % (4 * i128(pj)) == 0, Errc::BadInput, "norm form not integral");
                i128 C = num / (4 * i128(pj));
                QuadForm f{i64(pj), B, i64(C)};
                if (!is_primitive(f))
                    continue;
                acc[G_->index_of(reduce_form(f))] += 1;
            }
        }
    }
    std::vector<std::pair<size_t, int>> out(acc.begin(), acc.end());
    return local_cache_.emplace(key, std::move(out)).first->second;
}

std::complex<double> HeckeContext::a_p(size_t chi, u64 p) const {
    const auto &L = prime_local(p);
    if (L.conductor || L.sym == -1)
        return 0;
    const auto &ch = chars_[chi];
    if (L.sym == 0)
        return ch.value(L.g);
    return ch.value(L.g) + ch.value(L.ginv);
}

std::complex<double> HeckeContext::a_n(size_t chi, u64 n) const {
    require(n >= 1, Errc::BadInput, "a_n needs n >= 1");
    if (n == 1)
        return 1;
    auto fac = factor_int(n);
    std::complex<double> prod = 1;
    for (auto [p, e] : fac.factors) {
        std::complex<double> local = 0;
        for (auto [cls, cnt] : local_ideals(u64(p), e))
            local += double(cnt) * chars_[chi].value(cls);
        prod *= local;
    }
    return prod;
}

std::complex<double> HeckeContext::eigenvalue_sum(size_t chi, u64 m) const {
    std::complex<double> s = 0;
    for (u64 p : shared_primes(m)) {
        if (p > m)
            break;
        s += a_p(chi, p);
    }
    return s;
}

std::complex<double> HeckeContext::psi_sum(size_t chi, u64 m) const {
    std::complex<double> s = 0;
    const auto &ch = chars_[chi];
    for (u64 p : shared_primes(m)) {
        if (p > m)
            break;
        const auto &L = prime_local(p);
        double lp = std::log(double(p));
        // Euler roots: split (chi(g), chi(g^-1)); inert (a, -a) with a^2 = 1;
        // ramified (chi(r), 0); conductor primes (0, 0)
        int k = 1;
        for (u128 pk = p; pk <= m; pk *= p, ++k) {
            std::complex<double> b = 0;
            if (L.conductor) {
                b = 0;
            } else if (L.sym == -1) {
                b = (k % 2 == 0) ? 2.0 : 0.0;
            } else if (L.sym == 0) {
                b = std::pow(ch.value(L.g), k);
            } else {
                b = std::pow(ch.value(L.g), k) + std::pow(ch.value(L.ginv), k);
            }
            s += b * lp;
        }
    }
    return s;
}

GrhSumReport HeckeContext::grh_report(size_t chi, u64 m) const {
    GrhSumReport r;
    r.D = G_->discriminant();
    r.h = G_->order();
    r.chi_index = chi;
    r.m = m;
    // one pass: S, S' = sum a_p log p, and the partial-summation rebuild of S
    std::complex<double> S = 0, Slog = 0, rebuilt = 0;
    const auto &primes = shared_primes(m);
    size_t pi = 0;
    for (u64 n = 2; n <= m; ++n) {
        if (pi < primes.size() && primes[pi] == n) {
            auto ap = a_p(chi, n);
            S += ap;
            Slog += ap * std::log(double(n));
            ++pi;
        }
        if (n < m)
            rebuilt += Slog * (1.0 / std::log(double(n)) - 1.0 / std::log(double(n + 1)));
        else
            rebuilt += Slog / std::log(double(n));
    }
    if (m < 2)
        S = Slog = rebuilt = 0;
    r.S = S;
    r.partial_summation_error = std::abs(S - rebuilt);
    r.ratio = std::abs(S) / (std::sqrt(double(m)) * std::log(double(m) * std::abs(double(r.D))));
    auto psi = psi_sum(chi, m);
    r.psi_abs = std::abs(psi);
    r.remainder = std::abs(psi - Slog);
    u64 sq = u64(std::sqrt(double(m)));
    while ((sq + 1) * (sq + 1) <= m)
        ++sq;
    while (sq * sq > m)
        --sq;
    u64 pi_sqrt = 0;
    for (u64 p : primes) {
        if (p > sq)
            break;
        ++pi_sqrt;
    }
    r.remainder_bound = 2.0 * double(pi_sqrt) * std::log(double(m));
    return r;
}

} // namespace isolab
