#pragma once

#include <complex>
#include <map>

#include "isolab/classgroup.hpp"

namespace isolab {

struct GrhSumReport {
    i64 D = 0;
    u64 h = 0;
    size_t chi_index = 0;
    u64 m = 0;
    std::complex<double> S;        // sum of a_p over primes p <= m
    double ratio = 0;              // |S| / (sqrt(m) log(m |D|))
    double psi_abs = 0;            // |psi(m, chi)|
    double remainder = 0;          // |psi - sum a_p log p|
    double remainder_bound = 0;    // 2 pi(sqrt m) log m
    double partial_summation_error = 0;
};

/// Shared, lazily grown prime table (read-only after growth).
const std::vector<u64> &shared_primes(u64 m);

/// Character-sum machinery over one class group: coefficients a_n, prime
/// sums, and log-weighted prime-power sums.
class HeckeContext {
  public:
    explicit HeckeContext(const ClassGroup &G);

    const ClassGroup &group() const { return *G_; }
    const std::vector<ClassCharacter> &chars() const { return chars_; }

    /// Invertible ideals of norm p^k grouped by class.
    std::vector<std::pair<size_t, int>> local_ideals(u64 p, int k) const;

    /// Sum of chi over invertible ideals of norm n.
    std::complex<double> a_n(size_t chi, u64 n) const;
    std::complex<double> a_p(size_t chi, u64 p) const;

    /// Sum of a_p over primes p <= m (the adjacency eigenvalue route).
    std::complex<double> eigenvalue_sum(size_t chi, u64 m) const;

    /// Log-weighted prime-power sum from the local Euler factor roots.
    std::complex<double> psi_sum(size_t chi, u64 m) const;

    GrhSumReport grh_report(size_t chi, u64 m) const;

  private:
    struct PrimeLocal {
        int sym = -1;           // kronecker(D, p)
        bool conductor = false; // p divides the conductor
        size_t g = 0, ginv = 0; // split pair or ramified class
    };
    const PrimeLocal &prime_local(u64 p) const;

    const ClassGroup *G_;
    std::vector<ClassCharacter> chars_;
    mutable std::map<u64, PrimeLocal> plocal_;
    mutable std::map<std::pair<u64, int>, std::vector<std::pair<size_t, int>>> local_cache_;
};

} // namespace isolab
