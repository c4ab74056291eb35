#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isolab/errors.hpp"
#include "isolab/poly.hpp"

#ifndef ISOLAB_DEFAULT_MODPOLY
#define ISOLAB_DEFAULT_MODPOLY "data/modular_polynomials.txt"
#endif

namespace isolab {

/// Bundled classical modular polynomials Phi_ell(X, Y), stored as integer
/// triples (i, j, coefficient) with i >= j; coefficients are kept as decimal
/// strings and reduced into the working field on demand.
class ModPolyDB {
  public:
    struct Entry {
        int i, j;
        std::string coeff;
    };

    static ModPolyDB load(const std::string &path) {
        std::ifstream in(path);
        require(bool(in), Errc::BadInput, "cannot open modular polynomial file: " + path);
        ModPolyDB db;
        std::string line;
        u64 cur = 0;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            std::istringstream ss(line);
            std::string tok;
            if (!(ss >> tok))
                continue;
            if (tok == "l") {
                ss >> cur;
                db.tables_[cur];
                continue;
            }
            require(cur != 0, Errc::BadInput, "coefficient line before any 'l' header");
            Entry e;
            e.i = std::stoi(tok);
            ss >> e.j >> e.coeff;
            require(e.i >= e.j, Errc::BadInput, "expected i >= j in data file");
            db.tables_[cur].push_back(std::move(e));
        }
        return db;
    }

    /// Default bundled table (env ISOLAB_MODPOLY overrides the compiled path).
    static const ModPolyDB &bundled() {
        static ModPolyDB db = [] {
            const char *env = std::getenv("ISOLAB_MODPOLY");
            return load(env ? env : ISOLAB_DEFAULT_MODPOLY);
        }();
        return db;
    }

    bool has(u64 ell) const { return tables_.count(ell) > 0; }

    std::vector<u64> levels() const {
        std::vector<u64> out;
        for (auto &[l, t] : tables_)
            out.push_back(l);
        return out;
    }

    /// Phi_ell(j, Y) as a univariate polynomial in Y over F.
    template <class F>
    Poly<F> specialize(const F &f, u64 ell, typename F::Elem j) const {
        auto it = tables_.find(ell);
        require(it != tables_.end(), Errc::UnsupportedLevel,
                "no bundled modular polynomial for this degree");
        int dy = int(ell) + 1;
        std::vector<typename F::Elem> coeffs(dy + 1, f.zero());
        std::vector<typename F::Elem> jpow(dy + 1, f.one());
        for (int k = 1; k <= dy; ++k)
            jpow[k] = f.mul(jpow[k - 1], j);
        for (const Entry &e : it->second) {
            auto c = reduce_coeff(f, e.coeff);
            coeffs[e.j] = f.add(coeffs[e.j], f.mul(c, jpow[e.i]));
            if (e.i != e.j)
                coeffs[e.i] = f.add(coeffs[e.i], f.mul(c, jpow[e.j]));
        }
        Poly<F> p{std::move(coeffs)};
        return poly_trim(f, std::move(p));
    }

    template <class F>
    typename F::Elem eval(const F &f, u64 ell, typename F::Elem x, typename F::Elem y) const {
        return poly_eval(f, specialize(f, ell, x), y);
    }

  private:
    template <class F> static typename F::Elem reduce_coeff(const F &f, const std::string &s) {
        u64 p = f.characteristic();
        u64 acc = 0;
        bool neg = false;
        for (char ch : s) {
            if (ch == '-') {
                neg = true;
                continue;
            }
            acc = (u128(acc) * 10 + u64(ch - '0')) % p;
        }
        auto e = f.from_int(i128(acc));
        return neg ? f.neg(e) : e;
    }

    std::map<u64, std::vector<Entry>> tables_;
};

/// j-invariants ell-isogenous to j, with multiplicity (roots of Phi_ell(j, Y)
/// in F).  Sorted canonically for reproducible reports.
template <class F>
std::vector<typename F::Elem> modular_neighbors(const F &f, typename F::Elem j, u64 ell,
                                                const ModPolyDB &db = ModPolyDB::bundled()) {
    Poly<F> p = db.specialize(f, ell, j);
    Rng rng(0x6d0dd00dULL ^ (ell * 0x9e3779b97f4a7c15ULL) ^ f.hash(j));
    auto roots = poly_roots(f, p, rng);
    std::sort(roots.begin(), roots.end(),
              [&](auto a, auto b) { return f.hash(a) < f.hash(b); });
    return roots;
}

} // namespace isolab
