#include "isolab/classgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isolab/prime_field.hpp"

namespace isolab {

i64 form_discriminant(const QuadForm &f) {
    i128 d = i128(f.b) * f.b - i128(4) * f.a * f.c;
    require(d < 0, Errc::BadInput, "form is not positive definite");
    require(d >= -(i128(1) << 62), Errc::BadInput, "discriminant out of range");
    return i64(d);
}

bool is_primitive(const QuadForm &f) {
    return std::gcd(std::gcd(std::abs(f.a), std::abs(f.b)), std::abs(f.c)) == 1;
}

bool is_reduced(const QuadForm &f) {
    if (!(std::abs(f.b) <= f.a && f.a <= f.c))
        return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

QuadForm reduce_form(QuadForm f) {
    require(f.a > 0, Errc::BadInput, "form must have a > 0");
    form_discriminant(f);
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            // normalize b into (-a, a]
            i64 r = ((f.b + f.a) % (2 * f.a) + 2 * f.a) % (2 * f.a) - f.a;
            i64 k = (f.b - r) / (2 * f.a);
            f.c = i64(i128(f.a) * k * k - i128(f.b) * k + f.c);
            f.b = r;
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if ((f.a == f.c || std::abs(f.b) == f.a) && f.b < 0)
        f.b = -f.b;
    return f;
}

QuadForm principal_form(i64 D) {
    i64 s = ((D % 2) + 2) % 2;
    return {1, s, i64((i128(s) * s - D) / 4)};
}

QuadForm inverse_form(const QuadForm &f) { return reduce_form({f.a, -f.b, f.c}); }

namespace {

struct ExtGcd {
    i128 g, x, y;
};

ExtGcd ext_gcd(i128 a, i128 b) {
    if (b == 0)
        return {a >= 0 ? a : -a, a >= 0 ? i128(1) : i128(-1), 0};
    auto r = ext_gcd(b, a % b);
    return {r.g, r.y, r.x - (a / b) * r.y};
}

i128 iabs(i128 v) { return v < 0 ? -v : v; }

/// Multiply the ideals [a, (b + sqrt D)/2] attached to two primitive forms
/// and convert the primitive part of the product back to a reduced form.
QuadForm ideal_mul_to_form(i64 D, const QuadForm &f, const QuadForm &g) {
    i64 s = ((D % 2) + 2) % 2;
    i128 n0 = (i128(s) - D) / 4; // tau^2 = s tau - n0 with tau = (s + sqrt D)/2
    i128 a1 = f.a, m1 = (i128(f.b) - s) / 2;
    i128 a2 = g.a, m2 = (i128(g.b) - s) / 2;
    // module generators x + y tau of the product
    i128 x1 = a1 * a2;
    i128 x2 = a1 * m2, y2 = a1;
    i128 x3 = a2 * m1, y3 = a2;
    i128 x4 = m1 * m2 - n0, y4 = m1 + m2 + s;
    auto e1 = ext_gcd(y2, y3);
    auto e2 = ext_gcd(e1.g, y4);
    i128 d = e2.g;
    require(d > 0, Errc::BadInput, "degenerate ideal product");
    i128 xd = e2.x * (e1.x * x2 + e1.y * x3) + e2.y * x4;
    auto residual = [&](i128 x, i128 y) { return x - (y / d) * xd; };
    i128 A = iabs(x1);
    A = std::gcd(A, iabs(residual(x2, y2)));
    A = std::gcd(A, iabs(residual(x3, y3)));
    A = std::gcd(A, iabs(residual(x4, y4)));
    require(A > 0, Errc::BadInput, "degenerate ideal product");
    require(A % d == 0 && xd % d == 0, Errc::BadInput, "product is not an O-module");
    i128 ap = A / d;
    i128 mp = ((xd / d) % ap + ap) % ap;
    i128 bp = 2 * mp + s;
    i128 num = bp * bp - D;
    require(num % (4 * ap) == 0, Errc::BadInput, "ideal norm form not integral");
    i128 cp = num / (4 * ap);
    require(ap <= INT64_MAX && cp <= INT64_MAX && bp <= INT64_MAX, Errc::BadInput,
            "form coefficients overflow");
    return reduce_form({i64(ap), i64(bp), i64(cp)});
}

u64 conductor_of(i64 D) {
    auto [c, d0] = square_part(u128(-D));
    return (d0 % 4 == 3) ? u64(c) : u64(c / 2);
}

} // namespace

QuadForm compose(const QuadForm &f, const QuadForm &g) {
    i64 D = form_discriminant(f);
    require(D == form_discriminant(g), Errc::DiscriminantMismatch,
            "composition requires equal discriminants");
    return ideal_mul_to_form(D, f, g);
}

std::optional<PrimeFormGen> prime_form(i64 D, u64 ell) {
    require(is_prime_u64(ell), Errc::BadInput, "prime_form needs a prime norm");
    if (conductor_of(D) % ell == 0)
        return std::nullopt; // non-invertible ideal classes are not generators
    int sym = kronecker(D, ell);
    if (sym == -1)
        return std::nullopt;
    i64 b = -1;
    if (ell == 2) {
        i64 r8 = ((D % 8) + 8) % 8;
        if (r8 == 1)
            b = 1;
        else if (r8 == 0)
            b = 0;
        else if (r8 == 4)
            b = 2;
        require(b >= 0, Errc::BadInput, "unexpected discriminant class at 2");
    } else if (sym == 0) {
        b = (((D % 2) + 2) % 2 == 0) ? 0 : i64(ell);
    } else {
        PrimeField Fl(ell);
        u64 b0 = Fl.sqrt(Fl.from_int(D));
        i64 want_parity = ((D % 2) + 2) % 2;
        for (i64 cand : {i64(b0), i64(ell) - i64(b0), i64(b0) + i64(ell), 2 * i64(ell) - i64(b0)}) {
            if (cand >= 0 && (cand & 1) == want_parity) {
                b = cand % (2 * i64(ell));
                break;
            }
        }
    }
    i128 num = i128(b) * b - D;
    require(num % (4 * i64(ell)) == 0, Errc::BadInput, "prime form congruence failed");
    QuadForm raw{i64(ell), b, i64(num / (4 * i64(ell)))};
    require(is_primitive(raw), Errc::BadInput, "prime form is imprimitive");
    return PrimeFormGen{ell, reduce_form(raw), sym == 1};
}

// ---- ClassGroup -----------------------------------------------------------

ClassGroup ClassGroup::enumerate(i64 D, u64 h_cap) {
    require(D < 0 && (((D % 4) + 4) % 4 == 0 || ((D % 4) + 4) % 4 == 1), Errc::BadInput,
            "discriminant must be negative and 0 or 1 mod 4");
    ClassGroup G;
    G.D_ = D;
    auto [c, d0] = square_part(u128(-D));
    if (d0 % 4 == 3) {
        G.d_K_ = -i64(d0);
        G.conductor_ = i64(c);
    } else {
        G.d_K_ = -4 * i64(d0);
        G.conductor_ = i64(c / 2);
    }
    G.e_ = (D == -3) ? 6 : (D == -4) ? 4 : 2;
    for (i64 a = 1; i128(3) * a * a <= -i128(D); ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if ((((b - D) % 2) + 2) % 2 != 0)
                continue;
            i128 num = i128(b) * b - D;
            if (num % (4 * a) != 0)
                continue;
            i128 cc = num / (4 * a);
            if (cc < a)
                continue;
            QuadForm f{a, b, i64(cc)};
            if (!is_reduced(f) || !is_primitive(f))
                continue;
            G.elements_.push_back(f);
            require(G.elements_.size() <= h_cap, Errc::ClassNumberTooLarge,
                    "class number exceeds configured cap");
        }
    }
    std::sort(G.elements_.begin(), G.elements_.end());
    for (size_t i = 0; i < G.elements_.size(); ++i)
        G.index_[G.elements_[i]] = i;
    G.id_index_ = G.index_.at(principal_form(D));
    G.inv_.resize(G.order());
    for (size_t i = 0; i < G.order(); ++i)
        G.inv_[i] = G.index_.at(inverse_form(G.elements_[i]));
    G.compute_structure();
    return G;
}

size_t ClassGroup::index_of(const QuadForm &f) const {
    auto it = index_.find(f);
    require(it != index_.end(), Errc::BadInput, "form is not a reduced representative here");
    return it->second;
}

size_t ClassGroup::mul(size_t i, size_t j) const {
    return index_.at(compose(elements_[i], elements_[j]));
}

size_t ClassGroup::inv(size_t i) const { return inv_[i]; }

size_t ClassGroup::power(size_t i, i64 k) const {
    size_t base = k < 0 ? inv_[i] : i;
    u64 e = u64(k < 0 ? -k : k);
    size_t r = id_index_;
    while (e) {
        if (e & 1)
            r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

namespace {

/// Column-transform Smith data for a square integer relation matrix: there
/// are unimodular U, V with U R V diagonal; only V and V^{-1} are tracked.
struct Snf {
    std::vector<i128> diag;
    std::vector<std::vector<i128>> V, Vinv;
};

Snf smith_normal_form(std::vector<std::vector<i128>> R) {
    size_t n = R.size();
    Snf s;
    s.V.assign(n, std::vector<i128>(n, 0));
    s.Vinv.assign(n, std::vector<i128>(n, 0));
    for (size_t i = 0; i < n; ++i)
        s.V[i][i] = s.Vinv[i][i] = 1;
    auto col_swap = [&](size_t i, size_t j) {
        for (size_t r = 0; r < n; ++r) {
            std::swap(R[r][i], R[r][j]);
            std::swap(s.V[r][i], s.V[r][j]);
        }
        std::swap(s.Vinv[i], s.Vinv[j]);
    };
    auto col_addmul = [&](size_t dst, size_t src, i128 k) {
        for (size_t r = 0; r < n; ++r) {
            R[r][dst] += k * R[r][src];
            s.V[r][dst] += k * s.V[r][src];
        }
        for (size_t c = 0; c < n; ++c)
            s.Vinv[src][c] -= k * s.Vinv[dst][c];
    };
    auto col_neg = [&](size_t i) {
        for (size_t r = 0; r < n; ++r) {
            R[r][i] = -R[r][i];
            s.V[r][i] = -s.V[r][i];
        }
        for (size_t c = 0; c < n; ++c)
            s.Vinv[i][c] = -s.Vinv[i][c];
    };
    for (size_t t = 0; t < n; ++t) {
        for (;;) {
            size_t pr = t, pc = t;
            i128 best = 0;
            for (size_t r = t; r < n; ++r)
                for (size_t c = t; c < n; ++c) {
                    i128 v = R[r][c] < 0 ? -R[r][c] : R[r][c];
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pr = r;
                        pc = c;
                    }
                }
            if (best == 0)
                break;
            if (pr != t)
                std::swap(R[pr], R[t]);
            if (pc != t)
                col_swap(pc, t);
            if (R[t][t] < 0)
                col_neg(t);
            bool clean = true;
            for (size_t r = t + 1; r < n; ++r)
                if (R[r][t] != 0) {
                    i128 q = R[r][t] / R[t][t];
                    for (size_t c = 0; c < n; ++c)
                        R[r][c] -= q * R[t][c];
                    if (R[r][t] != 0)
                        clean = false;
                }
            for (size_t c = t + 1; c < n; ++c)
                if (R[t][c] != 0) {
                    col_addmul(c, t, -(R[t][c] / R[t][t]));
                    if (R[t][c] != 0)
                        clean = false;
                }
            if (clean)
                break;
        }
    }
    s.diag.resize(n);
    for (size_t i = 0; i < n; ++i)
        s.diag[i] = R[i][i] < 0 ? -R[i][i] : R[i][i];
    return s;
}

} // namespace

void ClassGroup::compute_structure() {
    size_t h = order();
    std::vector<size_t> gens;
    std::vector<std::vector<i128>> relations;
    std::vector<std::vector<i64>> expo(h);
    std::vector<char> in_span(h, 0);
    std::vector<size_t> span = {id_index_};
    in_span[id_index_] = 1;
    while (span.size() < h) {
        size_t g = 0;
        while (in_span[g])
            ++g;
        size_t r = gens.size();
        gens.push_back(g);
        for (auto &row : relations)
            row.push_back(0);
        for (size_t s0 : span)
            expo[s0].resize(r + 1, 0);
        // relative order: least k >= 1 with g^k in the current span
        size_t cur = g;
        i64 k = 1;
        std::vector<size_t> fresh;
        while (!in_span[cur]) {
            for (size_t s0 : span) {
                size_t idx = mul(s0, cur);
                if (!in_span[idx]) {
                    in_span[idx] = 1;
                    fresh.push_back(idx);
                    auto e = expo[s0];
                    e[r] = k;
                    expo[idx] = std::move(e);
                }
            }
            cur = mul(cur, g);
            ++k;
        }
        std::vector<i128> row(r + 1, 0);
        for (size_t i = 0; i <= r; ++i)
            row[i] = -i128(expo[cur][i]);
        row[r] += k;
        relations.push_back(std::move(row));
        for (size_t idx : fresh)
            span.push_back(idx);
    }
    size_t r = gens.size();
    factor_orders_.clear();
    factor_gens_.clear();
    if (r == 0) {
        coords_.assign(h, {});
        return;
    }
    auto snf = smith_normal_form(relations);
    std::vector<size_t> keep;
    for (size_t i = 0; i < r; ++i) {
        require(snf.diag[i] > 0, Errc::BadInput, "relation lattice not full rank");
        if (snf.diag[i] > 1)
            keep.push_back(i);
    }
    for (size_t i : keep) {
        factor_orders_.push_back(i64(snf.diag[i]));
        size_t acc = id_index_;
        for (size_t j = 0; j < r; ++j) {
            require(iabs(snf.Vinv[i][j]) < (i128(1) << 62), Errc::BadInput,
                    "transform entry overflow");
            acc = mul(acc, power(gens[j], i64(snf.Vinv[i][j])));
        }
        factor_gens_.push_back(elements_[acc]);
    }
    coords_.assign(h, std::vector<i64>(keep.size(), 0));
    for (size_t idx = 0; idx < h; ++idx) {
        const auto &e = expo[idx];
        for (size_t out = 0; out < keep.size(); ++out) {
            size_t i = keep[out];
            i128 y = 0;
            for (size_t j = 0; j < r; ++j)
                y += snf.V[j][i] * i128(j < e.size() ? e[j] : 0);
            i128 d = snf.diag[i];
            coords_[idx][out] = i64(((y % d) + d) % d);
        }
    }
    // the decomposition must reproduce the whole group exactly
    i128 prod = 1;
    for (i64 d : factor_orders_)
        prod *= d;
    require(u64(prod) == h, Errc::BadInput, "cyclic decomposition order mismatch");
    for (size_t idx = 0; idx < h; ++idx) {
        size_t acc = id_index_;
        for (size_t out = 0; out < factor_gens_.size(); ++out)
            acc = mul(acc, power(index_of(factor_gens_[out]), coords_[idx][out]));
        require(acc == idx, Errc::BadInput, "cyclic decomposition coordinate mismatch");
    }
}

// ---- characters ------------------------------------------------------------

ClassCharacter::ClassCharacter(const ClassGroup &G, std::vector<i64> k) : G_(&G), k_(std::move(k)) {
    const double tau = 6.283185307179586476925286766559;
    values_.resize(G.order());
    for (size_t i = 0; i < G.order(); ++i) {
        double phase = 0;
        const auto &y = G.coords(i);
        for (size_t t = 0; t < k_.size(); ++t)
            phase += tau * double(k_[t]) * double(y[t]) / double(G.factor_orders()[t]);
        values_[i] = {std::cos(phase), std::sin(phase)};
    }
}

bool ClassCharacter::is_trivial() const {
    for (i64 k : k_)
        if (k != 0)
            return false;
    return true;
}

bool ClassCharacter::is_real() const {
    for (size_t t = 0; t < k_.size(); ++t)
        if ((2 * k_[t]) % G_->factor_orders()[t] != 0)
            return false;
    return true;
}

std::vector<ClassCharacter> characters(const ClassGroup &G) {
    std::vector<ClassCharacter> out;
    std::vector<i64> k(G.factor_orders().size(), 0);
    for (;;) {
        out.emplace_back(G, k);
        size_t t = 0;
        for (; t < k.size(); ++t) {
            if (++k[t] < G.factor_orders()[t])
                break;
            k[t] = 0;
        }
        if (t == k.size())
            break;
    }
    require(out.size() == G.order(), Errc::BadInput, "character count mismatch");
    return out;
}

// ---- theta counts and the Cayley graph -------------------------------------

u64 theta_coefficient(const ClassGroup &G, const QuadForm &f, u64 n) {
    if (n == 0)
        return 0;
    i64 D = G.discriminant();
    require(form_discriminant(f) == D, Errc::DiscriminantMismatch, "theta form mismatch");
    u64 count = 0;
    i128 fourAN = i128(4) * f.a * i128(n);
    for (i64 y = 0;; ++y) {
        i128 disc = fourAN + i128(D) * y * y; // 4 a n + D y^2
        if (disc < 0)
            break;
        i128 root = i128(std::llround(std::sqrt(double(disc))));
        while (root > 0 && root * root > disc)
            --root;
        while ((root + 1) * (root + 1) <= disc)
            ++root;
        if (root * root != disc)
            continue;
        for (int sgn = 0; sgn < (root == 0 ? 1 : 2); ++sgn) {
            i128 pm = sgn ? -root : root;
            i128 num = pm - i128(f.b) * y;
            if (num % (2 * f.a) != 0)
                continue;
            i128 x = num / (2 * f.a);
            if (y == 0 && x == 0)
                continue; // origin does not represent n >= 1
            // y > 0 rows stand in for their (-x, -y) mirrors as well
            count += (y == 0) ? 1 : 2;
        }
    }
    require(count % u64(G.unit_count()) == 0, Errc::BadInput,
            "lattice count not divisible by unit count");
    return count / u64(G.unit_count());
}

CayleyGraph build_cayley_graph_on_primes(const ClassGroup &G, const std::vector<u64> &primes) {
    CayleyGraph C;
    C.D = G.discriminant();
    C.m = primes.empty() ? 0 : *std::max_element(primes.begin(), primes.end());
    C.vertices = G.elements();
    size_t h = G.order();
    C.adjacency = Eigen::MatrixXi::Zero(int(h), int(h));
    for (u64 ell : primes) {
        auto gen = prime_form(G.discriminant(), ell);
        if (!gen)
            continue;
        C.generators.push_back(*gen);
        size_t gi = G.index_of(gen->form);
        for (size_t v = 0; v < h; ++v) {
            C.adjacency(int(v), int(G.mul(v, gi))) += 1;
            if (gen->paired)
                C.adjacency(int(v), int(G.mul(v, G.inv(gi)))) += 1;
        }
        C.degree += gen->paired ? 2 : 1;
    }
    Eigen::MatrixXi tr = C.adjacency.transpose();
    require((C.adjacency - tr).cwiseAbs().maxCoeff() == 0 || h == 0, Errc::BadInput,
            "Cayley adjacency must be symmetric");
    return C;
}

CayleyGraph build_cayley_graph(const ClassGroup &G, u64 m) {
    auto C = build_cayley_graph_on_primes(G, primes_up_to(m));
    C.m = m;
    return C;
}

std::vector<u64> generating_primes(const ClassGroup &G, u64 max_m) {
    std::vector<u64> used;
    std::vector<char> span(G.order(), 0);
    std::vector<size_t> members = {G.identity_index()};
    span[G.identity_index()] = 1;
    for (u64 ell : primes_up_to(max_m)) {
        if (members.size() == G.order())
            break;
        auto gen = prime_form(G.discriminant(), ell);
        if (!gen)
            continue;
        size_t gi = G.index_of(gen->form);
        if (span[gi]) {
            // redundant generator: already reachable
            continue;
        }
        used.push_back(ell);
        // close the span under the new generator
        std::vector<size_t> frontier = members;
        while (!frontier.empty()) {
            std::vector<size_t> next;
            for (size_t s : frontier) {
                size_t t = G.mul(s, gi);
                if (!span[t]) {
                    span[t] = 1;
                    members.push_back(t);
                    next.push_back(t);
                }
            }
            frontier = std::move(next);
        }
    }
    require(members.size() == G.order(), Errc::BadInput,
            "prime forms below the bound do not generate the class group");
    return used;
}

} // namespace isolab
