#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isolab/arith.hpp"
#include "isolab/errors.hpp"

namespace isolab {

/// Primitive positive-definite binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
    i64 a = 1, b = 0, c = 0;
    bool operator==(const QuadForm &o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm &o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
};

i64 form_discriminant(const QuadForm &f);
bool is_reduced(const QuadForm &f);
bool is_primitive(const QuadForm &f);
QuadForm reduce_form(QuadForm f);
QuadForm principal_form(i64 D);
QuadForm inverse_form(const QuadForm &f);
/// Gauss composition, realized as ideal multiplication in the order of
/// discriminant D; result is reduced.
QuadForm compose(const QuadForm &f, const QuadForm &g);

/// A split prime yields a generator paired with its inverse class; a ramified
/// prime (not dividing the conductor) yields one self-paired generator.
struct PrimeFormGen {
    u64 ell = 0;
    QuadForm form;
    bool paired = false; // true: contributes [b] and [b]^{-1}
};

std::optional<PrimeFormGen> prime_form(i64 D, u64 ell);

/// Class group Cl(O_D) by exhaustive reduced-form enumeration, with cyclic
/// decomposition and coordinates for character evaluation.
class ClassGroup {
  public:
    static ClassGroup enumerate(i64 D, u64 h_cap = 100000);

    i64 discriminant() const { return D_; }
    i64 fundamental_discriminant() const { return d_K_; }
    i64 conductor() const { return conductor_; }
    int unit_count() const { return e_; } // 6 for D=-3, 4 for D=-4, else 2
    u64 order() const { return elements_.size(); }

    const std::vector<QuadForm> &elements() const { return elements_; }
    const QuadForm &element(size_t i) const { return elements_[i]; }
    size_t index_of(const QuadForm &reduced) const;
    size_t identity_index() const { return id_index_; }

    size_t mul(size_t i, size_t j) const;      // composition by indices
    size_t inv(size_t i) const;
    size_t power(size_t i, i64 k) const;

    /// Cyclic decomposition: order() = prod of factor_orders().
    const std::vector<i64> &factor_orders() const { return factor_orders_; }
    const std::vector<QuadForm> &factor_generators() const { return factor_gens_; }
    /// Coordinates of element i in the cyclic decomposition.
    const std::vector<i64> &coords(size_t i) const { return coords_[i]; }

  private:
    i64 D_ = -3;
    i64 d_K_ = -3;
    i64 conductor_ = 1;
    int e_ = 2;
    size_t id_index_ = 0;
    std::vector<QuadForm> elements_; // sorted
    std::map<QuadForm, size_t> index_;
    std::vector<i64> factor_orders_;
    std::vector<QuadForm> factor_gens_;
    std::vector<std::vector<i64>> coords_;
    std::vector<size_t> inv_;
    void compute_structure();
};

/// Character of the class group, indexed by a tuple against the cyclic
/// decomposition; values cached per element.
class ClassCharacter {
  public:
    ClassCharacter(const ClassGroup &G, std::vector<i64> k);
    std::complex<double> value(size_t element_index) const { return values_[element_index]; }
    const std::vector<i64> &index_tuple() const { return k_; }
    bool is_trivial() const;
    bool is_real() const;

  private:
    const ClassGroup *G_;
    std::vector<i64> k_;
    std::vector<std::complex<double>> values_;
};

/// All h characters; the first is trivial.
std::vector<ClassCharacter> characters(const ClassGroup &G);

/// Number of degree-n ideal-class edges with class ratio [f]: lattice points
/// of the form representing n, divided by the unit count.  n = 0 maps to 0.
u64 theta_coefficient(const ClassGroup &G, const QuadForm &f, u64 n);

struct CayleyGraph {
    i64 D = 0;
    u64 m = 0;
    u64 degree = 0; // generator slots counted with multiplicity
    std::vector<QuadForm> vertices;
    std::vector<PrimeFormGen> generators;
    Eigen::MatrixXi adjacency;
};

/// Cayley multigraph of Cl(O_D) on prime-form generators of norm <= m;
/// split primes contribute both directions, ramified primes one slot.
CayleyGraph build_cayley_graph(const ClassGroup &G, u64 m);

/// Same construction restricted to an explicit prime list.
CayleyGraph build_cayley_graph_on_primes(const ClassGroup &G, const std::vector<u64> &primes);

/// Primes whose prime-form classes generate the whole group, scanning
/// upward; fails with BadInput if max_m is exhausted first.
std::vector<u64> generating_primes(const ClassGroup &G, u64 max_m);

} // namespace isolab
