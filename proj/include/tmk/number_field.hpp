#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tmk/interval.hpp"
#include "tmk/poly.hpp"
#include "tmk/rational.hpp"

namespace tmk {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Element of K = Q[X]/(f), coordinates in the power basis of a root of f.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, std::vector<Rat> coords);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coords() const { return c_; }
    bool is_zero() const;
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational()

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement inverse() const;
    FieldElement pow(long e) const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // lexicographic coordinate order, for canonical sorting
    bool operator<(const FieldElement& o) const { return c_ < o.c_; }

    Rat norm() const;
    Rat trace() const;
    QPoly char_poly() const;  // monic, degree d, rational coefficients
    QPoly min_poly() const;   // monic minimal polynomial over Q
    bool is_algebraic_integer() const;

    // value as polynomial in the generator (same as coords, as a QPoly)
    QPoly as_poly() const;

    std::string str() const;

private:
    FieldPtr field_;
    std::vector<Rat> c_;
};

struct EmbeddingTable {
    mpfr_prec_t prec = 0;
    std::vector<CC> roots;  // conjugates of the generator, canonical order
};

// Exact number field Q[X]/(f) for an irreducible integer polynomial f,
// with certified embeddings and the invariants used throughout.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    // basis entries are power-basis coordinate vectors; default is the
    // power basis of a0*alpha (always integral).
    static FieldPtr make(const QPoly& min_poly,
                         const std::optional<std::vector<std::vector<Rat>>>& basis = std::nullopt);

    int degree() const { return d_; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }
    int unit_rank() const { return r1_ + r2_ - 1; }
    const QPoly& min_poly() const { return f_; }
    Int leading_coeff() const { return a0_; }
    // monic minimal polynomial of theta = a0*alpha (integer coefficients)
    const QPoly& theta_poly() const { return theta_poly_; }
    const Int& discriminant() const { return disc_; }
    bool theta_warning() const { return theta_warning_; }
    RR theta(mpfr_prec_t prec) const;

    const std::vector<std::vector<Rat>>& integral_basis() const { return basis_; }
    // coordinates of a power-basis vector in the integral basis
    std::vector<Rat> to_basis_coords(const std::vector<Rat>& power_coords) const;
    std::vector<Rat> from_basis_coords(const std::vector<Rat>& basis_coords) const;

    FieldElement element(std::vector<Rat> power_coords) const;
    FieldElement from_rat(const Rat& q) const;
    FieldElement zero() const { return from_rat(0); }
    FieldElement one() const { return from_rat(1); }
    FieldElement gen() const;                   // alpha
    FieldElement theta_elem() const;            // a0*alpha
    FieldElement basis_element(int j) const;

    // certified enclosures of the conjugates of alpha at >= prec bits,
    // ordered: real roots ascending, then upper half-plane sorted by
    // (re, im), then their conjugates in the same order.
    std::vector<CC> embeddings(mpfr_prec_t prec) const;
    std::vector<CC> embed(const FieldElement& a, mpfr_prec_t prec) const;

    // exact sign of g(rho_i) at the i-th real root of f (0-based)
    int sign_at_real_embedding(const QPoly& g, int i) const;
    // exact comparison |g(rho_j)|^2 vs c at complex embedding j
    // (j indexes the canonical embedding list, must be non-real)
    int cmp_abs2_at_complex_embedding(const QPoly& g, int j, const Rat& c) const;

    // multiplication matrix of an element in the power basis (rows = images)
    std::vector<std::vector<Rat>> mult_matrix(const FieldElement& a) const;

    std::string describe() const;

private:
    NumberField() = default;

    void check_irreducible() const;
    void compute_signature();
    void setup_basis(const std::optional<std::vector<std::vector<Rat>>>& basis);
    void compute_discriminant_theta();
    const EmbeddingTable& table_at(mpfr_prec_t prec) const;
    std::vector<CC> compute_roots(mpfr_prec_t prec) const;
    const QPoly& pair_sum_poly() const;  // prod over root pairs (y - (rho_a+rho_b))

    QPoly f_;          // primitive integer polynomial, positive leading coeff
    QPoly theta_poly_; // monic integer minimal polynomial of a0*alpha
    Int a0_ = 1;
    int d_ = 0, r1_ = 0, r2_ = 0;
    std::vector<std::vector<Rat>> basis_;      // rows: power-basis coords of w_j
    std::vector<std::vector<Rat>> basis_inv_;  // inverse matrix (columns solve)
    Int disc_ = 0;
    bool theta_warning_ = false;
    std::vector<std::pair<Rat, Rat>> real_root_ivs_;  // isolating, ascending
    std::shared_ptr<SturmChain> sturm_;

    mutable std::mutex mu_;
    mutable EmbeddingTable table_;
    mutable std::optional<QPoly> pair_sum_;
};

// Exact linear algebra helpers shared by several modules.
Rat mat_det(std::vector<std::vector<Rat>> m);
// solves M x = b; returns nullopt if singular
std::optional<std::vector<Rat>> mat_solve(std::vector<std::vector<Rat>> m, std::vector<Rat> b);
std::optional<std::vector<std::vector<Rat>>> mat_inverse(const std::vector<std::vector<Rat>>& m);
QPoly char_poly_of_matrix(const std::vector<std::vector<Rat>>& m);

}  // namespace tmk
