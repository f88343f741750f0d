#pragma once

#include <vector>

#include "tmk/modpoly.hpp"
#include "tmk/number_field.hpp"

namespace tmk {

// Integral ideal of the basis order, stored as an upper-triangular HNF
// matrix over Z with respect to the integral basis (rows are generators).
class Ideal {
public:
    static Ideal whole_ring(FieldPtr K);
    // principal ideal (a), a an element of the order
    static Ideal principal(const FieldElement& a);
    // two-element ideal (p, g(theta))
    static Ideal two_element(FieldPtr K, const Int& p, const ZPoly& g);

    const FieldPtr& field() const { return K_; }
    Int norm() const;  // module index [O : I]
    bool contains(const FieldElement& a) const;
    Ideal mul(const Ideal& other) const;
    Ideal pow(unsigned k) const;
    // nontrivial automorphism image; quadratic fields only
    Ideal conjugate() const;
    bool operator==(const Ideal& other) const;

    const std::vector<std::vector<Int>>& hnf() const { return h_; }

private:
    Ideal(FieldPtr K, std::vector<std::vector<Int>> rows);
    FieldPtr K_;
    std::vector<std::vector<Int>> h_;
};

}  // namespace tmk
