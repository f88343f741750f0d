#pragma once

#include <random>

#include "tmk/number_field.hpp"

namespace tmk::test {

inline FieldPtr field_Q() { return NumberField::make(qp_from_ints({0, 1})); }
inline FieldPtr field_Qi() { return NumberField::make(qp_from_ints({1, 0, 1})); }
inline FieldPtr field_sqrt2() { return NumberField::make(qp_from_ints({-2, 0, 1})); }
// golden-ratio model of Q(sqrt 5): maximal order, disc 5
inline FieldPtr field_phi() { return NumberField::make(qp_from_ints({-1, -1, 1})); }
inline FieldPtr field_cubic() { return NumberField::make(qp_from_ints({-1, -1, 0, 1})); }

// small random element with numerators in [-9,9], denominators in {1,2,3}
inline FieldElement random_element(const FieldPtr& K, std::mt19937_64& rng,
                                   bool integer_only = false) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
    std::vector<Rat> c;
    for (int i = 0; i < K->degree(); ++i) {
        Rat q(num(rng), integer_only ? 1 : den(rng));
        q.canonicalize();
        c.push_back(q);
    }
    return K->element(std::move(c));
}

inline FieldElement random_nonzero(const FieldPtr& K, std::mt19937_64& rng,
                                   bool integer_only = false) {
    while (true) {
        auto e = random_element(K, rng, integer_only);
        if (!e.is_zero()) return e;
    }
}

}  // namespace tmk::test
