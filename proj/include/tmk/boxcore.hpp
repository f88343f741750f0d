#pragma once

#include "tmk/number_field.hpp"

namespace tmk {

// All elements of the basis order with |gamma|_v <= Q^{d_v} at every
// archimedean place, in lexicographic integral-basis coordinate order.
// Membership on the boundary is decided exactly (Q rational).
// Throws cap-exceeded if the coordinate search box is larger than cap.
std::vector<FieldElement> box_elements(const FieldPtr& K, const Rat& Q, const Int& cap);

}  // namespace tmk
