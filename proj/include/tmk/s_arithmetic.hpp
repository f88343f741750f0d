#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tmk/ideals.hpp"
#include "tmk/places.hpp"

namespace tmk {

struct UnitGroupData {
    int w = 2;                  // order of the root-of-unity group
    FieldElement zeta;          // generator of the torsion group
    std::vector<FieldElement> fundamental_units;  // r elements
    RR regulator;               // R_K = 1 exactly when r = 0
    Int h_K = 1;
    std::string h_K_provenance; // "computed" | "trusted-config"
    bool units_trusted = false; // r >= 2 config units: independence verified only
};

struct DeltaK {
    RR value;                       // certified enclosure of delta_K
    double threshold = 0;           // the exhausted height bound H
    std::optional<FieldElement> witness;
};

// Trusted data supplied through the field config file.
struct TrustedData {
    std::optional<Int> h_K;
    std::optional<std::vector<std::vector<Rat>>> fundamental_units;  // power-basis coords
    bool trusted = false;  // trust_level == "trusted"
};

class SContext;
using SCtxPtr = std::shared_ptr<const SContext>;

// S = all archimedean places plus the finite places selected by `primes`
// ("p" takes every place above p, "p:i" the i-th in canonical order).
class SContext {
public:
    static SCtxPtr make(FieldPtr K, const std::vector<std::string>& primes,
                        const TrustedData& trusted = {});

    const FieldPtr& field() const { return K_; }
    const std::vector<Place>& finite_places() const { return finite_; }
    const std::vector<Place>& arch_places() const { return arch_; }
    const UnitGroupData& units() const { return units_; }
    int t() const { return static_cast<int>(finite_.size()); }
    int rank() const { return s_; }           // s = r + t
    const Int& nu() const { return nu_; }     // max N(P_i), 1 if t = 0
    // prime-part generators: (g_i) = P_i^{m_i}, m_i minimal principal power
    const std::vector<FieldElement>& prime_generators() const { return g_; }
    const std::vector<int>& principal_powers() const { return m_; }

    std::string describe() const;

private:
    friend SCtxPtr s_context_impl(FieldPtr, const std::vector<std::string>&, const TrustedData&);
    FieldPtr K_;
    std::vector<Place> finite_, arch_;
    UnitGroupData units_;
    std::vector<FieldElement> g_;
    std::vector<int> m_;
    Int nu_ = 1;
    int s_ = 0;
};

enum class SMembership { Outside, SInteger, SUnit };

SMembership s_membership(const FieldElement& a, const SContext& ctx);

// N_S(a): norm of the prime-to-S part of the fractional ideal (a); for
// a in O_S both definitions are computed and asserted equal.
Rat s_norm(const FieldElement& a, const SContext& ctx);

// exponent vector over (zeta; u_1..u_r; g_1..g_t)
struct ExponentVector {
    long zeta_pow = 0;  // in [0, w)
    std::vector<long> unit_exp;
    std::vector<long> g_exp;
    bool operator==(const ExponentVector&) const = default;
};

// discrete log in the generated S-unit group; nullopt when eps is not an
// S-unit or lies outside the generated group (possible when h_K > 1).
std::optional<ExponentVector> sunit_exponents(const FieldElement& eps, const SContext& ctx);

FieldElement from_exponents(const SContext& ctx, const ExponentVector& v);

// unit group, class number, regulator (see module notes for scope)
UnitGroupData unit_class_data(const FieldPtr& K, const TrustedData& trusted = {});

// certified Lehmer-type bound: enumerate integers of height <= H
DeltaK delta_k(const FieldPtr& K, double H, const Int& cap = Int(100000000));

// search a generator of ideal A with |N| = A.norm(); box bounded via the
// unit-balanced Lemma 5.4 argument. Returns nullopt if A is not principal.
std::optional<FieldElement> principal_generator(const Ideal& A, const UnitGroupData& units);

}  // namespace tmk
