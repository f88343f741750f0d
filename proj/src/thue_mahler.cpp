#include "tmk/thue_mahler.hpp"

#include <algorithm>
#include <set>

#include "tmk/errors.hpp"
#include "tmk/parallel.hpp"

namespace tmk {

namespace {

// prime-to-S fractional ideal signature: sorted ((p, index), ord) pairs
std::vector<std::pair<std::pair<std::string, int>, long>> prime_to_s_signature(
    const FieldElement& a, const SContext& ctx) {
    std::vector<std::pair<std::pair<std::string, int>, long>> sig;
    const auto& K = a.field();
    if (K->degree() == 1) {
        Rat q = a.rational_value();
        Int n = abs(q.get_num()), d = q.get_den();
        for (auto& P : ctx.finite_places()) {
            remove_factor(n, P.p);
            remove_factor(d, P.p);
        }
        for (auto& [p, e] : factorize(n)) sig.push_back({{p.get_str(), 0}, e});
        for (auto& [p, e] : factorize(d)) sig.push_back({{p.get_str(), 0}, -e});
    } else {
        for (const Int& p : support_primes(a))
            for (const Place& P : places_above(K, p)) {
                bool in_S = false;
                for (auto& Q : ctx.finite_places())
                    if (Q.p == P.p && Q.index_above_p == P.index_above_p) in_S = true;
                if (in_S) continue;
                long ord = valuation(a, P);
                if (ord != 0) sig.push_back({{p.get_str(), P.index_above_p}, ord});
            }
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

// canonical (z, eps) with eps = c z: (1, c) when c is an S-unit, else
// (1/c, 1) when 1/c is an S-integer, else no solution exists
std::optional<std::pair<FieldElement, FieldElement>> canonical_ze(const FieldElement& c,
                                                                  const SContext& ctx) {
    if (c.is_zero()) return std::nullopt;
    if (s_membership(c, ctx) == SMembership::SUnit)
        return std::make_pair(c.field()->one(), c);
    FieldElement inv = c.inverse();
    if (s_membership(inv, ctx) != SMembership::Outside)
        return std::make_pair(inv, c.field()->one());
    return std::nullopt;
}

std::vector<Rat> tuple_key(const FamilySolution& s) {
    std::vector<Rat> k;
    for (const FieldElement* e : {&s.x, &s.y, &s.z, &s.eps1, &s.eps2, &s.eps3, &s.eps})
        k.insert(k.end(), e->coords().begin(), e->coords().end());
    return k;
}

}  // namespace

FamilySolution verify_family_solution(const ProblemData& pd,
                                      const std::array<FieldElement, 7>& s7) {
    const auto& ctx = *pd.ctx;
    FamilySolution sol{s7[0], s7[1], s7[2], s7[3], s7[4], s7[5], s7[6], false};
    for (const FieldElement* e : {&sol.x, &sol.y, &sol.z})
        if (s_membership(*e, ctx) == SMembership::Outside)
            fail(errkind::domain, "family solution: x, y, z must be S-integers");
    for (const FieldElement* e : {&sol.eps1, &sol.eps2, &sol.eps3, &sol.eps})
        if (s_membership(*e, ctx) != SMembership::SUnit)
            fail(errkind::domain, "family solution: eps components must be S-units");
    std::array<FieldElement, 3> at{pd.alphas[0] * sol.eps1, pd.alphas[1] * sol.eps2,
                                   pd.alphas[2] * sol.eps3};
    if (at[0] == at[1] || at[0] == at[2] || at[1] == at[2])
        fail(errkind::domain, "family solution: Card{alpha_i eps_i} = 3 fails");
    FieldElement lhs =
        (sol.x - at[0] * sol.y) * (sol.x - at[1] * sol.y) * (sol.x - at[2] * sol.y) * sol.z;
    if (lhs != pd.mu * sol.eps) fail(errkind::domain, "family solution: product identity fails");
    sol.trivial = sol.x.is_zero() || sol.y.is_zero();
    return sol;
}

FamilyDerived derive(const ProblemData& pd, const FamilySolution& sol) {
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    FamilyDerived d;
    d.alpha_tilde = {pd.alphas[0] * sol.eps1, pd.alphas[1] * sol.eps2, pd.alphas[2] * sol.eps3};
    FieldElement q = K->from_rat(Rat(pd.q));
    Int mprod(1);
    for (size_t i = 0; i < 3; ++i) {
        d.beta[i] = sol.x - d.alpha_tilde[i] * sol.y;
        if (d.beta[i].is_zero())
            fail(errkind::internal, "derive: beta_i = 0 on a verified solution");
        d.beta_prime[i] = q * d.beta[i];
        Rat ns = s_norm(d.beta_prime[i], ctx);
        if (ns.get_den() != 1) fail(errkind::internal, "derive: k'_i not an integer");
        d.kprime[i] = ns.get_num();
        mprod *= d.kprime[i];
    }
    if (mprod != pd.m) fail(errkind::internal, "derive: k'_1 k'_2 k'_3 != m");
    FieldElement bp = d.beta_prime[0] * d.beta_prime[1] * d.beta_prime[2];
    if (bp != K->from_rat(Rat(pd.q * pd.q * pd.q)) * pd.mu * sol.eps)
        fail(errkind::internal, "derive: beta' product identity fails");
    d.u = {K->one(), sol.eps2 / sol.eps1, sol.eps3 / sol.eps1};
    d.v = {K->one(), d.beta[1] / d.beta[0], d.beta[2] / d.beta[0]};
    return d;
}

std::optional<std::array<FieldElement, 3>> s3_dependence_test(const ProblemData& pd,
                                                              const FamilySolution& a,
                                                              const FamilySolution& b) {
    if (a.trivial || b.trivial)
        fail(errkind::domain, "S^3-dependence is defined on nontrivial solutions");
    const auto& ctx = *pd.ctx;
    FieldElement eta3 = b.eps1 / a.eps1;
    if (s_membership(eta3, ctx) != SMembership::SUnit) return std::nullopt;
    if (b.eps2 != a.eps2 * eta3 || b.eps3 != a.eps3 * eta3) return std::nullopt;
    FieldElement eta1 = b.x / a.x;
    if (s_membership(eta1, ctx) != SMembership::SUnit) return std::nullopt;
    if (b.y != a.y * eta1 / eta3) return std::nullopt;
    FieldElement eta2 = b.z / a.z;
    if (s_membership(eta2, ctx) != SMembership::SUnit) return std::nullopt;
    if (b.eps != a.eps * eta1.pow(3) * eta2) return std::nullopt;
    return std::array<FieldElement, 3>{eta1, eta2, eta3};
}

bool ClassKey::operator<(const ClassKey& o) const {
    if (flat != o.flat) return flat < o.flat;
    return ideal_sig < o.ideal_sig;
}
bool ClassKey::operator==(const ClassKey& o) const {
    return flat == o.flat && ideal_sig == o.ideal_sig;
}

ClassKey family_class_key(const ProblemData& pd, const FamilySolution& sol) {
    if (sol.trivial) fail(errkind::domain, "class key of a trivial solution");
    auto d = derive(pd, sol);
    ClassKey key;
    for (const FieldElement* e : {&d.u[1], &d.u[2], &d.v[1], &d.v[2]})
        key.flat.insert(key.flat.end(), e->coords().begin(), e->coords().end());
    key.ideal_sig = prime_to_s_signature(d.beta[0], *pd.ctx);
    return key;
}

bool s_dependence_classic(const SContext& ctx, const FieldElement& x, const FieldElement& y,
                          const FieldElement& x2, const FieldElement& y2) {
    if ((x.is_zero() && y.is_zero()) || (x2.is_zero() && y2.is_zero()))
        fail(errkind::domain, "s_dependence: (0,0) is not a projective point");
    if (x * y2 != x2 * y) return false;
    FieldElement eta = x.is_zero() ? y2 / y : x2 / x;
    return s_membership(eta, ctx) == SMembership::SUnit;
}

bool s_dependence_32(const SContext& ctx, const ReducedSolution& a, const ReducedSolution& b) {
    if (a.eps1 != b.eps1 || a.eps2 != b.eps2) return false;
    if (a.x * b.y != b.x * a.y) return false;
    FieldElement eta = a.x.is_zero() ? b.y / a.y : b.x / a.x;
    if (s_membership(eta, ctx) != SMembership::SUnit) return false;
    if (b.x != a.x * eta || b.y != a.y * eta) return false;
    return b.eps == a.eps * eta.pow(3);
}

// ---------- solve_family ----------

namespace {

struct EnumSetup {
    std::vector<std::pair<ExponentVector, FieldElement>> units;
    bool fast_unit_betas = false;  // alphas in O_S and mu an S-unit
};

void emit_for_xy(const ProblemData& pd, const SolveFamilyOptions& opt, const EnumSetup& setup,
                 const FieldElement& x, const FieldElement& y, std::vector<FamilySolution>& out) {
    const auto& ctx = *pd.ctx;
    bool trivial = x.is_zero() || y.is_zero();
    if (trivial && !opt.include_trivial) return;
    std::array<std::vector<size_t>, 3> cand;
    for (size_t i = 0; i < 3; ++i) {
        for (size_t k = 0; k < setup.units.size(); ++k) {
            if (setup.fast_unit_betas) {
                FieldElement beta = x - pd.alphas[i] * setup.units[k].second * y;
                if (beta.is_zero() || s_membership(beta, ctx) != SMembership::SUnit) continue;
            }
            cand[i].push_back(k);
        }
    }
    for (size_t i1 : cand[0]) {
        FieldElement at1 = pd.alphas[0] * setup.units[i1].second;
        FieldElement b1 = x - at1 * y;
        if (b1.is_zero()) continue;
        for (size_t i2 : cand[1]) {
            FieldElement at2 = pd.alphas[1] * setup.units[i2].second;
            if (at2 == at1) continue;
            FieldElement b2 = x - at2 * y;
            if (b2.is_zero()) continue;
            FieldElement b12 = b1 * b2;
            for (size_t i3 : cand[2]) {
                FieldElement at3 = pd.alphas[2] * setup.units[i3].second;
                if (at3 == at1 || at3 == at2) continue;
                FieldElement b3 = x - at3 * y;
                if (b3.is_zero()) continue;
                FieldElement c = b12 * b3 / pd.mu;
                auto ze = canonical_ze(c, ctx);
                if (!ze) continue;
                out.push_back(FamilySolution{x, y, ze->first, setup.units[i1].second,
                                             setup.units[i2].second, setup.units[i3].second,
                                             ze->second, trivial});
            }
        }
    }
}

std::vector<std::vector<Rat>> coordinate_box(const FieldPtr& K, long box) {
    size_t d = static_cast<size_t>(K->degree());
    std::vector<std::vector<Rat>> out;
    std::vector<long> x(d, -box);
    while (true) {
        std::vector<Rat> bc(d);
        for (size_t j = 0; j < d; ++j) bc[j] = Rat(x[j]);
        out.push_back(K->from_basis_coords(bc));
        bool adv = false;
        for (size_t j = d; j-- > 0;) {
            if (x[j] < box) {
                ++x[j];
                for (size_t k = j + 1; k < d; ++k) x[k] = -box;
                adv = true;
                break;
            }
        }
        if (!adv) break;
    }
    return out;
}

}  // namespace

void solve_family_stream(const ProblemData& pd, const SolveFamilyOptions& opt,
                         const std::function<void(const FamilySolution&)>& visit) {
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    EnumSetup setup;
    setup.units = sunit_box_values(ctx, opt.eps_box, opt.cap);
    setup.fast_unit_betas = s_membership(pd.mu, ctx) == SMembership::SUnit;
    for (auto& a : pd.alphas)
        if (s_membership(a, ctx) == SMembership::Outside) setup.fast_unit_betas = false;

    auto xs = coordinate_box(K, opt.xy_box);
    Int volume = Int(static_cast<long>(xs.size())) * Int(static_cast<long>(xs.size())) *
                 pow_int(Int(static_cast<long>(setup.units.size())), 3);
    if (volume > opt.cap * Int(100000))
        fail(errkind::cap_exceeded, "family search space " + volume.get_str() + " too large");

    long n = static_cast<long>(xs.size());
    long batch = std::max<long>(4 * worker_count(), 8);
    for (long start = 0; start < n; start += batch) {
        long cnt = std::min(batch, n - start);
        auto results = parallel_chunks<std::vector<FamilySolution>>(cnt, [&](long k) {
            FieldElement x = K->element(xs[static_cast<size_t>(start + k)]);
            std::vector<FamilySolution> local;
            for (auto& yc : xs) {
                FieldElement y = K->element(yc);
                emit_for_xy(pd, opt, setup, x, y, local);
            }
            return std::vector<std::vector<FamilySolution>>{std::move(local)};
        });
        for (auto& chunk : results)
            for (auto& sol : chunk) visit(sol);
    }
}

std::vector<FamilySolution> solve_family(const ProblemData& pd, const SolveFamilyOptions& opt) {
    std::vector<FamilySolution> out;
    solve_family_stream(pd, opt, [&](const FamilySolution& s) { out.push_back(s); });
    return out;
}

const A1Set& A1Cache::get(const Int& n) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, build_A1(n, *pd_, *delta_)).first;
    return it->second;
}

std::vector<FamilySolution> solve_family_reconstruct(const ProblemData& pd,
                                                     const SolveFamilyOptions& opt,
                                                     const DeltaK& delta) {
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    long ubox = opt.b_unit_box < 0 ? opt.eps_box : opt.b_unit_box;
    auto upairs = sunit_box_values(ctx, ubox, opt.cap);
    A1Cache a1(pd, delta);
    std::vector<Int> k1_levels;
    for (auto& t : build_A2(pd.m)) k1_levels.push_back(t[0]);
    std::sort(k1_levels.begin(), k1_levels.end());
    k1_levels.erase(std::unique(k1_levels.begin(), k1_levels.end()), k1_levels.end());
    for (const Int& k1 : k1_levels) a1.get(k1);  // warm the cache before forking

    FieldElement q = K->from_rat(Rat(pd.q));
    FieldElement q3mu = K->from_rat(Rat(pd.q * pd.q * pd.q)) * pd.mu;

    auto out = parallel_chunks<FamilySolution>(
        static_cast<long>(upairs.size()), [&](long iu2) -> std::vector<FamilySolution> {
            std::vector<FamilySolution> local;
            const FieldElement& u2 = upairs[static_cast<size_t>(iu2)].second;
            FieldElement ap2 = pd.alphas[1] * u2;
            if (ap2 == pd.alphas[0]) return local;
            for (auto& [e3, u3] : upairs) {
                FieldElement ap3 = pd.alphas[2] * u3;
                if (ap3 == pd.alphas[0] || ap3 == ap2) continue;
                std::array<FieldElement, 3> ap{pd.alphas[0], ap2, ap3};
                auto a4 = build_A4(ap, pd.ctx, opt.a4_box, opt.cap);
                FieldElement d21 = ap[1] - ap[0], d31 = ap[2] - ap[0];
                for (auto& v2 : a4) {
                    FieldElement r2 = (K->one() - v2) / d21;
                    for (auto& v3 : a4) {
                        // gamma1-free agreement of the two y0 formulas
                        if ((K->one() - v3) / d31 != r2) continue;
                        for (const Int& k1 : k1_levels) {
                            for (auto& g1 : a1.get(k1).gammas) {
                                FieldElement y0 = g1 * r2 / q;
                                if (y0.is_zero()) continue;
                                FieldElement x0 = g1 / q + ap[0] * y0;
                                if (x0.is_zero()) continue;
                                FieldElement eps0 = g1.pow(3) * v2 * v3 / q3mu;
                                auto ze = canonical_ze(eps0, ctx);
                                if (!ze) continue;
                                if (s_membership(x0, ctx) == SMembership::Outside) continue;
                                if (s_membership(y0, ctx) == SMembership::Outside) continue;
                                local.push_back(verify_family_solution(
                                    pd, {x0, y0, ze->first, K->one(), u2, u3, ze->second}));
                            }
                        }
                    }
                }
            }
            return local;
        });
    std::sort(out.begin(), out.end(), [](const FamilySolution& a, const FamilySolution& b) {
        return tuple_key(a) < tuple_key(b);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FamilySolution& a, const FamilySolution& b) {
                              return tuple_key(a) == tuple_key(b);
                          }),
              out.end());
    return out;
}

FamilyRunSummary solve_family_cross_checked(
    const ProblemData& pd, const SolveFamilyOptions& opt, const DeltaK& delta,
    const std::function<void(const FamilySolution&)>& visit) {
    const auto& ctx = *pd.ctx;
    long ubox = opt.b_unit_box < 0 ? opt.eps_box : opt.b_unit_box;

    auto bcands = solve_family_reconstruct(pd, opt, delta);
    std::set<ClassKey> bkeys;
    for (auto& c : bcands)
        if (!c.trivial) bkeys.insert(family_class_key(pd, c));

    FamilyRunSummary sum;
    std::set<ClassKey> akeys;
    auto in_exp_box = [&](const FieldElement& e, long box) {
        auto v = sunit_exponents(e, ctx);
        if (!v) return false;
        for (long x : v->unit_exp)
            if (std::labs(x) > box) return false;
        for (long x : v->g_exp)
            if (std::labs(x) > box) return false;
        return true;
    };
    long covered = 0, coverable = 0;
    SolveFamilyOptions aopt = opt;
    aopt.include_trivial = false;
    solve_family_stream(pd, aopt, [&](const FamilySolution& s) {
        visit(s);
        ++sum.nontrivial;
        auto key = family_class_key(pd, s);
        akeys.insert(key);
        auto d = derive(pd, s);
        bool in_scope = in_exp_box(d.u[1], ubox) && in_exp_box(d.u[2], ubox) &&
                        in_exp_box(d.v[1], opt.a4_box) && in_exp_box(d.v[2], opt.a4_box);
        if (in_scope) {
            ++coverable;
            if (bkeys.count(key)) ++covered;
        }
    });
    if (covered != coverable)
        fail(errkind::internal, "strategy (b) missed " + std::to_string(coverable - covered) +
                                    " of " + std::to_string(coverable) +
                                    " in-scope classes found by strategy (a)");
    sum.classes = static_cast<long>(akeys.size());
    return sum;
}

// ---------- Section 6.2 case analysis ----------

const char* CaseCertificate::label_name(Label l) {
    switch (l) {
        case Label::NoVanishingSubsum: return "no-vanishing-subsum";
        case Label::ThreeThreeRepeatedBeta: return "3+3-repeated-beta";
        case Label::ThreeThreeRepeatedAlpha: return "3+3-repeated-alpha";
        case Label::ThreeThreeAllDistinct: return "3+3-all-distinct";
        case Label::TwoFourSplit: return "2+4-split";
    }
    return "?";
}

CaseCertificate classify_subsums(const ProblemData& pd, const FamilySolution& sol, int i) {
    if (sol.trivial) fail(errkind::domain, "classify_subsums: trivial solution");
    if (i != 2 && i != 3) fail(errkind::domain, "classify_subsums: i must be 2 or 3");
    int j = 5 - i;
    auto d = derive(pd, sol);
    auto B = [&](int k) { return d.beta[static_cast<size_t>(k - 1)]; };
    auto A = [&](int k) { return d.alpha_tilde[static_cast<size_t>(k - 1)]; };

    CaseCertificate cert;
    cert.i = i;
    cert.j = j;
    // T = b1 a_i - b1 a_j + b_i a_j - b_i a_1 + b_j a_1 - b_j a_i   (Eq. 6.2)
    cert.term_index = {std::pair{1, i}, {1, j}, {i, j}, {i, 1}, {j, 1}, {j, i}};
    const std::array<int, 6> tsign{1, -1, 1, -1, 1, -1};
    const auto& K = pd.ctx->field();
    for (size_t k = 0; k < 6; ++k) {
        FieldElement t = B(cert.term_index[k].first) * A(cert.term_index[k].second);
        cert.terms[k] = tsign[k] > 0 ? t : -t;
    }
    FieldElement total = K->zero();
    for (auto& t : cert.terms) total = total + t;
    if (!total.is_zero()) fail(errkind::internal, "classify_subsums: T != 0");
    for (unsigned mask = 1; mask < 63; ++mask) {
        FieldElement s = K->zero();
        for (size_t k = 0; k < 6; ++k)
            if (mask & (1u << k)) s = s + cert.terms[k];
        if (s.is_zero()) cert.vanishing_masks.push_back(mask);
    }
    // 6.2.2.1: T never splits into three vanishing 2-term subsums
    {
        std::vector<unsigned> twos;
        for (unsigned m : cert.vanishing_masks)
            if (__builtin_popcount(m) == 2) twos.push_back(m);
        for (unsigned a : twos)
            for (unsigned b : twos) {
                if (a >= b || (a & b)) continue;
                unsigned c = 63u ^ a ^ b;
                if (std::find(twos.begin(), twos.end(), c) != twos.end())
                    fail(errkind::internal,
                         "classify_subsums: T splits into three 2-term zero subsums");
            }
    }

    if (cert.vanishing_masks.empty()) {
        cert.label = CaseCertificate::Label::NoVanishingSubsum;
        return cert;
    }

    struct Tmpl {
        CaseCertificate::Label label;
        std::vector<std::array<int, 3>> terms;  // (beta slot, alpha slot, sign), slots = j1,j2,j3
    };
    static const std::vector<Tmpl> templates = {
        {CaseCertificate::Label::ThreeThreeRepeatedBeta, {{1, 2, 1}, {1, 3, -1}, {3, 1, 1}}},
        {CaseCertificate::Label::ThreeThreeRepeatedBeta, {{1, 2, 1}, {1, 3, -1}, {3, 2, -1}}},
        {CaseCertificate::Label::ThreeThreeRepeatedAlpha, {{1, 2, 1}, {2, 1, -1}, {3, 2, -1}}},
        {CaseCertificate::Label::ThreeThreeAllDistinct, {{1, 2, 1}, {2, 3, 1}, {3, 1, 1}}},
        {CaseCertificate::Label::TwoFourSplit, {{1, 2, 1}, {2, 3, 1}}},
    };
    const std::array<int, 3> labels{1, i, j};
    auto try_match = [&](unsigned mask, const Tmpl& tm, std::array<int, 3>& sigma_out,
                         int& sign_out) {
        if (static_cast<int>(tm.terms.size()) != __builtin_popcount(mask)) return false;
        std::array<int, 3> perm{0, 1, 2};
        do {
            std::array<int, 3> sigma{labels[static_cast<size_t>(perm[0])],
                                     labels[static_cast<size_t>(perm[1])],
                                     labels[static_cast<size_t>(perm[2])]};
            for (int sg : {1, -1}) {
                std::set<std::array<int, 3>> want, have;
                for (auto& t : tm.terms)
                    want.insert({sigma[static_cast<size_t>(t[0] - 1)],
                                 sigma[static_cast<size_t>(t[1] - 1)], sg * t[2]});
                for (size_t k = 0; k < 6; ++k)
                    if (mask & (1u << k))
                        have.insert({cert.term_index[k].first, cert.term_index[k].second,
                                     tsign[k]});
                if (want == have) {
                    sigma_out = sigma;
                    sign_out = sg;
                    return true;
                }
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };

    for (int want_pop : {3, 2}) {
        for (unsigned mask : cert.vanishing_masks) {
            if (__builtin_popcount(mask) != want_pop) continue;
            for (auto& tm : templates) {
                std::array<int, 3> sigma;
                int sg;
                if (try_match(mask, tm, sigma, sg)) {
                    cert.label = tm.label;
                    cert.t1_mask = mask;
                    cert.sigma = sigma;
                    cert.sign = sg;
                    if (tm.label == CaseCertificate::Label::TwoFourSplit) {
                        unsigned comp = 63u ^ mask;
                        for (unsigned m2 : cert.vanishing_masks)
                            if (m2 != comp && (m2 & comp) == m2)
                                fail(errkind::internal,
                                     "classify_subsums: 2+4 split with degenerate T2");
                    }
                    return cert;
                }
            }
        }
    }
    fail(errkind::internal, "classify_subsums: vanishing subsum matches no Section 6.2 display");
}

// ---------- Section 6.3 canonicalization ----------

CanonicalRep canonicalize(const ProblemData& pd, const FamilySolution& sol, const A1Cache& a1) {
    if (sol.trivial) fail(errkind::domain, "canonicalize: trivial solution");
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    auto d = derive(pd, sol);
    CanonicalRep rep;
    rep.kprime = d.kprime;
    for (size_t i = 0; i < 3; ++i) {
        auto [w, g] = decompose(d.beta_prime[i], a1.get(d.kprime[i]), pd, a1.delta());
        rep.wunits[i] = w;
        rep.gamma[i] = g;
    }
    rep.u2 = d.u[1];
    rep.u3 = d.u[2];
    rep.eta = sol.eps1;
    rep.eta_tilde = rep.wunits[0];
    rep.w = sol.eps1 * sol.y;
    std::array<FieldElement, 3> ap{pd.alphas[0], pd.alphas[1] * rep.u2, pd.alphas[2] * rep.u3};
    FieldElement q = K->from_rat(Rat(pd.q));
    FieldElement y0_2 = rep.gamma[0] * (K->one() - d.v[1]) / (q * (ap[1] - ap[0]));
    FieldElement y0_3 = rep.gamma[0] * (K->one() - d.v[2]) / (q * (ap[2] - ap[0]));
    if (y0_2 != y0_3) fail(errkind::internal, "canonicalize: the two y0 computations disagree");
    rep.y0 = y0_2;
    rep.x0 = rep.gamma[0] / q + ap[0] * rep.y0;
    rep.eps0 =
        rep.gamma[0].pow(3) * d.v[1] * d.v[2] / (K->from_rat(Rat(pd.q * pd.q * pd.q)) * pd.mu);
    auto ze = canonical_ze(rep.eps0, ctx);
    if (!ze) fail(errkind::internal, "canonicalize: eps0 has no S-integral cofactor");
    rep.rep = verify_family_solution(
        pd, {rep.x0, rep.y0, ze->first, K->one(), rep.u2, rep.u3, ze->second});
    if (rep.rep.trivial) fail(errkind::internal, "canonicalize: representative is trivial");
    if (!s3_dependence_test(pd, sol, rep.rep))
        fail(errkind::internal, "canonicalize: representative not S^3-dependent on the source");
    return rep;
}

ClassPartition partition_classes(const ProblemData& pd, const std::vector<FamilySolution>& sols) {
    ClassPartition part;
    part.class_of.assign(sols.size(), -1);
    std::map<ClassKey, long> ids;
    std::map<long, size_t> first_of;
    for (size_t k = 0; k < sols.size(); ++k) {
        if (sols[k].trivial) fail(errkind::domain, "partition_classes: trivial solution");
        auto key = family_class_key(pd, sols[k]);
        auto it = ids.find(key);
        if (it == ids.end()) {
            it = ids.emplace(key, part.count++).first;
            first_of[it->second] = k;
        }
        part.class_of[static_cast<size_t>(k)] = it->second;
        // cross-validate the key against the definition on small inputs
        if (sols.size() <= 2000) {
            size_t f = first_of[it->second];
            if (f != k && !s3_dependence_test(pd, sols[f], sols[k]))
                fail(errkind::internal, "partition: key-equal pair not S^3-dependent");
        }
    }
    for (auto it = first_of.begin(); it != first_of.end(); ++it) {
        auto jt = std::next(it);
        if (jt == first_of.end()) break;
        if (s3_dependence_test(pd, sols[it->second], sols[jt->second]))
            fail(errkind::internal, "partition: key-distinct pair is S^3-dependent");
    }
    return part;
}

ClassicRun solve_classic(const std::vector<FieldElement>& alphas, const FieldElement& mu,
                         const SCtxPtr& ctx, long xy_box, bool coprime_filter,
                         const std::vector<Int>& coprime_primes, const Int& cap) {
    if (alphas.empty()) fail(errkind::domain, "solve_classic: empty alpha list");
    if (mu.is_zero()) fail(errkind::domain, "solve_classic: mu = 0");
    const auto& K = ctx->field();
    if (coprime_filter && K->degree() != 1)
        fail(errkind::domain, "coprimality filter is the K = Q corollary mode");
    ClassicRun run;
    {
        std::vector<std::vector<Rat>> distinct;
        for (auto& a : alphas)
            if (std::find(distinct.begin(), distinct.end(), a.coords()) == distinct.end())
                distinct.push_back(a.coords());
        run.card_warning = distinct.size() < 3;
    }
    auto box = coordinate_box(K, xy_box);
    Int vol = Int(static_cast<long>(box.size())) * Int(static_cast<long>(box.size()));
    if (vol > cap) fail(errkind::cap_exceeded, "solve_classic: box too large");
    std::map<std::vector<Rat>, long> class_ids;  // projective key x/y
    for (auto& xc : box) {
        FieldElement x = K->element(xc);
        for (auto& yc : box) {
            FieldElement y = K->element(yc);
            if (x.is_zero() || y.is_zero()) continue;  // xy != 0 (Thm 2.1)
            if (coprime_filter) {
                bool bad = false;
                for (const Int& p : coprime_primes)
                    if (x.rational_value().get_num() % p == 0 ||
                        y.rational_value().get_num() % p == 0)
                        bad = true;
                if (bad) continue;
            }
            FieldElement value = K->one();
            for (auto& a : alphas) value = value * (x - a * y);
            if (value.is_zero()) continue;
            FieldElement eps = value / mu;
            if (s_membership(eps, *ctx) != SMembership::SUnit) continue;
            ClassicSolution sol{x, y, eps, -1};
            auto ratio = (x / y).coords();
            auto it = class_ids.find(ratio);
            if (it == class_ids.end()) it = class_ids.emplace(ratio, run.classes++).first;
            sol.class_id = it->second;
            run.solutions.push_back(std::move(sol));
        }
    }
    return run;
}

}  // namespace tmk
