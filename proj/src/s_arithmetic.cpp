#include "tmk/s_arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tmk/boxcore.hpp"
#include "tmk/errors.hpp"

namespace tmk {

namespace {

// canonical preference: larger trace first, then larger coordinates
bool canon_prefer(const FieldElement& a, const FieldElement& b) {
    Rat ta = a.trace(), tb = b.trace();
    if (ta != tb) return ta > tb;
    return b < a;
}

// canonical unit representative: largest value at the last real embedding
// (exact sign comparison); for totally complex fields fall back to
// (trace, coordinates)
bool canon_unit_prefer(const FieldElement& a, const FieldElement& b) {
    const auto& K = a.field();
    if (K->r1() >= 1) {
        QPoly diff = (a - b).as_poly();
        int s = K->sign_at_real_embedding(diff, K->r1() - 1);
        if (s != 0) return s > 0;
    }
    return canon_prefer(a, b);
}

bool is_root_of_unity(const FieldElement& e) {
    if (e.is_zero()) return false;
    int d = e.field()->degree();
    // the torsion order m satisfies phi(m) <= d, so m <= 2 d^2 + 4 amply
    int max_order = 2 * d * d + 4;
    FieldElement p = e;
    for (int k = 1; k <= max_order; ++k) {
        if (p == e.field()->one()) return true;
        p = p * e;
    }
    return false;
}

int element_order(const FieldElement& e, int cap) {
    FieldElement p = e;
    for (int k = 1; k <= cap; ++k) {
        if (p == e.field()->one()) return k;
        p = p * e;
    }
    fail(errkind::internal, "element_order: not torsion within cap");
}

RR log_abs_normalized(const FieldElement& u, const Place& v, mpfr_prec_t prec) {
    return abs_value_arch(u, v, prec).log();
}

// interval determinant by Laplace expansion (r <= 4 at desk scale)
RR det_rr(const std::vector<std::vector<RR>>& m, mpfr_prec_t prec) {
    size_t n = m.size();
    if (n == 0) return RR::from_int(1, prec);
    if (n == 1) return m[0][0];
    RR acc = RR::exact_zero(prec);
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<RR>> sub;
        for (size_t r = 1; r < n; ++r) {
            std::vector<RR> row;
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            sub.push_back(std::move(row));
        }
        RR term = m[0][j] * det_rr(sub, prec);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

std::vector<Int> sorted_divisors(const Int& n) {
    std::vector<Int> ds{1};
    for (auto& [p, e] : factorize(n)) {
        size_t sz = ds.size();
        Int pk(1);
        for (long i = 0; i < e; ++i) {
            pk *= p;
            for (size_t k = 0; k < sz; ++k) ds.push_back(ds[k] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

RR height_to_width(const FieldElement& e, double target_width) {
    for (mpfr_prec_t p = 128;; p *= 2) {
        RR h = height(e, p);
        if (h.width() < target_width || p > 8192) return h;
    }
}

}  // namespace

std::optional<FieldElement> principal_generator(const Ideal& A, const UnitGroupData& units) {
    const FieldPtr& K = A.field();
    int d = K->degree(), r = K->unit_rank();
    Int n = A.norm();
    mpfr_prec_t prec = 128;
    // box parameter Q >= n^{1/d} e^{c3 R_K}; any generator can be unit-balanced
    // into this box (Lemma 5.4 shape), so an empty search proves non-principal
    RR Q = d == 1 ? RR::from_rat(Rat(n), prec)
                  : (RR::from_rat(Rat(n), prec).log() / RR::from_int(d, prec)).exp();
    if (r >= 1) {
        RR c3 = RR::from_rat(Rat(1, 2), prec);
        if (r >= 2) {
            DeltaK dk = delta_k(K, 0.05);
            RR delta_lo(dk.value.lo(), dk.value.lo());
            c3 = RR::from_rat(Rat(pow_int(Int(r), static_cast<unsigned long>(r) + 1), 2), prec) /
                 delta_lo.pow_ui(static_cast<unsigned long>(r - 1));
        }
        Q = Q * (c3 * units.regulator).exp();
    }
    Rat Qhat = Q.hi().to_rat();
    std::optional<FieldElement> best;
    for (const auto& g : box_elements(K, Qhat, Int(100000000))) {
        if (g.is_zero()) continue;
        if (abs(g.norm()) != Rat(n)) continue;
        if (!A.contains(g)) continue;
        if (!best || canon_prefer(g, *best)) best = g;
    }
    return best;
}

UnitGroupData unit_class_data(const FieldPtr& K, const TrustedData& trusted) {
    UnitGroupData out;
    int d = K->degree(), r = K->unit_rank();
    mpfr_prec_t prec = 128;

    // torsion group = nonzero elements of the unit box (Kronecker)
    std::vector<FieldElement> tors;
    for (const auto& g : box_elements(K, Rat(1), Int(1000000)))
        if (!g.is_zero()) tors.push_back(g);
    out.w = static_cast<int>(tors.size());
    if (out.w < 2) fail(errkind::internal, "torsion group smaller than {1,-1}");
    {
        FieldElement best = tors[0];
        int besto = element_order(tors[0], out.w);
        for (auto& e : tors) {
            int o = element_order(e, out.w);
            if (o > besto || (o == besto && best < e)) {
                best = e;
                besto = o;
            }
        }
        if (besto != out.w) fail(errkind::internal, "torsion group not cyclic of order w");
        out.zeta = best;
    }

    // fundamental units
    if (r == 0) {
        out.regulator = RR::from_int(1, prec);
    } else if (r == 1) {
        // any algebraic integer of height <= H lies in the box Q = e^{dH};
        // the minimum-height non-torsion unit of the group is fundamental
        double H = 0.24;
        std::optional<FieldElement> fund;
        while (!fund) {
            Rat Qhat = (RR::from_double(H, prec) * RR::from_int(d, prec)).exp().hi().to_rat();
            std::vector<FieldElement> cands;
            for (const auto& g : box_elements(K, Qhat, Int(100000000))) {
                if (g.is_zero() || is_root_of_unity(g)) continue;
                if (abs(g.norm()) == 1) cands.push_back(g);
            }
            if (cands.empty()) {
                H *= 2;
                continue;
            }
            // orbit representatives under torsion and inversion
            std::map<std::vector<Rat>, std::vector<FieldElement>> orbits;
            for (auto& u : cands) {
                std::vector<Rat> key = u.coords();
                for (auto base : {u, u.inverse()}) {
                    FieldElement t = base;
                    for (int j = 0; j < out.w; ++j) {
                        key = std::min(key, t.coords());
                        t = t * out.zeta;
                    }
                }
                orbits[key].push_back(u);
            }
            // distinct orbits have distinct heights (rank one): width 1e-25
            // enclosures order them decisively
            std::optional<RR> besth;
            std::vector<FieldElement> bestorb;
            for (auto& [key, os] : orbits) {
                RR h = height_to_width(os.front(), 1e-25);
                if (!besth || mpfr_cmp(h.lo().raw(), besth->lo().raw()) < 0) {
                    besth = h;
                    bestorb = os;
                }
            }
            double hstar = besth->hi().to_double();
            if (hstar <= H + 1e-12) {
                std::vector<FieldElement> all;
                for (auto& u : bestorb)
                    for (auto base : {u, u.inverse()}) {
                        FieldElement t = base;
                        for (int j = 0; j < out.w; ++j) {
                            all.push_back(t);
                            t = t * out.zeta;
                        }
                    }
                FieldElement best = all.front();
                for (auto& e : all)
                    if (canon_unit_prefer(e, best)) best = e;
                fund = best;
            } else {
                H = hstar * 1.05;  // the found unit bounds the fundamental height
            }
        }
        out.fundamental_units = {*fund};
    } else {
        if (!trusted.fundamental_units || static_cast<int>(trusted.fundamental_units->size()) != r)
            fail(errkind::missing_data,
                 "rank >= 2 field needs fundamental_units in the config (r = " +
                     std::to_string(r) + ")");
        for (auto& coords : *trusted.fundamental_units) {
            FieldElement u = K->element(coords);
            if (!u.is_algebraic_integer() || abs(u.norm()) != 1)
                fail(errkind::domain, "config unit is not a unit of O_K");
            out.fundamental_units.push_back(u);
        }
        out.units_trusted = true;
    }

    // regulator with enclosure width budget 1e-20
    if (r >= 1) {
        auto arch = archimedean_places(K);
        for (mpfr_prec_t p = 192;; p *= 2) {
            if (p > (mpfr_prec_t(1) << 15)) fail(errkind::internal, "regulator: precision cap");
            std::vector<std::vector<RR>> m;
            for (int i = 0; i < r; ++i) {
                std::vector<RR> row;
                for (int j = 0; j < r; ++j)
                    row.push_back(log_abs_normalized(out.fundamental_units[static_cast<size_t>(i)],
                                                     arch[static_cast<size_t>(j)], p));
                m.push_back(std::move(row));
            }
            RR det = det_rr(m, p).abs();
            if (det.contains_zero()) {
                if (p >= 3072) fail(errkind::domain, "config units are multiplicatively dependent");
                continue;
            }
            if (det.width() < 1e-20) {
                out.regulator = det;
                break;
            }
        }
    } else {
        out.regulator = RR::from_int(1, prec);
    }

    // class number
    if (trusted.trusted && trusted.h_K) {
        out.h_K = *trusted.h_K;
        out.h_K_provenance = "trusted-config";
    } else {
        mpfr_prec_t p = 128;
        Int dfact(1);
        for (int i = 2; i <= d; ++i) dfact *= i;
        RR M = RR::from_rat(Rat(dfact, pow_int(Int(d), static_cast<unsigned long>(d))), p);
        RR four_over_pi = RR::from_int(4, p) / RR::pi(p);
        M = M * four_over_pi.pow_ui(static_cast<unsigned long>(K->r2()));
        M = M * RR::from_rat(Rat(abs(K->discriminant())), p).sqrt();
        Int B = floor_rat(M.hi().to_rat());
        if (B < 2) {
            out.h_K = 1;
            out.h_K_provenance = "computed";
        } else if (d == 2) {
            std::vector<Ideal> prime_ideals;
            for (Int pp = 2; pp <= B; mpz_nextprime(pp.get_mpz_t(), pp.get_mpz_t()))
                for (auto& P : places_above(K, pp))
                    if (P.norm <= B) prime_ideals.push_back(Ideal::two_element(K, P.p, P.gbar));
            std::vector<Ideal> all{Ideal::whole_ring(K)};
            for (size_t i = 0; i < all.size(); ++i)
                for (auto& P : prime_ideals) {
                    Ideal nxt = all[i].mul(P);
                    if (nxt.norm() > B) continue;
                    if (std::find(all.begin(), all.end(), nxt) == all.end()) all.push_back(nxt);
                }
            std::vector<int> cls(all.size(), -1);
            int nclasses = 0;
            for (size_t i = 0; i < all.size(); ++i) {
                if (cls[i] >= 0) continue;
                cls[i] = nclasses++;
                for (size_t j = i + 1; j < all.size(); ++j) {
                    if (cls[j] >= 0) continue;
                    Ideal test = all[i].mul(all[j].conjugate());
                    if (principal_generator(test, out)) cls[j] = cls[i];
                }
            }
            out.h_K = nclasses;
            out.h_K_provenance = "computed";
        } else {
            if (!trusted.h_K)
                fail(errkind::missing_data,
                     "class number needed: supply h_K in the config for degree >= 3");
            out.h_K = *trusted.h_K;
            out.h_K_provenance = "trusted-config";
        }
    }
    return out;
}

SCtxPtr SContext::make(FieldPtr K, const std::vector<std::string>& primes,
                       const TrustedData& trusted) {
    auto ctx = std::make_shared<SContext>();
    ctx->K_ = K;
    ctx->arch_ = archimedean_places(K);
    std::vector<std::pair<Int, int>> sel;  // (p, index or -1 for all)
    for (const auto& s : primes) {
        auto colon = s.find(':');
        Int p(colon == std::string::npos ? s : s.substr(0, colon));
        int idx = colon == std::string::npos ? -1 : std::stoi(s.substr(colon + 1));
        sel.emplace_back(p, idx);
    }
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    for (auto& [p, idx] : sel) {
        for (auto& P : places_above(K, p))
            if (idx == -1 || P.index_above_p == idx) ctx->finite_.push_back(P);
    }
    ctx->units_ = unit_class_data(K, trusted);
    ctx->nu_ = 1;
    for (auto& P : ctx->finite_)
        if (P.norm > ctx->nu_) ctx->nu_ = P.norm;
    ctx->s_ = K->unit_rank() + static_cast<int>(ctx->finite_.size());

    for (auto& P : ctx->finite_) {
        Ideal PI = K->degree() == 1 ? Ideal::principal(K->from_rat(Rat(P.p)))
                                    : Ideal::two_element(K, P.p, P.gbar);
        bool found = false;
        for (const Int& k : sorted_divisors(ctx->units_.h_K)) {
            unsigned ku = static_cast<unsigned>(k.get_ui());
            auto g = principal_generator(PI.pow(ku), ctx->units_);
            if (g) {
                ctx->g_.push_back(*g);
                ctx->m_.push_back(static_cast<int>(ku));
                if (valuation(*g, P) != static_cast<long>(ku))
                    fail(errkind::internal, "prime generator valuation mismatch");
                found = true;
                break;
            }
        }
        if (!found) fail(errkind::internal, "no principal power of prime ideal within h_K");
    }
    return ctx;
}

std::string SContext::describe() const {
    std::ostringstream os;
    os << "S = S_inf";
    for (auto& P : finite_) os << " + " << P.str();
    os << "; s=" << s_ << ", t=" << t() << ", nu=" << nu_.get_str();
    return os.str();
}

namespace {

// K = Q: strip the S-primes from a rational, keep the prime-to-S parts
struct RatSView {
    Int num;  // positive, prime to S
    Int den;  // positive, prime to S
};

RatSView rational_s_view(const Rat& q, const SContext& ctx) {
    Int n = abs(q.get_num()), d = q.get_den();
    for (auto& P : ctx.finite_places()) {
        remove_factor(n, P.p);
        remove_factor(d, P.p);
    }
    return {n, d};
}

bool place_in_S(const Place& P, const SContext& ctx) {
    for (auto& Q : ctx.finite_places())
        if (Q.p == P.p && Q.index_above_p == P.index_above_p) return true;
    return false;
}

}  // namespace

SMembership s_membership(const FieldElement& a, const SContext& ctx) {
    if (a.is_zero()) return SMembership::SInteger;
    const auto& K = a.field();
    if (K->degree() == 1) {
        auto v = rational_s_view(a.rational_value(), ctx);
        if (v.den != 1) return SMembership::Outside;
        return v.num == 1 ? SMembership::SUnit : SMembership::SInteger;
    }
    bool all_zero = true;
    for (const Int& p : support_primes(a))
        for (const Place& P : places_above(K, p)) {
            if (place_in_S(P, ctx)) continue;
            long ord = valuation(a, P);
            if (ord < 0) return SMembership::Outside;
            if (ord > 0) all_zero = false;
        }
    return all_zero ? SMembership::SUnit : SMembership::SInteger;
}

Rat s_norm(const FieldElement& a, const SContext& ctx) {
    if (a.is_zero()) fail(errkind::zero_input, "N_S of 0");
    const auto& K = a.field();
    Rat ideal_based(1);
    if (K->degree() == 1) {
        auto v = rational_s_view(a.rational_value(), ctx);
        ideal_based = Rat(v.num) / Rat(v.den);
    } else {
        for (const Int& p : support_primes(a))
            for (const Place& P : places_above(K, p)) {
                if (place_in_S(P, ctx)) continue;
                long ord = valuation(a, P);
                if (ord != 0) ideal_based *= pow_rat(Rat(P.norm), ord);
            }
    }
    // product-over-S definition for S-integers: |N(a)| * prod_{P in S} N(P)^{-ord}
    if (ideal_based.get_den() == 1) {
        Rat prod = abs(a.norm());
        for (auto& P : ctx.finite_places()) prod *= pow_rat(Rat(P.norm), -valuation(a, P));
        if (prod != ideal_based)
            fail(errkind::internal, "N_S: ideal-based and product-over-S definitions disagree");
    }
    return ideal_based;
}

FieldElement from_exponents(const SContext& ctx, const ExponentVector& v) {
    FieldElement r = ctx.units().zeta.pow(v.zeta_pow);
    for (size_t i = 0; i < v.unit_exp.size(); ++i)
        r = r * ctx.units().fundamental_units[i].pow(v.unit_exp[i]);
    for (size_t j = 0; j < v.g_exp.size(); ++j) r = r * ctx.prime_generators()[j].pow(v.g_exp[j]);
    return r;
}

std::optional<ExponentVector> sunit_exponents(const FieldElement& eps, const SContext& ctx) {
    if (eps.is_zero()) return std::nullopt;
    if (s_membership(eps, ctx) != SMembership::SUnit) return std::nullopt;
    ExponentVector v;
    FieldElement w = eps;
    for (size_t j = 0; j < ctx.finite_places().size(); ++j) {
        long ord = valuation(eps, ctx.finite_places()[j]);
        long step = ctx.principal_powers()[j];
        if (ord % step != 0) return std::nullopt;  // outside the generated group
        v.g_exp.push_back(ord / step);
        w = w * ctx.prime_generators()[j].pow(-v.g_exp.back());
    }
    if (!w.is_algebraic_integer() || abs(w.norm()) != 1)
        fail(errkind::internal, "sunit_exponents: non-unit after removing prime parts");
    int r = ctx.field()->unit_rank();
    v.unit_exp.assign(static_cast<size_t>(r), 0);
    if (r > 0) {
        const auto& arch = ctx.arch_places();
        bool done = false;
        for (mpfr_prec_t p = 128; !done; p *= 2) {
            if (p > 8192) return std::nullopt;
            // approximate exponents from the log-embedding linear system
            std::vector<std::vector<Rat>> A(static_cast<size_t>(r),
                                            std::vector<Rat>(static_cast<size_t>(r)));
            std::vector<Rat> rhs(static_cast<size_t>(r));
            bool narrow = true;
            for (int j = 0; j < r && narrow; ++j) {
                for (int i = 0; i < r; ++i) {
                    RR l = log_abs_normalized(ctx.units().fundamental_units[static_cast<size_t>(i)],
                                              arch[static_cast<size_t>(j)], p);
                    if (l.width() > 1e-10) narrow = false;
                    A[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                        l.lo().to_rat();
                }
                RR l = log_abs_normalized(w, arch[static_cast<size_t>(j)], p);
                if (l.width() > 1e-10) narrow = false;
                rhs[static_cast<size_t>(j)] = l.lo().to_rat();
            }
            if (!narrow) continue;
            auto sol = mat_solve(A, rhs);
            if (!sol) continue;
            std::vector<long> base;
            for (auto& x : *sol) base.push_back(static_cast<long>(std::llround(x.get_d())));
            int span = r >= 2 ? 9 : 3;
            for (long mask = 0; mask < span && !done; ++mask) {
                std::vector<long> cand = base;
                cand[0] += (mask % 3) - 1;
                if (r >= 2) cand[1] += (mask / 3) - 1;
                FieldElement tau = w;
                for (int i = 0; i < r; ++i)
                    tau = tau * ctx.units().fundamental_units[static_cast<size_t>(i)].pow(
                                    -cand[static_cast<size_t>(i)]);
                if (tau.pow(ctx.units().w) == ctx.field()->one()) {
                    for (int i = 0; i < r; ++i)
                        v.unit_exp[static_cast<size_t>(i)] = cand[static_cast<size_t>(i)];
                    w = tau;
                    done = true;
                }
            }
            if (!done && p >= 4096) return std::nullopt;
        }
    }
    FieldElement t = ctx.field()->one();
    for (int j = 0; j < ctx.units().w; ++j) {
        if (t == w) {
            v.zeta_pow = j;
            if (from_exponents(ctx, v) != eps)
                fail(errkind::internal, "sunit_exponents: round-trip mismatch");
            return v;
        }
        t = t * ctx.units().zeta;
    }
    return std::nullopt;
}

DeltaK delta_k(const FieldPtr& K, double H, const Int& cap) {
    if (H <= 0) fail(errkind::domain, "delta_k: H must be positive");
    int d = K->degree();
    mpfr_prec_t prec = 128;
    Rat Qhat = (RR::from_double(H, prec) * RR::from_int(d, prec)).exp().hi().to_rat();
    DeltaK out;
    out.threshold = H;
    std::vector<std::pair<RR, FieldElement>> cands;
    for (const auto& g : box_elements(K, Qhat, cap)) {
        if (g.is_zero() || is_root_of_unity(g)) continue;
        cands.emplace_back(height_to_width(g, 1e-30), g);
    }
    RR dH = RR::from_double(H, prec) * RR::from_int(d, prec);
    if (cands.empty()) {
        out.value = dH;
        return out;
    }
    // min-height scan; enclosure overlaps count as ties, broken by
    // (trace desc, coords lex asc)
    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i) {
        const RR &hi = cands[i].first, &hb = cands[best].first;
        if (hi.definitely_lt(hb)) {
            best = i;
        } else if (!hb.definitely_lt(hi)) {
            Rat ti = cands[i].second.trace(), tb = cands[best].second.trace();
            if (ti > tb || (ti == tb && cands[i].second.coords() < cands[best].second.coords()))
                best = i;
        }
    }
    RR dh = cands[best].first * RR::from_int(d, prec);
    if (dH.definitely_lt(dh)) {
        out.value = dH;  // no witness: every enumerated height exceeds H
    } else {
        out.witness = cands[best].second;
        Mpf lo(prec), hi(prec);
        mpfr_min(lo.raw(), dh.lo().raw(), dH.lo().raw(), MPFR_RNDD);
        mpfr_min(hi.raw(), dh.hi().raw(), dH.hi().raw(), MPFR_RNDU);
        out.value = RR(std::move(lo), std::move(hi));
    }
    return out;
}

}  // namespace tmk
