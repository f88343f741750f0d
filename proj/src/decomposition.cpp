#include "tmk/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "tmk/errors.hpp"
#include "tmk/parallel.hpp"

namespace tmk {

namespace {

// interval inverse of the real Minkowski embedding matrix; rows:
// real embeddings, then (re, im) pairs of the upper complex embeddings
std::optional<std::vector<std::vector<RR>>> interval_inverse(std::vector<std::vector<RR>> a,
                                                             mpfr_prec_t prec) {
    size_t n = a.size();
    std::vector<std::vector<RR>> inv(n, std::vector<RR>(n, RR::exact_zero(prec)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = RR::from_int(1, prec);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        double best = 0;
        for (size_t r = col; r < n; ++r) {
            if (a[r][col].contains_zero()) continue;
            double m = std::abs(a[r][col].mid_double());
            if (piv == n || m > best) {
                piv = r;
                best = m;
            }
        }
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        RR ic = RR::from_int(1, prec) / a[col][col];
        for (size_t c = 0; c < n; ++c) {
            a[col][c] = a[col][c] * ic;
            inv[col][c] = inv[col][c] * ic;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            RR f = a[r][col];
            if (f.contains_zero() && f.width() == 0) continue;
            for (size_t c = 0; c < n; ++c) {
                a[r][c] = a[r][c] - f * a[col][c];
                inv[r][c] = inv[r][c] - f * inv[col][c];
            }
        }
    }
    return inv;
}

}  // namespace

std::vector<FieldElement> box_elements(const FieldPtr& K, const Rat& Q, const Int& cap) {
    if (Q <= 0) fail(errkind::domain, "box_elements: Q must be positive");
    size_t d = static_cast<size_t>(K->degree());
    Rat Q2 = Q * Q;

    // coordinate bounds from the inverse embedding matrix
    std::vector<long> bound(d, 0);
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        if (prec > 4096) fail(errkind::internal, "box_elements: cannot invert embedding matrix");
        auto roots = K->embeddings(prec);
        std::vector<std::vector<RR>> M;
        for (int i = 0; i < K->r1(); ++i) {
            std::vector<RR> row;
            for (size_t j = 0; j < d; ++j) {
                QPoly wj = qp_normalize(QPoly(K->integral_basis()[j].begin(),
                                              K->integral_basis()[j].end()));
                row.push_back(qp_eval_cc(wj, roots[static_cast<size_t>(i)], prec).re());
            }
            M.push_back(std::move(row));
        }
        for (int i = 0; i < K->r2(); ++i) {
            std::vector<RR> re_row, im_row;
            for (size_t j = 0; j < d; ++j) {
                QPoly wj = qp_normalize(QPoly(K->integral_basis()[j].begin(),
                                              K->integral_basis()[j].end()));
                CC v = qp_eval_cc(wj, roots[static_cast<size_t>(K->r1() + i)], prec);
                re_row.push_back(v.re());
                im_row.push_back(v.im());
            }
            M.push_back(std::move(re_row));
            M.push_back(std::move(im_row));
        }
        auto inv = interval_inverse(std::move(M), prec);
        if (!inv) continue;
        bool ok = true;
        RR qr = RR::from_rat(Q, prec);
        for (size_t j = 0; j < d && ok; ++j) {
            RR sum = RR::exact_zero(prec);
            for (size_t i = 0; i < d; ++i) sum = sum + (*inv)[j][i].abs();
            sum = sum * qr;
            double b = sum.hi().to_double();
            if (!std::isfinite(b) || b > 9e17) ok = false;
            else bound[j] = static_cast<long>(std::floor(b));
        }
        if (ok) break;
    }

    Int total(1);
    for (size_t j = 0; j < d; ++j) total *= Int(2 * bound[j] + 1);
    if (total > cap)
        fail(errkind::cap_exceeded, "box_elements: projected " + total.get_str() +
                                        " candidates exceeds cap " + cap.get_str());

    // precompute basis embedding intervals once
    const mpfr_prec_t wp = 96;
    auto roots = K->embeddings(wp);
    std::vector<std::vector<CC>> B(d);  // B[i][j] = sigma_i(w_j), i over r1+r2
    size_t narch = static_cast<size_t>(K->r1() + K->r2());
    for (size_t i = 0; i < narch; ++i) {
        B[i].reserve(d);
        for (size_t j = 0; j < d; ++j) {
            QPoly wj = qp_normalize(
                QPoly(K->integral_basis()[j].begin(), K->integral_basis()[j].end()));
            B[i].push_back(qp_eval_cc(wj, roots[i], wp));
        }
    }

    long first_lo = -bound[0], first_hi = bound[0];
    auto out = parallel_chunks<FieldElement>(first_hi - first_lo + 1, [&](long chunk) {
        long x0 = first_lo + chunk;
        std::vector<FieldElement> local;
        std::vector<long> x(d, 0);
        x[0] = x0;
        for (size_t j = 1; j < d; ++j) x[j] = -bound[j];
        while (true) {
            // test candidate x
            std::vector<Rat> bc(d);
            for (size_t j = 0; j < d; ++j) bc[j] = Rat(x[j]);
            bool keep = true;
            std::vector<Rat> pc;  // power coords, computed lazily for exact path
            for (size_t i = 0; i < narch && keep; ++i) {
                CC v(RR::exact_zero(wp), RR::exact_zero(wp));
                for (size_t j = 0; j < d; ++j) {
                    if (x[j] == 0) continue;
                    RR c = RR::from_int(x[j], wp);
                    v = v + CC(B[i][j].re() * c, B[i][j].im() * c);
                }
                bool is_real = static_cast<int>(i) < K->r1();
                RR a2 = v.abs_sq();
                auto cmp = a2.cmp_rat(Q2);
                if (cmp) {
                    if (*cmp > 0) keep = false;
                    continue;
                }
                // ambiguous: exact boundary decision
                if (pc.empty()) pc = K->from_basis_coords(bc);
                QPoly g = qp_normalize(QPoly(pc.begin(), pc.end()));
                if (is_real) {
                    int lo = K->sign_at_real_embedding(qp_add(g, qp_const(Q)), static_cast<int>(i));
                    int hi = K->sign_at_real_embedding(qp_sub(g, qp_const(Q)), static_cast<int>(i));
                    if (lo < 0 || hi > 0) keep = false;
                } else {
                    int emb = K->r1() + (static_cast<int>(i) - K->r1());
                    if (K->cmp_abs2_at_complex_embedding(g, emb, Q2) > 0) keep = false;
                }
            }
            if (keep) {
                if (pc.empty()) pc = K->from_basis_coords(bc);
                local.push_back(K->element(pc));
            }
            // odometer over coordinates 1..d-1 (lexicographic)
            bool advanced = false;
            for (size_t j = d; j-- > 1;) {
                if (x[j] < bound[j]) {
                    ++x[j];
                    for (size_t k = j + 1; k < d; ++k) x[k] = -bound[k];
                    advanced = true;
                    break;
                }
                x[j] = -bound[j];
            }
            if (!advanced) break;
        }
        return local;
    });
    return out;
}

BoxEnumeration enumerate_box(const FieldPtr& K, const Rat& Q, const Int& cap, mpfr_prec_t prec) {
    BoxEnumeration out;
    out.Q = Q;
    out.elements = box_elements(K, Q, cap);
    int r = K->unit_rank();
    RR b = RR::from_int(2, prec).pow_ui(static_cast<unsigned long>(r + 1));
    b = b * RR::pi(prec).pow_ui(static_cast<unsigned long>(K->r2()));
    b = b * (RR::from_rat(Q, prec) + K->theta(prec)).pow_ui(static_cast<unsigned long>(K->degree()));
    b = b / RR::from_rat(Rat(abs(K->discriminant())), prec).sqrt();
    out.bound = b;
    // Lemma 5.5 cardinality certificate
    if (RR::from_int(static_cast<long>(out.elements.size()), prec).definitely_gt(out.bound))
        fail(errkind::internal, "enumerate_box: count exceeds the certified bound");
    return out;
}

std::vector<std::array<Int, 3>> build_A2(const Int& m) {
    if (m < 1) fail(errkind::domain, "build_A2: m must be positive");
    std::vector<std::array<Int, 3>> out;
    for (Int k1 = 1; k1 <= m; ++k1) {
        if (m % k1 != 0) continue;
        Int m1 = m / k1;
        for (Int k2 = 1; k2 <= m1; ++k2) {
            if (m1 % k2 != 0) continue;
            out.push_back({k1, k2, m1 / k2});
        }
    }
    Int dm = divisor_count(m);
    if (Int(static_cast<long>(out.size())) > dm * dm)
        fail(errkind::internal, "build_A2: count exceeds d(m)^2");
    return out;
}

std::pair<FieldElement, FieldElement> clear_s_denominators(const FieldElement& beta,
                                                           const SContext& ctx) {
    const auto& K = ctx.field();
    if (beta.is_zero()) return {K->one(), K->zero()};
    if (s_membership(beta, ctx) == SMembership::Outside)
        fail(errkind::domain, "clear_s_denominators: beta is not an S-integer");
    FieldElement eta1 = K->one();
    for (size_t i = 0; i < ctx.finite_places().size(); ++i) {
        long ord = valuation(beta, ctx.finite_places()[i]);
        long step = ctx.principal_powers()[i];
        long k = ord >= 0 ? ord / step : -((-ord + step - 1) / step);  // floor division
        eta1 = eta1 * ctx.prime_generators()[i].pow(-k);
    }
    FieldElement alpha = beta * eta1;
    if (!alpha.is_algebraic_integer())
        fail(errkind::internal, "clear_s_denominators: result not integral");
    // certificate |N(alpha)| <= nu^{t d h_K} N_S(beta)
    Rat lhs = abs(alpha.norm());
    unsigned long ee = static_cast<unsigned long>(ctx.t()) *
                       static_cast<unsigned long>(K->degree()) * ctx.units().h_K.get_ui();
    Rat rhs = Rat(pow_int(ctx.nu(), ee)) * s_norm(beta, ctx);
    if (lhs > rhs) fail(errkind::internal, "clear_s_denominators: Lemma 5.3 bound violated");
    return {eta1, alpha};
}

std::pair<FieldElement, FieldElement> balance_by_units(const FieldElement& alpha, const RR& c3,
                                                       const SContext& ctx, int exponent_cap) {
    const auto& K = ctx.field();
    if (alpha.is_zero()) fail(errkind::zero_input, "balance_by_units: alpha = 0");
    int r = K->unit_rank();
    Rat M = abs(alpha.norm());
    const auto& arch = ctx.arch_places();
    RR c3R = c3 * ctx.units().regulator;

    // Exact certificate for r = 1 when 2*d*c3 is an integer n (paper c3 = 1/2
    // gives n = d, the alternate 1/d gives n = 2). The arch defects satisfy
    // t_2 = -t_1, so the two-sided window reduces to
    //   |g^{2d} U^{-n}|_{v1} <= M^{2 dv1}  and  |g^{2d} U^{n}|_{v1} >= M^{2 dv1}
    // where |U|_{v1} = e^{R_K}; both sides are algebraic vs rational.
    long exact_n = -1;
    if (r == 1 && mpfr_cmp(c3.lo().raw(), c3.hi().raw()) == 0) {
        Rat c3r = c3.lo().to_rat();
        Rat n2d = c3r * 2 * K->degree();
        if (n2d.get_den() == 1 && n2d > 0) exact_n = n2d.get_num().get_si();
    }
    auto window_exact_r1 = [&](const FieldElement& g) -> bool {
        const Place& v1 = arch[0];
        const FieldElement& u = ctx.units().fundamental_units[0];
        // U with |U|_{v1} > 1 (equality impossible: R_K > 0)
        FieldElement U = u;
        for (mpfr_prec_t p = 96;; p *= 2) {
            auto cmp = abs_value_arch(u, v1, p).cmp_rat(Rat(1));
            if (cmp) {
                if (*cmp < 0) U = u.inverse();
                break;
            }
        }
        int d = K->degree();
        Rat rhs = pow_rat(M, 2 * v1.dv);
        FieldElement g2d = g.pow(2L * d);
        FieldElement hi_elem = g2d * U.pow(-exact_n);
        FieldElement lo_elem = g2d * U.pow(exact_n);
        auto le_at_v1 = [&](const FieldElement& x, const Rat& c) {
            QPoly xp = x.as_poly();
            if (v1.kind == Place::Kind::Real) {
                // |sigma x| <= c
                return K->sign_at_real_embedding(qp_sub(xp, qp_const(c)), v1.embedding_index) <= 0 &&
                       K->sign_at_real_embedding(qp_add(xp, qp_const(c)), v1.embedding_index) >= 0;
            }
            return K->cmp_abs2_at_complex_embedding(xp, v1.embedding_index, c) <= 0;
        };
        auto ge_at_v1 = [&](const FieldElement& x, const Rat& c) {
            QPoly xp = x.as_poly();
            if (v1.kind == Place::Kind::Real) {
                int s_hi = K->sign_at_real_embedding(qp_sub(xp, qp_const(c)), v1.embedding_index);
                int s_lo = K->sign_at_real_embedding(qp_add(xp, qp_const(c)), v1.embedding_index);
                return s_hi >= 0 || s_lo <= 0;  // sigma x >= c or sigma x <= -c
            }
            return K->cmp_abs2_at_complex_embedding(xp, v1.embedding_index, c) >= 0;
        };
        return le_at_v1(hi_elem, rhs) && ge_at_v1(lo_elem, rhs);
    };

    // interval certificate for r >= 2 (transcendental window boundary)
    auto window_iv = [&](const FieldElement& g, mpfr_prec_t p) -> std::optional<bool> {
        bool all = true;
        for (auto& v : arch) {
            RR lhs = abs_value_arch(g, v, p);
            RR mid = v.dv == K->degree()
                         ? RR::from_rat(M, p)
                         : (RR::from_rat(M, p).log() * RR::from_int(v.dv, p) /
                            RR::from_int(K->degree(), p))
                               .exp();
            RR up = mid * c3R.exp();
            RR dn = mid / c3R.exp();
            if (lhs.definitely_lt(dn) || up.definitely_lt(lhs)) return false;
            if (!(dn.definitely_lt(lhs) && lhs.definitely_lt(up))) all = false;
        }
        if (all) return true;
        return std::nullopt;
    };

    if (r == 0) {
        // eta2 torsion only; |alpha eta|_v = |alpha|_v already equals M^{dv/d}
        // (one archimedean place); canonical choice via trace preference
        FieldElement best = alpha;
        FieldElement t = alpha;
        for (int j = 1; j < ctx.units().w; ++j) {
            t = t * ctx.units().zeta;
            Rat bt = best.trace(), tt = t.trace();
            if (tt > bt || (tt == bt && best < t)) best = t;
        }
        FieldElement eta2 = best / alpha;
        return {eta2, best};
    }

    // approximate CVP: round the defect vector in the unit log-lattice
    const auto& units = ctx.units().fundamental_units;
    mpfr_prec_t p0 = 160;
    std::vector<double> defect;
    std::vector<std::vector<double>> U;
    for (int j = 0; j < r; ++j) {
        const Place& v = arch[static_cast<size_t>(j)];
        RR la = abs_value_arch(alpha, v, p0).log();
        RR target = RR::from_rat(M, p0).log() * RR::from_int(v.dv, p0) /
                    RR::from_int(K->degree(), p0);
        defect.push_back((la - target).mid_double());
        std::vector<double> row;
        for (int i = 0; i < r; ++i)
            row.push_back(abs_value_arch(units[static_cast<size_t>(i)], v, p0).log().mid_double());
        U.push_back(std::move(row));
    }
    // solve U n = -defect in doubles, round
    std::vector<long> n0(static_cast<size_t>(r), 0);
    {
        std::vector<std::vector<double>> A = U;
        std::vector<double> b;
        for (double x : defect) b.push_back(-x);
        for (int c = 0; c < r; ++c) {
            int piv = c;
            for (int rr = c + 1; rr < r; ++rr)
                if (std::abs(A[static_cast<size_t>(rr)][static_cast<size_t>(c)]) >
                    std::abs(A[static_cast<size_t>(piv)][static_cast<size_t>(c)]))
                    piv = rr;
            std::swap(A[static_cast<size_t>(c)], A[static_cast<size_t>(piv)]);
            std::swap(b[static_cast<size_t>(c)], b[static_cast<size_t>(piv)]);
            for (int rr = 0; rr < r; ++rr) {
                if (rr == c) continue;
                double f = A[static_cast<size_t>(rr)][static_cast<size_t>(c)] /
                           A[static_cast<size_t>(c)][static_cast<size_t>(c)];
                for (int cc = c; cc < r; ++cc)
                    A[static_cast<size_t>(rr)][static_cast<size_t>(cc)] -=
                        f * A[static_cast<size_t>(c)][static_cast<size_t>(cc)];
                b[static_cast<size_t>(rr)] -= f * b[static_cast<size_t>(c)];
            }
        }
        for (int i = 0; i < r; ++i)
            n0[static_cast<size_t>(i)] = static_cast<long>(
                std::llround(b[static_cast<size_t>(i)] / A[static_cast<size_t>(i)][static_cast<size_t>(i)]));
    }

    // widen the exponent neighborhood until a candidate certifies
    for (int radius = 0; radius <= exponent_cap; ++radius) {
        std::vector<std::vector<long>> cands;
        std::vector<long> cur(static_cast<size_t>(r), -radius);
        while (true) {
            long linf = 0;
            for (long c : cur) linf = std::max(linf, std::abs(c));
            if (linf == radius) cands.push_back(cur);
            int j = r - 1;
            while (j >= 0 && cur[static_cast<size_t>(j)] == radius) {
                cur[static_cast<size_t>(j)] = -radius;
                --j;
            }
            if (j < 0) break;
            ++cur[static_cast<size_t>(j)];
        }
        for (auto& off : cands) {
            FieldElement eta2 = K->one();
            for (int i = 0; i < r; ++i)
                eta2 = eta2 *
                       units[static_cast<size_t>(i)].pow(n0[static_cast<size_t>(i)] + off[static_cast<size_t>(i)]);
            FieldElement g = alpha * eta2;
            if (exact_n > 0) {
                // quick interval reject, exact accept
                auto quick = window_iv(g, 160);
                if (quick && !*quick) continue;
                if (window_exact_r1(g)) return {eta2, g};
                continue;
            }
            for (mpfr_prec_t p = 160; p <= 2560; p *= 2) {
                auto ok = window_iv(g, p);
                if (ok && *ok) return {eta2, g};
                if (ok && !*ok) break;
            }
        }
    }
    fail(errkind::internal, "balance_by_units: exponent cap reached without certificate");
}

A1Set build_A1(const Int& m, const ProblemData& pd, const DeltaK& delta, const Int& cap) {
    if (m < 1) fail(errkind::domain, "build_A1: m must be positive");
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    int d = K->degree();
    mpfr_prec_t prec = 192;
    unsigned long ee = static_cast<unsigned long>(ctx.t()) * static_cast<unsigned long>(d) *
                       ctx.units().h_K.get_ui();
    Int M = pow_int(ctx.nu(), ee) * m;
    RR c3 = c3_constant(K->unit_rank(), delta.value, C3Variant::Paper, d, prec);
    RR Q = d == 1 ? RR::from_rat(Rat(M), prec)
                  : (RR::from_rat(Rat(M), prec).log() / RR::from_int(d, prec)).exp();
    Q = Q * (c3 * ctx.units().regulator).exp();
    Rat Qhat = Q.hi().to_rat();

    A1Set out;
    out.m = m;
    out.Qhat = Qhat;
    for (auto& g : box_elements(K, Qhat, cap))
        if (!g.is_zero()) out.gammas.push_back(g);

    // |A1(m)| <= kappa5 m via Q + theta <= Q(1+theta)
    auto rep = kappa_report(pd, delta);
    RR k5m = rep.kappa5.exact ? RR::from_rat(Rat(*rep.kappa5.exact * m), prec)
                              : RR(rep.kappa5.upper, rep.kappa5.upper) * RR::from_rat(Rat(m), prec);
    out.kappa5m = rep.kappa5.exact ? CertifiedUpper::from_int(*rep.kappa5.exact * m)
                                   : CertifiedUpper::from_rr(k5m);
    if (RR::from_int(static_cast<long>(out.gammas.size()), prec).definitely_gt(k5m))
        fail(errkind::internal, "build_A1: cardinality exceeds kappa5 * m");
    return out;
}

std::pair<FieldElement, FieldElement> decompose(const FieldElement& beta, const A1Set& a1,
                                                const ProblemData& pd, const DeltaK& delta) {
    const auto& ctx = *pd.ctx;
    if (beta.is_zero()) fail(errkind::zero_input, "decompose: beta = 0");
    if (s_norm(beta, ctx) != Rat(a1.m))
        fail(errkind::domain, "decompose: N_S(beta) does not match the A1 level");
    auto [eta1, alpha] = clear_s_denominators(beta, ctx);
    RR c3 = c3_constant(ctx.field()->unit_rank(), delta.value, C3Variant::Paper,
                        ctx.field()->degree(), 192);
    auto [eta2, gamma] = balance_by_units(alpha, c3, ctx);
    FieldElement eps = (eta1 * eta2).inverse();
    if (eps * gamma != beta) fail(errkind::internal, "decompose: eps*gamma != beta");
    bool found = false;
    for (auto& g : a1.gammas)
        if (g == gamma) found = true;
    if (!found) fail(errkind::internal, "decompose: gamma not in A1(m)");
    return {eps, gamma};
}

}  // namespace tmk
