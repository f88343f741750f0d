#include "tmk/sunit_solver.hpp"

#include <algorithm>

#include "tmk/errors.hpp"

namespace tmk {

namespace {

std::vector<long> flat_key(const UnitEquationSolution& s) {
    std::vector<long> k;
    for (auto& e : s.exps) {
        k.push_back(e.zeta_pow);
        k.insert(k.end(), e.unit_exp.begin(), e.unit_exp.end());
        k.insert(k.end(), e.g_exp.begin(), e.g_exp.end());
    }
    return k;
}

}  // namespace

// all S-units with free exponents in [-B, B], torsion exponent in [0, w)
std::vector<std::pair<ExponentVector, FieldElement>> sunit_box_values(const SContext& ctx, long B,
                                                                      const Int& cap) {
    const auto& K = ctx.field();
    int r = K->unit_rank(), t = ctx.t(), w = ctx.units().w;
    Int total = Int(w) * pow_int(Int(2 * B + 1), static_cast<unsigned long>(r + t));
    if (total > cap)
        fail(errkind::cap_exceeded,
             "unit box of " + total.get_str() + " exponent vectors exceeds cap " + cap.get_str());
    std::vector<std::pair<ExponentVector, FieldElement>> out;
    auto powers = [&](const FieldElement& g) {
        std::vector<FieldElement> ps;
        ps.reserve(static_cast<size_t>(2 * B + 1));
        for (long e = -B; e <= B; ++e) ps.push_back(g.pow(e));
        return ps;
    };
    std::vector<std::vector<FieldElement>> upow, gpow;
    for (int i = 0; i < r; ++i)
        upow.push_back(powers(ctx.units().fundamental_units[static_cast<size_t>(i)]));
    for (int j = 0; j < t; ++j) gpow.push_back(powers(ctx.prime_generators()[static_cast<size_t>(j)]));
    std::vector<FieldElement> zpow(static_cast<size_t>(w), K->one());
    for (int j = 1; j < w; ++j)
        zpow[static_cast<size_t>(j)] = zpow[static_cast<size_t>(j - 1)] * ctx.units().zeta;

    ExponentVector v;
    v.unit_exp.assign(static_cast<size_t>(r), -B);
    v.g_exp.assign(static_cast<size_t>(t), -B);
    while (true) {
        for (int z = 0; z < w; ++z) {
            ExponentVector cur = v;
            cur.zeta_pow = z;
            FieldElement val = zpow[static_cast<size_t>(z)];
            for (int i = 0; i < r; ++i)
                val = val * upow[static_cast<size_t>(i)]
                                 [static_cast<size_t>(cur.unit_exp[static_cast<size_t>(i)] + B)];
            for (int j = 0; j < t; ++j)
                val = val * gpow[static_cast<size_t>(j)]
                                [static_cast<size_t>(cur.g_exp[static_cast<size_t>(j)] + B)];
            out.emplace_back(std::move(cur), std::move(val));
        }
        bool adv = false;
        for (size_t i = 0; i < static_cast<size_t>(r + t); ++i) {
            long& slot =
                i < static_cast<size_t>(r) ? v.unit_exp[i] : v.g_exp[i - static_cast<size_t>(r)];
            if (slot < B) {
                ++slot;
                for (size_t k = 0; k < i; ++k) {
                    long& s2 =
                        k < static_cast<size_t>(r) ? v.unit_exp[k] : v.g_exp[k - static_cast<size_t>(r)];
                    s2 = -B;
                }
                adv = true;
                break;
            }
        }
        if (!adv) break;
    }
    return out;
}

namespace {

std::vector<FieldElement> dedupe_sorted(std::vector<FieldElement> v) {
    std::sort(v.begin(), v.end(),
              [](const FieldElement& a, const FieldElement& b) { return a.coords() < b.coords(); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

SolutionSetReport solve_unit_equation(const UnitEquation& eq, const Int& cap) {
    size_t l = eq.deltas.size();
    if (l < 2) fail(errkind::domain, "unit equation needs l >= 2");
    for (auto& d : eq.deltas)
        if (d.is_zero()) fail(errkind::domain, "unit equation: zero delta");
    if (eq.box < 0) fail(errkind::domain, "unit equation: negative box");
    const auto& ctx = *eq.ctx;
    const auto& K = ctx.field();

    auto base = sunit_box_values(ctx, eq.box, cap);
    Int total = 1;
    for (size_t i = 0; i + 1 < l; ++i) total *= Int(static_cast<long>(base.size()));
    if (total > cap)
        fail(errkind::cap_exceeded,
             "unit equation search space " + total.get_str() + " exceeds cap " + cap.get_str());

    SolutionSetReport rep;
    rep.bound = evertse_bound(static_cast<int>(l), ctx.rank());
    long degenerate = 0;

    std::vector<size_t> idx(l - 1, 0);
    std::vector<UnitEquationSolution> sols;
    while (true) {
        FieldElement acc = K->zero();
        for (size_t i = 0; i + 1 < l; ++i) acc = acc + eq.deltas[i] * base[idx[i]].second;
        FieldElement rest = K->one() - acc;  // = delta_l x_l
        if (!rest.is_zero()) {
            FieldElement xl = rest / eq.deltas[l - 1];
            auto xe = sunit_exponents(xl, ctx);
            if (xe) {
                UnitEquationSolution sol;
                for (size_t i = 0; i + 1 < l; ++i) {
                    sol.exps.push_back(base[idx[i]].first);
                    sol.values.push_back(base[idx[i]].second);
                }
                sol.exps.push_back(*xe);
                sol.values.push_back(xl);
                bool degen = false;
                for (unsigned long mask = 1; mask + 1 < (1ul << l); ++mask) {
                    FieldElement sub = K->zero();
                    for (size_t i = 0; i < l; ++i)
                        if (mask & (1ul << i)) sub = sub + eq.deltas[i] * sol.values[i];
                    if (sub.is_zero()) {
                        degen = true;
                        break;
                    }
                }
                if (degen) ++degenerate;
                else sols.push_back(std::move(sol));
            }
        }
        bool adv = false;
        for (size_t i = l - 1; i-- > 0;) {
            if (idx[i] + 1 < base.size()) {
                ++idx[i];
                for (size_t k = i + 1; k + 1 < l; ++k) idx[k] = 0;
                adv = true;
                break;
            }
        }
        if (!adv) break;
    }
    std::sort(sols.begin(), sols.end(),
              [](const UnitEquationSolution& a, const UnitEquationSolution& b) {
                  return flat_key(a) < flat_key(b);
              });
    rep.degenerate_excluded = degenerate;
    rep.solutions = std::move(sols);
    if (Int(static_cast<long>(rep.solutions.size())) > rep.bound)
        fail(errkind::internal, "unit equation: count exceeds the Evertse bound");
    return rep;
}

std::vector<FieldElement> build_A3(const std::vector<FieldElement>& deltas, const SCtxPtr& ctx,
                                   long box, const Int& cap) {
    if (deltas.size() < 2) fail(errkind::domain, "A3 needs l >= 2");
    UnitEquation eq{deltas, ctx, box};
    auto rep = solve_unit_equation(eq, cap);
    std::vector<FieldElement> out{ctx->field()->one()};
    for (auto& s : rep.solutions) out.push_back(s.values[0]);
    out = dedupe_sorted(std::move(out));
    Int limit = 1 + evertse_bound(static_cast<int>(deltas.size()), ctx->rank());
    if (Int(static_cast<long>(out.size())) > limit)
        fail(errkind::internal, "A3 exceeds 1 + Evertse bound");
    return out;
}

std::vector<FieldElement> build_A3_tilde(const std::vector<FieldElement>& deltas,
                                         const SCtxPtr& ctx, long box, const Int& cap) {
    size_t l = deltas.size();
    std::vector<FieldElement> uni;
    for (size_t i = 0; i < l; ++i) {
        // sigma = identity (i = 0) or the transposition (1 i)
        std::vector<FieldElement> ds = deltas;
        std::swap(ds[0], ds[i]);
        auto a3 = build_A3(ds, ctx, box, cap);
        uni.insert(uni.end(), a3.begin(), a3.end());
    }
    std::vector<FieldElement> out;
    for (auto& x : uni) {
        out.push_back(x.inverse());
        out.push_back(std::move(x));
    }
    return dedupe_sorted(std::move(out));
}

std::vector<FieldElement> build_A4(const std::array<FieldElement, 3>& ap, const SCtxPtr& ctx,
                                   long box, const Int& cap) {
    if (ap[0] == ap[1] || ap[0] == ap[2] || ap[1] == ap[2])
        fail(errkind::domain, "A4 needs three pairwise distinct alpha'");
    // from (6.1): (t2/t1)(a3'-a1')/(a3'-a2') + (t3/t1)(a1'-a2')/(a3'-a2') = 1
    FieldElement den = ap[2] - ap[1];
    std::vector<FieldElement> deltas{(ap[2] - ap[0]) / den, (ap[0] - ap[1]) / den};
    UnitEquation eq{deltas, ctx, box};
    auto rep = solve_unit_equation(eq, cap);
    std::vector<FieldElement> out{ctx->field()->one()};
    for (auto& s : rep.solutions) {
        out.push_back(s.values[0]);
        out.push_back(s.values[1]);
    }
    out = dedupe_sorted(std::move(out));
    auto [k3, k4] = small_kappas(ctx->rank());
    (void)k4;
    if (Int(static_cast<long>(out.size())) > k3) fail(errkind::internal, "A4 exceeds kappa3");
    return out;
}

}  // namespace tmk
