#include "torbench/torpair.hpp"

#include <sstream>

namespace torbench {

Check validate_torpair(const TorPairGen& tp) {
    for (std::size_t i = 0; i < tp.gens.size(); ++i) {
        const ModuleRep& g = tp.gens[i];
        if (g.side() != Side::Left) return {false, "generator " + std::to_string(i) + " is not a left module"};
        if (!g.algebra()->same_structure(*tp.algebra))
            return {false, "generator " + std::to_string(i) + " lives over a different algebra"};
        if (auto c = validate_module(g); !c) return {false, "generator " + std::to_string(i) + ": " + c.message};
    }
    return {};
}

std::string ExtNat::to_string() const {
    switch (kind_) {
        case Kind::Finite: return std::to_string(value_);
        case Kind::Exceeds: return "exceeds(" + std::to_string(value_) + ")";
        case Kind::Omega: return "omega";
    }
    return {};
}

ExtNat max(const ExtNat& a, const ExtNat& b) {
    if (a.kind() == ExtNat::Kind::Omega || b.kind() == ExtNat::Kind::Omega) return ExtNat::omega();
    if (a.kind() == ExtNat::Kind::Exceeds) return a;
    if (b.kind() == ExtNat::Kind::Exceeds) return b;
    return ExtNat::finite(std::max(a.value(), b.value()));
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
        case Status::Capped: return "capped";
    }
    return {};
}

namespace {

bool tor1_vanishes(FreeResolution& res, const TorPairGen& tp) {
    for (const auto& x : tp.gens)
        if (tor_dims(res, x, 1)[1] != 0) return false;
    return true;
}

}  // namespace

bool in_T(const ModuleRep& m, const TorPairGen& tp) {
    if (m.side() != Side::Right) throw UsageError("in_T: module must be a right module");
    FreeResolution res(m);
    return tor1_vanishes(res, tp);
}

RelPd rel_pd_both(const ModuleRep& m, const TorPairGen& tp, std::size_t bound) {
    if (m.side() != Side::Right) throw UsageError("rel_pd: module must be a right module");
    FreeResolution res(m);
    std::vector<std::vector<std::size_t>> dims;
    for (const auto& x : tp.gens) dims.push_back(tor_dims(res, x, bound + 1));

    RelPd out{ExtNat::exceeds(bound), ExtNat::exceeds(bound)};
    for (std::size_t n = 0; n <= bound; ++n) {
        bool vanish = true;
        for (const auto& d : dims) vanish = vanish && d[n + 1] == 0;
        if (vanish) {
            out.by_tor = ExtNat::finite(n);
            break;
        }
    }
    for (std::size_t n = 0; n <= bound; ++n) {
        if (in_T(res.syzygy(n).module, tp)) {
            out.by_syzygy = ExtNat::finite(n);
            break;
        }
    }
    return out;
}

ExtNat rel_pd(const ModuleRep& m, const TorPairGen& tp, std::size_t bound) {
    if (m.side() != Side::Right) throw UsageError("rel_pd: module must be a right module");
    FreeResolution res(m);
    std::vector<std::vector<std::size_t>> dims;
    for (const auto& x : tp.gens) dims.push_back(tor_dims(res, x, bound + 1));
    for (std::size_t n = 0; n <= bound; ++n) {
        bool vanish = true;
        for (const auto& d : dims) vanish = vanish && d[n + 1] == 0;
        if (vanish) return ExtNat::finite(n);
    }
    return ExtNat::exceeds(bound);
}

std::string DimensionPrediction::to_string() const {
    switch (kind) {
        case Kind::Exact: return "= " + std::to_string(value);
        case Kind::UpperBound: return "<= " + std::to_string(value);
        case Kind::Unknown: return "unknown";
    }
    return {};
}

DimensionPrediction ses_dimension_rule(const ExtNat& pd_a, const ExtNat& pd_b) {
    if (!pd_a.is_finite() || !pd_b.is_finite()) return {};
    const std::size_t a = pd_a.value(), b = pd_b.value();
    if (b < a) return {DimensionPrediction::Kind::Exact, a + 1, 1};
    if (b > a) return {DimensionPrediction::Kind::Exact, b, 2};
    return {DimensionPrediction::Kind::UpperBound, a + 1, 3};
}

SesDimensionReport ses_dimension_check(const ShortExactSeq& ses, const TorPairGen& tp, std::size_t bound) {
    if (auto c = validate_ses(ses); !c) throw UsageError("ses_dimension_check: invalid sequence: " + c.message);
    SesDimensionReport r;
    r.pd_a = rel_pd(ses.left(), tp, bound);
    r.pd_b = rel_pd(ses.middle(), tp, bound);
    r.pd_c = rel_pd(ses.right(), tp, bound);
    r.prediction = ses_dimension_rule(r.pd_a, r.pd_b);
    std::ostringstream os;
    os << "pd(A)=" << r.pd_a.to_string() << " pd(B)=" << r.pd_b.to_string() << " pd(C)=" << r.pd_c.to_string()
       << " predicted " << r.prediction.to_string();
    r.message = os.str();
    using Kind = DimensionPrediction::Kind;
    if (r.prediction.kind == Kind::Unknown) {
        r.status = Status::Inconclusive;
        return r;
    }
    if (!r.pd_c.is_finite()) {
        r.status = Status::Inconclusive;
        return r;
    }
    const std::size_t c = r.pd_c.value();
    const bool ok = r.prediction.kind == Kind::Exact ? c == r.prediction.value : c <= r.prediction.value;
    r.status = ok ? Status::Pass : Status::Fail;
    return r;
}

ShortExactSeq ses_from_submodule(const ModuleRep& b, const FpMatrix& gens) {
    const Submodule a = submodule(b, gens);
    const Quotient c = quotient(b, a);
    return {a.inclusion, c.projection};
}

ShortExactSeq random_ses(const AlgebraPtr& a, Side side, std::mt19937_64& rng, std::size_t max_gens,
                         std::size_t max_rank) {
    const ModuleRep b = random_module(a, side, rng, max_gens, max_rank);
    const std::size_t g = rng() % (max_gens + 1);
    FpMatrix gens(g, b.dim(), a->modulus());
    for (std::size_t i = 0; i < g; ++i) {
        const Vec v = random_vector(rng, b.dim(), a->modulus());
        std::copy(v.begin(), v.end(), gens.row(i).begin());
    }
    return ses_from_submodule(b, gens);
}

ShortExactSeq split_ses(const ModuleRep& a, const ModuleRep& c) {
    const DirectSum s = direct_sum({a, c}, a.algebra(), a.side());
    return {s.injections[0], s.projections[1]};
}

bool xpure_check(const ShortExactSeq& ses, const std::vector<ModuleRep>& xs) {
    for (const auto& x : xs) {
        const TensorProduct ta = tensor(ses.left(), x);
        const TensorProduct tb = tensor(ses.middle(), x);
        if (rank(tensor_map(ses.incl, x, ta, tb)) != ta.dim) return false;
    }
    return true;
}

ModuleRep random_member(const TorPairGen& tp, std::mt19937_64& rng, std::size_t max_rank) {
    const std::size_t choice = rng() % 3;
    if (choice != 0) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            ModuleRep m = random_module(tp.algebra, Side::Right, rng, 2, max_rank);
            if (in_T(m, tp)) return m;
        }
    }
    return free_module(tp.algebra, Side::Right, 1 + rng() % std::max<std::size_t>(max_rank, 1));
}

ProbeReport xpure_quotient_closure_probe(const TorPairGen& tp, std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(seed);
    ProbeReport r;
    r.seed = seed;
    for (std::size_t t = 0; t < trials; ++t) {
        ShortExactSeq ses = [&] {
            if (rng() % 2 == 0) {
                const ModuleRep x = random_member(tp, rng, 2);
                const ModuleRep y = random_member(tp, rng, 2);
                return split_ses(x, y);
            }
            const ModuleRep m = random_member(tp, rng, 2);
            const std::size_t g = 1 + rng() % 2;
            FpMatrix gens(g, m.dim(), m.modulus());
            for (std::size_t i = 0; i < g; ++i) {
                const Vec v = random_vector(rng, m.dim(), m.modulus());
                std::copy(v.begin(), v.end(), gens.row(i).begin());
            }
            return ses_from_submodule(m, gens);
        }();
        ++r.trials;
        if (!xpure_check(ses, tp.gens)) continue;
        ++r.fired;
        if (!in_T(ses.right(), tp)) {
            if (r.violations == 0) r.witness = "trial " + std::to_string(t) + ": gens-pure quotient outside T";
            ++r.violations;
        }
    }
    r.status = r.violations == 0 ? Status::Pass : Status::Fail;
    return r;
}

ProbeReport hereditary_probe(const TorPairGen& tp, std::uint64_t seed, std::size_t trials, std::size_t bound) {
    std::mt19937_64 rng(seed);
    ProbeReport r;
    r.seed = seed;
    r.bound = bound;
    for (std::size_t t = 0; t < trials; ++t) {
        const ModuleRep m = random_member(tp, rng, 2);
        ++r.trials;
        FreeResolution res(m);
        ++r.fired;
        if (!in_T(res.syzygy(1).module, tp)) {
            if (r.violations == 0) r.witness = "trial " + std::to_string(t) + ": first syzygy leaves T";
            ++r.violations;
        }
        for (std::size_t i = 0; i < tp.gens.size(); ++i) {
            const auto dims = tor_dims(res, tp.gens[i], bound);
            for (std::size_t n = 2; n <= bound; ++n) {
                ++r.fired;
                if (dims[n] != 0) {
                    if (r.violations == 0)
                        r.witness = "trial " + std::to_string(t) + ": Tor_" + std::to_string(n) + " against generator " +
                                    std::to_string(i) + " is nonzero";
                    ++r.violations;
                }
            }
        }
    }
    r.status = r.violations == 0 ? Status::Pass : Status::Fail;
    return r;
}

FiniteProductReport finite_product_pd(const std::vector<ModuleRep>& modules, const TorPairGen& tp, std::size_t bound) {
    FiniteProductReport r;
    std::ostringstream msg;
    for (const auto& m : modules) {
        r.individual.push_back(rel_pd(m, tp, bound));
        r.max_pd = max(r.max_pd, r.individual.back());
    }
    const ModuleRep sum = direct_sum(modules, tp.algebra, Side::Right).module;
    r.sum_pd = rel_pd(sum, tp, bound);
    if (!(r.sum_pd == r.max_pd)) {
        r.status = Status::Fail;
        msg << "pd(sum)=" << r.sum_pd.to_string() << " but max=" << r.max_pd.to_string() << "; ";
    }

    // Sums of the members of pd <= m.
    for (std::size_t m = 0; m <= bound; ++m) {
        std::vector<ModuleRep> layer;
        for (std::size_t i = 0; i < modules.size(); ++i)
            if (r.individual[i].is_finite() && r.individual[i].value() <= m) layer.push_back(modules[i]);
        r.layered.push_back(rel_pd(direct_sum(layer, tp.algebra, Side::Right).module, tp, bound));
    }
    const ExtNat& base = r.layered.front();
    for (std::size_t m = 0; m + 1 <= bound; ++m) {
        const ExtNat& lo = r.layered[m];
        const ExtNat& hi = r.layered[m + 1];
        if (!lo.is_finite() || !hi.is_finite() || !base.is_finite()) continue;
        if (lo.value() > hi.value() || hi.value() > base.value() + m + 1) {
            r.status = Status::Fail;
            msg << "layer chain broken at m=" << m << "; ";
        }
    }

    // Summed presentations 0 -> sum K_i -> sum P_i -> sum T_i -> 0 for members of positive pd.
    std::vector<ModuleRep> ks, ps, ts;
    std::vector<FpMatrix> incls, projs;
    for (std::size_t i = 0; i < modules.size(); ++i) {
        if (!r.individual[i].is_finite() || r.individual[i].value() == 0) continue;
        FreeResolution res(modules[i]);
        const Submodule k = res.syzygy(1);
        const ModuleMap eps = res.augmentation();
        ks.push_back(k.module);
        ps.push_back(eps.source);
        ts.push_back(modules[i]);
        incls.push_back(k.inclusion.matrix);
        projs.push_back(eps.matrix);
    }
    if (!ks.empty()) {
        const auto p = tp.algebra->modulus();
        const ModuleRep ksum = direct_sum(ks, tp.algebra, Side::Right).module;
        const ModuleRep psum = direct_sum(ps, tp.algebra, Side::Right).module;
        const ModuleRep tsum = direct_sum(ts, tp.algebra, Side::Right).module;
        const ShortExactSeq ses{{ksum, psum, block_diag(incls, p)}, {psum, tsum, block_diag(projs, p)}};
        if (auto c = validate_ses(ses); !c) {
            r.status = Status::Fail;
            msg << "summed presentation is not exact: " << c.message << "; ";
        } else {
            const SesDimensionReport s = ses_dimension_check(ses, tp, bound);
            if (s.status == Status::Fail) {
                r.status = Status::Fail;
                msg << "summed presentation breaks the dimension rule: " << s.message << "; ";
            }
        }
    }
    r.message = msg.str();
    return r;
}

}  // namespace torbench
