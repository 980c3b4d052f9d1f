#include <algorithm>
#include <chrono>

#include "torbench/corpus.hpp"
#include "torbench/workbench.hpp"

namespace torbench {

namespace {

struct Tally {
    std::size_t checks = 0, failures = 0, inconclusive = 0, capped = 0;
    std::string first_failure;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (failures == 0) first_failure = what;
        ++failures;
    }
    void record(Status s, const std::string& what) {
        ++checks;
        if (s == Status::Inconclusive) ++inconclusive;
        if (s == Status::Capped) ++capped;
        if (s == Status::Fail) {
            if (failures == 0) first_failure = what;
            ++failures;
        }
    }
};

class SuiteRun {
public:
    explicit SuiteRun(std::string name) : name_(std::move(name)) {}

    Tally& operator[](const std::string& category) {
        for (auto& [k, t] : tallies_)
            if (k == category) return t;
        return tallies_.emplace_back(category, Tally{}).second;
    }
    Json& extra() { return extra_; }

    Report finish(const SuiteConfig& cfg) const {
        Report r;
        r.task = {{"command", "suite"}, {"name", name_}, {"trials", cfg.trials}};
        r.seed = cfg.seed;
        r.bound = cfg.bound;
        bool failed = false, capped = false;
        for (const auto& [k, t] : tallies_) {
            Json j{{"checks", t.checks}, {"failures", t.failures}};
            if (t.inconclusive) j["inconclusive"] = t.inconclusive;
            if (t.capped) j["capped"] = t.capped;
            r.payload[k] = j;
            if (t.failures) r.witnesses[k] = t.first_failure;
            failed = failed || t.failures > 0;
            capped = capped || t.capped > 0;
        }
        for (auto it = extra_.begin(); it != extra_.end(); ++it) r.payload[it.key()] = *it;
        r.status = failed ? Status::Fail : capped ? Status::Capped : Status::Pass;
        return r;
    }

private:
    std::string name_;
    std::vector<std::pair<std::string, Tally>> tallies_;
    Json extra_ = Json::object();
};

std::mt19937_64 suite_rng(const SuiteConfig& cfg, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(tag)};
    return std::mt19937_64(seq);
}

AlgebraPtr pick_algebra(std::mt19937_64& rng) {
    const auto& names = corpus_algebra_names();
    return corpus_algebra(names[rng() % names.size()]);
}

std::string trial(std::size_t t, const std::string& what) { return "trial " + std::to_string(t) + ": " + what; }

FpMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::uint32_t p) {
    FpMatrix m(rows, cols, p);
    for (std::size_t r = 0; r < rows; ++r) {
        const Vec v = random_vector(rng, cols, p);
        std::copy(v.begin(), v.end(), m.row(r).begin());
    }
    return m;
}

Report linalg_suite(const SuiteConfig& cfg) {
    SuiteRun run("linalg");
    auto rng = suite_rng(cfg, 1);
    const std::uint32_t primes[] = {2, 3, 5, 7, 65521};
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::uint32_t p = primes[rng() % 5];
        const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        FpMatrix m = random_matrix(rng, rows, cols, p);
        // Force some rank deficiency.
        if (rows > 1 && rng() % 2) {
            for (std::size_t c = 0; c < cols; ++c) m(rows - 1, c) = m(0, c);
        }
        const Rref a = rref(m), b = rref(m);
        run["determinism"].check(a.reduced == b.reduced && a.pivots == b.pivots, trial(t, "rref differs between runs"));
        run["rref_idempotent"].check(rref(a.reduced).reduced == a.reduced, trial(t, "rref is not idempotent"));
        const FpMatrix k = kernel_basis(m);
        run["rank_nullity"].check(a.rank + k.rows() == cols, trial(t, "rank + nullity != cols"));
        run["kernel"].check((m * transpose(k)).is_zero(), trial(t, "kernel vector not annihilated"));
        const FpMatrix lk = left_kernel_basis(m);
        run["left_kernel"].check((lk * m).is_zero() && a.rank + lk.rows() == rows, trial(t, "left kernel wrong"));
        const Vec x = random_vector(rng, cols, p);
        const Vec rhs = mat_vec(m, x);
        const auto sol = solve(m, rhs);
        run["solve"].check(sol && mat_vec(m, *sol) == rhs, trial(t, "consistent system not solved"));
        if (rows == cols && a.rank == rows) {
            const auto inv = inverse(m);
            run["inverse"].check(inv && *inv * m == FpMatrix::identity(rows, p), trial(t, "inverse wrong"));
        }
        const FpMatrix sub = row_space_basis(random_matrix(rng, rng() % (cols + 1), cols, p));
        const QuotientSpace q = quotient_space(cols, sub);
        run["quotient"].check(q.dim + sub.rows() == cols && (sub * transpose(q.projection)).is_zero() &&
                                  q.section * transpose(q.projection) == FpMatrix::identity(q.dim, p),
                              trial(t, "quotient space wrong"));
    }
    return run.finish(cfg);
}

Report algebra_suite(const SuiteConfig& cfg) {
    SuiteRun run("algebra");
    auto rng = suite_rng(cfg, 2);
    for (const auto& name : corpus_algebra_names()) {
        const AlgebraPtr a = corpus_algebra(name);
        run["validate"].check(validate_algebra(*a).valid, name + " fails validation");
        const Algebra op = opposite(*a);
        run["opposite"].check(validate_algebra(op).valid && opposite(op).same_structure(*a),
                              name + ": opposite is not an involution");
        EchelonBasis span(a->dim(), a->modulus());
        std::vector<Vec> frontier{a->unit()};
        span.insert(a->unit());
        while (!frontier.empty()) {
            std::vector<Vec> next;
            for (const auto& x : frontier)
                for (std::size_t g : a->generators()) {
                    Vec y = a->multiply(x, a->basis_vector(g));
                    if (span.insert(y)) next.push_back(std::move(y));
                }
            frontier = std::move(next);
        }
        run["generators"].check(span.dim() == a->dim(), name + ": generators do not generate");
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const Vec x = random_vector(rng, a->dim(), a->modulus());
            const Vec y = random_vector(rng, a->dim(), a->modulus());
            const Vec z = random_vector(rng, a->dim(), a->modulus());
            run["associativity"].check(a->multiply(a->multiply(x, y), z) == a->multiply(x, a->multiply(y, z)),
                                       name + ": " + trial(t, "(xy)z != x(yz)"));
            run["unit"].check(a->multiply(a->unit(), x) == x && a->multiply(x, a->unit()) == x,
                              name + ": " + trial(t, "unit law"));
        }
    }
    return run.finish(cfg);
}

Report modules_suite(const SuiteConfig& cfg) {
    SuiteRun run("modules");
    auto rng = suite_rng(cfg, 3);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const AlgebraPtr a = pick_algebra(rng);
        const Side side = rng() % 2 ? Side::Right : Side::Left;
        const ModuleRep m = random_module(a, side, rng, 2, 2);
        const ModuleRep n = random_module(a, side, rng, 2, 2);
        run["validate"].check(static_cast<bool>(validate_module(m)), trial(t, "random module invalid"));
        run["double_dual"].check(dual(dual(m)) == m, trial(t, "dual of dual differs"));
        if (m.dim() > 0) run["endomorphisms"].check(hom_dim(m, m) >= 1, trial(t, "identity missing from End"));
        const IsoVerdict self = is_isomorphic(m, m, t);
        run["iso_reflexive"].check(self.verdict == Verdict::Yes && self.witness &&
                                       verify_isomorphism(m, m, *self.witness),
                                   trial(t, "module not isomorphic to itself"));
        const IsoVerdict mn = is_isomorphic(m, n, t), nm = is_isomorphic(n, m, t);
        run["iso_symmetric"].check(mn.verdict == nm.verdict, trial(t, "isomorphism verdict not symmetric"));
        const Submodule s = submodule(m, random_matrix(rng, rng() % 2 + 1, m.dim(), m.modulus()));
        const Quotient q = quotient(m, s);
        run["submodule_quotient"].check(s.module.dim() + q.module.dim() == m.dim() &&
                                            static_cast<bool>(validate_map(q.projection)) &&
                                            kernel(q.projection).module.dim() == s.module.dim(),
                                        trial(t, "submodule and quotient dimensions disagree"));
        const ModuleRep x = random_module(a, side, rng, 2, 2);
        run["hom_additivity"].check(hom_dim(direct_sum(m, n), x) == hom_dim(m, x) + hom_dim(n, x),
                                    trial(t, "Hom not additive"));
    }
    return run.finish(cfg);
}

Report homology_suite(const SuiteConfig& cfg) {
    SuiteRun run("homology");
    auto rng = suite_rng(cfg, 4);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const AlgebraPtr a = pick_algebra(rng);
        const ModuleRep m = random_module(a, Side::Right, rng, 2, 2);
        const ModuleRep n = random_module(a, Side::Left, rng, 2, 2);
        FreeResolution rm(m), rn(n);
        const auto first = tor_dims(rm, n, 4), second = tor_dims(rn, m, 4);
        run["tor_balance"].check(first == second, trial(t, a->name() + ": Tor differs by resolved side"));
        run["resolution_exact"].check(rm.verify_exactness().ok && rn.verify_exactness().ok,
                                      trial(t, "resolution not exact"));
        run["tensor_is_tor0"].check(tensor(m, n).dim == first[0], trial(t, "Tor_0 differs from the tensor product"));
    }

    const AlgebraPtr d = corpus_algebra("D");
    const ModuleRep k = simple_modules(d, Side::Right)[0];
    const ModuleRep kl = simple_modules(d, Side::Left)[0];
    FreeResolution rk(k);
    const auto tk = tor_dims(rk, kl, cfg.bound);
    run["spot_values"].check(std::all_of(tk.begin(), tk.end(), [](std::size_t v) { return v == 1; }),
                             "D: dim Tor_n(k, k) != 1 for some n <= bound");
    run["spot_values"].check(ext_dims(rk, k, 1)[1] == 1, "D: dim Ext^1(k, k) != 1");
    run["spot_values"].check(ext_dims(rk, regular_module(d, Side::Right), 1)[1] == 0, "D: dim Ext^1(k, D) != 0");

    const AlgebraPtr c3 = corpus_algebra("C3"), t2 = corpus_algebra("T2");
    for (std::size_t t = 0; t < cfg.trials / 2; ++t) {
        const ModuleRep m = random_module(c3, Side::Right, rng, 2, 2);
        const ModuleRep n = random_module(c3, Side::Left, rng, 2, 2);
        run["semisimple_tor1"].check(tor(1, m, n).dim == 0, trial(t, "C3: Tor_1 nonzero"));
        const ModuleRep u = random_module(t2, Side::Right, rng, 2, 2);
        const ModuleRep v = random_module(t2, Side::Left, rng, 2, 2);
        FreeResolution ru(u);
        const auto dims = tor_dims(ru, v, cfg.bound);
        run["hereditary_tor"].check(std::all_of(dims.begin() + std::min<std::size_t>(2, dims.size()), dims.end(),
                                                [](std::size_t x) { return x == 0; }),
                                    trial(t, "T2: Tor_n nonzero for some n >= 2"));
    }

    for (std::size_t t = 0; t < std::max<std::size_t>(cfg.trials / 4, 1); ++t) {
        const AlgebraPtr a = pick_algebra(rng);
        const ShortExactSeq ses = random_ses(a, Side::Right, rng, 2, 2);
        const ModuleRep s = random_module(a, Side::Left, rng, 2, 2);
        const ConnectingReport c = connecting_check(ses, s, 3);
        run["long_exact_sequence"].check(c.ok, trial(t, a->name() + ": " + c.message));
        const ModuleRep m = random_module(a, Side::Right, rng, 2, 2);
        const ModuleRep n = random_module(a, Side::Right, rng, 2, 2);
        bool reps_ok = true;
        try {
            ext(1, m, n, true);
        } catch (const std::logic_error&) {
            reps_ok = false;
        }
        run["ext_representatives"].check(reps_ok, trial(t, "Ext^1 representatives disagree with the dimension"));
    }
    return run.finish(cfg);
}

Report relpd_suite(const SuiteConfig& cfg) {
    SuiteRun run("relpd");
    auto rng = suite_rng(cfg, 5);
    Json exceeded = Json::object();
    for (const auto& tp : corpus_torpairs()) {
        std::size_t over = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const ModuleRep m = random_module(tp.algebra, Side::Right, rng, 2, 2);
            const RelPd pd = rel_pd_both(m, tp, cfg.bound);
            run["agreement"].check(pd.agree(), tp.name + ": " + trial(t, "Tor route " + pd.by_tor.to_string() +
                                                                        " vs syzygy route " + pd.by_syzygy.to_string()));
            if (!pd.by_tor.is_finite()) ++over;
            if (tp.name == "T2<simples>")
                run["hereditary_bound"].check(pd.by_tor.is_finite() && pd.by_tor.value() <= 1,
                                              trial(t, "T2: relative dimension above 1"));
        }
        exceeded[tp.name] = over;
    }
    run.extra()["exceeds_bound"] = exceeded;
    return run.finish(cfg);
}

Report dimension_suite(const SuiteConfig& cfg) {
    SuiteRun run("dimension-arithmetic");
    auto rng = suite_rng(cfg, 6);
    const auto tps = corpus_torpairs();
    std::size_t cases[4] = {0, 0, 0, 0};
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const TorPairGen& tp = tps[t % tps.size()];
        const ShortExactSeq ses =
            rng() % 4 == 0
                ? split_ses(random_module(tp.algebra, Side::Right, rng, 2, 2), random_module(tp.algebra, Side::Right, rng, 2, 2))
                : random_ses(tp.algebra, Side::Right, rng, 2, 2);
        const SesDimensionReport rep = ses_dimension_check(ses, tp, cfg.bound);
        run["ses_rule"].record(rep.status, tp.name + ": " + trial(t, rep.message));
        if (rep.status == Status::Inconclusive) {
            const bool justified = !rep.pd_a.is_finite() || !rep.pd_b.is_finite() || !rep.pd_c.is_finite();
            run["inconclusive_justified"].check(justified, trial(t, "inconclusive without exceeding the bound"));
        }
        cases[rep.prediction.rule_case]++;
    }
    run.extra()["rule_cases"] = {{"unknown", cases[0]}, {"pdB<pdA", cases[1]}, {"pdB>pdA", cases[2]}, {"equal", cases[3]}};
    return run.finish(cfg);
}

Report purity_suite(const SuiteConfig& cfg) {
    SuiteRun run("purity");
    auto rng = suite_rng(cfg, 7);
    Json fired = Json::object();
    for (const auto& tp : corpus_torpairs()) {
        const ProbeReport p = xpure_quotient_closure_probe(tp, rng(), cfg.trials);
        run["pure_quotient_closure"].record(p.status, tp.name + ": " + p.witness);
        fired[tp.name] = p.fired;
        const ModuleRep free1 = free_module(tp.algebra, Side::Left, 1);
        for (std::size_t t = 0; t < std::max<std::size_t>(cfg.trials / 10, 1); ++t) {
            const ShortExactSeq ses = random_ses(tp.algebra, Side::Right, rng, 2, 2);
            run["free_tests_always_pure"].check(xpure_check(ses, {free1}), tp.name + ": " + trial(t, "not pure against free"));
            const ShortExactSeq split = split_ses(ses.left(), ses.right());
            run["split_always_pure"].check(xpure_check(split, tp.gens), tp.name + ": " + trial(t, "split sequence not pure"));
        }
    }
    run.extra()["fired"] = fired;
    return run.finish(cfg);
}

Report hereditary_suite(const SuiteConfig& cfg) {
    SuiteRun run("hereditary");
    auto rng = suite_rng(cfg, 8);
    for (const auto& tp : corpus_torpairs()) {
        const ProbeReport p = hereditary_probe(tp, rng(), cfg.trials, cfg.bound);
        run["probe"].record(p.status, tp.name + ": " + p.witness);
    }
    return run.finish(cfg);
}

Report products_suite(const SuiteConfig& cfg) {
    SuiteRun run("products");
    auto rng = suite_rng(cfg, 9);
    const auto tps = corpus_torpairs();
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const TorPairGen& tp = tps[t % tps.size()];
        std::vector<ModuleRep> family;
        const std::size_t size = 1 + rng() % 4;
        for (std::size_t i = 0; i < size; ++i) family.push_back(random_module(tp.algebra, Side::Right, rng, 2, 2));
        const FiniteProductReport rep = finite_product_pd(family, tp, cfg.bound);
        run["sum_equals_max"].check(rep.sum_pd == rep.max_pd, tp.name + ": " + trial(t, rep.message));
        run["layered_and_presentations"].record(rep.status, tp.name + ": " + trial(t, rep.message));
        const ModuleRep with_free = direct_sum(family.front(), free_module(tp.algebra, Side::Right, 1));
        run["free_summand"].check(rel_pd(with_free, tp, cfg.bound) == rep.individual.front(),
                                  tp.name + ": " + trial(t, "adding a free summand changed the dimension"));
    }
    return run.finish(cfg);
}

Report approximation_suite(const SuiteConfig& cfg) {
    SuiteRun run("approximation");
    auto rng = suite_rng(cfg, 10);

    const AlgebraPtr d = corpus_algebra("D");
    const std::vector<ModuleRep> gk = simple_modules(d, Side::Right);
    const Completion c = et_completion(gk[0], gk, cfg.cap);
    const ModuleRep dreg = regular_module(d, Side::Right);
    run["completion_D_k"].check(c.status == Status::Pass && c.stages.size() == 1, "D: completion of k is not one stage");
    run["completion_D_k"].check(is_isomorphic(c.ses.middle(), dreg).verdict == Verdict::Yes, "D: middle term is not D");
    run["completion_D_k"].check(is_isomorphic(c.ses.right(), gk[0]).verdict == Verdict::Yes, "D: cokernel is not k");
    run["completion_D_k"].check(ext(1, gk[0], c.ses.middle()).dim == 0, "D: Ext^1(k, P) != 0");
    run["completion_D_k"].check(static_cast<bool>(filtration_verify(c.filtration, gk)), "D: filtration does not verify");
    run["completion_D_k"].check(static_cast<bool>(validate_ses(c.ses)), "D: completion sequence not exact");

    const std::vector<std::string> algebras{"D", "T2", "C3"};
    std::vector<std::vector<ModuleRep>> gens;
    std::vector<Battery> batteries;
    for (const auto& name : algebras) {
        gens.push_back(simple_modules(corpus_algebra(name), Side::Right));
        batteries.push_back(filtered_battery(gens.back(), cfg.cap));
        const Battery& b = batteries.back();
        for (std::size_t i = 0; i < b.modules.size(); ++i)
            run["battery_filtered"].check(static_cast<bool>(filtration_verify(b.witnesses[i], gens.back())),
                                          name + ": battery module " + std::to_string(i) + " witness fails");
    }

    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::size_t ai = t % algebras.size();
        const AlgebraPtr a = corpus_algebra(algebras[ai]);
        const ModuleRep m = random_module(a, Side::Right, rng, 2, 2);
        const Cover cover = battery_cover(m, batteries[ai]);
        const PrecoverResult p = deconstructible_precover(m, gens[ai], cover, batteries[ai].modules, cfg.cap);
        run["precover"].record(p.status, algebras[ai] + ": " + trial(t, p.message));
        if (p.status == Status::Pass) {
            const Submodule tr = trace(batteries[ai].modules, m);
            run["precover_image_is_trace"].check(rank(p.map.matrix) == tr.module.dim(),
                                                 algebras[ai] + ": " + trial(t, "image differs from the trace"));
        }

        std::vector<ModuleRep> gset = gens[ai];
        gset.push_back(regular_module(a, Side::Right));
        const ModuleMap h = preenvelope_candidate(m, gset);
        std::vector<ModuleRep> tests = gset;
        for (std::size_t i = 0; i < gset.size(); ++i)
            for (std::size_t j = i; j < gset.size(); ++j) tests.push_back(direct_sum(gset[i], gset[j]));
        const ApproxCertificate env = preenvelope_verify(h, tests);
        run["preenvelope"].check(env.ok, algebras[ai] + ": " + trial(t, env.message));
        run["identity_precover"].check(precover_verify(identity_map(m), batteries[ai].modules).ok,
                                       algebras[ai] + ": " + trial(t, "identity is not a precover"));
    }
    return run.finish(cfg);
}

Report duality_suite(const SuiteConfig& cfg) {
    SuiteRun run("duality");
    auto rng = suite_rng(cfg, 11);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const AlgebraPtr a = pick_algebra(rng);
        const ModuleRep m = random_module(a, Side::Right, rng, 2, 2);
        const ModuleRep n = random_module(a, Side::Left, rng, 2, 2);
        FreeResolution res(m);
        const auto tors = tor_dims(res, n, 4);
        const auto exts = ext_dims(res, dual(n), 4);
        run["ext_tor"].check(tors == exts, trial(t, a->name() + ": dim Ext^n(M, N*) != dim Tor_n(M, N)"));
    }
    return run.finish(cfg);
}

using SuiteFn = Report (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"linalg", linalg_suite},         {"algebra", algebra_suite},
        {"modules", modules_suite},       {"homology", homology_suite},
        {"relpd", relpd_suite},           {"dimension-arithmetic", dimension_suite},
        {"purity", purity_suite},         {"hereditary", hereditary_suite},
        {"products", products_suite},     {"approximation", approximation_suite},
        {"duality", duality_suite},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [n, f] : registry()) out.push_back(n);
        out.push_back("all");
        return out;
    }();
    return names;
}

Report run_suite(const std::string& name, const SuiteConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    Report out;
    if (name == "all") {
        out.task = {{"command", "suite"}, {"name", "all"}, {"trials", cfg.trials}};
        out.seed = cfg.seed;
        out.bound = cfg.bound;
        bool failed = false, capped = false;
        for (const auto& [n, f] : registry()) {
            Report r = f(cfg);
            failed = failed || r.status == Status::Fail;
            capped = capped || r.status == Status::Capped;
            out.payload[n] = {{"status", to_string(r.status)}, {"checks", r.payload}};
            if (!r.witnesses.empty()) out.witnesses[n] = r.witnesses;
        }
        out.status = failed ? Status::Fail : capped ? Status::Capped : Status::Pass;
    } else {
        auto it = std::find_if(registry().begin(), registry().end(), [&](const auto& e) { return e.first == name; });
        if (it == registry().end()) throw UsageError("unknown suite '" + name + "'");
        out = it->second(cfg);
    }
    out.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace torbench
