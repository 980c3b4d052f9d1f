#include "torbench/approximation.hpp"

#include <sstream>

namespace torbench {

namespace {

Vec flatten(const FpMatrix& f) { return Vec(f.data().begin(), f.data().end()); }

bool action_closed(const ModuleRep& m, const FpMatrix& basis) {
    if (basis.rows() == 0) return true;
    for (const auto& rho : m.action())
        if (!row_space_contains(basis, basis * rho)) return false;
    return true;
}

// The unique map out of a pushout restricting to `on_first` and `on_second`.
FpMatrix map_out_of(const Pushout& po, const FpMatrix& on_first, const FpMatrix& on_second) {
    const auto x = left_inverse(vstack(po.from_first.matrix, po.from_second.matrix));
    if (!x) throw std::logic_error("pushout: structure maps do not span the pushout");
    return *x * vstack(on_first, on_second);
}

// Submodule chain and layers carried along a linear map.
void transport(std::vector<FpMatrix>& chain, std::vector<FiltrationLayer>& layers, const FpMatrix& along) {
    for (auto& c : chain) c = row_space_basis(c * along);
    for (auto& l : layers) l.lift = l.lift * along;
}

}  // namespace

FiltrationWitness trivial_filtration(const ModuleRep& g, std::size_t tag) {
    const auto p = g.modulus();
    FpMatrix id = FpMatrix::identity(g.dim(), p);
    return {g, {FpMatrix(0, g.dim(), p), id}, {{tag, id}}};
}

FiltrationWitness sum_filtration(const std::vector<FiltrationWitness>& parts, const DirectSum& sum) {
    const auto p = sum.module.modulus();
    const std::size_t n = sum.module.dim();
    FiltrationWitness out{sum.module, {FpMatrix(0, n, p)}, {}};
    FpMatrix below(0, n, p);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const FpMatrix& inj = sum.injections.at(k).matrix;
        for (std::size_t a = 1; a < parts[k].chain.size(); ++a)
            out.chain.push_back(row_space_basis(vstack(below, parts[k].chain[a] * inj)));
        for (const auto& l : parts[k].layers) out.layers.push_back({l.tag, l.lift * inj});
        below = out.chain.back();
    }
    return out;
}

Check filtration_verify(const FiltrationWitness& w, const std::vector<ModuleRep>& gens) {
    const ModuleRep& m = w.module;
    if (w.chain.empty()) return {false, "empty chain"};
    if (w.layers.size() + 1 != w.chain.size()) return {false, "layer count does not match chain length"};
    if (rank(w.chain.front()) != 0) return {false, "chain does not start at 0"};
    for (std::size_t a = 0; a < w.chain.size(); ++a) {
        if (w.chain[a].cols() != m.dim()) return {false, "chain entry " + std::to_string(a) + " has wrong width"};
        if (!action_closed(m, w.chain[a]))
            return {false, "chain entry " + std::to_string(a) + " is not a submodule"};
    }
    if (rank(w.chain.back()) != m.dim()) return {false, "chain does not reach the module"};
    for (std::size_t a = 0; a < w.layers.size(); ++a) {
        const std::string at = "layer " + std::to_string(a) + ": ";
        const FpMatrix& lo = w.chain[a];
        const FpMatrix& hi = w.chain[a + 1];
        const std::size_t lo_dim = rank(lo), hi_dim = rank(hi);
        if (!row_space_contains(hi, lo)) return {false, at + "chain is not increasing"};
        if (hi_dim <= lo_dim) return {false, at + "stationary step"};
        const FiltrationLayer& l = w.layers[a];
        if (l.tag >= gens.size()) return {false, at + "tag out of range"};
        const ModuleRep& g = gens[l.tag];
        if (!g.compatible_with(m)) return {false, at + "generator over a different algebra or side"};
        if (l.lift.rows() != g.dim() || l.lift.cols() != m.dim()) return {false, at + "lift has wrong shape"};
        if (hi_dim - lo_dim != g.dim()) return {false, at + "quotient dimension differs from the generator"};
        if (!row_space_contains(hi, l.lift)) return {false, at + "lift leaves the next chain entry"};
        if (rank(vstack(lo, l.lift)) != hi_dim) return {false, at + "lift is not injective modulo the chain"};
        for (std::size_t i = 0; i < m.action().size(); ++i) {
            const FpMatrix defect = l.lift * m.action(i) - g.action(i) * l.lift;
            if (!row_space_contains(lo, defect)) return {false, at + "lift is not equivariant modulo the chain"};
        }
    }
    return {};
}

Submodule trace(const std::vector<ModuleRep>& xs, const ModuleRep& m) {
    std::vector<FpMatrix> images;
    for (const auto& x : xs) {
        require_compatible(x, m, "trace");
        for (auto& h : hom_basis_matrices(x, m)) images.push_back(std::move(h));
    }
    return submodule_from_closed_basis(m, row_space_basis(vstack(images, m.dim(), m.modulus())));
}

bool gen_membership(const ModuleRep& m, const std::vector<ModuleRep>& xs) { return trace(xs, m).module.dim() == m.dim(); }

ApproxCertificate precover_verify(const ModuleMap& f, const std::vector<ModuleRep>& test_set) {
    ApproxCertificate c{.kind = ApproxKind::Precover, .map = f, .test_set = test_set};
    if (auto v = validate_map(f); !v) {
        c.ok = false;
        c.message = "not a module map: " + v.message;
        return c;
    }
    for (std::size_t t = 0; t < test_set.size(); ++t) {
        const ModuleRep& x = test_set[t];
        EchelonBasis reached(x.dim() * f.target.dim(), f.target.modulus());
        for (const auto& phi : hom_basis_matrices(x, f.source)) reached.insert(flatten(phi * f.matrix));
        TestRecord r{reached.dim(), hom_dim(x, f.target), false};
        r.ok = r.induced_rank == r.required;
        if (!r.ok && c.ok) {
            c.ok = false;
            c.message = "test module " + std::to_string(t) + ": " + std::to_string(r.induced_rank) + " of " +
                        std::to_string(r.required) + " maps factor";
        }
        c.records.push_back(r);
    }
    return c;
}

ApproxCertificate preenvelope_verify(const ModuleMap& h, const std::vector<ModuleRep>& test_set) {
    ApproxCertificate c{.kind = ApproxKind::Preenvelope, .map = h, .test_set = test_set};
    if (auto v = validate_map(h); !v) {
        c.ok = false;
        c.message = "not a module map: " + v.message;
        return c;
    }
    for (std::size_t t = 0; t < test_set.size(); ++t) {
        const ModuleRep& y = test_set[t];
        EchelonBasis reached(h.source.dim() * y.dim(), h.source.modulus());
        for (const auto& psi : hom_basis_matrices(h.target, y)) reached.insert(flatten(h.matrix * psi));
        TestRecord r{reached.dim(), hom_dim(h.source, y), false};
        r.ok = r.induced_rank == r.required;
        if (!r.ok && c.ok) {
            c.ok = false;
            c.message = "test module " + std::to_string(t) + ": " + std::to_string(r.induced_rank) + " of " +
                        std::to_string(r.required) + " maps factor";
        }
        c.records.push_back(r);
    }
    return c;
}

Completion et_completion(const ModuleRep& k, const std::vector<ModuleRep>& gens, std::size_t cap,
                         std::size_t dim_cap) {
    if (cap == 0) throw UsageError("et_completion: cap must be at least 1");
    const auto p = k.modulus();
    std::vector<FreeResolution> res;
    for (const auto& g : gens) {
        require_compatible(k, g, "et_completion");
        res.emplace_back(g);
    }

    ModuleRep cur = k;
    FpMatrix iota = FpMatrix::identity(k.dim(), p);
    std::vector<FpMatrix> chain{row_space_basis(iota)};
    std::vector<FiltrationLayer> layers;
    std::vector<CompletionStage> stages;

    auto finish = [&](Status status, std::string message) {
        const Quotient n = quotient(cur, chain.front());
        FiltrationWitness w{n.module, chain, layers};
        transport(w.chain, w.layers, n.projection.matrix);
        Completion out{status, {{k, cur, iota}, n.projection}, std::move(w), chain, layers, stages, std::move(message)};
        if (status == Status::Pass) {
            if (auto c = filtration_verify(out.filtration, gens); !c) {
                out.status = Status::Fail;
                out.message = "filtration of the cokernel does not verify: " + c.message;
            }
        }
        return out;
    };

    for (std::size_t t = 0;; ++t) {
        std::size_t gi = gens.size();
        for (std::size_t i = 0; i < gens.size() && gi == gens.size(); ++i)
            if (ext_dims(res[i], cur, 1)[1] != 0) gi = i;
        if (gi == gens.size()) return finish(Status::Pass, "");
        if (t == cap) return finish(Status::Capped, "stage cap " + std::to_string(cap) + " reached");

        const ExtClasses classes = ext_classes(res[gi], cur, 1);
        const std::size_t e = classes.representatives.size();
        const ModuleRep p0 = res[gi].free(0);
        const ModuleRep omega_e = power(classes.syzygy.module, e);
        const ModuleRep p0_e = power(p0, e);
        std::vector<FpMatrix> reps, incls;
        for (const auto& r : classes.representatives) {
            reps.push_back(r.matrix);
            incls.push_back(classes.syzygy.inclusion.matrix);
        }
        const Pushout po = pushout({omega_e, cur, vstack(reps, cur.dim(), p)}, {omega_e, p0_e, block_diag(incls, p)});
        if (po.module.dim() > dim_cap)
            return finish(Status::Capped, "dimension cap " + std::to_string(dim_cap) + " reached");

        iota = iota * po.from_first.matrix;
        transport(chain, layers, po.from_first.matrix);
        const auto section = left_inverse(res[gi].augmentation().matrix);
        if (!section) throw std::logic_error("et_completion: augmentation is not surjective");
        for (std::size_t c = 0; c < e; ++c) {
            FpMatrix placed(gens[gi].dim(), p0_e.dim(), p);
            for (std::size_t r = 0; r < placed.rows(); ++r)
                for (std::size_t j = 0; j < p0.dim(); ++j) placed(r, c * p0.dim() + j) = (*section)(r, j);
            const FpMatrix lift = placed * po.from_second.matrix;
            chain.push_back(row_space_basis(vstack(chain.back(), lift)));
            layers.push_back({gi, lift});
        }
        cur = po.module;
        stages.push_back({gi, e, cur.dim()});
    }
}

ShortExactSeq extension_from_class(FreeResolution& res_a, const ModuleMap& cls) {
    const Submodule omega = res_a.syzygy(1);
    if (!(cls.source == omega.module)) throw UsageError("extension_from_class: class is not defined on the syzygy");
    const Pushout po = pushout(cls, omega.inclusion);
    const ModuleMap eps = res_a.augmentation();
    const FpMatrix proj = map_out_of(po, FpMatrix(cls.target.dim(), eps.target.dim(), eps.target.modulus()), eps.matrix);
    return {po.from_first, {po.module, eps.target, proj}};
}

Battery filtered_battery(const std::vector<ModuleRep>& gens, std::size_t cap, std::size_t limit) {
    Battery b;
    auto add = [&](ModuleRep m, FiltrationWitness w) {
        if (b.modules.size() >= limit) return;
        b.modules.push_back(std::move(m));
        b.witnesses.push_back(std::move(w));
    };
    if (gens.empty()) return b;
    const AlgebraPtr& alg = gens.front().algebra();
    const Side side = gens.front().side();
    for (std::size_t i = 0; i < gens.size(); ++i) add(gens[i], trivial_filtration(gens[i], i));

    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j) {
            const DirectSum s = direct_sum({gens[i], gens[j]}, alg, side);
            add(s.module, sum_filtration({trivial_filtration(gens[i], i), trivial_filtration(gens[j], j)}, s));
        }

    // 0 -> g_j -> E -> g_i -> 0 for each Ext^1(g_i, g_j) class.
    for (std::size_t i = 0; i < gens.size(); ++i) {
        FreeResolution res(gens[i]);
        for (std::size_t j = 0; j < gens.size(); ++j) {
            for (const auto& cls : ext_classes(res, gens[j], 1).representatives) {
                const ShortExactSeq ses = extension_from_class(res, cls);
                const auto sec = left_inverse(ses.proj.matrix);
                const FpMatrix bottom = row_space_basis(ses.incl.matrix);
                FiltrationWitness w{ses.middle(),
                                    {FpMatrix(0, ses.middle().dim(), ses.middle().modulus()), bottom,
                                     FpMatrix::identity(ses.middle().dim(), ses.middle().modulus())},
                                    {{j, ses.incl.matrix}, {i, *sec}}};
                add(ses.middle(), std::move(w));
            }
        }
    }

    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Completion c = et_completion(gens[i], gens, cap);
        if (c.status != Status::Pass || c.stages.empty()) continue;
        const ModuleRep& pm = c.ses.middle();
        FiltrationWitness w{pm, {FpMatrix(0, pm.dim(), pm.modulus())}, {{i, c.ses.incl.matrix}}};
        w.chain.insert(w.chain.end(), c.p_chain.begin(), c.p_chain.end());
        w.layers.insert(w.layers.end(), c.p_layers.begin(), c.p_layers.end());
        add(pm, std::move(w));
    }
    return b;
}

Cover battery_cover(const ModuleRep& m, const Battery& battery) {
    std::vector<ModuleRep> parts;
    std::vector<FiltrationWitness> witnesses;
    std::vector<FpMatrix> comps;
    for (std::size_t i = 0; i < battery.modules.size(); ++i)
        for (auto& h : hom_basis_matrices(battery.modules[i], m)) {
            parts.push_back(battery.modules[i]);
            witnesses.push_back(battery.witnesses[i]);
            comps.push_back(std::move(h));
        }
    const DirectSum f = direct_sum(parts, m.algebra(), m.side());
    return {{f.module, m, vstack(comps, m.dim(), m.modulus())}, sum_filtration(witnesses, f)};
}

PrecoverResult deconstructible_precover(const ModuleRep& m, const std::vector<ModuleRep>& gens, const Cover& cover,
                                        const std::vector<ModuleRep>& test_set, std::size_t cap) {
    const ModuleMap& f = cover.map;
    if (!(f.target == m)) throw UsageError("deconstructible_precover: cover does not end at the module");
    const Submodule kf = kernel(f);
    Completion comp = et_completion(kf.module, gens, cap);
    if (comp.status != Status::Pass) {
        const std::string msg = "completion of the kernel: " + comp.message;
        return {comp.status, f, cover.filtration, std::move(comp), ApproxCertificate{.map = f, .ok = false}, msg};
    }

    const ModuleRep& pm = comp.ses.middle();
    const Pushout po = pushout(comp.ses.incl, kf.inclusion);
    const FpMatrix g = map_out_of(po, FpMatrix(pm.dim(), m.dim(), m.modulus()), f.matrix);
    const ModuleMap gmap{po.module, m, g};

    // Q is filtered by the image of F followed by the layers of N = Q / F.
    FiltrationWitness w = cover.filtration;
    w.module = po.module;
    transport(w.chain, w.layers, po.from_second.matrix);
    const FpMatrix image_f = w.chain.back();
    for (std::size_t a = 1; a < comp.p_chain.size(); ++a)
        w.chain.push_back(row_space_basis(vstack(image_f, comp.p_chain[a] * po.from_first.matrix)));
    for (const auto& l : comp.p_layers) w.layers.push_back({l.tag, l.lift * po.from_first.matrix});

    PrecoverResult out{Status::Pass, gmap, std::move(w), std::move(comp), precover_verify(gmap, test_set), ""};
    std::ostringstream msg;
    if (!out.certificate.ok) msg << "factoring: " << out.certificate.message << "; ";

    // ker g is the image of P.
    const Submodule kg = kernel(gmap);
    const bool kernel_is_p = kg.module.dim() == pm.dim() && rank(po.from_first.matrix) == pm.dim() &&
                             (po.from_first.matrix * g).is_zero();
    if (!kernel_is_p) msg << "kernel of g differs from the completion; ";
    OrthogonalityReport orth;
    for (const auto& x : test_set) {
        FreeResolution res(x);
        orth.ext1_dims.push_back(ext_dims(res, kg.module, 1)[1]);
        orth.ok = orth.ok && orth.ext1_dims.back() == 0;
    }
    if (!orth.ok) msg << "Ext^1 from a test module into the kernel is nonzero; ";
    out.certificate.kernel_orthogonality = orth;
    out.certificate.ok = out.certificate.ok && orth.ok && kernel_is_p;
    if (auto c = filtration_verify(out.filtration, gens); !c) msg << "filtration: " << c.message << "; ";
    out.message = msg.str();
    if (!out.message.empty()) out.status = Status::Fail;
    return out;
}

ModuleMap preenvelope_candidate(const ModuleRep& m, const std::vector<ModuleRep>& gset) {
    std::vector<ModuleRep> parts;
    FpMatrix h(m.dim(), 0, m.modulus());
    for (const auto& g : gset) {
        require_compatible(m, g, "preenvelope_candidate");
        for (const auto& phi : hom_basis_matrices(m, g)) {
            parts.push_back(g);
            h = hstack(h, phi);
        }
    }
    return {m, direct_sum(parts, m.algebra(), m.side()).module, h};
}

}  // namespace torbench
