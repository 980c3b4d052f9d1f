#include "torbench/homology.hpp"

#include <sstream>
#include <stdexcept>

namespace torbench {

namespace {

void require_opposite_sides(const ModuleRep& m, const ModuleRep& n, const char* what) {
    if (m.side() == n.side() || !m.algebra()->same_structure(*n.algebra()))
        throw UsageError(std::string(what) + ": need a right and a left module over the same algebra");
}

/// Rows: g_j . b_k for the module `target`, indexed j * d + k.
FpMatrix cover_matrix(const ModuleRep& target, const FpMatrix& gens) {
    const std::size_t d = target.action().size();
    FpMatrix out(gens.rows() * d, target.dim(), target.modulus());
    for (std::size_t j = 0; j < gens.rows(); ++j) {
        const Vec g = gens.row_vec(j);
        for (std::size_t k = 0; k < d; ++k) {
            const Vec img = vec_mul(g, target.action(k));
            std::copy(img.begin(), img.end(), out.row(j * d + k).begin());
        }
    }
    return out;
}

/// Representatives of Z / B given a basis of Z and a spanning set of B (B inside Z).
FpMatrix homology_representatives(const FpMatrix& cycles, const FpMatrix& boundaries, std::size_t n, std::uint32_t p) {
    EchelonBasis span(n, p);
    for (std::size_t r = 0; r < boundaries.rows(); ++r) span.insert(boundaries.row(r));
    std::vector<Vec> reps;
    for (std::size_t r = 0; r < cycles.rows(); ++r)
        if (span.insert(cycles.row(r))) reps.push_back(cycles.row_vec(r));
    return FpMatrix::from_row_vectors(reps, n, p);
}

/// Rank of the map induced on homology by `f`: (f(Z_src) + B_dst) / B_dst.
std::size_t induced_rank(const FpMatrix& src_cycles, const FpMatrix& f, const FpMatrix& dst_boundaries) {
    const std::size_t base = rank(dst_boundaries);
    if (src_cycles.rows() == 0) return 0;
    return rank(vstack(src_cycles * f, dst_boundaries)) - base;
}

FpMatrix repeat_diag(const FpMatrix& m, std::size_t copies) {
    return block_diag(std::vector<FpMatrix>(copies, m), m.modulus());
}

}  // namespace

TensorProduct tensor(const ModuleRep& m, const ModuleRep& n) {
    if (m.side() != Side::Right || n.side() != Side::Left || !m.algebra()->same_structure(*n.algebra()))
        throw UsageError("tensor: need a right module and a left module over the same algebra");
    const auto p = m.modulus();
    const std::size_t total = m.dim() * n.dim();
    std::vector<FpMatrix> rel;
    const FpMatrix im = FpMatrix::identity(m.dim(), p), in = FpMatrix::identity(n.dim(), p);
    // (m b) (x) y - m (x) (b y), over algebra generators b.
    for (auto g : m.acting()->generators()) rel.push_back(kron(m.action(g), in) - kron(im, n.action(g)));
    const FpMatrix relations = vstack(rel, total, p);
    const QuotientSpace qs = quotient_space(total, row_space_basis(relations));
    return {qs.dim, transpose(qs.projection), qs.section};
}

FpMatrix tensor_map(const ModuleMap& f, const ModuleRep& n, const TensorProduct& src, const TensorProduct& dst) {
    return src.section * kron(f.matrix, FpMatrix::identity(n.dim(), n.modulus())) * dst.projection;
}

FreeResolution::FreeResolution(ModuleRep m) : module_(std::move(m)), regular_(regular_module(module_.algebra(), module_.side())) {
    const FpMatrix g0 = select_generators(module_, FpMatrix::identity(module_.dim(), module_.modulus()));
    ranks_.push_back(g0.rows());
    gens_.push_back(g0);
    kernels_.push_back(left_kernel_basis(cover_matrix(module_, g0)));
}

void FreeResolution::extend_to(std::size_t length) {
    while (computed_length() < length) {
        const std::size_t n = gens_.size();
        const ModuleRep prev = free(n - 1);
        const FpMatrix g = select_generators(prev, kernels_[n - 1]);
        ranks_.push_back(g.rows());
        gens_.push_back(g);
        kernels_.push_back(left_kernel_basis(cover_matrix(prev, g)));
    }
}

Vec FreeResolution::coefficient(std::size_t n, std::size_t j, std::size_t i) const {
    const std::size_t d = module_.action().size();
    auto row = gens_.at(n).row(j);
    return Vec(row.begin() + i * d, row.begin() + (i + 1) * d);
}

ModuleRep FreeResolution::free(std::size_t n) const {
    return direct_sum(std::vector<ModuleRep>(ranks_.at(n), regular_), module_.algebra(), module_.side()).module;
}

ModuleMap FreeResolution::differential(std::size_t n) const {
    if (n == 0) throw UsageError("differential: degree must be at least 1");
    const ModuleRep target = free(n - 1);
    return {free(n), target, cover_matrix(target, gens_.at(n))};
}

ModuleMap FreeResolution::augmentation() const { return {free(0), module_, cover_matrix(module_, gens_.at(0))}; }

Submodule FreeResolution::syzygy(std::size_t n) {
    if (n == 0) return {module_, identity_map(module_)};
    extend_to(n - 1);
    return submodule_from_closed_basis(free(n - 1), kernels_[n - 1]);
}

Check FreeResolution::verify_exactness() const {
    const ModuleMap eps = augmentation();
    if (torbench::rank(eps.matrix) != module_.dim()) return {false, "augmentation is not surjective"};
    std::size_t prev_rank = module_.dim();
    FpMatrix prev = eps.matrix;
    for (std::size_t n = 1; n <= computed_length(); ++n) {
        const ModuleMap d = differential(n);
        if (!(d.matrix * prev).is_zero()) return {false, "d^2 != 0 at degree " + std::to_string(n)};
        const std::size_t kernel_dim = prev.rows() - prev_rank;
        const std::size_t r = torbench::rank(d.matrix);
        if (r != kernel_dim) return {false, "not exact at degree " + std::to_string(n - 1)};
        prev_rank = r;
        prev = d.matrix;
    }
    return {};
}

FpMatrix select_generators(const ModuleRep& ambient, const FpMatrix& subspace) {
    std::vector<Vec> keep;
    const FpMatrix basis = row_space_basis(subspace);
    for (std::size_t r = 0; r < basis.rows(); ++r) keep.push_back(basis.row_vec(r));
    const std::size_t target = basis.rows();
    const auto p = ambient.modulus();
    for (std::size_t i = 0; i < keep.size();) {
        std::vector<Vec> rest;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (k != i) rest.push_back(keep[k]);
        const FpMatrix rest_m = FpMatrix::from_row_vectors(rest, ambient.dim(), p);
        if (submodule(ambient, rest_m).module.dim() == target)
            keep = std::move(rest);
        else
            ++i;
    }
    // Over non-local algebras an irredundant set can still be too large
    // (1 = E11 + E22 over T2); replace pairs by their sum while that generates.
    const PrimeField f(p);
    for (bool merged = true; merged && keep.size() > 1;) {
        merged = false;
        for (std::size_t i = 0; i < keep.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < keep.size() && !merged; ++j) {
                std::vector<Vec> cand;
                for (std::size_t k = 0; k < keep.size(); ++k) {
                    if (k == j) continue;
                    cand.push_back(keep[k]);
                    if (k == i)
                        for (std::size_t c = 0; c < cand.back().size(); ++c)
                            cand.back()[c] = f.add(cand.back()[c], keep[j][c]);
                }
                if (submodule(ambient, FpMatrix::from_row_vectors(cand, ambient.dim(), p)).module.dim() == target) {
                    keep = std::move(cand);
                    merged = true;
                }
            }
    }
    return FpMatrix::from_row_vectors(keep, ambient.dim(), p);
}

FpMatrix free_map_matrix(const Algebra& acting, const FpMatrix& gens, std::size_t target_rank) {
    const std::size_t d = acting.dim();
    if (gens.cols() != target_rank * d) throw UsageError("free_map_matrix: generator width mismatch");
    FpMatrix out(gens.rows() * d, target_rank * d, acting.modulus());
    for (std::size_t j = 0; j < gens.rows(); ++j)
        for (std::size_t i = 0; i < target_rank; ++i) {
            const auto row = gens.row(j);
            const Vec a(row.begin() + i * d, row.begin() + (i + 1) * d);
            for (std::size_t k = 0; k < d; ++k) {
                const Vec prod = acting.multiply(a, acting.basis_vector(k));
                std::copy(prod.begin(), prod.end(), out.row(j * d + k).begin() + i * d);
            }
        }
    return out;
}

ModuleRep syzygy(const ModuleRep& m, std::size_t n) {
    FreeResolution res(m);
    return res.syzygy(n).module;
}

namespace {

/// d_n (x) Y : Y^{r_n} -> Y^{r_{n-1}}, block (j, i) = Y.act(a_ij).
FpMatrix tensored_differential(const FreeResolution& res, std::size_t n, const ModuleRep& y) {
    const auto p = y.modulus();
    const std::size_t m = y.dim();
    const std::size_t rows = res.rank(n) * m;
    const std::size_t cols = (n == 0 ? 0 : res.rank(n - 1)) * m;
    FpMatrix out(rows, cols, p);
    if (n == 0) return out;
    for (std::size_t j = 0; j < res.rank(n); ++j)
        for (std::size_t i = 0; i < res.rank(n - 1); ++i) {
            const FpMatrix block = y.act(res.coefficient(n, j, i));
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c) out(j * m + r, i * m + c) = block(r, c);
        }
    return out;
}

/// Hom(d_{n+1}, Y) : Y^{r_n} -> Y^{r_{n+1}}, block (i, j) = Y.act(a_ij).
FpMatrix hom_differential(const FreeResolution& res, std::size_t n, const ModuleRep& y) {
    const auto p = y.modulus();
    const std::size_t m = y.dim();
    FpMatrix out(res.rank(n) * m, res.rank(n + 1) * m, p);
    for (std::size_t j = 0; j < res.rank(n + 1); ++j)
        for (std::size_t i = 0; i < res.rank(n); ++i) {
            const FpMatrix block = y.act(res.coefficient(n + 1, j, i));
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c) out(i * m + r, j * m + c) = block(r, c);
        }
    return out;
}

struct Homology {
    FpMatrix cycles;
    FpMatrix boundaries;
    std::size_t dim = 0;
};

Homology tensored_homology(const FreeResolution& res, std::size_t n, const ModuleRep& y) {
    const FpMatrix dn = tensored_differential(res, n, y);
    const FpMatrix dn1 = tensored_differential(res, n + 1, y);
    Homology h{left_kernel_basis(dn), row_space_basis(dn1), 0};
    h.dim = h.cycles.rows() - h.boundaries.rows();
    return h;
}

}  // namespace

std::vector<std::size_t> tor_dims(FreeResolution& res, const ModuleRep& y, std::size_t max_degree) {
    require_opposite_sides(res.module(), y, "tor");
    res.extend_to(max_degree + 1);
    std::vector<std::size_t> ranks(max_degree + 2, 0);
    for (std::size_t n = 1; n <= max_degree + 1; ++n) ranks[n] = rank(tensored_differential(res, n, y));
    std::vector<std::size_t> dims(max_degree + 1);
    for (std::size_t n = 0; n <= max_degree; ++n) dims[n] = res.rank(n) * y.dim() - ranks[n] - ranks[n + 1];
    return dims;
}

TorResult tor(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod, Resolve which) {
    if (m.side() != Side::Right || n_mod.side() != Side::Left)
        throw UsageError("tor: first argument must be a right module, second a left module");
    require_opposite_sides(m, n_mod, "tor");
    FreeResolution res(which == Resolve::First ? m : n_mod);
    const ModuleRep& other = which == Resolve::First ? n_mod : m;
    res.extend_to(n + 1);
    const Homology h = tensored_homology(res, n, other);
    return {n, h.dim, homology_representatives(h.cycles, h.boundaries, h.cycles.cols(), m.modulus())};
}

std::vector<std::size_t> ext_dims(FreeResolution& res, const ModuleRep& y, std::size_t max_degree) {
    require_compatible(res.module(), y, "ext");
    res.extend_to(max_degree + 1);
    std::vector<std::size_t> dims(max_degree + 1);
    std::size_t prev_rank = 0;
    for (std::size_t n = 0; n <= max_degree; ++n) {
        const std::size_t r = rank(hom_differential(res, n, y));
        dims[n] = res.rank(n) * y.dim() - r - prev_rank;
        prev_rank = r;
    }
    return dims;
}

ExtClasses ext_classes(FreeResolution& res, const ModuleRep& y, std::size_t n) {
    require_compatible(res.module(), y, "ext");
    const auto p = y.modulus();
    if (n == 0) return {{res.module(), identity_map(res.module())}, hom_basis(res.module(), y)};
    Submodule syz = res.syzygy(n);
    const auto homs = hom_basis_matrices(syz.module, y);
    const std::size_t width = syz.module.dim() * y.dim();
    auto flatten = [&](const FpMatrix& f) { return Vec(f.data().begin(), f.data().end()); };

    // Restrictions of maps P_{n-1} -> Y: generator e_j sent to basis vector v of Y.
    EchelonBasis restricted(width, p);
    const std::size_t d = y.action().size();
    const std::size_t r = res.rank(n - 1);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t v = 0; v < y.dim(); ++v) {
            FpMatrix f(r * d, y.dim(), p);
            Vec e(y.dim(), 0);
            e[v] = 1;
            for (std::size_t k = 0; k < d; ++k) {
                const Vec img = vec_mul(e, y.action(k));
                std::copy(img.begin(), img.end(), f.row(j * d + k).begin());
            }
            restricted.insert(flatten(syz.basis() * f));
        }
    std::vector<ModuleMap> reps;
    for (const auto& h : homs)
        if (restricted.insert(flatten(h))) reps.push_back({syz.module, y, h});
    return {std::move(syz), std::move(reps)};
}

ExtResult ext(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod, bool with_representatives) {
    FreeResolution res(m);
    ExtResult out{n, ext_dims(res, n_mod, n)[n], {}};
    if (with_representatives) {
        out.representatives = ext_classes(res, n_mod, n).representatives;
        if (out.representatives.size() != out.dim)
            throw std::logic_error("ext: class representatives disagree with cohomology dimension");
    }
    return out;
}

ConnectingReport connecting_check(const ShortExactSeq& ses, const ModuleRep& s, std::size_t bound) {
    if (auto c = validate_ses(ses); !c) throw UsageError("connecting_check: invalid sequence: " + c.message);
    const ModuleRep& a = ses.left();
    const ModuleRep& b = ses.middle();
    const ModuleRep& c = ses.right();
    require_opposite_sides(b, s, "connecting_check");
    FreeResolution res(s);
    res.extend_to(bound + 1);

    const FpMatrix lift = *left_inverse(ses.proj.matrix);                     // C -> B, linear
    const FpMatrix back = transpose(*left_inverse(transpose(ses.incl.matrix))); // B -> A on im(incl)

    ConnectingReport report{bound, {}, true, {}};
    std::vector<Homology> ha, hb, hc;
    for (std::size_t n = 0; n <= bound; ++n) {
        ha.push_back(tensored_homology(res, n, a));
        hb.push_back(tensored_homology(res, n, b));
        hc.push_back(tensored_homology(res, n, c));
    }
    std::vector<std::size_t> ralpha(bound + 1), rbeta(bound + 1), rdelta(bound + 1, 0);
    for (std::size_t n = 0; n <= bound; ++n) {
        const std::size_t r = res.rank(n);
        const FpMatrix alpha = repeat_diag(ses.incl.matrix, r);
        const FpMatrix beta = repeat_diag(ses.proj.matrix, r);
        ralpha[n] = induced_rank(ha[n].cycles, alpha, hb[n].boundaries);
        rbeta[n] = induced_rank(hb[n].cycles, beta, hc[n].boundaries);
        const bool composite_zero = ha[n].cycles.rows() == 0 ||
                              row_space_contains(hc[n].boundaries, ha[n].cycles * alpha * beta);
        if (n >= 1) {
            // Snake: lift a C-cycle to B, apply the differential, pull back to A.
            const FpMatrix lifted = hc[n].cycles * repeat_diag(lift, r) * tensored_differential(res, n, b);
            const FpMatrix pulled = lifted * repeat_diag(back, res.rank(n - 1));
            if (lifted.rows() > 0 && pulled * repeat_diag(ses.incl.matrix, res.rank(n - 1)) != lifted)
                throw std::logic_error("connecting_check: boundary of lift is not in the image of A");
            rdelta[n] = induced_rank(hc[n].cycles, repeat_diag(lift, r) * tensored_differential(res, n, b) *
                                                       repeat_diag(back, res.rank(n - 1)),
                                     ha[n - 1].boundaries);
        }
        LongExactWindow w{n, ha[n].dim, hb[n].dim, hc[n].dim, ralpha[n], rbeta[n], rdelta[n], composite_zero};
        if (w.tor_b != w.rank_alpha + w.rank_beta) w.exact = false;
        if (w.tor_c != w.rank_beta + w.rank_connecting) w.exact = false;
        if (n >= 1 && ha[n - 1].dim != rdelta[n] + ralpha[n - 1]) w.exact = false;
        if (!w.exact && report.ok) {
            report.ok = false;
            std::ostringstream os;
            os << "long exact sequence fails at degree " << n;
            report.message = os.str();
        }
        report.windows.push_back(w);
    }
    return report;
}

ProductComparison product_comparison(const std::vector<ModuleRep>& family, const ModuleRep& m) {
    if (m.side() != Side::Left) throw UsageError("product_comparison: M must be a left module");
    const auto p = m.modulus();
    const DirectSum prod = direct_sum(family, m.algebra(), Side::Right);
    const TensorProduct src = tensor(prod.module, m);
    std::vector<FpMatrix> columns;
    std::size_t target_dim = 0;
    FpMatrix rho(src.dim, 0, p);
    for (std::size_t i = 0; i < family.size(); ++i) {
        const TensorProduct dst = tensor(family[i], m);
        rho = hstack(rho, tensor_map(prod.projections[i], m, src, dst));
        target_dim += dst.dim;
    }
    const std::size_t r = rank(rho);
    return {src.dim, target_dim, r, r == src.dim, r == target_dim, rho};
}

DualityCheck ext_tor_duality_check(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod) {
    const std::size_t e = ext(n, m, dual(n_mod)).dim;
    const std::size_t t = tor(n, m, n_mod).dim;
    return {n, e, t, e == t};
}

}  // namespace torbench
