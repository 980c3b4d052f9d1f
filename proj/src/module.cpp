#include "torbench/module.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace torbench {

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

namespace {

AlgebraPtr acting_for(const AlgebraPtr& algebra, Side side) {
    if (side == Side::Right) return algebra;
    return std::make_shared<const Algebra>(opposite(*algebra));
}

std::vector<std::size_t> pivot_columns(const FpMatrix& rref_rows) {
    std::vector<std::size_t> piv;
    for (std::size_t r = 0; r < rref_rows.rows(); ++r) {
        auto row = rref_rows.row(r);
        auto it = std::find_if(row.begin(), row.end(), [](Scalar s) { return s != 0; });
        piv.push_back(static_cast<std::size_t>(it - row.begin()));
    }
    return piv;
}

bool is_action_closed(const ModuleRep& m, const FpMatrix& basis) {
    for (auto g : m.acting()->generators())
        if (!row_space_contains(basis, basis * m.action(g))) return false;
    return true;
}

}  // namespace

ModuleRep::ModuleRep(AlgebraPtr algebra, Side side, std::vector<FpMatrix> action)
    : ModuleRep(algebra, acting_for(algebra, side), side, std::move(action)) {}

ModuleRep::ModuleRep(AlgebraPtr algebra, AlgebraPtr acting, Side side, std::vector<FpMatrix> action)
    : algebra_(std::move(algebra)), acting_(std::move(acting)), side_(side), action_(std::move(action)) {
    if (!algebra_) throw UsageError("module without algebra");
    if (action_.size() != algebra_->dim())
        throw UsageError("module needs one action matrix per basis element of " + algebra_->name());
    dim_ = action_.empty() ? 0 : action_.front().rows();
    for (const auto& a : action_) {
        if (a.rows() != dim_ || a.cols() != dim_) throw UsageError("action matrices must be square of equal size");
        if (a.modulus() != algebra_->modulus()) throw UsageError("action matrix modulus differs from algebra");
    }
}

ModuleRep ModuleRep::zero(AlgebraPtr algebra, Side side) {
    const auto p = algebra->modulus();
    const auto d = algebra->dim();
    return ModuleRep(std::move(algebra), side, std::vector<FpMatrix>(d, FpMatrix(0, 0, p)));
}

FpMatrix ModuleRep::act(std::span<const Scalar> a) const {
    const PrimeField f(modulus());
    FpMatrix out(dim_, dim_, modulus());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0) continue;
        const FpMatrix& rho = action_[k];
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (rho(i, j) != 0) out(i, j) = f.add(out(i, j), f.mul(a[k], rho(i, j)));
    }
    return out;
}

ModuleRep ModuleRep::with_action(std::vector<FpMatrix> action) const {
    return ModuleRep(algebra_, acting_, side_, std::move(action));
}

ModuleRep ModuleRep::flipped(std::vector<FpMatrix> action) const {
    return ModuleRep(algebra_, flip(side_), std::move(action));
}

bool ModuleRep::compatible_with(const ModuleRep& other) const {
    return side_ == other.side_ &&
           (algebra_ == other.algebra_ || algebra_->same_structure(*other.algebra_));
}

bool ModuleRep::operator==(const ModuleRep& other) const {
    return compatible_with(other) && action_ == other.action_;
}

void require_compatible(const ModuleRep& a, const ModuleRep& b, const char* what) {
    if (!a.compatible_with(b))
        throw UsageError(std::string(what) + ": modules differ in algebra or side (" + to_string(a.side()) + " over " +
                         a.algebra()->name() + " vs " + to_string(b.side()) + " over " + b.algebra()->name() + ")");
}

Check validate_module(const ModuleRep& m) {
    const Algebra& acting = *m.acting();
    const auto p = m.modulus();
    if (m.act(acting.unit()) != FpMatrix::identity(m.dim(), p)) return {false, "unit does not act as identity"};
    for (std::size_t i = 0; i < acting.dim(); ++i)
        for (std::size_t j = 0; j < acting.dim(); ++j)
            if (m.action(i) * m.action(j) != m.act(acting.product(i, j))) {
                std::ostringstream os;
                os << "multiplicativity fails at (" << i << "," << j << ")";
                return {false, os.str()};
            }
    return {};
}

Check validate_map(const ModuleMap& f) {
    if (!f.source.compatible_with(f.target)) return {false, "source and target differ in algebra or side"};
    if (f.matrix.rows() != f.source.dim() || f.matrix.cols() != f.target.dim()) return {false, "matrix shape mismatch"};
    for (std::size_t i = 0; i < f.source.action().size(); ++i)
        if (f.source.action(i) * f.matrix != f.matrix * f.target.action(i)) {
            return {false, "not equivariant for b" + std::to_string(i)};
        }
    return {};
}

Check validate_ses(const ShortExactSeq& s) {
    if (auto c = validate_map(s.incl); !c) return {false, "inclusion: " + c.message};
    if (auto c = validate_map(s.proj); !c) return {false, "projection: " + c.message};
    if (!(s.incl.target == s.proj.source)) return {false, "middle terms differ"};
    const std::size_t ra = rank(s.incl.matrix), rb = rank(s.proj.matrix);
    if (ra != s.left().dim()) return {false, "inclusion is not injective"};
    if (rb != s.right().dim()) return {false, "projection is not surjective"};
    if (!(s.incl.matrix * s.proj.matrix).is_zero()) return {false, "composite is nonzero"};
    if (ra + rb != s.middle().dim()) return {false, "not exact in the middle"};
    return {};
}

ModuleMap identity_map(const ModuleRep& m) { return {m, m, FpMatrix::identity(m.dim(), m.modulus())}; }

ModuleMap zero_map(const ModuleRep& source, const ModuleRep& target) {
    return {source, target, FpMatrix(source.dim(), target.dim(), source.modulus())};
}

ModuleMap compose(const ModuleMap& f, const ModuleMap& g) {
    if (f.target.dim() != g.source.dim()) throw UsageError("compose: dimension mismatch");
    return {f.source, g.target, f.matrix * g.matrix};
}

ModuleRep free_module(const AlgebraPtr& a, Side side, std::size_t rank) {
    const ModuleRep shape = ModuleRep::zero(a, side);
    const Algebra& acting = *shape.acting();
    const std::size_t d = acting.dim();
    const auto p = a->modulus();
    std::vector<FpMatrix> action;
    action.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        // Row j of the regular action of b_i holds the coordinates of b_j * b_i.
        FpMatrix reg(d, d, p);
        for (std::size_t j = 0; j < d; ++j) {
            const Vec& prod = acting.product(j, i);
            std::copy(prod.begin(), prod.end(), reg.row(j).begin());
        }
        action.push_back(block_diag(std::vector<FpMatrix>(rank, reg), p));
    }
    return shape.with_action(std::move(action));
}

ModuleRep regular_module(const AlgebraPtr& a, Side side) { return free_module(a, side, 1); }

Submodule submodule_from_closed_basis(const ModuleRep& m, const FpMatrix& spanning) {
    // Coordinates in an RREF basis are read off at the pivot columns.
    const FpMatrix basis = row_space_basis(spanning);
    const auto piv = pivot_columns(basis);
    std::vector<FpMatrix> action;
    action.reserve(m.action().size());
    for (const auto& rho : m.action()) action.push_back(select_cols(basis * rho, piv));
    ModuleRep sub = m.with_action(std::move(action));
    return {sub, ModuleMap{sub, m, basis}};
}

Submodule submodule(const ModuleRep& m, const FpMatrix& gens) {
    if (gens.cols() != m.dim()) throw UsageError("submodule: generator length differs from module dimension");
    EchelonBasis span(m.dim(), m.modulus());
    std::vector<Vec> queue;
    auto push = [&](const Vec& v) {
        if (span.insert(v)) queue.push_back(v);
    };
    for (std::size_t r = 0; r < gens.rows(); ++r) push(gens.row_vec(r));
    const auto& generators = m.acting()->generators();
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (auto g : generators) push(vec_mul(queue[head], m.action(g)));
    return submodule_from_closed_basis(m, span.basis());
}

Quotient quotient(const ModuleRep& m, const FpMatrix& sub_basis) {
    if (sub_basis.cols() != m.dim()) throw UsageError("quotient: basis width differs from module dimension");
    if (!is_action_closed(m, sub_basis)) throw UsageError("quotient: subspace is not a submodule");
    const QuotientSpace qs = quotient_space(m.dim(), sub_basis);
    const FpMatrix proj = transpose(qs.projection);
    std::vector<FpMatrix> action;
    action.reserve(m.action().size());
    for (const auto& rho : m.action()) action.push_back(qs.section * rho * proj);
    ModuleRep q = m.with_action(std::move(action));
    return {q, ModuleMap{m, q, proj}, qs.section};
}

Quotient quotient(const ModuleRep& m, const Submodule& sub) { return quotient(m, sub.basis()); }

Submodule kernel(const ModuleMap& f) { return submodule_from_closed_basis(f.source, left_kernel_basis(f.matrix)); }

Submodule image(const ModuleMap& f) { return submodule_from_closed_basis(f.target, row_space_basis(f.matrix)); }

Quotient cokernel(const ModuleMap& f) { return quotient(f.target, row_space_basis(f.matrix)); }

ModuleRep cyclically_presented(const AlgebraPtr& a, Side side, std::span<const Scalar> x) {
    if (x.size() != a->dim()) throw UsageError("cyclically_presented: element has wrong length");
    const ModuleRep reg = regular_module(a, side);
    const Submodule s = submodule(reg, FpMatrix::row_vector(Vec(x.begin(), x.end()), a->modulus()));
    return quotient(reg, s).module;
}

DirectSum direct_sum(const std::vector<ModuleRep>& parts, const AlgebraPtr& algebra, Side side) {
    ModuleRep shape = parts.empty() ? ModuleRep::zero(algebra, side) : parts.front();
    const auto p = algebra->modulus();
    std::size_t total = 0;
    for (const auto& m : parts) {
        require_compatible(shape, m, "direct_sum");
        total += m.dim();
    }
    std::vector<FpMatrix> action;
    for (std::size_t i = 0; i < algebra->dim(); ++i) {
        std::vector<FpMatrix> blocks;
        for (const auto& m : parts) blocks.push_back(m.action(i));
        action.push_back(block_diag(blocks, p));
    }
    if (parts.empty()) action.assign(algebra->dim(), FpMatrix(0, 0, p));
    DirectSum out{shape.with_action(std::move(action)), {}, {}};
    std::size_t offset = 0;
    for (const auto& m : parts) {
        FpMatrix inj(m.dim(), total, p), pr(total, m.dim(), p);
        for (std::size_t i = 0; i < m.dim(); ++i) {
            inj(i, offset + i) = 1;
            pr(offset + i, i) = 1;
        }
        out.injections.push_back({m, out.module, inj});
        out.projections.push_back({out.module, m, pr});
        offset += m.dim();
    }
    return out;
}

ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b) { return direct_sum({a, b}, a.algebra(), a.side()).module; }

ModuleRep power(const ModuleRep& m, std::size_t copies) {
    return direct_sum(std::vector<ModuleRep>(copies, m), m.algebra(), m.side()).module;
}

std::vector<FpMatrix> hom_basis_matrices(const ModuleRep& m, const ModuleRep& n) {
    require_compatible(m, n, "hom");
    const auto p = m.modulus();
    const std::size_t a = m.dim(), b = n.dim();
    if (a == 0 || b == 0) return {};
    // vec(F) row-major; equations rho_M(g) F - F rho_N(g) = 0 for algebra generators g.
    std::vector<FpMatrix> blocks;
    const FpMatrix ia = FpMatrix::identity(a, p), ib = FpMatrix::identity(b, p);
    for (auto g : m.acting()->generators())
        blocks.push_back(kron(m.action(g), ib) - kron(ia, transpose(n.action(g))));
    const FpMatrix system = vstack(blocks, a * b, p);
    const FpMatrix ker = blocks.empty() ? FpMatrix::identity(a * b, p) : kernel_basis(system);
    std::vector<FpMatrix> out;
    out.reserve(ker.rows());
    for (std::size_t r = 0; r < ker.rows(); ++r) {
        FpMatrix f(a, b, p);
        for (std::size_t i = 0; i < a; ++i)
            for (std::size_t j = 0; j < b; ++j) f(i, j) = ker(r, i * b + j);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<ModuleMap> hom_basis(const ModuleRep& m, const ModuleRep& n) {
    std::vector<ModuleMap> out;
    for (auto& f : hom_basis_matrices(m, n)) out.push_back({m, n, std::move(f)});
    return out;
}

std::size_t hom_dim(const ModuleRep& m, const ModuleRep& n) { return hom_basis_matrices(m, n).size(); }

Pushout pushout(const ModuleMap& f, const ModuleMap& j) {
    if (!(f.source == j.source)) throw UsageError("pushout: maps need a common source");
    const ModuleRep& P = f.target;
    const ModuleRep& F = j.target;
    const auto p = P.modulus();
    const ModuleRep sum = direct_sum(P, F);
    const FpMatrix relations = hstack(f.matrix, scale(j.matrix, p - 1));
    const Quotient q = quotient(sum, row_space_basis(relations));
    const FpMatrix from_p = hstack(FpMatrix::identity(P.dim(), p), FpMatrix(P.dim(), F.dim(), p)) * q.projection.matrix;
    const FpMatrix from_f = hstack(FpMatrix(F.dim(), P.dim(), p), FpMatrix::identity(F.dim(), p)) * q.projection.matrix;
    return {q.module, {P, q.module, from_p}, {F, q.module, from_f}};
}

ModuleRep dual(const ModuleRep& m) {
    std::vector<FpMatrix> action;
    action.reserve(m.action().size());
    for (const auto& rho : m.action()) action.push_back(transpose(rho));
    return m.flipped(std::move(action));
}

bool verify_isomorphism(const ModuleRep& m, const ModuleRep& n, const FpMatrix& witness) {
    if (m.dim() != n.dim() || witness.rows() != m.dim() || witness.cols() != n.dim()) return false;
    if (rank(witness) != m.dim()) return false;
    return static_cast<bool>(validate_map({m, n, witness}));
}

IsoVerdict is_isomorphic(const ModuleRep& m, const ModuleRep& n, std::uint64_t seed) {
    require_compatible(m, n, "is_isomorphic");
    const auto p = m.modulus();
    if (m.dim() != n.dim())
        return {Verdict::No, std::nullopt, "dimensions differ: " + std::to_string(m.dim()) + " vs " + std::to_string(n.dim())};
    if (m.dim() == 0) return {Verdict::Yes, FpMatrix(0, 0, p), "both zero"};
    for (std::size_t i = 0; i < m.action().size(); ++i) {
        const auto rm = rank(m.action(i)), rn = rank(n.action(i));
        if (rm != rn)
            return {Verdict::No, std::nullopt,
                    "rank of b" + std::to_string(i) + " action differs: " + std::to_string(rm) + " vs " + std::to_string(rn)};
    }
    const auto homs = hom_basis_matrices(m, n);
    const std::size_t h = homs.size();
    const std::size_t end_m = hom_dim(m, m), end_n = hom_dim(n, n), back = hom_dim(n, m);
    if (h != end_m || end_m != end_n || back != end_m)
        return {Verdict::No, std::nullopt,
                "Hom dimensions differ: Hom(M,N)=" + std::to_string(h) + " End(M)=" + std::to_string(end_m) +
                    " End(N)=" + std::to_string(end_n) + " Hom(N,M)=" + std::to_string(back)};

    const std::size_t dim = m.dim();
    auto combine = [&](const Vec& c) {
        FpMatrix f(dim, dim, p);
        for (std::size_t k = 0; k < h; ++k)
            if (c[k] != 0) f = f + scale(homs[k], c[k]);
        return f;
    };
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        FpMatrix f = combine(random_vector(rng, h, p));
        if (rank(f) == dim) return {Verdict::Yes, f, "random Hom element is invertible"};
    }

    const double log2_space = static_cast<double>(h) * std::log2(static_cast<double>(p));
    if (log2_space <= 20.0) {
        // Odometer over all coefficient vectors; each digit step adds one basis map.
        Vec digits(h, 0);
        FpMatrix f(dim, dim, p);
        while (true) {
            std::size_t k = 0;
            while (k < h) {
                f = f + homs[k];
                if (++digits[k] < p) break;
                digits[k] = 0;
                ++k;
            }
            if (k == h) break;
            if (rank(f) == dim) return {Verdict::Yes, f, "exhaustive Hom search"};
        }
        return {Verdict::No, std::nullopt, "no invertible element among all " + std::to_string(h) + "-dim Hom(M,N)"};
    }
    for (int attempt = 0; attempt < 512; ++attempt) {
        FpMatrix f = combine(random_vector(rng, h, p));
        if (rank(f) == dim) return {Verdict::Yes, f, "random Hom element is invertible"};
    }
    return {Verdict::Unknown, std::nullopt, "Hom space too large to exhaust; sampling found no isomorphism"};
}

Vec random_vector(std::mt19937_64& rng, std::size_t n, std::uint32_t p) {
    Vec v(n);
    for (auto& x : v) x = static_cast<Scalar>(rng() % p);
    return v;
}

ModuleRep random_module(const AlgebraPtr& a, Side side, std::mt19937_64& rng, std::size_t max_gens,
                        std::size_t max_rank) {
    const std::size_t r = max_rank == 0 ? 0 : 1 + rng() % max_rank;
    const std::size_t g = rng() % (max_gens + 1);
    const ModuleRep f = free_module(a, side, r);
    FpMatrix gens(g, f.dim(), a->modulus());
    for (std::size_t i = 0; i < g; ++i) {
        const Vec v = random_vector(rng, f.dim(), a->modulus());
        std::copy(v.begin(), v.end(), gens.row(i).begin());
    }
    return quotient(f, submodule(f, gens)).module;
}

ModuleRep random_module(const AlgebraPtr& a, Side side, std::uint64_t seed, std::size_t max_gens,
                        std::size_t max_rank) {
    std::mt19937_64 rng(seed);
    return random_module(a, side, rng, max_gens, max_rank);
}

std::vector<ModuleRep> simple_modules(const AlgebraPtr& a, Side side) {
    std::vector<ModuleRep> found;
    ModuleRep current = regular_module(a, side);
    const auto p = a->modulus();
    while (current.dim() > 0) {
        const std::size_t n = current.dim();
        if (static_cast<double>(n) * std::log2(static_cast<double>(p)) > 20.0)
            throw UsageError("simple_modules: regular module too large for exhaustive search");
        // Enumerate vectors whose first nonzero coordinate is 1.
        std::optional<Submodule> best;
        for (std::size_t lead = 0; lead < n; ++lead) {
            Vec v(n, 0);
            v[lead] = 1;
            while (true) {
                Submodule s = submodule(current, FpMatrix::row_vector(v, p));
                if (!best || s.module.dim() < best->module.dim()) best = std::move(s);
                std::size_t k = lead + 1;
                while (k < n && ++v[k] == p) v[k++] = 0;
                if (k == n) break;
            }
        }
        const ModuleRep simple = best->module;
        const bool seen = std::any_of(found.begin(), found.end(),
                                      [&](const ModuleRep& s) { return is_isomorphic(s, simple).verdict == Verdict::Yes; });
        if (!seen) found.push_back(simple);
        current = quotient(current, *best).module;
    }
    return found;
}

}  // namespace torbench
