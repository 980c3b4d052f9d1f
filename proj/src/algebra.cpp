#include "torbench/algebra.hpp"

#include <sstream>

namespace torbench {

Algebra::Algebra(std::string name, std::uint32_t p, std::vector<std::vector<Vec>> mul, Vec unit)
    : name_(std::move(name)), p_(p), dim_(unit.size()), mul_(std::move(mul)), unit_(std::move(unit)) {
    const PrimeField f(p);
    if (mul_.size() != dim_) throw UsageError("algebra '" + name_ + "': multiplication table has wrong row count");
    for (auto& row : mul_) {
        if (row.size() != dim_) throw UsageError("algebra '" + name_ + "': multiplication table is not square");
        for (auto& v : row) {
            if (v.size() != dim_) throw UsageError("algebra '" + name_ + "': product vector has wrong length");
            for (auto& x : v) x = f.reduce(x);
        }
    }
    for (auto& x : unit_) x = f.reduce(x);

    // Greedy: keep b_i unless it already lies in the subalgebra generated so far.
    auto closure = [&](const std::vector<std::size_t>& gens) {
        EchelonBasis span(dim_, p_);
        std::vector<Vec> queue;
        auto push = [&](const Vec& v) {
            if (span.insert(v)) queue.push_back(v);
        };
        push(unit_);
        for (auto g : gens) push(basis_vector(g));
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (auto g : gens) push(multiply(queue[head], basis_vector(g)));
        return span;
    };
    for (std::size_t i = 0; i < dim_; ++i)
        if (!closure(generators_).contains(basis_vector(i))) generators_.push_back(i);
}

Vec Algebra::multiply(std::span<const Scalar> x, std::span<const Scalar> y) const {
    const PrimeField f(p_);
    Vec out(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (y[j] == 0) continue;
            const Scalar c = f.mul(x[i], y[j]);
            const Vec& b = mul_[i][j];
            for (std::size_t k = 0; k < dim_; ++k)
                if (b[k] != 0) out[k] = f.add(out[k], f.mul(c, b[k]));
        }
    }
    return out;
}

Vec Algebra::basis_vector(std::size_t i) const {
    Vec v(dim_, 0);
    v[i] = 1;
    return v;
}

bool Algebra::same_structure(const Algebra& other) const {
    return p_ == other.p_ && mul_ == other.mul_ && unit_ == other.unit_;
}

AlgebraValidation validate_algebra(const Algebra& a) {
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i) {
        const Vec bi = a.basis_vector(i);
        if (a.multiply(a.unit(), bi) != bi || a.multiply(bi, a.unit()) != bi) {
            std::ostringstream os;
            os << "unit law fails at b" << i;
            return {false, os.str()};
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                const Vec left = a.multiply(a.product(i, j), a.basis_vector(k));
                const Vec right = a.multiply(a.basis_vector(i), a.product(j, k));
                if (left != right) {
                    std::ostringstream os;
                    os << "associativity fails at (" << i << "," << j << "," << k << ")";
                    return {false, os.str()};
                }
            }
    return {};
}

Algebra opposite(const Algebra& a) {
    const std::size_t d = a.dim();
    std::vector<std::vector<Vec>> mul(d, std::vector<Vec>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) mul[i][j] = a.product(j, i);
    return Algebra(a.name() + "^op", a.modulus(), std::move(mul), a.unit());
}

bool is_commutative(const Algebra& a) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            if (a.product(i, j) != a.product(j, i)) return false;
    return true;
}

Algebra build_truncated_poly(std::uint32_t p, std::size_t n) {
    if (n == 0) throw UsageError("truncated_poly requires n >= 1");
    std::vector<std::vector<Vec>> mul(n, std::vector<Vec>(n, Vec(n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n) mul[i][j][i + j] = 1;
    Vec unit(n, 0);
    unit[0] = 1;
    return Algebra("GF(" + std::to_string(p) + ")[x]/(x^" + std::to_string(n) + ")", p, std::move(mul),
                   std::move(unit));
}

Algebra build_upper_triangular(std::uint32_t p, std::size_t n) {
    if (n == 0) throw UsageError("upper_triangular requires n >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> units;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) units.emplace_back(i, j);
    const std::size_t d = units.size();
    auto index_of = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < d; ++k)
            if (units[k] == std::pair{i, j}) return k;
        return d;
    };
    std::vector<std::vector<Vec>> mul(d, std::vector<Vec>(d, Vec(d, 0)));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            if (units[a].second == units[b].first) mul[a][b][index_of(units[a].first, units[b].second)] = 1;
    Vec unit(d, 0);
    for (std::size_t i = 0; i < n; ++i) unit[index_of(i, i)] = 1;
    return Algebra("T" + std::to_string(n) + "(GF(" + std::to_string(p) + "))", p, std::move(mul), std::move(unit));
}

Algebra build_group_algebra_cyclic(std::uint32_t p, std::size_t n) {
    if (n == 0) throw UsageError("group_algebra_cyclic requires n >= 1");
    std::vector<std::vector<Vec>> mul(n, std::vector<Vec>(n, Vec(n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mul[i][j][(i + j) % n] = 1;
    Vec unit(n, 0);
    unit[0] = 1;
    return Algebra("GF(" + std::to_string(p) + ")[C" + std::to_string(n) + "]", p, std::move(mul), std::move(unit));
}

}  // namespace torbench
