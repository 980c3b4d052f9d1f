#include "torbench/fp_matrix.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <sstream>

namespace torbench {

namespace {

constexpr std::uint32_t kMaxModulus = 1u << 16;

// Sieve computed once; trial division per modulus would be as cheap, but this
// makes the check a table lookup for every constructor call.
const std::bitset<kMaxModulus>& prime_table() {
    static const std::bitset<kMaxModulus> table = [] {
        std::bitset<kMaxModulus> t;
        for (std::uint32_t n = 2; n < kMaxModulus; ++n) {
            bool prime = true;
            for (std::uint32_t d = 2; d * d <= n; ++d) {
                if (n % d == 0) {
                    prime = false;
                    break;
                }
            }
            t[n] = prime;
        }
        return t;
    }();
    return table;
}

void check_modulus(std::uint32_t p) {
    if (p < 2 || p >= kMaxModulus || !prime_table()[p])
        throw UsageError("modulus " + std::to_string(p) + " is not a prime below 65536");
}

}  // namespace

bool is_prime(std::uint32_t p) { return p < kMaxModulus && prime_table()[p]; }

PrimeField::PrimeField(std::uint32_t p) : p_(p) { check_modulus(p); }

Scalar PrimeField::inv(Scalar a) const {
    if (a % p_ == 0) throw UsageError("inverse of zero in GF(p)");
    // Fermat: a^(p-2).
    std::uint64_t result = 1, base = a % p_;
    std::uint32_t e = p_ - 2;
    while (e) {
        if (e & 1) result = result * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<Scalar>(result);
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {
    check_modulus(p);
}

FpMatrix FpMatrix::identity(std::size_t n, std::uint32_t p) {
    FpMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols,
                             std::uint32_t p) {
    FpMatrix m(rows.size(), cols, p);
    PrimeField f(p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw UsageError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.reduce(rows[r][c]);
    }
    return m;
}

FpMatrix FpMatrix::from_row_vectors(const std::vector<Vec>& rows, std::size_t cols, std::uint32_t p) {
    FpMatrix m(rows.size(), cols, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw UsageError("ragged matrix rows");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

FpMatrix FpMatrix::row_vector(const Vec& v, std::uint32_t p) { return from_row_vectors({v}, v.size(), p); }

bool FpMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar s) { return s == 0; });
}

void require_same_modulus(const FpMatrix& a, const FpMatrix& b) {
    if (a.modulus() != b.modulus())
        throw UsageError("modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                         std::to_string(b.modulus()));
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    if (a.cols() != b.rows()) throw UsageError("shape mismatch in product");
    const std::uint64_t p = a.modulus();
    FpMatrix out(a.rows(), b.cols(), a.modulus());
    std::vector<std::uint64_t> acc(b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t aik = a(i, k);
            if (aik == 0) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                acc[j] += aik * brow[j];
                // p < 2^16 so each term < 2^32; fold before the sum can overflow.
                if (acc[j] >= (std::uint64_t{1} << 62)) acc[j] %= p;
            }
        }
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = static_cast<Scalar>(acc[j] % p);
    }
    return out;
}

FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("shape mismatch in sum");
    PrimeField f(a.modulus());
    FpMatrix out(a.rows(), a.cols(), a.modulus());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.add(a(i, j), b(i, j));
    return out;
}

FpMatrix operator-(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("shape mismatch in difference");
    PrimeField f(a.modulus());
    FpMatrix out(a.rows(), a.cols(), a.modulus());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.sub(a(i, j), b(i, j));
    return out;
}

FpMatrix scale(const FpMatrix& a, Scalar s) {
    PrimeField f(a.modulus());
    FpMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.mul(a(i, j), s % a.modulus());
    return out;
}

FpMatrix transpose(const FpMatrix& m) {
    FpMatrix t(m.cols(), m.rows(), m.modulus());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

FpMatrix hstack(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    if (a.rows() != b.rows()) throw UsageError("hstack row mismatch");
    FpMatrix out(a.rows(), a.cols() + b.cols(), a.modulus());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(i).begin() + a.cols());
    }
    return out;
}

FpMatrix vstack(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    if (a.cols() != b.cols()) throw UsageError("vstack column mismatch");
    FpMatrix out(a.rows() + b.rows(), a.cols(), a.modulus());
    for (std::size_t i = 0; i < a.rows(); ++i) std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
    for (std::size_t i = 0; i < b.rows(); ++i)
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(a.rows() + i).begin());
    return out;
}

FpMatrix vstack(const std::vector<FpMatrix>& blocks, std::size_t cols, std::uint32_t p) {
    std::size_t total = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols || b.modulus() != p) throw UsageError("vstack block mismatch");
        total += b.rows();
    }
    FpMatrix out(total, cols, p);
    std::size_t r = 0;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.rows(); ++i, ++r) std::copy(b.row(i).begin(), b.row(i).end(), out.row(r).begin());
    return out;
}

FpMatrix block_diag(const std::vector<FpMatrix>& blocks, std::uint32_t p) {
    std::size_t nr = 0, nc = 0;
    for (const auto& b : blocks) {
        if (b.modulus() != p) throw UsageError("block_diag modulus mismatch");
        nr += b.rows();
        nc += b.cols();
    }
    FpMatrix out(nr, nc, p);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return out;
}

FpMatrix kron(const FpMatrix& a, const FpMatrix& b) {
    require_same_modulus(a, b);
    PrimeField f(a.modulus());
    FpMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a.modulus());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Scalar aij = a(i, j);
            if (aij == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = f.mul(aij, b(k, l));
        }
    return out;
}

FpMatrix select_rows(const FpMatrix& m, std::span<const std::size_t> idx) {
    FpMatrix out(idx.size(), m.cols(), m.modulus());
    for (std::size_t i = 0; i < idx.size(); ++i) std::copy(m.row(idx[i]).begin(), m.row(idx[i]).end(), out.row(i).begin());
    return out;
}

FpMatrix select_cols(const FpMatrix& m, std::span<const std::size_t> idx) {
    FpMatrix out(m.rows(), idx.size(), m.modulus());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(i, idx[j]);
    return out;
}

FpMatrix slice(const FpMatrix& m, std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
    if (r0 + nr > m.rows() || c0 + nc > m.cols()) throw UsageError("slice out of range");
    FpMatrix out(nr, nc, m.modulus());
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) out(i, j) = m(r0 + i, c0 + j);
    return out;
}

Vec vec_mul(std::span<const Scalar> v, const FpMatrix& m) {
    if (v.size() != m.rows()) throw UsageError("shape mismatch in vector-matrix product");
    const std::uint64_t p = m.modulus();
    std::vector<std::uint64_t> acc(m.cols(), 0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0) continue;
        auto row = m.row(k);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc[j] += static_cast<std::uint64_t>(v[k]) * row[j];
            if (acc[j] >= (std::uint64_t{1} << 62)) acc[j] %= p;
        }
    }
    Vec out(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = static_cast<Scalar>(acc[j] % p);
    return out;
}

Vec mat_vec(const FpMatrix& m, std::span<const Scalar> v) {
    if (v.size() != m.cols()) throw UsageError("shape mismatch in matrix-vector product");
    const std::uint64_t p = m.modulus();
    Vec out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t acc = 0;
        auto row = m.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) {
            acc += static_cast<std::uint64_t>(row[j]) * v[j];
            if (acc >= (std::uint64_t{1} << 62)) acc %= p;
        }
        out[i] = static_cast<Scalar>(acc % p);
    }
    return out;
}

bool is_zero(std::span<const Scalar> v) {
    return std::all_of(v.begin(), v.end(), [](Scalar s) { return s == 0; });
}

Rref rref(const FpMatrix& m) {
    Rref out{m, {}, 0};
    FpMatrix& a = out.reduced;
    const PrimeField f(m.modulus());
    const std::size_t nr = a.rows(), nc = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = r;
        while (piv < nr && a(piv, c) == 0) ++piv;
        if (piv == nr) continue;
        if (piv != r) std::swap_ranges(a.row(piv).begin(), a.row(piv).end(), a.row(r).begin());
        const Scalar inv = f.inv(a(r, c));
        if (inv != 1)
            for (std::size_t j = c; j < nc; ++j) a(r, j) = f.mul(a(r, j), inv);
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r || a(i, c) == 0) continue;
            const Scalar factor = a(i, c);
            for (std::size_t j = c; j < nc; ++j)
                if (a(r, j) != 0) a(i, j) = f.sub(a(i, j), f.mul(factor, a(r, j)));
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    return out;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

FpMatrix kernel_basis(const FpMatrix& m) {
    const Rref red = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : red.pivots) is_pivot[c] = true;
    const PrimeField f(m.modulus());
    FpMatrix basis(n - red.rank, n, m.modulus());
    std::size_t row = 0;
    for (std::size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        basis(row, free_col) = 1;
        for (std::size_t i = 0; i < red.rank; ++i) basis(row, red.pivots[i]) = f.neg(red.reduced(i, free_col));
        ++row;
    }
    return row_space_basis(basis);
}

FpMatrix left_kernel_basis(const FpMatrix& m) { return kernel_basis(transpose(m)); }

std::optional<Vec> solve(const FpMatrix& m, std::span<const Scalar> b) {
    if (b.size() != m.rows()) throw UsageError("solve: right-hand side length mismatch");
    FpMatrix aug(m.rows(), m.cols() + 1, m.modulus());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::copy(m.row(i).begin(), m.row(i).end(), aug.row(i).begin());
        aug(i, m.cols()) = b[i] % m.modulus();
    }
    const Rref red = rref(aug);
    if (!red.pivots.empty() && red.pivots.back() == m.cols()) return std::nullopt;
    Vec x(m.cols(), 0);
    for (std::size_t i = 0; i < red.rank; ++i) x[red.pivots[i]] = red.reduced(i, m.cols());
    return x;
}

FpMatrix row_space_basis(const FpMatrix& m) {
    Rref red = rref(m);
    return slice(red.reduced, 0, red.rank, 0, m.cols());
}

FpMatrix image_basis(const FpMatrix& m) { return row_space_basis(transpose(m)); }

QuotientSpace quotient_space(std::size_t ambient_dim, const FpMatrix& sub_basis) {
    if (sub_basis.cols() != ambient_dim) throw UsageError("quotient_space: basis width mismatch");
    const std::uint32_t p = sub_basis.modulus();
    const PrimeField f(p);
    const Rref red = rref(sub_basis);
    std::vector<bool> is_pivot(ambient_dim, false);
    for (auto c : red.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < ambient_dim; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    QuotientSpace q{FpMatrix(free_cols.size(), ambient_dim, p), FpMatrix(free_cols.size(), ambient_dim, p),
                    free_cols.size()};
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t c = free_cols[k];
        q.projection(k, c) = 1;
        for (std::size_t i = 0; i < red.rank; ++i) q.projection(k, red.pivots[i]) = f.neg(red.reduced(i, c));
        q.section(k, c) = 1;
    }
    return q;
}

std::optional<FpMatrix> left_inverse(const FpMatrix& m) {
    // x m = I  <=>  m^T x^T = I.
    const FpMatrix mt = transpose(m);
    FpMatrix xt(m.rows(), m.cols(), m.modulus());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Vec e(m.cols(), 0);
        e[j] = 1;
        auto col = solve(mt, e);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < m.rows(); ++i) xt(i, j) = (*col)[i];
    }
    return transpose(xt);
}

std::optional<FpMatrix> inverse(const FpMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    const Rref red = rref(hstack(m, FpMatrix::identity(n, m.modulus())));
    if (red.rank < n || (n > 0 && red.pivots[n - 1] != n - 1)) return std::nullopt;
    return slice(red.reduced, 0, n, n, n);
}

bool row_space_contains(const FpMatrix& space, const FpMatrix& sub) {
    if (sub.rows() == 0) return true;
    return rank(vstack(space, sub)) == rank(space);
}

EchelonBasis::EchelonBasis(std::size_t n, std::uint32_t p) : n_(n), f_(p) {}

Vec EchelonBasis::reduce(std::span<const Scalar> v) const {
    if (v.size() != n_) throw UsageError("EchelonBasis: vector length mismatch");
    Vec w(v.begin(), v.end());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = w[pivots_[i]];
        if (c == 0) continue;
        const Vec& r = rows_[i];
        for (std::size_t j = 0; j < n_; ++j)
            if (r[j] != 0) w[j] = f_.sub(w[j], f_.mul(c, r[j]));
    }
    return w;
}

bool EchelonBasis::insert(std::span<const Scalar> v) {
    Vec w = reduce(v);
    auto it = std::find_if(w.begin(), w.end(), [](Scalar s) { return s != 0; });
    if (it == w.end()) return false;
    const std::size_t piv = static_cast<std::size_t>(it - w.begin());
    const Scalar inv = f_.inv(*it);
    for (auto& x : w) x = f_.mul(x, inv);
    // Keep existing rows reduced against the new pivot.
    for (auto& r : rows_) {
        const Scalar c = r[piv];
        if (c == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            if (w[j] != 0) r[j] = f_.sub(r[j], f_.mul(c, w[j]));
    }
    rows_.push_back(std::move(w));
    pivots_.push_back(piv);
    return true;
}

bool EchelonBasis::contains(std::span<const Scalar> v) const { return is_zero(reduce(v)); }

FpMatrix EchelonBasis::basis() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
    FpMatrix out(rows_.size(), n_, f_.modulus());
    for (std::size_t i = 0; i < order.size(); ++i)
        std::copy(rows_[order[i]].begin(), rows_[order[i]].end(), out.row(i).begin());
    return out;
}

std::string to_string(const FpMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace torbench
