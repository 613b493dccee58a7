#pragma once

#include "ujn/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace ujn {

// Exact upper-triangular n x n matrix; only entries (i,j) with i <= j are
// stored, row-major, 1-based indices.  The coordinate ordering
// e11, e12, ..., e1n, e22, ..., enn is fixed globally and shared with
// Subspace echelon forms.
class UTMatrix {
public:
    explicit UTMatrix(int n) : n_(n), a_(dim(n)) {
        if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    }

    static int dim(int n) { return n * (n + 1) / 2; }

    static int coord_index(int n, int i, int j) {
        if (i < 1 || j < i || j > n) throw std::out_of_range("matrix index out of range");
        return (i - 1) * n - (i - 1) * (i - 2) / 2 + (j - i);
    }

    static std::pair<int, int> coord_slot(int n, int idx) {
        for (int i = 1; i <= n; ++i) {
            int row_len = n - i + 1;
            if (idx < row_len) return {i, i + idx};
            idx -= row_len;
        }
        throw std::out_of_range("coordinate index out of range");
    }

    static UTMatrix unit(int n, int i, int j) {
        UTMatrix m(n);
        m.set(i, j, 1);
        return m;
    }

    static UTMatrix identity(int n) {
        UTMatrix m(n);
        for (int i = 1; i <= n; ++i) m.set(i, i, 1);
        return m;
    }

    static UTMatrix diagonal(const std::vector<Rat>& d) {
        UTMatrix m(static_cast<int>(d.size()));
        for (int i = 1; i <= m.size(); ++i) m.set(i, i, d[i - 1]);
        return m;
    }

    int size() const { return n_; }

    const Rat& at(int i, int j) const { return a_[coord_index(n_, i, j)]; }
    void set(int i, int j, Rat v) { a_[coord_index(n_, i, j)] = std::move(v); }

    // Entry access that tolerates the strictly-lower (identically zero) part.
    Rat entry(int i, int j) const {
        if (i > j) return Rat(0);
        return at(i, j);
    }

    const std::vector<Rat>& coords() const { return a_; }

    static UTMatrix from_coords(int n, std::vector<Rat> coords) {
        if (static_cast<int>(coords.size()) != dim(n))
            throw std::invalid_argument("coordinate vector has wrong length");
        UTMatrix m(n);
        m.a_ = std::move(coords);
        return m;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    bool is_strictly_upper() const {
        for (int i = 1; i <= n_; ++i)
            if (at(i, i) != 0) return false;
        return true;
    }

    bool operator==(const UTMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
    bool operator!=(const UTMatrix& o) const { return !(*this == o); }

    UTMatrix operator+(const UTMatrix& o) const {
        check_same_size(o);
        UTMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    UTMatrix operator-(const UTMatrix& o) const {
        check_same_size(o);
        UTMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    UTMatrix operator-() const {
        UTMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
        return r;
    }

    friend UTMatrix operator*(const Rat& c, const UTMatrix& m) {
        UTMatrix r(m.n_);
        for (std::size_t k = 0; k < m.a_.size(); ++k) r.a_[k] = c * m.a_[k];
        return r;
    }

    // Associative matrix product.
    friend UTMatrix mul(const UTMatrix& x, const UTMatrix& y) {
        x.check_same_size(y);
        const int n = x.n_;
        UTMatrix r(n);
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j) {
                Rat s = 0;
                for (int k = i; k <= j; ++k) {
                    const Rat& xv = x.at(i, k);
                    if (xv == 0) continue;
                    const Rat& yv = y.at(k, j);
                    if (yv == 0) continue;
                    s += xv * yv;
                }
                if (s != 0) r.set(i, j, std::move(s));
            }
        return r;
    }

    UTMatrix inverse() const {
        for (int i = 1; i <= n_; ++i)
            if (at(i, i) == 0) throw std::invalid_argument("matrix is singular");
        UTMatrix inv(n_);
        for (int i = 1; i <= n_; ++i) inv.set(i, i, Rat(1) / at(i, i));
        for (int j = 2; j <= n_; ++j)
            for (int i = j - 1; i >= 1; --i) {
                Rat s = 0;
                for (int k = i + 1; k <= j; ++k) s += at(i, k) * inv.at(k, j);
                if (s != 0) inv.set(i, j, -s / at(i, i));
            }
        return inv;
    }

private:
    void check_same_size(const UTMatrix& o) const {
        if (n_ != o.n_) throw std::invalid_argument("matrix size mismatch");
    }

    int n_;
    std::vector<Rat> a_;
};

inline UTMatrix jordan_product(const UTMatrix& a, const UTMatrix& b) {
    return mul(a, b) + mul(b, a);
}

inline UTMatrix associator(const UTMatrix& a, const UTMatrix& b, const UTMatrix& c) {
    return jordan_product(jordan_product(a, b), c) - jordan_product(a, jordan_product(b, c));
}

// Left-normed k-fold Jordan power a o a o ... o a.  Always equals
// 2^(k-1) * a^k in the associative envelope; asserted on every call.
inline UTMatrix circle_power(const UTMatrix& a, int k) {
    if (k < 1) throw std::invalid_argument("power exponent must be >= 1");
    UTMatrix p = a;
    for (int i = 1; i < k; ++i) p = jordan_product(p, a);
    UTMatrix assoc = a;
    for (int i = 1; i < k; ++i) assoc = mul(assoc, a);
    if (p != pow2(k - 1) * assoc) throw std::logic_error("power-associativity check failed");
    return p;
}

// Anti-diagonal reflection e_ij -> e_{n-j+1, n-i+1}: an involutive
// antiautomorphism of UT_n and automorphism of the Jordan algebra.
inline UTMatrix mirror_map(const UTMatrix& x) {
    const int n = x.size();
    UTMatrix r(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) r.set(n - j + 1, n - i + 1, x.at(i, j));
    return r;
}

// Mirror units Y = e_{i,i+m} +/- e_{n-i-m+1, n-i+1}.  When the two slots
// coincide (n-m odd, middle position) the plus unit doubles and the minus
// unit vanishes.
inline UTMatrix mirror_unit(int n, int i, int m, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("mirror unit sign must be +1 or -1");
    if (i < 1 || m < 0 || i + m > n) throw std::out_of_range("mirror unit index out of range");
    UTMatrix r = UTMatrix::unit(n, i, i + m);
    UTMatrix partner = UTMatrix::unit(n, n - i - m + 1, n - i + 1);
    return sign == 1 ? r + partner : r - partner;
}

// P x P^{-1} for invertible upper-triangular P.
inline UTMatrix conjugate(const UTMatrix& x, const UTMatrix& P) {
    return mul(mul(P, x), P.inverse());
}

} // namespace ujn
