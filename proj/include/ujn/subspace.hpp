#pragma once

#include "ujn/linalg.hpp"
#include "ujn/ut_matrix.hpp"

#include <stdexcept>
#include <vector>

namespace ujn {

// Linear subspace of UJ_n, stored as the unique reduced row echelon basis
// with respect to the global coordinate ordering.  Equal subspaces have
// identical stored bases.
class Subspace {
public:
    static Subspace zero(int n) { return Subspace(n); }

    static Subspace span(int n, const std::vector<UTMatrix>& gens) {
        linalg::Mat m;
        m.reserve(gens.size());
        for (const auto& g : gens) {
            if (g.size() != n) throw std::invalid_argument("ambient size mismatch");
            m.push_back(g.coords());
        }
        Subspace s(n);
        s.pivots_ = linalg::rref(m);
        s.rows_ = std::move(m);
        return s;
    }

    static Subspace full(int n) {
        std::vector<UTMatrix> units;
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j) units.push_back(UTMatrix::unit(n, i, j));
        return span(n, units);
    }

    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<int>& pivots() const { return pivots_; }

    std::vector<UTMatrix> basis() const {
        std::vector<UTMatrix> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(UTMatrix::from_coords(n_, r));
        return out;
    }

    UTMatrix basis_vector(int k) const { return UTMatrix::from_coords(n_, rows_.at(k)); }

    // Residual of x after eliminating this subspace's pivots.
    UTMatrix reduce(const UTMatrix& x) const {
        check_ambient(x.size());
        auto v = x.coords();
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rat& c = v[pivots_[r]];
            if (c == 0) continue;
            Rat f = c;
            for (std::size_t j = pivots_[r]; j < v.size(); ++j) v[j] -= f * rows_[r][j];
        }
        return UTMatrix::from_coords(n_, std::move(v));
    }

    bool contains(const UTMatrix& x) const { return reduce(x).is_zero(); }

    bool contains(const Subspace& other) const {
        for (const auto& r : other.rows_)
            if (!contains(UTMatrix::from_coords(n_, r))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return n_ == o.n_ && rows_ == o.rows_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    friend Subspace operator+(const Subspace& u, const Subspace& v) {
        u.check_ambient(v.n_);
        linalg::Mat m = u.rows_;
        m.insert(m.end(), v.rows_.begin(), v.rows_.end());
        Subspace s(u.n_);
        s.pivots_ = linalg::rref(m);
        s.rows_ = std::move(m);
        return s;
    }

    friend Subspace intersect(const Subspace& u, const Subspace& v) {
        u.check_ambient(v.n_);
        // columns: coefficients on u's basis then v's basis; rows: ambient coords
        const std::size_t du = u.rows_.size(), dv = v.rows_.size();
        if (du == 0 || dv == 0) return zero(u.n_);
        linalg::Mat sys(u.rows_[0].size(), linalg::Row(du + dv, Rat(0)));
        for (std::size_t k = 0; k < du; ++k)
            for (std::size_t c = 0; c < sys.size(); ++c) sys[c][k] = u.rows_[k][c];
        for (std::size_t k = 0; k < dv; ++k)
            for (std::size_t c = 0; c < sys.size(); ++c) sys[c][du + k] = -v.rows_[k][c];
        auto null = linalg::nullspace(sys, du + dv);
        std::vector<UTMatrix> gens;
        for (const auto& w : null) {
            auto acc = UTMatrix(u.n_);
            for (std::size_t k = 0; k < du; ++k)
                if (w[k] != 0) acc = acc + w[k] * UTMatrix::from_coords(u.n_, u.rows_[k]);
            gens.push_back(acc);
        }
        return span(u.n_, gens);
    }

    // Echelonized span of all pairwise Jordan products of basis vectors.
    friend Subspace product_span(const Subspace& u, const Subspace& v) {
        u.check_ambient(v.n_);
        std::vector<UTMatrix> gens;
        gens.reserve(u.rows_.size() * v.rows_.size());
        for (const auto& a : u.rows_)
            for (const auto& b : v.rows_)
                gens.push_back(jordan_product(UTMatrix::from_coords(u.n_, a), UTMatrix::from_coords(v.n_, b)));
        return span(u.n_, gens);
    }

    // Image under a linear map of matrices.
    template <typename F>
    Subspace mapped(F&& f) const {
        std::vector<UTMatrix> gens;
        gens.reserve(rows_.size());
        for (const auto& r : rows_) gens.push_back(f(UTMatrix::from_coords(n_, r)));
        int m = gens.empty() ? n_ : gens.front().size();
        return span(m, gens);
    }

private:
    explicit Subspace(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("ambient size must be >= 1");
    }

    void check_ambient(int n) const {
        if (n != n_) throw std::invalid_argument("ambient size mismatch");
    }

    int n_;
    linalg::Mat rows_;
    std::vector<int> pivots_;
};

// { x in S : x o t in W for every t in target }, solved as one exact
// linear system in the coefficients over S's basis.
inline Subspace annihilator_mod(const Subspace& S, const Subspace& target, const Subspace& W) {
    if (S.ambient() != target.ambient() || S.ambient() != W.ambient())
        throw std::invalid_argument("ambient size mismatch");
    const int ds = S.dim();
    if (ds == 0) return Subspace::zero(S.ambient());
    if (target.dim() == 0) return S;

    linalg::Mat constraints;
    for (int tj = 0; tj < target.dim(); ++tj) {
        UTMatrix t = target.basis_vector(tj);
        // column k: coords of reduce(s_k o t) mod W
        std::vector<std::vector<Rat>> cols;
        cols.reserve(ds);
        for (int k = 0; k < ds; ++k)
            cols.push_back(W.reduce(jordan_product(S.basis_vector(k), t)).coords());
        const std::size_t ambient_dim = cols[0].size();
        for (std::size_t c = 0; c < ambient_dim; ++c) {
            linalg::Row row(ds);
            bool nonzero = false;
            for (int k = 0; k < ds; ++k) {
                row[k] = cols[k][c];
                if (row[k] != 0) nonzero = true;
            }
            if (nonzero) constraints.push_back(std::move(row));
        }
    }
    if (constraints.empty()) return S;
    auto null = linalg::nullspace(std::move(constraints), ds);
    std::vector<UTMatrix> gens;
    for (const auto& coeff : null) {
        UTMatrix acc(S.ambient());
        for (int k = 0; k < ds; ++k)
            if (coeff[k] != 0) acc = acc + coeff[k] * S.basis_vector(k);
        gens.push_back(acc);
    }
    return Subspace::span(S.ambient(), gens);
}

} // namespace ujn
