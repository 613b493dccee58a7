#pragma once

#include "ujn/rational.hpp"

#include <vector>

namespace ujn::linalg {

using Row = std::vector<Rat>;
using Mat = std::vector<Row>;

// In-place reduced row echelon form; zero rows are removed.  Returns the
// pivot column of each remaining row.  Exact, deterministic (first nonzero
// pivot), so the result is the unique canonical basis of the row space.
inline std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t sel = m.size();
        for (std::size_t i = r; i < m.size(); ++i)
            if (m[i][c] != 0) { sel = i; break; }
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        Rat inv = Rat(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    m.resize(r);
    return pivots;
}

inline int rank(Mat m) {
    return static_cast<int>(rref(m).size());
}

// Basis of { x : A x = 0 }, one row per free column, canonical form.
inline Mat nullspace(Mat a, std::size_t cols) {
    auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    std::vector<int> pivot_row(cols, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        pivot_row[pivots[r]] = static_cast<int>(r);
    }
    Mat basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Row v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t c = 0; c < cols; ++c)
            if (is_pivot[c]) v[c] = -a[pivot_row[c]][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// One particular solution of A x = b, or empty if inconsistent.  Free
// variables are set to zero.
inline std::vector<Rat> solve(Mat a, Row b) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    auto pivots = rref(a);
    Row x(cols, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (static_cast<std::size_t>(pivots[r]) == cols) return {}; // 0 = 1 row
        x[pivots[r]] = a[r][cols];
    }
    return x;
}

} // namespace ujn::linalg
