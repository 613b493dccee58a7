#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ujn {

// Element of a finite abelian group given as a direct product of cyclic
// groups; coordinate j is reduced modulo the j-th modulus.
struct GroupElement {
    std::vector<std::int64_t> c;

    bool operator==(const GroupElement& o) const { return c == o.c; }
    bool operator!=(const GroupElement& o) const { return c != o.c; }
    bool operator<(const GroupElement& o) const { return c < o.c; }
};

// Z_{d_1} x ... x Z_{d_k}.  The trivial group is the empty product.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;

    explicit FiniteAbelianGroup(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
        for (auto d : moduli_)
            if (d < 1) throw std::invalid_argument("group modulus must be >= 1");
    }

    std::size_t rank() const { return moduli_.size(); }
    const std::vector<std::int64_t>& moduli() const { return moduli_; }

    std::uint64_t order() const {
        std::uint64_t o = 1;
        for (auto d : moduli_) o *= static_cast<std::uint64_t>(d);
        return o;
    }

    bool operator==(const FiniteAbelianGroup& o) const { return moduli_ == o.moduli_; }
    bool operator!=(const FiniteAbelianGroup& o) const { return moduli_ != o.moduli_; }

    GroupElement identity() const { return GroupElement{std::vector<std::int64_t>(moduli_.size(), 0)}; }

    // Reduces raw coordinates into canonical range.
    GroupElement element(std::vector<std::int64_t> raw) const {
        if (raw.size() != moduli_.size())
            throw std::invalid_argument("coordinate length does not match group rank");
        for (std::size_t j = 0; j < raw.size(); ++j) {
            raw[j] %= moduli_[j];
            if (raw[j] < 0) raw[j] += moduli_[j];
        }
        return GroupElement{std::move(raw)};
    }

    void check_member(const GroupElement& g) const {
        if (g.c.size() != moduli_.size())
            throw std::invalid_argument("coordinate length does not match group rank");
        for (std::size_t j = 0; j < g.c.size(); ++j)
            if (g.c[j] < 0 || g.c[j] >= moduli_[j])
                throw std::invalid_argument("group element coordinate out of range");
    }

    GroupElement compose(const GroupElement& g, const GroupElement& h) const {
        check_member(g);
        check_member(h);
        std::vector<std::int64_t> r(moduli_.size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = (g.c[j] + h.c[j]) % moduli_[j];
        return GroupElement{std::move(r)};
    }

    GroupElement inverse(const GroupElement& g) const {
        check_member(g);
        std::vector<std::int64_t> r(moduli_.size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = g.c[j] == 0 ? 0 : moduli_[j] - g.c[j];
        return GroupElement{std::move(r)};
    }

    GroupElement power(const GroupElement& g, std::int64_t k) const {
        check_member(g);
        std::vector<std::int64_t> r(moduli_.size());
        for (std::size_t j = 0; j < r.size(); ++j) {
            std::int64_t v = (g.c[j] * (k % moduli_[j])) % moduli_[j];
            if (v < 0) v += moduli_[j];
            r[j] = v;
        }
        return GroupElement{std::move(r)};
    }

    std::int64_t element_order(const GroupElement& g) const {
        check_member(g);
        std::int64_t ord = 1;
        for (std::size_t j = 0; j < moduli_.size(); ++j) {
            std::int64_t oj = moduli_[j] / std::gcd(moduli_[j], g.c[j] == 0 ? moduli_[j] : g.c[j]);
            ord = std::lcm(ord, oj);
        }
        return ord;
    }

    // All elements in lexicographic coordinate order.
    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        out.reserve(order());
        GroupElement cur = identity();
        while (true) {
            out.push_back(cur);
            std::size_t j = moduli_.size();
            while (j > 0) {
                --j;
                if (++cur.c[j] < moduli_[j]) break;
                cur.c[j] = 0;
                if (j == 0) return out;
            }
            if (moduli_.empty()) return out;
        }
    }

    // Elements of order exactly 2, in canonical order.
    std::vector<GroupElement> involutions() const {
        std::vector<GroupElement> out;
        for (const auto& g : elements())
            if (element_order(g) == 2) out.push_back(g);
        return out;
    }

private:
    std::vector<std::int64_t> moduli_;
};

// Strict total order used to pick canonical representatives: -1, 0, +1.
inline int canonical_compare(const FiniteAbelianGroup& G, const GroupElement& g, const GroupElement& h) {
    G.check_member(g);
    G.check_member(h);
    if (g.c < h.c) return -1;
    if (h.c < g.c) return 1;
    return 0;
}

// Homomorphism between explicit groups, given by generator images.
struct GroupHom {
    FiniteAbelianGroup source;
    FiniteAbelianGroup target;
    std::vector<GroupElement> images; // image of the j-th canonical generator

    GroupHom(FiniteAbelianGroup src, FiniteAbelianGroup tgt, std::vector<GroupElement> imgs)
        : source(std::move(src)), target(std::move(tgt)), images(std::move(imgs)) {
        if (images.size() != source.rank())
            throw std::invalid_argument("generator image count does not match source rank");
        for (std::size_t j = 0; j < images.size(); ++j) {
            target.check_member(images[j]);
            if (target.power(images[j], source.moduli()[j]) != target.identity())
                throw std::invalid_argument("generator image order incompatible with source modulus");
        }
    }

    GroupElement apply(const GroupElement& g) const {
        source.check_member(g);
        GroupElement r = target.identity();
        for (std::size_t j = 0; j < images.size(); ++j)
            r = target.compose(r, target.power(images[j], g.c[j]));
        return r;
    }

    static GroupHom identity_hom(const FiniteAbelianGroup& G) {
        std::vector<GroupElement> imgs;
        for (std::size_t j = 0; j < G.rank(); ++j) {
            GroupElement e = G.identity();
            e.c[j] = G.moduli()[j] > 1 ? 1 : 0;
            imgs.push_back(e);
        }
        return GroupHom(G, G, imgs);
    }

    static GroupHom trivial_hom(const FiniteAbelianGroup& G) {
        FiniteAbelianGroup one(std::vector<std::int64_t>{});
        return GroupHom(G, one, std::vector<GroupElement>(G.rank(), one.identity()));
    }
};

namespace detail {

// Diagonalizes an integer relation matrix by unimodular row/column
// operations, tracking the inverse of the accumulated column transform so
// generator images can be recovered.
struct SmithResult {
    std::vector<std::int64_t> diag;                 // one invariant per column
    std::vector<std::vector<std::int64_t>> col_inv; // V^{-1}: new coords of old generators
};

inline SmithResult smith_normal_form(std::vector<std::vector<std::int64_t>> A, std::size_t cols) {
    const std::size_t rows = A.size();
    std::vector<std::vector<std::int64_t>> W(cols, std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) W[i][i] = 1;

    auto row_op = [&](std::size_t dst, std::size_t src, std::int64_t c) {
        for (std::size_t j = 0; j < cols; ++j) A[dst][j] += c * A[src][j];
    };
    auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t c) {
        for (std::size_t i = 0; i < rows; ++i) A[i][dst] += c * A[i][src];
        // col_dst += c*col_src corresponds to row_src -= c*row_dst on V^{-1}
        for (std::size_t j = 0; j < cols; ++j) W[src][j] -= c * W[dst][j];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows; ++i) std::swap(A[i][a], A[i][b]);
        std::swap(W[a], W[b]);
    };
    auto col_neg = [&](std::size_t a) {
        for (std::size_t i = 0; i < rows; ++i) A[i][a] = -A[i][a];
        for (std::size_t j = 0; j < cols; ++j) W[a][j] = -W[a][j];
    };

    std::size_t t = 0;
    while (t < cols && t < rows) {
        // find a nonzero pivot in the remaining block
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows && pi == rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (A[i][j] != 0) { pi = i; pj = j; break; }
        if (pi == rows) break;
        std::swap(A[t], A[pi]);
        if (pj != t) col_swap(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (A[i][t] != 0) {
                    std::int64_t q = A[i][t] / A[t][t];
                    row_op(i, t, -q);
                    if (A[i][t] != 0) { std::swap(A[t], A[i]); clean = false; }
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (A[t][j] != 0) {
                    std::int64_t q = A[t][j] / A[t][t];
                    col_op(j, t, -q);
                    if (A[t][j] != 0) { col_swap(t, j); clean = false; }
                }
        }
        if (A[t][t] < 0) col_neg(t);
        ++t;
    }

    SmithResult res;
    res.diag.assign(cols, 1);
    for (std::size_t j = 0; j < cols && j < rows; ++j)
        if (A[j][j] != 0) res.diag[j] = A[j][j] < 0 ? -A[j][j] : A[j][j];
    res.col_inv = std::move(W);
    return res;
}

} // namespace detail

// Quotient of G by the order-2 subgroup generated by t, presented in
// direct-product form, with the canonical projection and a deterministic
// coset-representative chooser (canonical minimum of each coset).
struct QuotientModInvolution {
    FiniteAbelianGroup quotient;
    GroupHom projection;
    std::map<std::vector<std::int64_t>, GroupElement> section_table;

    GroupElement section(const GroupElement& q) const {
        auto it = section_table.find(q.c);
        if (it == section_table.end()) throw std::invalid_argument("element not in quotient group");
        return it->second;
    }
};

inline QuotientModInvolution quotient_mod_involution(const FiniteAbelianGroup& G, const GroupElement& t) {
    if (G.element_order(t) != 2) throw std::invalid_argument("quotient requires an element of order 2");
    const std::size_t k = G.rank();

    // relations: d_j e_j = 0 and t = 0
    std::vector<std::vector<std::int64_t>> rel;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::int64_t> row(k, 0);
        row[j] = G.moduli()[j];
        rel.push_back(row);
    }
    rel.push_back(t.c);

    auto snf = detail::smith_normal_form(rel, k);

    std::vector<std::int64_t> q_moduli;
    std::vector<std::size_t> kept; // indices of nontrivial invariant factors
    for (std::size_t j = 0; j < k; ++j)
        if (snf.diag[j] > 1) {
            kept.push_back(j);
            q_moduli.push_back(snf.diag[j]);
        }
    FiniteAbelianGroup Q(q_moduli);
    if (Q.order() * 2 != G.order()) throw std::logic_error("quotient order mismatch");

    std::vector<GroupElement> images;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::int64_t> img;
        img.reserve(kept.size());
        for (auto r : kept) img.push_back(snf.col_inv[r][j]);
        images.push_back(Q.element(std::move(img)));
    }
    GroupHom proj(G, Q, images);

    QuotientModInvolution out{Q, proj, {}};
    for (const auto& g : G.elements()) {
        GroupElement q = proj.apply(g);
        out.section_table.emplace(q.c, g); // first hit in canonical order = coset minimum
    }
    return out;
}

// --- literals ------------------------------------------------------------

// Group literal: "Z4", "Z2xZ2", "Z1" (trivial).
inline FiniteAbelianGroup parse_group(const std::string& s) {
    std::vector<std::int64_t> moduli;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != 'Z' && s[pos] != 'z')
            throw std::invalid_argument("malformed group literal: " + s);
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw std::invalid_argument("malformed group literal: " + s);
        std::int64_t d = std::stoll(s.substr(start, pos - start));
        if (d < 1) throw std::invalid_argument("malformed group literal: " + s);
        if (d > 1) moduli.push_back(d);
        if (pos < s.size()) {
            if (s[pos] != 'x' && s[pos] != 'X')
                throw std::invalid_argument("malformed group literal: " + s);
            ++pos;
            if (pos == s.size()) throw std::invalid_argument("malformed group literal: " + s);
        }
    }
    return FiniteAbelianGroup(moduli);
}

inline std::string format_group(const FiniteAbelianGroup& G) {
    if (G.rank() == 0) return "Z1";
    std::string s;
    for (std::size_t j = 0; j < G.rank(); ++j) {
        if (j) s += "x";
        s += "Z" + std::to_string(G.moduli()[j]);
    }
    return s;
}

// Element literal: comma-separated coordinates, e.g. "1,0,3"; `sep` lets the
// term syntax use '.' instead.
inline GroupElement parse_element(const FiniteAbelianGroup& G, const std::string& s, char sep = ',') {
    std::vector<std::int64_t> coords;
    if (G.rank() == 0) {
        if (!s.empty() && s != "0") throw std::invalid_argument("malformed element literal: " + s);
        return G.identity();
    }
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty()) throw std::invalid_argument("malformed element literal: " + s);
        try {
            coords.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed element literal: " + s);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (coords.size() != G.rank()) throw std::invalid_argument("element literal has wrong coordinate count: " + s);
    return G.element(std::move(coords));
}

inline std::string format_element(const GroupElement& g, char sep = ',') {
    if (g.c.empty()) return "0";
    std::string s;
    for (std::size_t j = 0; j < g.c.size(); ++j) {
        if (j) s += sep;
        s += std::to_string(g.c[j]);
    }
    return s;
}

} // namespace ujn
