#pragma once

#include "ujn/grading.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ujn {

inline std::vector<GroupElement> reversed(const std::vector<GroupElement>& eta) {
    return std::vector<GroupElement>(eta.rbegin(), eta.rend());
}

inline bool lex_less(const FiniteAbelianGroup& G, const std::vector<GroupElement>& a,
                     const std::vector<GroupElement>& b) {
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
        int c = canonical_compare(G, a[k], b[k]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

// Lexicographic minimum of {eta, rev eta}.
inline GradingLabel elementary_canonical(const FiniteAbelianGroup& G, const std::vector<GroupElement>& eta) {
    for (const auto& g : eta) G.check_member(g);
    auto rev = reversed(eta);
    return GradingLabel::elementary(lex_less(G, rev, eta) ? rev : eta);
}

// Entries 1..floor((n-1)/2) replaced by canonical coset representatives
// mod <t>; for n even the last entry stays exact; t stays exact.
inline GradingLabel mt_canonical(const FiniteAbelianGroup& G, int n, const GroupElement& t,
                                 const std::vector<GroupElement>& eta) {
    if (G.element_order(t) != 2) throw std::invalid_argument("mt label requires o(t) = 2");
    const int q = n / 2;
    if (static_cast<int>(eta.size()) != q) throw std::invalid_argument("mt label has wrong length");
    const int p = (n - 1) / 2;
    std::vector<GroupElement> out = eta;
    for (int k = 0; k < p; ++k) {
        GroupElement shifted = G.compose(eta[k], t);
        if (canonical_compare(G, shifted, eta[k]) < 0) out[k] = shifted;
    }
    return GradingLabel::mt(t, std::move(out));
}

inline GradingLabel canonical_label(const FiniteAbelianGroup& G, int n, const GradingLabel& label) {
    if (label.kind == GradingLabel::Kind::Elementary) {
        if (static_cast<int>(label.eta.size()) != n - 1)
            throw std::invalid_argument("elementary label has wrong length");
        return elementary_canonical(G, label.eta);
    }
    return mt_canonical(G, n, label.t, label.eta);
}

// True iff the two labels name graded-isomorphic standard gradings.
inline bool labels_isomorphic(const FiniteAbelianGroup& G, int n, const GradingLabel& a, const GradingLabel& b) {
    if (a.kind != b.kind) return false;
    return canonical_label(G, n, a) == canonical_label(G, n, b);
}

// Certificate of a graded isomorphism onto the standard grading of
// target_label: x -> P (flip ? mirror(x) : x) P^{-1}.
struct GradedIso {
    UTMatrix P;
    bool flip = false;
    GradingLabel target;

    UTMatrix apply(const UTMatrix& x) const { return conjugate(flip ? mirror_map(x) : x, P); }

    // conj_Q after the current map
    void compose_conjugation(const UTMatrix& Q) { P = mul(Q, P); }

    // mirror after the current map; renormalizes to conj-then-flip form
    void compose_flip() {
        P = mirror_map(P).inverse();
        flip = !flip;
    }

    // Every source component must land inside the equal-degree component of
    // the standard grading of target.
    bool validates(const Grading& source) const {
        Grading std_target = standard_grading(source.group(), source.size_n(), target);
        for (const auto& comp : source.components()) {
            Subspace dest = std_target.component(comp.degree);
            for (const auto& b : comp.space.basis())
                if (!dest.contains(apply(b))) return false;
        }
        return true;
    }
};

namespace detail {

// Sign diagonal realizing the coset shifts that turn the MT label
// (t, from) into (t, to): slots i with to_i = t*from_i swap the +/- mirror
// spans at window i.
inline UTMatrix mt_shift_matrix(const FiniteAbelianGroup& G, int n, const GroupElement& t,
                                const std::vector<GroupElement>& from, const std::vector<GroupElement>& to) {
    const int p = (n - 1) / 2;
    const int h = (n + 1) / 2;
    std::vector<int> eps(p + 2, 1), c(h + 2, 1);
    for (int i = 1; i <= p; ++i) {
        if (from[i - 1] == to[i - 1])
            eps[i] = 1;
        else if (G.compose(from[i - 1], t) == to[i - 1])
            eps[i] = -1;
        else
            throw std::invalid_argument("labels do not differ by coset shifts");
    }
    for (int i = p; i >= 1; --i) c[i] = eps[i] * c[i + 1];
    std::vector<Rat> d(n, Rat(1));
    for (int j = 1; j <= n / 2; ++j) d[j - 1] = c[j];
    return UTMatrix::diagonal(d);
}

} // namespace detail

// Explicit certificate between isomorphic labels: a flip for elementary
// reversal, a sign diagonal for MT coset shifts.
inline GradedIso explicit_isomorphism(const FiniteAbelianGroup& G, int n, const GradingLabel& a,
                                      const GradingLabel& b) {
    if (!labels_isomorphic(G, n, a, b)) throw std::invalid_argument("labels are not isomorphic");
    GradedIso iso{UTMatrix::identity(n), false, b};
    if (a.kind == GradingLabel::Kind::Elementary) {
        if (a.eta != b.eta) iso.flip = true; // b = rev a
    } else {
        if (a.eta != b.eta) iso.P = detail::mt_shift_matrix(G, n, a.t, a.eta, b.eta);
    }
    if (!iso.validates(standard_grading(G, n, a)))
        throw std::logic_error("isomorphism certificate failed validation");
    return iso;
}

// --- enumeration -------------------------------------------------------------

inline std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline std::uint64_t count_elementary_classes(const FiniteAbelianGroup& G, int n) {
    // reversal orbits: (|G|^(n-1) + |G|^ceil((n-1)/2)) / 2
    unsigned half = static_cast<unsigned>(n / 2); // = ceil((n-1)/2)
    return (pow_u64(G.order(), n - 1) + pow_u64(G.order(), half)) / 2;
}

inline std::uint64_t count_mt_classes(const FiniteAbelianGroup& G, int n) {
    std::uint64_t per_t = n % 2 == 1 ? pow_u64(G.order() / 2, (n - 1) / 2)
                                     : pow_u64(G.order() / 2, (n - 2) / 2) * G.order();
    return G.involutions().size() * per_t;
}

// One canonical label per isomorphism class: all elementary classes in
// lexicographic order, then MT classes ordered by (t, eta).
inline std::vector<GradingLabel> enumerate_classes(const FiniteAbelianGroup& G, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<GradingLabel> out;

    // elementary: orbits of reversal on G^(n-1), lexicographic representatives
    std::vector<GroupElement> eta(n - 1, G.identity());
    auto elems = G.elements();
    std::vector<std::size_t> idx(n - 1, 0);
    while (true) {
        for (int k = 0; k < n - 1; ++k) eta[k] = elems[idx[k]];
        if (!lex_less(G, reversed(eta), eta)) out.push_back(GradingLabel::elementary(eta));
        int k = n - 2;
        for (; k >= 0; --k) {
            if (++idx[k] < elems.size()) break;
            idx[k] = 0;
        }
        if (k < 0) break;
        if (n == 1) break;
    }
    if (n == 1 && out.empty()) out.push_back(GradingLabel::elementary({}));

    // MT: per involution t, coset representatives (last entry exact for even n)
    const int q = n / 2;
    const int p = (n - 1) / 2;
    for (const auto& t : G.involutions()) {
        if (n < 2) break;
        auto quot = quotient_mod_involution(G, t);
        std::vector<GroupElement> reps;
        for (const auto& qe : quot.quotient.elements()) reps.push_back(quot.section(qe));
        std::sort(reps.begin(), reps.end(),
                  [&](const GroupElement& x, const GroupElement& y) { return canonical_compare(G, x, y) < 0; });
        std::vector<std::vector<GroupElement>> slots(q, reps);
        if (n % 2 == 0) slots[q - 1] = elems;
        std::vector<std::size_t> midx(q, 0);
        while (true) {
            std::vector<GroupElement> me(q);
            for (int k = 0; k < q; ++k) me[k] = slots[k][midx[k]];
            out.push_back(GradingLabel::mt(t, std::move(me)));
            int k = q - 1;
            for (; k >= 0; --k) {
                if (++midx[k] < slots[k].size()) break;
                midx[k] = 0;
            }
            if (k < 0) break;
        }
    }

    (void)p;
    return out;
}

} // namespace ujn
