#pragma once

#include "ujn/group.hpp"
#include "ujn/subspace.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ujn {

struct GradingComponent {
    GroupElement degree;
    Subspace space;
};

// Verified decomposition UJ_n = direct sum of degree-indexed components with
// A_g o A_h contained in A_{gh}.  Components are echelonized and sorted by
// degree, so equal gradings compare equal.
class Grading {
public:
    const FiniteAbelianGroup& group() const { return group_; }
    int size_n() const { return n_; }
    const std::vector<GradingComponent>& components() const { return comps_; }

    // Zero subspace when the degree is not in the support.
    Subspace component(const GroupElement& g) const {
        group_.check_member(g);
        for (const auto& c : comps_)
            if (c.degree == g) return c.space;
        return Subspace::zero(n_);
    }

    std::vector<GroupElement> support() const {
        std::vector<GroupElement> s;
        s.reserve(comps_.size());
        for (const auto& c : comps_) s.push_back(c.degree);
        return s;
    }

    // Degree of a homogeneous element; empty if x lies in no single component.
    std::optional<GroupElement> degree_of(const UTMatrix& x) const {
        if (x.is_zero()) return std::nullopt;
        for (const auto& c : comps_)
            if (c.space.contains(x)) return c.degree;
        return std::nullopt;
    }

    bool operator==(const Grading& o) const {
        if (group_ != o.group_ || n_ != o.n_ || comps_.size() != o.comps_.size()) return false;
        for (std::size_t k = 0; k < comps_.size(); ++k)
            if (comps_[k].degree != o.comps_[k].degree || comps_[k].space != o.comps_[k].space) return false;
        return true;
    }
    bool operator!=(const Grading& o) const { return !(*this == o); }

private:
    friend struct GradingAccess;
    FiniteAbelianGroup group_;
    int n_ = 1;
    std::vector<GradingComponent> comps_;
};

struct GradingAccess {
    static Grading make(FiniteAbelianGroup G, int n, std::vector<GradingComponent> comps) {
        Grading g;
        g.group_ = std::move(G);
        g.n_ = n;
        g.comps_ = std::move(comps);
        return g;
    }
};

struct GradingViolation {
    enum class Kind { DuplicateDegree, EmptyComponent, DimensionDeficit, NotDirectSum, ClosureFailure };
    Kind kind;
    std::string message;
    GroupElement g, h; // degrees involved in a closure failure
    int basis_i = -1, basis_j = -1;
};

using VerifyResult = std::variant<Grading, GradingViolation>;

// Checks the grading axioms on raw component data and returns either the
// verified (echelonized, sorted) grading or the first violation found.
inline VerifyResult verify_grading(const FiniteAbelianGroup& G, int n,
                                   const std::vector<std::pair<GroupElement, std::vector<UTMatrix>>>& raw) {
    std::vector<GradingComponent> comps;
    for (const auto& [deg, gens] : raw) {
        G.check_member(deg);
        Subspace s = Subspace::span(n, gens);
        if (s.dim() == 0)
            return GradingViolation{GradingViolation::Kind::EmptyComponent,
                                    "component of degree " + format_element(deg) + " is zero",
                                    deg, deg, -1, -1};
        comps.push_back({deg, std::move(s)});
    }
    std::sort(comps.begin(), comps.end(), [&](const GradingComponent& a, const GradingComponent& b) {
        return canonical_compare(G, a.degree, b.degree) < 0;
    });
    for (std::size_t k = 0; k + 1 < comps.size(); ++k)
        if (comps[k].degree == comps[k + 1].degree)
            return GradingViolation{GradingViolation::Kind::DuplicateDegree,
                                    "duplicate degree " + format_element(comps[k].degree),
                                    comps[k].degree, comps[k].degree, -1, -1};

    int total = 0;
    Subspace joined = Subspace::zero(n);
    for (const auto& c : comps) {
        total += c.space.dim();
        joined = joined + c.space;
    }
    if (joined.dim() < total)
        return GradingViolation{GradingViolation::Kind::NotDirectSum,
                                "components are not independent", {}, {}, -1, -1};
    if (total != UTMatrix::dim(n))
        return GradingViolation{GradingViolation::Kind::DimensionDeficit,
                                "component dimensions sum to " + std::to_string(total) + " instead of " +
                                    std::to_string(UTMatrix::dim(n)),
                                {}, {}, -1, -1};

    Grading result = GradingAccess::make(G, n, comps);
    for (const auto& cg : comps)
        for (const auto& ch : comps) {
            GroupElement prod_deg = G.compose(cg.degree, ch.degree);
            Subspace target = result.component(prod_deg);
            for (int i = 0; i < cg.space.dim(); ++i)
                for (int j = 0; j < ch.space.dim(); ++j) {
                    UTMatrix p = jordan_product(cg.space.basis_vector(i), ch.space.basis_vector(j));
                    if (p.is_zero()) continue;
                    if (!target.contains(p))
                        return GradingViolation{GradingViolation::Kind::ClosureFailure,
                                                "product of degrees " + format_element(cg.degree) + " and " +
                                                    format_element(ch.degree) + " leaves its component",
                                                cg.degree, ch.degree, i, j};
                }
        }
    return result;
}

inline Grading verified_or_throw(VerifyResult r) {
    if (auto* v = std::get_if<GradingViolation>(&r))
        throw std::invalid_argument("grading verification failed: " + v->message);
    return std::get<Grading>(std::move(r));
}

// --- labels ----------------------------------------------------------------

// Structured isomorphism invariant: Elementary(eta) with |eta| = n-1, or
// MT(t, eta) with o(t) = 2 and |eta| = ceil((n-1)/2).
struct GradingLabel {
    enum class Kind { Elementary, MT };
    Kind kind = Kind::Elementary;
    GroupElement t;
    std::vector<GroupElement> eta;

    static GradingLabel elementary(std::vector<GroupElement> eta) {
        return GradingLabel{Kind::Elementary, {}, std::move(eta)};
    }
    static GradingLabel mt(GroupElement t, std::vector<GroupElement> eta) {
        return GradingLabel{Kind::MT, std::move(t), std::move(eta)};
    }

    bool operator==(const GradingLabel& o) const {
        if (kind != o.kind || eta != o.eta) return false;
        return kind == Kind::Elementary || t == o.t;
    }
    bool operator!=(const GradingLabel& o) const { return !(*this == o); }
};

// Degree of e_ij in the elementary grading with sequence eta.
inline GroupElement elementary_degree(const FiniteAbelianGroup& G, const std::vector<GroupElement>& eta,
                                      int i, int j) {
    GroupElement d = G.identity();
    for (int k = i; k < j; ++k) d = G.compose(d, eta[k - 1]);
    return d;
}

inline Grading elementary_grading(const FiniteAbelianGroup& G, const std::vector<GroupElement>& eta) {
    const int n = static_cast<int>(eta.size()) + 1;
    for (const auto& g : eta) G.check_member(g);
    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    auto slot = [&](const GroupElement& d) -> std::vector<UTMatrix>& {
        for (auto& [deg, gens] : raw)
            if (deg == d) return gens;
        raw.emplace_back(d, std::vector<UTMatrix>{});
        return raw.back().second;
    };
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) slot(elementary_degree(G, eta, i, j)).push_back(UTMatrix::unit(n, i, j));
    return verified_or_throw(verify_grading(G, n, raw));
}

// Degree of the plus mirror unit Y_{i:m}^+ in the MT grading (t, eta):
// product over the window [i, i+m) of w(k) = eta[min(k, n-k)].
inline GroupElement mt_plus_degree(const FiniteAbelianGroup& G, int n, const std::vector<GroupElement>& eta,
                                   int i, int m) {
    GroupElement d = G.identity();
    for (int k = i; k < i + m; ++k) d = G.compose(d, eta[std::min(k, n - k) - 1]);
    return d;
}

inline Grading mt_grading(const FiniteAbelianGroup& G, int n, const GroupElement& t,
                          const std::vector<GroupElement>& eta) {
    if (G.element_order(t) != 2) throw std::invalid_argument("mt grading requires o(t) = 2");
    const int q = (n - 1 + 1) / 2; // ceil((n-1)/2)
    if (static_cast<int>(eta.size()) != q)
        throw std::invalid_argument("mt grading sequence must have length " + std::to_string(q));
    for (const auto& g : eta) G.check_member(g);

    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    auto slot = [&](const GroupElement& d) -> std::vector<UTMatrix>& {
        for (auto& [deg, gens] : raw)
            if (deg == d) return gens;
        raw.emplace_back(d, std::vector<UTMatrix>{});
        return raw.back().second;
    };
    for (int m = 0; m <= n - 1; ++m)
        for (int i = 1; i <= (n - m + 1) / 2; ++i) {
            GroupElement plus = mt_plus_degree(G, n, eta, i, m);
            slot(plus).push_back(mirror_unit(n, i, m, +1));
            UTMatrix minus = mirror_unit(n, i, m, -1);
            if (!minus.is_zero()) slot(G.compose(t, plus)).push_back(std::move(minus));
        }
    return verified_or_throw(verify_grading(G, n, raw));
}

inline Grading standard_grading(const FiniteAbelianGroup& G, int n, const GradingLabel& label) {
    if (label.kind == GradingLabel::Kind::Elementary) {
        if (static_cast<int>(label.eta.size()) != n - 1)
            throw std::invalid_argument("elementary label has wrong length");
        return elementary_grading(G, label.eta);
    }
    return mt_grading(G, n, label.t, label.eta);
}

// Direct product G x Z2, with embeddings of each factor's elements.
inline FiniteAbelianGroup extend_by_z2(const FiniteAbelianGroup& H) {
    auto moduli = H.moduli();
    moduli.push_back(2);
    return FiniteAbelianGroup(moduli);
}

inline GroupElement embed_with_flag(const FiniteAbelianGroup& HZ2, const GroupElement& h, int flag) {
    auto c = h.c;
    c.push_back(flag);
    return HZ2.element(std::move(c));
}

// H x Z2 grading obtained from the symmetric/skew decomposition of an
// elementary grading whose mirror reversal is a graded involution
// (requires eta = rev eta).
inline Grading grading_from_involution(const FiniteAbelianGroup& H, const std::vector<GroupElement>& eta) {
    std::vector<GroupElement> rev(eta.rbegin(), eta.rend());
    if (rev != eta) throw std::invalid_argument("mirror reversal is graded only for palindromic sequences");
    const int n = static_cast<int>(eta.size()) + 1;
    FiniteAbelianGroup HZ2 = extend_by_z2(H);

    Grading base = elementary_grading(H, eta);
    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    auto slot = [&](const GroupElement& d) -> std::vector<UTMatrix>& {
        for (auto& [deg, gens] : raw)
            if (deg == d) return gens;
        raw.emplace_back(d, std::vector<UTMatrix>{});
        return raw.back().second;
    };
    for (const auto& comp : base.components()) {
        for (const auto& b : comp.space.basis()) {
            UTMatrix sym = b + mirror_map(b);
            UTMatrix skew = b - mirror_map(b);
            if (!sym.is_zero()) slot(embed_with_flag(HZ2, comp.degree, 0)).push_back(std::move(sym));
            if (!skew.is_zero()) slot(embed_with_flag(HZ2, comp.degree, 1)).push_back(std::move(skew));
        }
    }
    return verified_or_throw(verify_grading(HZ2, n, raw));
}

// Coarsening along a homomorphism: components with equal image are merged.
inline Grading induced_grading(const Grading& gr, const GroupHom& phi) {
    if (phi.source != gr.group()) throw std::invalid_argument("homomorphism source mismatch");
    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    auto slot = [&](const GroupElement& d) -> std::vector<UTMatrix>& {
        for (auto& [deg, gens] : raw)
            if (deg == d) return gens;
        raw.emplace_back(d, std::vector<UTMatrix>{});
        return raw.back().second;
    };
    for (const auto& comp : gr.components()) {
        auto& gens = slot(phi.apply(comp.degree));
        for (const auto& b : comp.space.basis()) gens.push_back(b);
    }
    return verified_or_throw(verify_grading(phi.target, gr.size_n(), raw));
}

// x -> P (flip ? mirror(x) : x) P^{-1} applied to every component.
inline Grading apply_automorphism(const Grading& gr, const UTMatrix& P, bool flip) {
    if (P.size() != gr.size_n()) throw std::invalid_argument("matrix size mismatch");
    UTMatrix pinv = P.inverse(); // throws if singular
    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    for (const auto& comp : gr.components()) {
        std::vector<UTMatrix> gens;
        for (const auto& b : comp.space.basis()) gens.push_back(mul(mul(P, flip ? mirror_map(b) : b), pinv));
        raw.emplace_back(comp.degree, std::move(gens));
    }
    return verified_or_throw(verify_grading(gr.group(), gr.size_n(), raw));
}

// --- quotient by a graded ideal ---------------------------------------------

// Grading of the quotient algebra UJ_n / T, presented on the complement
// coordinates (the matrix units not in the leading-term set of T's echelon
// basis).  The quotient need not be a UJ_m, so it carries its own product.
struct QuotientGrading {
    FiniteAbelianGroup group;
    int n = 1;
    Subspace ideal = Subspace::zero(1);
    std::vector<int> complement_coords; // ambient coordinate indices
    std::vector<std::pair<GroupElement, std::vector<std::vector<Rat>>>> components; // echelon rows

    int dim() const { return static_cast<int>(complement_coords.size()); }

    std::vector<Rat> project(const UTMatrix& x) const {
        UTMatrix r = ideal.reduce(x);
        std::vector<Rat> out;
        out.reserve(complement_coords.size());
        for (int c : complement_coords) out.push_back(r.coords()[c]);
        return out;
    }

    UTMatrix lift(const std::vector<Rat>& v) const {
        UTMatrix x(n);
        for (std::size_t k = 0; k < complement_coords.size(); ++k) {
            auto [i, j] = UTMatrix::coord_slot(n, complement_coords[k]);
            x.set(i, j, v[k]);
        }
        return x;
    }

    std::vector<Rat> product(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
        return project(jordan_product(lift(x), lift(y)));
    }
};

inline QuotientGrading quotient_grading(const Grading& gr, const Subspace& T) {
    const int n = gr.size_n();
    if (T.ambient() != n) throw std::invalid_argument("ambient size mismatch");

    // T must be an ideal ...
    Subspace full = Subspace::full(n);
    for (int i = 0; i < full.dim(); ++i)
        for (int j = 0; j < T.dim(); ++j)
            if (!T.contains(jordan_product(full.basis_vector(i), T.basis_vector(j))))
                throw std::invalid_argument("subspace is not an ideal");
    // ... and graded.
    Subspace graded_sum = Subspace::zero(n);
    for (const auto& comp : gr.components()) graded_sum = graded_sum + intersect(T, comp.space);
    if (graded_sum != T) throw std::invalid_argument("ideal is not graded");

    QuotientGrading q;
    q.group = gr.group();
    q.n = n;
    q.ideal = T;
    std::vector<bool> is_pivot(UTMatrix::dim(n), false);
    for (int p : T.pivots()) is_pivot[p] = true;
    for (int c = 0; c < UTMatrix::dim(n); ++c)
        if (!is_pivot[c]) q.complement_coords.push_back(c);

    for (const auto& comp : gr.components()) {
        linalg::Mat rows;
        for (const auto& b : comp.space.basis()) {
            auto v = q.project(b);
            bool nz = false;
            for (const auto& x : v) nz = nz || x != 0;
            if (nz) rows.push_back(std::move(v));
        }
        linalg::rref(rows);
        if (!rows.empty()) q.components.emplace_back(comp.degree, std::move(rows));
    }

    // quotient axioms: direct sum of the right dimension, closed products
    int total = 0;
    for (const auto& [deg, rows] : q.components) total += static_cast<int>(rows.size());
    if (total != q.dim()) throw std::logic_error("quotient components do not fill the quotient");
    auto find_comp = [&](const GroupElement& d) -> const std::vector<std::vector<Rat>>* {
        for (const auto& [deg, rows] : q.components)
            if (deg == d) return &rows;
        return nullptr;
    };
    for (const auto& [dg, rg] : q.components)
        for (const auto& [dh, rh] : q.components) {
            GroupElement d = q.group.compose(dg, dh);
            const auto* target = find_comp(d);
            for (const auto& a : rg)
                for (const auto& b : rh) {
                    auto p = q.product(a, b);
                    bool nz = false;
                    for (const auto& x : p) nz = nz || x != 0;
                    if (!nz) continue;
                    if (!target) throw std::logic_error("quotient closure failure");
                    linalg::Mat m = *target;
                    m.push_back(p);
                    if (static_cast<int>(linalg::rref(m).size()) != static_cast<int>(target->size()))
                        throw std::logic_error("quotient closure failure");
                }
        }
    return q;
}

// When the complement units form a contiguous diagonal block whose quotient
// products coincide with the block products, re-present the quotient as a
// grading of UJ_m.
inline std::optional<Grading> quotient_as_block_grading(const QuotientGrading& q) {
    std::vector<std::pair<int, int>> slots;
    for (int c : q.complement_coords) slots.push_back(UTMatrix::coord_slot(q.n, c));
    int lo = q.n + 1, hi = 0;
    for (auto [i, j] : slots) {
        lo = std::min(lo, i);
        hi = std::max(hi, j);
    }
    const int m = hi - lo + 1;
    if (static_cast<int>(slots.size()) != m * (m + 1) / 2) return std::nullopt;
    for (int i = lo; i <= hi; ++i)
        for (int j = i; j <= hi; ++j)
            if (std::find(slots.begin(), slots.end(), std::make_pair(i, j)) == slots.end()) return std::nullopt;

    // structure constants must match UJ_m on the block
    auto to_block = [&](const std::vector<Rat>& v) {
        UTMatrix b(m);
        for (std::size_t k = 0; k < slots.size(); ++k) b.set(slots[k].first - lo + 1, slots[k].second - lo + 1, v[k]);
        return b;
    };
    for (std::size_t x = 0; x < slots.size(); ++x)
        for (std::size_t y = 0; y < slots.size(); ++y) {
            std::vector<Rat> ex(slots.size(), Rat(0)), ey(slots.size(), Rat(0));
            ex[x] = 1;
            ey[y] = 1;
            if (to_block(q.product(ex, ey)) != jordan_product(to_block(ex), to_block(ey))) return std::nullopt;
        }

    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    for (const auto& [deg, rows] : q.components) {
        std::vector<UTMatrix> gens;
        for (const auto& r : rows) gens.push_back(to_block(r));
        raw.emplace_back(deg, std::move(gens));
    }
    auto res = verify_grading(q.group, m, raw);
    if (std::holds_alternative<GradingViolation>(res)) return std::nullopt;
    return std::get<Grading>(std::move(res));
}

} // namespace ujn
