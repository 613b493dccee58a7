#pragma once

#include "ujn/classify.hpp"
#include "ujn/grading.hpp"

#include <optional>
#include <stdexcept>

namespace ujn {

struct ChainSpaces {
    Subspace J, e1n_span, B, C, U1, T1;
};

namespace detail {

inline Subspace strict_upper_subspace(int n) {
    std::vector<UTMatrix> gens;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) gens.push_back(UTMatrix::unit(n, i, j));
    return Subspace::span(n, gens);
}

inline Subspace first_row_last_col_subspace(int n) {
    std::vector<UTMatrix> gens;
    for (int j = 1; j <= n; ++j) gens.push_back(UTMatrix::unit(n, 1, j));
    for (int i = 2; i <= n; ++i) gens.push_back(UTMatrix::unit(n, i, n));
    return Subspace::span(n, gens);
}

inline void check_graded(const Grading& gr, const Subspace& s, const char* what) {
    Subspace sum = Subspace::zero(gr.size_n());
    for (const auto& comp : gr.components()) sum = sum + intersect(s, comp.space);
    if (sum != s) throw std::invalid_argument(std::string(what) + " is not a graded subspace");
}

} // namespace detail

// The canonical chain J, Span{e_1n}, B, C, U_1, T_1 with shape assertions;
// each member must come out graded.
inline ChainSpaces strictly_upper_chain(const Grading& gr) {
    const int n = gr.size_n();
    if (n < 2) throw std::invalid_argument("chain requires n >= 2");

    std::vector<UTMatrix> all_basis;
    for (const auto& comp : gr.components())
        for (const auto& b : comp.space.basis()) all_basis.push_back(b);

    std::vector<UTMatrix> assoc_gens;
    for (const auto& a : all_basis)
        for (const auto& b : all_basis)
            for (const auto& c : all_basis) assoc_gens.push_back(associator(a, b, c));
    Subspace J = Subspace::span(n, assoc_gens);
    if (J != detail::strict_upper_subspace(n))
        throw std::invalid_argument("associator span is not the strictly upper ideal");

    Subspace e1n = J;
    for (int k = 2; k <= n - 1; ++k) e1n = product_span(e1n, J);
    if (e1n != Subspace::span(n, {UTMatrix::unit(n, 1, n)}))
        throw std::invalid_argument("J^(n-1) is not the corner line");

    Subspace full = Subspace::full(n);
    Subspace B = annihilator_mod(full, e1n, Subspace::zero(n));
    Subspace C = intersect(B, product_span(B, B));
    Subspace U1 = annihilator_mod(full, C, J);
    Subspace T1 = U1;
    for (int k = 2; k <= n; ++k) T1 = product_span(T1, U1);
    if (T1 != detail::first_row_last_col_subspace(n))
        throw std::invalid_argument("U1^n is not the first-row/last-column ideal");

    detail::check_graded(gr, J, "J");
    detail::check_graded(gr, e1n, "Span{e_1n}");
    detail::check_graded(gr, B, "B");
    detail::check_graded(gr, C, "C");
    detail::check_graded(gr, U1, "U1");
    detail::check_graded(gr, T1, "T1");
    return ChainSpaces{std::move(J), std::move(e1n), std::move(B), std::move(C), std::move(U1), std::move(T1)};
}

// Homogeneous corner pair: after conjugating by P, e1 = e_11 + e_nn and
// e2 = e_11 - e_nn are homogeneous with deg e1 = (deg e2)^2 = 1.
struct CornerFrame {
    UTMatrix e1, e2, P;
    GroupElement degree_e2;
};

inline CornerFrame corner_frame(const Grading& gr) {
    const int n = gr.size_n();
    const auto& G = gr.group();
    ChainSpaces chain = strictly_upper_chain(gr);

    // A = T1/(T1 n J) is two-dimensional; classes are the corner pairs
    // (x_11, x_nn).  Scan homogeneous parts of T1 in canonical degree
    // order for a class independent of (1,1).
    std::optional<GroupElement> found_deg;
    UTMatrix found = UTMatrix(n);
    std::vector<std::pair<GroupElement, Subspace>> t1_parts;
    for (const auto& comp : gr.components()) {
        Subspace part = intersect(chain.T1, comp.space);
        if (part.dim() > 0) t1_parts.emplace_back(comp.degree, part);
    }
    for (const auto& [deg, part] : t1_parts) {
        for (const auto& v : part.basis())
            if (v.at(1, 1) != v.at(n, n)) {
                found = v;
                found_deg = deg;
                break;
            }
        if (found_deg) break;
    }
    if (!found_deg) throw std::invalid_argument("no homogeneous corner candidate in T1");
    if (G.compose(*found_deg, *found_deg) != G.identity())
        throw std::invalid_argument("corner candidate degree does not square to the identity");

    UTMatrix e2(n);
    if (*found_deg == G.identity()) {
        // combine inside the identity part of T1 to reach the class (1, -1)
        const Subspace* id_part = nullptr;
        for (const auto& [deg, part] : t1_parts)
            if (deg == G.identity()) id_part = &part;
        if (!id_part) throw std::invalid_argument("identity part of T1 missing");
        linalg::Mat sys(2, linalg::Row(id_part->dim(), Rat(0)));
        for (int k = 0; k < id_part->dim(); ++k) {
            sys[0][k] = id_part->basis_vector(k).at(1, 1);
            sys[1][k] = id_part->basis_vector(k).at(n, n);
        }
        auto coeff = linalg::solve(sys, {Rat(1), Rat(-1)});
        if (coeff.empty()) throw std::invalid_argument("corner class (1,-1) not reachable in degree 1");
        for (int k = 0; k < id_part->dim(); ++k)
            if (coeff[k] != 0) e2 = e2 + coeff[k] * id_part->basis_vector(k);
    } else {
        const Rat& a = found.at(1, 1);
        if (found.at(n, n) != -a || a == 0)
            throw std::invalid_argument("corner candidate class is not of the form (a, -a)");
        e2 = (Rat(1) / a) * found;
    }

    UTMatrix e1 = Rat(1, 2) * jordan_product(e2, e2);
    if (mul(e1, e1) != e1) throw std::logic_error("corner idempotent is not exactly idempotent");
    for (int i = 1; i <= n; ++i) {
        Rat expect = (i == 1 || i == n) ? 1 : 0;
        if (e1.at(i, i) != expect) throw std::logic_error("corner idempotent has wrong diagonal");
    }

    // Eigenbasis columns of the idempotent give an upper-triangular Q with
    // Q^{-1} e1 Q = e_11 + e_nn.
    UTMatrix Q(n);
    Q.set(1, 1, 1);
    for (int k = 2; k <= n - 1; ++k) {
        Q.set(k, k, 1);
        Q.set(1, k, -e1.at(1, k));
    }
    Q.set(n, n, 1);
    for (int i = 1; i <= n - 1; ++i) Q.set(i, n, e1.at(i, n));
    UTMatrix P1 = Q.inverse();

    UTMatrix corners = UTMatrix::unit(n, 1, 1) + UTMatrix::unit(n, n, n);
    if (conjugate(e1, P1) != corners) throw std::logic_error("idempotent diagonalization failed");
    UTMatrix e2c = conjugate(e2, P1);

    UTMatrix r2 = jordan_product(e2c, corners) - e2c;
    UTMatrix target = UTMatrix::unit(n, 1, 1) - UTMatrix::unit(n, n, n);
    UTMatrix residue = r2 - target;
    Rat alpha = residue.at(1, n);
    residue.set(1, n, 0);
    if (!residue.is_zero()) throw std::logic_error("corner reflection has unexpected shape");

    UTMatrix Q2 = UTMatrix::identity(n);
    Q2.set(1, n, Q2.at(1, n) + alpha / 2);
    if (conjugate(r2, Q2) != target) throw std::logic_error("corner reflection correction failed");

    return CornerFrame{corners, target, mul(Q2, P1), *found_deg};
}

struct CanonicalizeResult {
    GradingLabel label;
    GradedIso iso;
};

namespace detail {

inline void apply_step(Grading& cur, GradedIso& iso, const UTMatrix& P, bool flip) {
    if (!flip && P == UTMatrix::identity(cur.size_n())) return;
    cur = apply_automorphism(cur, P, flip);
    if (flip) iso.compose_flip();
    iso.compose_conjugation(P);
}

// First homogeneous element of S (components scanned in canonical order)
// with a nonzero (i,j) entry, scaled so that entry is 1.
inline UTMatrix find_homogeneous_with_entry(const Grading& cur, const Subspace& S, int i, int j) {
    for (const auto& comp : cur.components()) {
        Subspace part = intersect(S, comp.space);
        for (const auto& v : part.basis())
            if (v.at(i, j) != 0) return (Rat(1) / v.at(i, j)) * v;
    }
    throw std::invalid_argument("no homogeneous element with the required entry");
}

inline GroupElement degree_or_throw(const Grading& cur, const UTMatrix& x, const char* what) {
    auto d = cur.degree_of(x);
    if (!d) throw std::invalid_argument(std::string(what) + " is not homogeneous");
    return *d;
}

inline Grading middle_block_grading(const Grading& cur) {
    const int n = cur.size_n();
    const int m = n - 2;
    std::vector<UTMatrix> delta_units;
    for (int i = 2; i <= n - 1; ++i)
        for (int j = i; j <= n - 1; ++j) delta_units.push_back(UTMatrix::unit(n, i, j));
    Subspace delta = Subspace::span(n, delta_units);

    std::vector<std::pair<GroupElement, std::vector<UTMatrix>>> raw;
    for (const auto& comp : cur.components()) {
        Subspace part = intersect(delta, comp.space);
        if (part.dim() == 0) continue;
        std::vector<UTMatrix> gens;
        for (const auto& v : part.basis()) {
            UTMatrix small(m);
            for (int i = 2; i <= n - 1; ++i)
                for (int j = i; j <= n - 1; ++j) small.set(i - 1, j - 1, v.at(i, j));
            gens.push_back(std::move(small));
        }
        raw.emplace_back(comp.degree, std::move(gens));
    }
    auto res = verify_grading(cur.group(), m, raw);
    if (std::holds_alternative<GradingViolation>(res))
        throw std::invalid_argument("middle block does not inherit a grading: " +
                                    std::get<GradingViolation>(res).message);
    return std::get<Grading>(std::move(res));
}

inline UTMatrix embed_middle(const UTMatrix& M, int n) {
    UTMatrix B(n);
    B.set(1, 1, 1);
    B.set(n, n, 1);
    for (int i = 1; i <= M.size(); ++i)
        for (int j = i; j <= M.size(); ++j) B.set(i + 1, j + 1, M.at(i, j));
    return B;
}

inline void assert_standard(const Grading& cur, const GradingLabel& label, const char* stage) {
    if (cur != standard_grading(cur.group(), cur.size_n(), label))
        throw std::logic_error(std::string("normalization did not reach the standard grading at ") + stage);
}

inline GradingLabel canonicalize_impl(Grading& cur, GradedIso& iso) {
    const FiniteAbelianGroup G = cur.group();
    const int n = cur.size_n();

    if (n == 1) {
        if (cur.components().size() != 1 || cur.components()[0].degree != G.identity())
            throw std::invalid_argument("invalid grading on the one-dimensional algebra");
        return GradingLabel::elementary({});
    }

    CornerFrame frame = corner_frame(cur);
    apply_step(cur, iso, frame.P, false);
    const GroupElement t = frame.degree_e2;
    const bool elementary_branch = t == G.identity();
    const UTMatrix e11 = UTMatrix::unit(n, 1, 1);
    const UTMatrix enn = UTMatrix::unit(n, n, n);
    const UTMatrix r2 = e11 - enn;
    if (degree_or_throw(cur, e11 + enn, "e_11 + e_nn") != G.identity())
        throw std::invalid_argument("corner unit has nonidentity degree");
    if (degree_or_throw(cur, r2, "e_11 - e_nn") != t)
        throw std::invalid_argument("corner reflection degree changed under conjugation");

    Subspace J = strict_upper_subspace(n);

    if (n == 2) {
        GroupElement h = degree_or_throw(cur, UTMatrix::unit(2, 1, 2), "e_12");
        GradingLabel lab = elementary_branch ? GradingLabel::elementary({h}) : GradingLabel::mt(t, {h});
        assert_standard(cur, lab, "n=2 base case");
        return lab;
    }

    if (n == 3) {
        if (degree_or_throw(cur, UTMatrix::unit(3, 2, 2), "e_22") != G.identity())
            throw std::invalid_argument("middle unit has nonidentity degree");
        const UTMatrix e22 = UTMatrix::unit(3, 2, 2);
        if (elementary_branch) {
            UTMatrix z = find_homogeneous_with_entry(cur, J, 1, 2);
            UTMatrix e12 = jordan_product(jordan_product(z, e11), e22);
            if (e12 != UTMatrix::unit(3, 1, 2)) throw std::logic_error("e_12 reconstruction failed");
            UTMatrix z2 = find_homogeneous_with_entry(cur, J, 2, 3);
            UTMatrix e23 = jordan_product(jordan_product(z2, enn), e22);
            if (e23 != UTMatrix::unit(3, 2, 3)) throw std::logic_error("e_23 reconstruction failed");
            std::vector<GroupElement> eta{degree_or_throw(cur, e12, "e_12"), degree_or_throw(cur, e23, "e_23")};
            assert_standard(cur, GradingLabel::elementary(eta), "n=3 elementary");
            GradingLabel lab = elementary_canonical(G, eta);
            if (lab.eta != eta) apply_step(cur, iso, UTMatrix::identity(3), true);
            assert_standard(cur, lab, "n=3 elementary canonical");
            return lab;
        }
        UTMatrix zpp = find_homogeneous_with_entry(cur, J, 1, 2);
        UTMatrix zp = jordan_product(zpp, e22); // e_12 + a e_23
        if (zp.at(1, 2) != 1) throw std::logic_error("projection lost the (1,2) entry");
        Rat a = zp.at(2, 3);
        if (a == 0) throw std::invalid_argument("degenerate homogeneous chain element");
        apply_step(cur, iso, UTMatrix::diagonal({Rat(1), Rat(1), a}), false);
        GroupElement g1 = degree_or_throw(cur, mirror_unit(3, 1, 1, +1), "Y_{1:1}^+");
        assert_standard(cur, GradingLabel::mt(t, {g1}), "n=3 mirror");
        GradingLabel lab = mt_canonical(G, 3, t, {g1});
        if (lab.eta != std::vector<GroupElement>{g1})
            apply_step(cur, iso, mt_shift_matrix(G, 3, t, {g1}, lab.eta), false);
        assert_standard(cur, lab, "n=3 mirror canonical");
        return lab;
    }

    // n >= 4: normalize the middle block and extend
    Grading mid = middle_block_grading(cur);
    GradedIso miso{UTMatrix::identity(n - 2), false, GradingLabel::elementary({})};
    GradingLabel mid_label = canonicalize_impl(mid, miso);
    apply_step(cur, iso, embed_middle(miso.P, n), miso.flip);
    if (middle_block_grading(cur) != standard_grading(G, n - 2, mid_label))
        throw std::logic_error("middle block did not normalize");

    const UTMatrix u1 = UTMatrix::unit(n, 2, 2) + UTMatrix::unit(n, n - 1, n - 1);
    const UTMatrix u2 = UTMatrix::unit(n, 2, 2) - UTMatrix::unit(n, n - 1, n - 1);
    if (degree_or_throw(cur, u2, "u_2") != t)
        throw std::invalid_argument("inner and outer corner degrees disagree");

    if (elementary_branch) {
        if (mid_label.kind != GradingLabel::Kind::Elementary)
            throw std::invalid_argument("inner block is mirror-graded but the corner degree is trivial");
        const UTMatrix e22 = UTMatrix::unit(n, 2, 2);
        const UTMatrix em = UTMatrix::unit(n, n - 1, n - 1);
        UTMatrix z = find_homogeneous_with_entry(cur, J, 1, 2);
        UTMatrix e12 = jordan_product(jordan_product(z, e11), e22);
        if (e12 != UTMatrix::unit(n, 1, 2)) throw std::logic_error("e_12 reconstruction failed");
        UTMatrix z2 = find_homogeneous_with_entry(cur, J, n - 1, n);
        UTMatrix elast = jordan_product(jordan_product(z2, enn), em);
        if (elast != UTMatrix::unit(n, n - 1, n)) throw std::logic_error("e_{n-1,n} reconstruction failed");

        std::vector<GroupElement> eta;
        eta.push_back(degree_or_throw(cur, e12, "e_12"));
        for (const auto& g : mid_label.eta) eta.push_back(g);
        eta.push_back(degree_or_throw(cur, elast, "e_{n-1,n}"));
        assert_standard(cur, GradingLabel::elementary(eta), "elementary branch");
        GradingLabel lab = elementary_canonical(G, eta);
        if (lab.eta != eta) apply_step(cur, iso, UTMatrix::identity(n), true);
        assert_standard(cur, lab, "elementary canonical");
        return lab;
    }

    if (mid_label.kind != GradingLabel::Kind::MT || mid_label.t != t)
        throw std::invalid_argument("inner block label is inconsistent with the corner degree");

    UTMatrix zpp = find_homogeneous_with_entry(cur, intersect(J, first_row_last_col_subspace(n)), 1, 2);
    UTMatrix zp = jordan_product(zpp, u1);
    {
        UTMatrix check = zp;
        check.set(1, 2, 0);
        check.set(n - 1, n, 0);
        check.set(1, n - 1, 0);
        check.set(2, n, 0);
        if (!check.is_zero() || zp.at(1, 2) != 1) throw std::logic_error("chain element projection failed");
    }
    UTMatrix z = Rat(1, 2) * (jordan_product(zp, u2) + jordan_product(zp, r2));
    Rat a = z.at(n - 1, n);
    {
        UTMatrix check = z;
        check.set(1, 2, 0);
        check.set(n - 1, n, 0);
        if (!check.is_zero() || z.at(1, 2) != 1) throw std::logic_error("chain element has unexpected shape");
    }
    if (a == 0) throw std::invalid_argument("degenerate homogeneous chain element");
    std::vector<Rat> dvec(n, Rat(1));
    dvec[n - 1] = a;
    apply_step(cur, iso, UTMatrix::diagonal(dvec), false);

    std::vector<GroupElement> eta;
    eta.push_back(degree_or_throw(cur, mirror_unit(n, 1, 1, +1), "Y_{1:1}^+"));
    for (const auto& g : mid_label.eta) eta.push_back(g);
    assert_standard(cur, GradingLabel::mt(t, eta), "mirror branch");
    GradingLabel lab = mt_canonical(G, n, t, eta);
    if (lab.eta != eta) apply_step(cur, iso, mt_shift_matrix(G, n, t, eta, lab.eta), false);
    assert_standard(cur, lab, "mirror canonical");
    return lab;
}

} // namespace detail

// Reduces any verified grading to the standard grading of its canonical
// label and returns the verified graded isomorphism that realizes it.
inline CanonicalizeResult canonicalize(const Grading& gr) {
    Grading cur = gr;
    GradedIso iso{UTMatrix::identity(gr.size_n()), false, GradingLabel::elementary({})};
    GradingLabel label = detail::canonicalize_impl(cur, iso);
    iso.target = label;
    if (!iso.validates(gr)) throw std::logic_error("normalization certificate failed validation");
    return CanonicalizeResult{std::move(label), std::move(iso)};
}

} // namespace ujn
