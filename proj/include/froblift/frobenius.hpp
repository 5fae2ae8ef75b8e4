#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra_map.hpp"
#include "element.hpp"
#include "errors.hpp"
#include "report.hpp"

namespace froblift {

// A ring with a lift of p^h-power Frobenius: carrier ring, ideal I containing
// p, and an endomorphism psi with psi(x) = x^{p^h} mod I.
struct FrobeniusRing {
    RingDescPtr carrier;
    IdealSpec ideal;
    AlgebraMap psi;
    bool complete = true; // automatic at finite precision
    bool perfect = false;

    FrobeniusRing(RingDescPtr c, IdealSpec i, AlgebraMap p, bool perf = false)
        : carrier(std::move(c)), ideal(std::move(i)), psi(std::move(p)), perfect(perf) {
        if (!psi.source()->same_ring(*carrier) || !psi.target()->same_ring(*carrier))
            throw ring_mismatch_error("FrobeniusRing: psi is not an endomorphism of the carrier");
        if (ideal.u_included.size() != carrier->num_u)
            throw ring_mismatch_error("FrobeniusRing: ideal shape mismatch");
    }
};

struct FrobeniusMorphism {
    AlgebraMap underlying;
    unsigned iterations = 0; // conjugation steps used by the lifting solve
};

// Verifies p in I and psi(g) = g^{p^h} mod I on each carrier generator.
// Generators suffice: the congruence locus is closed under addition (p in I
// makes p^h-powering additive mod I) and under multiplication.
inline Report check_frobenius_structure(const FrobeniusRing& F) {
    Report rep;
    rep.add("p in I", true, "ideal contains p by construction");
    const std::uint64_t q = F.carrier->ctx.ph();
    for (std::size_t i = 0; i < F.carrier->num_vars(); ++i) {
        const Element g = Element::variable(F.carrier, i);
        const Element diff = F.psi.apply(g) - g.pow(q);
        const bool pass = diff.ideal_order(F.ideal) >= 1;
        rep.add("psi(x) = x^{p^h} mod I on generator " + F.carrier->var_name(i), pass,
                pass ? "" : "difference " + diff.render() + " is not in I");
    }
    return rep;
}

// mu' := psi_S^{-1} mu psi_R.  Precomputed psi_S^{-1} may be supplied.
inline AlgebraMap conjugate_step(const AlgebraMap& mu, const FrobeniusRing& R,
                                 const FrobeniusRing& S,
                                 const AlgebraMap* psi_S_inv = nullptr) {
    if (!S.perfect)
        throw not_invertible_error("conjugate_step: target is not flagged perfect");
    AlgebraMap inv = psi_S_inv ? *psi_S_inv : S.psi.inverse();
    return AlgebraMap::compose(inv, AlgebraMap::compose(mu, R.psi));
}

// Largest r <= M with mu1 = mu2 mod I_S^r (minimum I_S-adic order over
// generator-image differences); M when the maps agree at precision.
inline unsigned agreement_order(const AlgebraMap& mu1, const AlgebraMap& mu2,
                                const FrobeniusRing& S) {
    unsigned best = kInfiniteOrder;
    for (std::size_t i = 0; i < mu1.num_images(); ++i)
        best = std::min(best, (mu1.image(i) - mu2.image(i)).ideal_order(S.ideal));
    const unsigned M = S.carrier->ctx.M;
    return best > M ? M : best;
}

namespace detail {

// The ideal of R must be the extension of the base ideal, and mu must be an
// A-algebra map over the common base; operationally this pins the u-part of
// mu to the identity and the u-parts of psi_R, psi_S to the same base lift.
inline void check_lifting_hypotheses(const AlgebraMap& mu, const FrobeniusRing& R,
                                     const FrobeniusRing& S) {
    if (!mu.source()->same_ring(*R.carrier) || !mu.target()->same_ring(*S.carrier))
        throw ring_mismatch_error("frobenius_lift_hom: mu does not match R -> S");
    if (!S.perfect)
        throw not_invertible_error("frobenius_lift_hom: S is not perfect");
    if (R.carrier->num_u != S.carrier->num_u)
        throw ring_mismatch_error("frobenius_lift_hom: carriers have different base rings");
    for (unsigned i = 0; i < R.carrier->num_u; ++i) {
        if (!mu.u_images()[i].equals(Element::u_var(S.carrier, i)))
            throw ring_mismatch_error("frobenius_lift_hom: mu is not a base-algebra map");
        // I_R = iota_R(I_A) R: R's ideal is declared by the same u-subset as
        // the base ideal carried through mu, which also appears in I_S.
        if (R.ideal.u_included[i] && !S.ideal.u_included[i])
            throw ring_mismatch_error("frobenius_lift_hom: mu(I_R) is not contained in I_S");
        const Element pr = R.psi.u_images()[i];
        if (!pr.coefficient_only())
            throw ring_mismatch_error("frobenius_lift_hom: psi_R does not restrict to the base");
        const Element ps = S.psi.u_images()[i];
        if (!pr.restricted_to_coefficients().embedded(S.carrier).equals(
                ps.coefficient_only() ? ps.restricted_to_coefficients().embedded(S.carrier) : ps))
            throw ring_mismatch_error(
                "frobenius_lift_hom: psi_R and psi_S disagree on the base ring");
    }
}

} // namespace detail

// The unique ideal-and-Frobenius-compatible approximation of mu: iterate
// mu |-> psi_S^{-1} mu psi_R until the images stabilize at precision.  Each
// step raises the I_S-adic agreement order by at least one, so more than M+1
// steps signals invalid input.
inline FrobeniusMorphism frobenius_lift_hom(const AlgebraMap& mu, const FrobeniusRing& R,
                                            const FrobeniusRing& S) {
    detail::check_lifting_hypotheses(mu, R, S);
    const AlgebraMap psi_S_inv = S.psi.inverse();
    const unsigned M = S.carrier->ctx.M;
    AlgebraMap cur = mu;
    for (unsigned r = 0; r <= M + 1; ++r) {
        AlgebraMap next = conjugate_step(cur, R, S, &psi_S_inv);
        if (next.equals(cur)) return FrobeniusMorphism{cur, r};
        cur = next;
    }
    throw convergence_error("frobenius_lift_hom: no convergence within M+1 conjugation steps");
}

// The unique lift of a residue a in S/I_S with psi_S(lift) = lift^{p^h}:
// apply the lifting construction to Z[x] with psi(x) = x^{p^h} over the base
// (Z, pZ, id), sending x to any set-level lift of a.
inline Element teichmuller_lift(const FrobeniusRing& S, const Element& a_lift) {
    if (!S.perfect)
        throw not_invertible_error("teichmuller_lift: S is not perfect");
    if (!a_lift.ring()->same_ring(*S.carrier))
        throw ring_mismatch_error("teichmuller_lift: residue lift not in carrier");
    const auto& ctx = S.carrier->ctx;
    auto poly = RingDesc::make(ctx, 0, {"x"});
    AlgebraMap psi_R(poly, poly, {}, {Element::generator(poly, 0).pow(ctx.ph())});
    FrobeniusRing R(poly, IdealSpec::p_only(*poly), psi_R);

    // mu: Z[x] -> S over (Z, pZ, id); base-ring checks are vacuous here.
    AlgebraMap mu(poly, S.carrier, {}, {a_lift});
    if (!S.perfect) throw not_invertible_error("teichmuller_lift: S is not perfect");
    const AlgebraMap psi_S_inv = S.psi.inverse();
    const unsigned M = ctx.M;
    AlgebraMap cur = mu;
    for (unsigned r = 0; r <= M + 1; ++r) {
        AlgebraMap next = conjugate_step(cur, R, S, &psi_S_inv);
        if (next.equals(cur)) return cur.gen_images()[0];
        cur = next;
    }
    throw convergence_error("teichmuller_lift: no convergence within M+1 steps");
}

inline Element teichmuller_lift(const FrobeniusRing& S, std::uint64_t residue) {
    return teichmuller_lift(S, Element::constant(S.carrier, residue % S.carrier->ctx.p));
}

} // namespace froblift
