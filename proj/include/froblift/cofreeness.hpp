#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "algebra_map.hpp"
#include "element.hpp"
#include "errors.hpp"
#include "frobenius.hpp"
#include "qcoh.hpp"
#include "report.hpp"
#include "stack.hpp"

namespace froblift {

// A kappa-algebra map R/mR -> kappa: one residue in {0,...,p-1} per generator.
struct KappaPoint {
    std::vector<std::uint64_t> values;

    bool operator==(const KappaPoint&) const = default;

    std::string render() const {
        std::string s = "(";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(values[i]);
        }
        return s + ")";
    }
};

inline KappaPoint reduce_to_point(const AlgebraMap& mu) {
    KappaPoint pt;
    for (const auto& img : mu.gen_images()) pt.values.push_back(img.kappa_residue());
    return pt;
}

namespace detail {

inline void check_same_stack(const SheafOfRings& Rs, const SheafOfRings& Ss) {
    if (Rs.stack != Ss.stack)
        throw ring_mismatch_error("sheaf maps require both sheaves over the same stack data");
}

inline void check_base_algebra_map(const SheafOfRings& Rs, const SheafOfRings& Ss,
                                   const AlgebraMap& mu) {
    if (!mu.source()->same_ring(*Rs.R) || !mu.target()->same_ring(*Ss.R))
        throw ring_mismatch_error("map does not match the sheaf carriers");
    for (unsigned i = 0; i < Rs.R->num_u; ++i)
        if (!mu.u_images()[i].equals(Element::u_var(Ss.R, i)))
            throw ring_mismatch_error("map is not an O-algebra map");
}

} // namespace detail

// (id (x) mu) applied coordinatewise.
inline TensorElement tensor_push(const SheafOfRings& Ss, const AlgebraMap& mu,
                                 const TensorElement& t) {
    TensorElement r = tensor_zero(Ss.stack, t.d, Ss.R);
    for (std::size_t i = 0; i < t.coords.size(); ++i) r.coords[i] = mu.apply(t.coords[i]);
    return r;
}

// True iff (id (x) mu) nabla_{R,d} = nabla_{S,d} mu on generators for all
// d <= D at precision.
inline bool is_sheaf_map(const SheafOfRings& Rs, const SheafOfRings& Ss, const AlgebraMap& mu) {
    detail::check_same_stack(Rs, Ss);
    detail::check_base_algebra_map(Rs, Ss, mu);
    for (unsigned d = 1; d <= Rs.stack->D; ++d)
        for (std::size_t g = 0; g < Rs.R->gens.size(); ++g) {
            const TensorElement lhs = tensor_push(Ss, mu, Rs.nabla_gen(d, g));
            const TensorElement rhs = extend_comodule(Ss, d, mu.gen_images()[g]);
            if (!lhs.equals(rhs)) return false;
        }
    return true;
}

// The unique sheaf-map lift of an O-algebra map mu: R -> S, computed in two
// stages.  Stage 1 runs the contraction over the induced objects (R, mR,
// psi_R) and (S, mS, psi_S); stage 2 verifies the comodule squares, which
// the uniqueness theorem guarantees for consistent input, so a failure there
// signals corrupted data rather than a wrong answer.
inline AlgebraMap lift_to_sheaf_map(const SheafOfRings& Rs, const SheafOfRings& Ss,
                                    const AlgebraMap& mu) {
    detail::check_same_stack(Rs, Ss);
    detail::check_base_algebra_map(Rs, Ss, mu);
    const FrobeniusRing FR = sheaf_as_frobenius_ring(Rs, false);
    const FrobeniusRing FS = sheaf_as_frobenius_ring(Ss);
    if (!FS.perfect)
        throw not_invertible_error("lift_to_sheaf_map: the target's Adams operation is not "
                                   "an automorphism");
    const FrobeniusMorphism lifted = frobenius_lift_hom(mu, FR, FS);
    if (!is_sheaf_map(Rs, Ss, lifted.underlying))
        throw validation_error("lift_to_sheaf_map: lifted map fails the comodule squares; "
                               "the sheaf data is inconsistent");
    return lifted.underlying;
}

// Overload taking a custom set-level lift of the point (any generator images
// with the prescribed residues); used to demonstrate lift-independence.
inline AlgebraMap solve_cofree(const SheafOfRings& Rs, const SheafOfRings& unit,
                               const std::vector<Element>& set_level_lift) {
    std::vector<Element> u;
    for (unsigned i = 0; i < Rs.R->num_u; ++i) u.push_back(Element::u_var(unit.R, i));
    AlgebraMap mu(Rs.R, unit.R, std::move(u), set_level_lift);
    return lift_to_sheaf_map(Rs, unit, mu);
}

// The inverse of the cofreeness bijection at one kappa-point: lift each
// generator to the integer representative of its residue, then take the
// unique sheaf-map lift into the unit sheaf.
inline AlgebraMap solve_cofree(const SheafOfRings& Rs, const KappaPoint& pt) {
    if (pt.values.size() != Rs.R->gens.size())
        throw ring_mismatch_error("solve_cofree: point has wrong number of coordinates");
    const SheafOfRings unit = unit_sheaf(Rs.stack);
    std::vector<Element> lift;
    for (std::uint64_t v : pt.values)
        lift.push_back(Element::constant(unit.R, v % Rs.R->ctx.p));
    return solve_cofree(Rs, unit, lift);
}

// All p^n residue assignments, in lexicographic order.
inline std::vector<KappaPoint> enumerate_kappa_points(const SheafOfRings& Rs,
                                                      std::uint64_t budget = 100000) {
    const std::uint64_t p = Rs.R->ctx.p;
    const std::size_t n = Rs.R->gens.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / p) throw budget_error("enumerate_kappa_points: p^n exceeds budget");
        total *= p;
    }
    std::vector<KappaPoint> pts;
    pts.reserve(total);
    KappaPoint cur{std::vector<std::uint64_t>(n, 0)};
    for (std::uint64_t k = 0; k < total; ++k) {
        pts.push_back(cur);
        for (std::size_t i = n; i-- > 0;) {
            if (++cur.values[i] < p) break;
            cur.values[i] = 0;
        }
    }
    return pts;
}

// Checks the cofreeness bijection pointwise: every kappa-point lifts to a
// sheaf map reducing back to it, the lift does not depend on the chosen
// set-level representative, and distinct points give distinct maps.
inline Report cofreeness_bijection_check(const SheafOfRings& Rs, std::uint64_t seed = 1,
                                         std::uint64_t budget = 100000) {
    Report rep;
    const std::uint64_t p = Rs.R->ctx.p;
    const unsigned M = Rs.R->ctx.M;
    const SheafOfRings unit = unit_sheaf(Rs.stack);
    std::mt19937_64 rng(seed);
    std::vector<KappaPoint> pts = enumerate_kappa_points(Rs, budget);
    std::vector<AlgebraMap> maps;
    for (const KappaPoint& pt : pts) {
        AlgebraMap lifted = solve_cofree(Rs, pt);
        std::string images;
        for (std::size_t g = 0; g < lifted.gen_images().size(); ++g) {
            if (g) images += ", ";
            images += Rs.R->gens[g] + " -> " + lifted.gen_images()[g].render();
        }
        rep.add("point " + pt.render() + " lifts to a sheaf map",
                is_sheaf_map(Rs, unit, lifted), images);
        rep.add("point " + pt.render() + " is recovered modulo m",
                reduce_to_point(lifted) == pt);
        // same point through a different set-level representative
        std::vector<Element> alt;
        for (std::uint64_t v : pt.values) {
            const std::uint64_t noise = rng() % Rs.R->p_pow(M > 1 ? M - 1 : 0);
            alt.push_back(Element::constant(unit.R, v % p) +
                          Element::constant(unit.R, p).scaled(noise));
        }
        AlgebraMap relifted = solve_cofree(Rs, unit, alt);
        rep.add("point " + pt.render() + " lift is independent of the representative",
                AlgebraMap::equal_mod(lifted, relifted, M));
        maps.push_back(std::move(lifted));
    }
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < maps.size() && ok; ++i)
            for (std::size_t j = i + 1; j < maps.size(); ++j)
                if (AlgebraMap::equal_mod(maps[i], maps[j], 1)) {
                    ok = false;
                    witness = pts[i].render() + " vs " + pts[j].render();
                    break;
                }
        rep.add("distinct points give distinct maps", ok, witness);
    }
    rep.add("number of lifted maps equals number of kappa-points", maps.size() == pts.size(),
            std::to_string(maps.size()) + " maps for " + std::to_string(pts.size()) + " points");
    return rep;
}

} // namespace froblift
