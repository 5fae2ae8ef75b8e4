#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra_map.hpp"
#include "element.hpp"
#include "errors.hpp"
#include "frobenius.hpp"
#include "report.hpp"
#include "stack.hpp"

namespace froblift {

// An element of O_d (x)_{s,O,iota} R: one R-coordinate per O_d basis label.
struct TensorElement {
    StackPtr stack;
    unsigned d = 0;
    std::vector<Element> coords;

    bool equals(const TensorElement& o) const {
        if (d != o.d || coords.size() != o.coords.size()) return false;
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (!coords[i].equals(o.coords[i])) return false;
        return true;
    }
};

// A quasicoherent sheaf of rings (R, iota_R, nabla_{R,d}): a comodule algebra
// over the stack data, presented by generator images for 1 <= d <= D.  The
// O-algebra structure iota_R is the coefficient inclusion; nabla_{R,0} = id.
struct SheafOfRings {
    StackPtr stack;
    RingDescPtr R;
    std::vector<std::vector<TensorElement>> nabla_images; // [d-1][generator]

    const TensorElement& nabla_gen(unsigned d, std::size_t gen) const {
        if (d < 1 || d > stack->D)
            throw precision_error("sheaf: degree " + std::to_string(d) + " out of range");
        return nabla_images[d - 1][gen];
    }
};

inline TensorElement tensor_zero(const StackPtr& S, unsigned d, const RingDescPtr& R) {
    return TensorElement{S, d,
                         std::vector<Element>(S->algebra(d).rank(), Element::zero(R))};
}

inline TensorElement tensor_unit(const StackPtr& S, unsigned d, const RingDescPtr& R) {
    TensorElement t = tensor_zero(S, d, R);
    t.coords[0] = Element::one(R);
    return t;
}

inline TensorElement tensor_add(const TensorElement& a, const TensorElement& b) {
    TensorElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = r.coords[i] + b.coords[i];
    return r;
}

// (e_i (x) r)(e_j (x) r') = sum_k e_k (x) iota(c_{ij}^k) r r'.
inline TensorElement tensor_mul(const TensorElement& a, const TensorElement& b) {
    const StackData& S = *a.stack;
    const OdAlgebra& A = S.algebra(a.d);
    const RingDescPtr& R = a.coords[0].ring();
    TensorElement r = tensor_zero(a.stack, a.d, R);
    for (std::size_t i = 0; i < A.rank(); ++i) {
        if (a.coords[i].is_zero()) continue;
        for (std::size_t j = 0; j < A.rank(); ++j) {
            if (b.coords[j].is_zero()) continue;
            const Element ab = a.coords[i] * b.coords[j];
            for (std::size_t k = 0; k < A.rank(); ++k) {
                const Element& c = A.c(i, j, k);
                if (c.is_zero()) continue;
                r.coords[k] = r.coords[k] + c.embedded(R) * ab;
            }
        }
    }
    return r;
}

// The O-algebra structure of the tensor: a |-> t_d(a) (x) 1.
inline TensorElement tensor_from_coefficient(const StackPtr& S, unsigned d, const RingDescPtr& R,
                                             const Element& a) {
    OdElement td = apply_t(*S, d, a);
    TensorElement r = tensor_zero(S, d, R);
    for (std::size_t i = 0; i < td.size(); ++i) r.coords[i] = td[i].embedded(R);
    return r;
}

// nabla_{R,d} on an arbitrary element: the ring-homomorphic extension of the
// stored generator images, with O-coefficients routed through t_d (the
// iota/t compatibility square of the sheaf definition).
inline TensorElement extend_comodule(const SheafOfRings& sheaf, unsigned d, const Element& x) {
    if (!x.ring()->same_ring(*sheaf.R))
        throw ring_mismatch_error("extend_comodule: element not in the sheaf carrier");
    if (d == 0) return TensorElement{sheaf.stack, 0, {x}};
    const StackPtr& S = sheaf.stack;
    if (d > S->D) throw precision_error("extend_comodule: degree out of range");
    const unsigned num_u = sheaf.R->num_u;
    TensorElement result = tensor_zero(S, d, sheaf.R);
    std::vector<std::vector<TensorElement>> pw(sheaf.R->num_vars());
    for (auto& v : pw) v.push_back(tensor_unit(S, d, sheaf.R));
    auto var_image = [&](std::size_t i) -> TensorElement {
        if (i < num_u)
            return tensor_from_coefficient(S, d, sheaf.R, Element::u_var(S->O, i));
        return sheaf.nabla_gen(d, i - num_u);
    };
    for (const auto& [m, c] : x.terms()) {
        TensorElement t = tensor_unit(S, d, sheaf.R);
        t.coords[0] = Element::constant(sheaf.R, c);
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            if (m.exps[i] == 0) continue;
            while (pw[i].size() <= m.exps[i])
                pw[i].push_back(tensor_mul(pw[i].back(), var_image(i)));
            t = tensor_mul(t, pw[i][m.exps[i]]);
        }
        result = tensor_add(result, t);
    }
    return result;
}

// The unit sheaf (O, id, t_d): carrier O itself, no polynomial generators.
inline SheafOfRings unit_sheaf(const StackPtr& S) {
    SheafOfRings sh;
    sh.stack = S;
    sh.R = S->O;
    sh.nabla_images.assign(S->D, {});
    return sh;
}

// Height-1 convenience: a sheaf Z_p[x_1,...,x_n] with given degree-1 images;
// the degree-d maps are the iterates forced by coassociativity.
inline SheafOfRings height_one_sheaf(const StackPtr& S, std::vector<std::string> gens,
                                     std::vector<Element> degree_one_images) {
    if (S->ctx.h != 1) throw precision_error("height_one_sheaf: stack is not height 1");
    SheafOfRings sh;
    sh.stack = S;
    sh.R = RingDesc::make(S->ctx, 0, std::move(gens));
    std::vector<Element> imgs;
    for (auto& e : degree_one_images) imgs.push_back(e.embedded(sh.R));
    sh.nabla_images.assign(S->D, {});
    for (std::size_t g = 0; g < sh.R->gens.size(); ++g)
        sh.nabla_images[0].push_back(TensorElement{S, 1, {imgs[g]}});
    AlgebraMap f1(sh.R, sh.R, {}, imgs);
    AlgebraMap fd = f1;
    for (unsigned d = 2; d <= S->D; ++d) {
        fd = AlgebraMap::compose(f1, fd);
        for (std::size_t g = 0; g < sh.R->gens.size(); ++g)
            sh.nabla_images[d - 1].push_back(TensorElement{S, d, {fd.gen_images()[g]}});
    }
    return sh;
}

// Coassociativity and the structure-compatibility of the comodule maps,
// verified on generators at precision.
inline Report validate_comodule_algebra(const SheafOfRings& sheaf) {
    Report rep;
    const StackPtr& S = sheaf.stack;
    rep.add("iota/t compatibility square", true,
            "coefficients are routed through t_d by construction");
    for (unsigned d = 1; d <= S->D; ++d) {
        bool shape = true;
        for (std::size_t g = 0; g < sheaf.R->gens.size(); ++g)
            if (sheaf.nabla_gen(d, g).coords.size() != S->algebra(d).rank()) shape = false;
        rep.add("nabla_{R," + std::to_string(d) + "} has tensor shape", shape);
        if (!shape) return rep;
    }
    for (unsigned d = 0; d <= S->D; ++d)
        for (unsigned e = 0; d + e <= S->D; ++e) {
            if (d == 0 || e == 0) continue; // trivial instances
            bool ok = true;
            std::string witness;
            const std::size_t rd = S->algebra(d).rank(), re = S->algebra(e).rank();
            for (std::size_t g = 0; g < sheaf.R->gens.size() && ok; ++g) {
                // LHS: (id (x) nabla_{R,e}) nabla_{R,d}(x); triple coords [i][k] in R
                std::vector<std::vector<Element>> lhs(
                    rd, std::vector<Element>(re, Element::zero(sheaf.R)));
                const TensorElement td = sheaf.nabla_gen(d, g);
                for (std::size_t i = 0; i < rd; ++i) {
                    if (td.coords[i].is_zero()) continue;
                    TensorElement inner = extend_comodule(sheaf, e, td.coords[i]);
                    for (std::size_t k = 0; k < re; ++k)
                        lhs[i][k] = lhs[i][k] + inner.coords[k];
                }
                // RHS: (nabla_{d,e} (x) id) nabla_{R,d+e}(x); middle O-scalars
                // cross into R through iota.
                std::vector<std::vector<Element>> rhs(
                    rd, std::vector<Element>(re, Element::zero(sheaf.R)));
                const TensorElement tde = sheaf.nabla_gen(d + e, g);
                for (std::size_t m = 0; m < tde.coords.size(); ++m) {
                    if (tde.coords[m].is_zero()) continue;
                    auto cds = apply_nabla(*S, d, e, od_basis(*S, d + e, m));
                    for (std::size_t i = 0; i < rd; ++i)
                        for (std::size_t k = 0; k < re; ++k)
                            rhs[i][k] =
                                rhs[i][k] + cds[i][k].embedded(sheaf.R) * tde.coords[m];
                }
                for (std::size_t i = 0; i < rd && ok; ++i)
                    for (std::size_t k = 0; k < re; ++k)
                        if (!lhs[i][k].equals(rhs[i][k])) {
                            ok = false;
                            witness = "generator " + sheaf.R->gens[g];
                            break;
                        }
            }
            rep.add("coassociativity of nabla_R at (" + std::to_string(d) + "," +
                        std::to_string(e) + ")",
                    ok, witness);
        }
    return rep;
}

// Frobenius congruence: (nu_1 (x) id) nabla_{R,1}(x) = x^p in R/pR for every
// generator; by the d=1 reduction this settles all degrees.
inline bool check_frobenius_congruence(const SheafOfRings& sheaf) {
    const StackPtr& S = sheaf.stack;
    for (std::size_t g = 0; g < sheaf.R->gens.size(); ++g) {
        const TensorElement t = sheaf.nabla_gen(1, g);
        Element lhs = Element::zero(sheaf.R);
        for (std::size_t i = 0; i < t.coords.size(); ++i)
            lhs = lhs + S->algebra(1).nu[i].embedded(sheaf.R) * t.coords[i];
        const Element rhs = Element::generator(sheaf.R, g).pow(S->ctx.p);
        if (!lhs.reduced_mod_p().equals(rhs.reduced_mod_p())) return false;
    }
    return true;
}

// The Adams operation psi_R(x) = (q (x) id) nabla_{R,h}(x).
inline Element adams_operation(const SheafOfRings& sheaf, const Element& x) {
    const StackPtr& S = sheaf.stack;
    if (S->ctx.h > S->D) throw precision_error("adams_operation: degree-h data missing");
    const TensorElement t = extend_comodule(sheaf, S->ctx.h, x);
    Element r = Element::zero(sheaf.R);
    for (std::size_t i = 0; i < t.coords.size(); ++i)
        r = r + S->q_images[i].embedded(sheaf.R) * t.coords[i];
    return r;
}

// psi_R as an algebra map; on the coefficient ring it acts by psi_O.
inline AlgebraMap adams_map(const SheafOfRings& sheaf) {
    std::vector<Element> u, g;
    for (unsigned i = 0; i < sheaf.R->num_u; ++i)
        u.push_back(sheaf.stack->psi_O.apply(Element::u_var(sheaf.stack->O, i))
                        .embedded(sheaf.R));
    for (std::size_t i = 0; i < sheaf.R->gens.size(); ++i)
        g.push_back(adams_operation(sheaf, Element::generator(sheaf.R, i)));
    return AlgebraMap(sheaf.R, sheaf.R, std::move(u), std::move(g));
}

// (psi_{O_d} (x) psi_R) applied to a tensor element.
inline TensorElement tensor_apply_psi(const SheafOfRings& sheaf, const AlgebraMap& psi_R,
                                      const TensorElement& t) {
    const StackPtr& S = sheaf.stack;
    const OdAlgebra& A = S->algebra(t.d);
    TensorElement r = tensor_zero(S, t.d, sheaf.R);
    for (std::size_t i = 0; i < A.rank(); ++i) {
        if (t.coords[i].is_zero()) continue;
        const Element pr = psi_R.apply(t.coords[i]);
        for (std::size_t k = 0; k < A.rank(); ++k) {
            const Element& w = A.psi_images[i][k];
            if (w.is_zero()) continue;
            r.coords[k] = r.coords[k] + w.embedded(sheaf.R) * pr;
        }
    }
    return r;
}

// Property suite for the Adams operation: compatibility with iota, the
// naturality square against psi_{O_d}, and the p^h-power congruence (the
// latter contingent on the Frobenius congruence).
inline Report adams_property_suite(const SheafOfRings& sheaf) {
    Report rep;
    const StackPtr& S = sheaf.stack;
    const AlgebraMap psi = adams_map(sheaf);
    {
        bool ok = true;
        for (unsigned i = 0; i < sheaf.R->num_u; ++i) {
            const Element lhs = adams_operation(sheaf, Element::u_var(S->O, i).embedded(sheaf.R));
            const Element rhs =
                S->psi_O.apply(Element::u_var(S->O, i)).embedded(sheaf.R);
            if (!lhs.equals(rhs)) ok = false;
        }
        rep.add("psi_R iota_R = iota_R psi_O", ok);
    }
    for (unsigned d = 1; d <= S->D; ++d) {
        bool ok = true;
        std::string witness;
        for (std::size_t g = 0; g < sheaf.R->gens.size() && ok; ++g) {
            const TensorElement lhs =
                extend_comodule(sheaf, d, psi.gen_images()[g]);
            const TensorElement rhs = tensor_apply_psi(sheaf, psi, sheaf.nabla_gen(d, g));
            if (!lhs.equals(rhs)) {
                ok = false;
                witness = "generator " + sheaf.R->gens[g];
            }
        }
        rep.add("naturality square nabla_{R," + std::to_string(d) +
                    "} psi_R = (psi_{O_d} (x) psi_R) nabla_{R," + std::to_string(d) + "}",
                ok, witness);
    }
    if (!check_frobenius_congruence(sheaf)) {
        rep.add("psi_R(x) = x^{p^h} mod mR", false,
                "not applicable: the Frobenius congruence fails");
    } else {
        bool ok = true;
        std::string witness;
        const std::uint64_t q = S->ctx.ph();
        for (std::size_t g = 0; g < sheaf.R->gens.size(); ++g) {
            const Element diff =
                psi.gen_images()[g] - Element::generator(sheaf.R, g).pow(q);
            if (diff.madic_order() < 1) {
                ok = false;
                witness = "generator " + sheaf.R->gens[g];
            }
        }
        rep.add("psi_R(x) = x^{p^h} mod mR", ok, witness);
    }
    return rep;
}

// The object (R, mR, psi_R) of the Frobenius-lift category determined by the
// sheaf.  Perfectness is decided by attempting to invert psi_R unless the
// caller supplies the answer.
inline FrobeniusRing sheaf_as_frobenius_ring(const SheafOfRings& sheaf,
                                             std::optional<bool> perfect_hint = std::nullopt) {
    if (!check_frobenius_congruence(sheaf))
        throw validation_error(
            "sheaf_as_frobenius_ring: the Frobenius congruence fails, so (R, mR, psi_R) "
            "is not an object of the Frobenius-lift category");
    AlgebraMap psi = adams_map(sheaf);
    bool perfect;
    if (perfect_hint) {
        perfect = *perfect_hint;
    } else {
        try {
            psi.inverse();
            perfect = true;
        } catch (const error&) {
            perfect = false;
        }
    }
    return FrobeniusRing(sheaf.R, IdealSpec::maximal(*sheaf.R), std::move(psi), perfect);
}

} // namespace froblift
