#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "algebra_map.hpp"
#include "element.hpp"
#include "errors.hpp"
#include "report.hpp"

namespace froblift {

// Elements of O_d are coordinate vectors over O with respect to the free
// basis given by s_d.
using OdElement = std::vector<Element>;

// One Strickland ring O_d presented by a basis, a structure-constant tensor,
// the t_d images of the u-variables, the maximal-ideal generators, the
// Frobenius classifier values nu_d(e_i) (read modulo p), and the p-th power
// isomorphism psi_{O_d} on basis elements.
struct OdAlgebra {
    unsigned d = 0;
    std::vector<std::string> basis;
    std::vector<Element> mult;                // [i*r+j]*r+k -> c_{ij}^k in O
    std::vector<OdElement> t_images;          // per u-variable
    std::vector<OdElement> m_gens;            // generators of m_d
    std::vector<Element> nu;                  // nu_d(e_i) in O, read mod p
    std::vector<OdElement> psi_images;        // psi_{O_d}(e_i)

    std::size_t rank() const { return basis.size(); }
    const Element& c(std::size_t i, std::size_t j, std::size_t k) const {
        return mult[(i * rank() + j) * rank() + k];
    }
};

// Nabla_{d,e}: per basis element of O_{d+e}, a rank_d x rank_e matrix of
// O-coordinates with respect to e_i (x) s_e(b) f_j.
using NablaCoords = std::vector<std::vector<std::vector<Element>>>;

// The representing data (O, O_d, s_d, t_d, nabla_{d,e}, nu_d, q, psi_{O_d})
// of the deformation category as finite presentations at precision M.
struct StackData {
    PrecisionContext ctx;
    unsigned D = 0;
    RingDescPtr O;
    AlgebraMap psi_O;                          // ring endomorphism of O
    std::vector<OdAlgebra> deg;                // indices 0..D
    std::map<std::pair<unsigned, unsigned>, NablaCoords> nabla;
    std::vector<Element> q_images;             // q(e_i) in O, basis of O_h

    const OdAlgebra& algebra(unsigned d) const {
        if (d > D) throw precision_error("stack: degree " + std::to_string(d) + " exceeds D");
        return deg[d];
    }
    const NablaCoords& nabla_at(unsigned d, unsigned e) const {
        auto it = nabla.find({d, e});
        if (it == nabla.end())
            throw precision_error("stack: nabla_{" + std::to_string(d) + "," +
                                  std::to_string(e) + "} not present");
        return it->second;
    }
};

using StackPtr = std::shared_ptr<const StackData>;

// ---- Free-module algebra arithmetic -------------------------------------

inline OdElement od_zero(const StackData& S, unsigned d) {
    return OdElement(S.algebra(d).rank(), Element::zero(S.O));
}

inline OdElement od_unit(const StackData& S, unsigned d) {
    OdElement v = od_zero(S, d);
    v[0] = Element::one(S.O);
    return v;
}

inline OdElement od_basis(const StackData& S, unsigned d, std::size_t i) {
    OdElement v = od_zero(S, d);
    v[i] = Element::one(S.O);
    return v;
}

inline OdElement od_add(const OdElement& a, const OdElement& b) {
    OdElement r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
    return r;
}

inline OdElement od_sub(const OdElement& a, const OdElement& b) {
    OdElement r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
    return r;
}

// s_d-scalar multiplication by a in O.
inline OdElement od_scale(const Element& a, const OdElement& v) {
    OdElement r = v;
    for (auto& c : r) c = a * c;
    return r;
}

inline OdElement od_mul(const StackData& S, unsigned d, const OdElement& a, const OdElement& b) {
    const OdAlgebra& A = S.algebra(d);
    OdElement r = od_zero(S, d);
    for (std::size_t i = 0; i < A.rank(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < A.rank(); ++j) {
            if (b[j].is_zero()) continue;
            const Element ab = a[i] * b[j];
            for (std::size_t k = 0; k < A.rank(); ++k)
                r[k] = r[k] + ab * A.c(i, j, k);
        }
    }
    return r;
}

inline bool od_equal(const OdElement& a, const OdElement& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].equals(b[i])) return false;
    return true;
}

inline OdElement od_pow(const StackData& S, unsigned d, OdElement b, std::uint64_t n) {
    OdElement r = od_unit(S, d);
    while (n) {
        if (n & 1) r = od_mul(S, d, r, b);
        if (n >>= 1) b = od_mul(S, d, b, b);
    }
    return r;
}

// t_d applied to a in O: substitute u_i by t_images and scale by s_d.
inline OdElement apply_t(const StackData& S, unsigned d, const Element& a) {
    const OdAlgebra& A = S.algebra(d);
    if (!a.ring()->same_ring(*S.O)) throw ring_mismatch_error("apply_t: element not in O");
    OdElement result = od_zero(S, d);
    // powers of t(u_i), grown on demand
    std::vector<std::vector<OdElement>> pw(S.O->num_u);
    for (auto& v : pw) v.push_back(od_unit(S, d));
    for (const auto& [m, c] : a.terms()) {
        OdElement t = od_unit(S, d);
        for (unsigned i = 0; i < S.O->num_u; ++i) {
            if (m.exps[i] == 0) continue;
            while (pw[i].size() <= m.exps[i])
                pw[i].push_back(od_mul(S, d, pw[i].back(), A.t_images[i]));
            t = od_mul(S, d, t, pw[i][m.exps[i]]);
        }
        result = od_add(result, od_scale(Element::constant(S.O, c), t));
    }
    return result;
}

// psi_{O_d} applied to a coordinate vector (psi_O-semilinear in s_d).
inline OdElement apply_psi_od(const StackData& S, unsigned d, const OdElement& v) {
    const OdAlgebra& A = S.algebra(d);
    OdElement r = od_zero(S, d);
    for (std::size_t i = 0; i < A.rank(); ++i) {
        if (v[i].is_zero()) continue;
        r = od_add(r, od_scale(S.psi_O.apply(v[i]), A.psi_images[i]));
    }
    return r;
}

// nu_d applied to a coordinate vector; the result is an O-element meaningful
// modulo p (an element of O/p).
inline Element apply_nu(const StackData& S, unsigned d, const OdElement& v) {
    const OdAlgebra& A = S.algebra(d);
    Element r = Element::zero(S.O);
    for (std::size_t i = 0; i < A.rank(); ++i) r = r + v[i] * A.nu[i];
    return r.reduced_mod_p();
}

// q applied to a coordinate vector over O_h (s_h-linear).
inline Element apply_q(const StackData& S, const OdElement& v) {
    Element r = Element::zero(S.O);
    for (std::size_t i = 0; i < v.size(); ++i) r = r + v[i] * S.q_images[i];
    return r;
}

// nabla_{d,e} applied to a coordinate vector over O_{d+e}: result indexed
// [i][j] over basis of O_d x basis of O_e, coordinates in O.
inline std::vector<std::vector<Element>> apply_nabla(const StackData& S, unsigned d, unsigned e,
                                                     const OdElement& v) {
    const NablaCoords& N = S.nabla_at(d, e);
    const std::size_t rd = S.algebra(d).rank(), re = S.algebra(e).rank();
    std::vector<std::vector<Element>> r(rd, std::vector<Element>(re, Element::zero(S.O)));
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].is_zero()) continue;
        for (std::size_t i = 0; i < rd; ++i)
            for (std::size_t j = 0; j < re; ++j) r[i][j] = r[i][j] + v[k] * N[k][i][j];
    }
    return r;
}

// Multiplication in O_d (x)_{s,O,t} O_e in canonical coordinates: crossing
// scalars route through t_e.
inline std::vector<std::vector<Element>> tensor2_mul(const StackData& S, unsigned d, unsigned e,
                                                     const std::vector<std::vector<Element>>& a,
                                                     const std::vector<std::vector<Element>>& b) {
    const OdAlgebra& Ad = S.algebra(d);
    const std::size_t rd = Ad.rank(), re = S.algebra(e).rank();
    std::vector<std::vector<Element>> r(rd, std::vector<Element>(re, Element::zero(S.O)));
    for (std::size_t i = 0; i < rd; ++i)
        for (std::size_t j = 0; j < re; ++j) {
            if (a[i][j].is_zero()) continue;
            for (std::size_t k = 0; k < rd; ++k)
                for (std::size_t l = 0; l < re; ++l) {
                    if (b[k][l].is_zero()) continue;
                    // (e_i (x) s(a) f_j)(e_k (x) s(b) f_l)
                    //   = sum_m e_m (x) t_e(c_{ik}^m) s(ab) f_j f_l
                    for (std::size_t m = 0; m < rd; ++m) {
                        const Element& c = Ad.c(i, k, m);
                        if (c.is_zero()) continue;
                        OdElement right = od_scale(a[i][j] * b[k][l],
                                                   od_mul(S, e, apply_t(S, e, c),
                                                          od_mul(S, e, od_basis(S, e, j),
                                                                 od_basis(S, e, l))));
                        for (std::size_t n = 0; n < re; ++n) r[m][n] = r[m][n] + right[n];
                    }
                }
        }
    return r;
}

inline bool tensor2_equal(const std::vector<std::vector<Element>>& a,
                          const std::vector<std::vector<Element>>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (!a[i][j].equals(b[i][j])) return false;
    return true;
}

// ---- Built-in height-1 instance -----------------------------------------

// At height 1 every deformation has a unique subgroup of each rank, so the
// whole structure collapses: O = O_d = Z_p, all structure maps the identity,
// nu_d reduction mod p, q = id, psi_{O_d} = id, m_d = (p).
inline StackData height_one_stack(std::uint64_t p, unsigned M, unsigned D = 2) {
    PrecisionContext ctx{p, 1, M};
    ctx.validate();
    if (D < 2) D = 2; // D >= 2h so every checkable axiom instance has data
    StackData S;
    S.ctx = ctx;
    S.D = D;
    S.O = RingDesc::base_ring(ctx);
    S.psi_O = AlgebraMap::identity(S.O);
    for (unsigned d = 0; d <= D; ++d) {
        OdAlgebra A;
        A.d = d;
        A.basis = {"e"};
        A.mult = {Element::one(S.O)};
        A.m_gens = {{Element::constant(S.O, p)}};
        A.nu = {Element::one(S.O)};
        A.psi_images = {{Element::one(S.O)}};
        S.deg.push_back(std::move(A));
    }
    for (unsigned d = 0; d <= D; ++d)
        for (unsigned e = 0; d + e <= D; ++e)
            S.nabla[{d, e}] = NablaCoords{{{Element::one(S.O)}}};
    S.q_images = {Element::one(S.O)};
    return S;
}

// ---- Validators ----------------------------------------------------------

namespace detail {

// Membership of an O_d element in m_d, tested through the validated residue
// map O_d -> kappa (nu_d followed by reduction to the residue field).
inline bool in_md(const StackData& S, unsigned d, const OdElement& v) {
    return apply_nu(S, d, v).kappa_residue() == 0;
}

inline std::string axiom(unsigned d, const std::string& what) {
    return what + " [d=" + std::to_string(d) + "]";
}

} // namespace detail

// Category-scheme axioms: multiplication tensors define commutative unital
// associative algebras; nabla maps are ring maps with co-unit behavior,
// coassociativity, and source/target compatibility; psi_{O_d} is a ring map
// congruent to the p^h-power map modulo m_d.
inline Report validate_category_axioms(const StackData& S) {
    Report rep;
    const std::uint64_t q = S.ctx.ph();

    for (unsigned d = 0; d <= S.D; ++d) {
        const OdAlgebra& A = S.algebra(d);
        const std::size_t r = A.rank();
        bool comm = true, unital = true, assoc = true;
        std::string witness;
        for (std::size_t i = 0; i < r && comm; ++i)
            for (std::size_t j = 0; j < r && comm; ++j)
                for (std::size_t k = 0; k < r; ++k)
                    if (!A.c(i, j, k).equals(A.c(j, i, k))) {
                        comm = false;
                        witness = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                        break;
                    }
        rep.add(detail::axiom(d, "multiplication commutative"), comm, witness);
        witness.clear();
        for (std::size_t j = 0; j < r && unital; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                const bool want_one = (k == j);
                const Element& c = A.c(0, j, k);
                if (want_one ? !c.equals(Element::one(S.O)) : !c.is_zero()) {
                    unital = false;
                    witness = "e_1 * " + A.basis[j];
                    break;
                }
            }
        rep.add(detail::axiom(d, "basis element e_1 is the unit"), unital, witness);
        witness.clear();
        for (std::size_t i = 0; i < r && assoc; ++i)
            for (std::size_t j = 0; j < r && assoc; ++j)
                for (std::size_t k = 0; k < r; ++k) {
                    OdElement lhs = od_mul(S, d, od_mul(S, d, od_basis(S, d, i), od_basis(S, d, j)),
                                           od_basis(S, d, k));
                    OdElement rhs = od_mul(S, d, od_basis(S, d, i),
                                           od_mul(S, d, od_basis(S, d, j), od_basis(S, d, k)));
                    if (!od_equal(lhs, rhs)) {
                        assoc = false;
                        witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                  std::to_string(k) + ")";
                        break;
                    }
                }
        rep.add(detail::axiom(d, "multiplication associative"), assoc, witness);
    }

    // nabla axioms
    for (const auto& [de, N] : S.nabla) {
        const auto [d, e] = de;
        const OdAlgebra& A = S.algebra(d + e);
        const std::string tag = "nabla_{" + std::to_string(d) + "," + std::to_string(e) + "}";
        // unit
        {
            std::vector<std::vector<Element>> img = apply_nabla(S, d, e, od_unit(S, d + e));
            std::vector<std::vector<Element>> unit(S.algebra(d).rank(),
                                                   std::vector<Element>(S.algebra(e).rank(),
                                                                        Element::zero(S.O)));
            unit[0][0] = Element::one(S.O);
            rep.add(tag + " preserves the unit", tensor2_equal(img, unit));
        }
        // ring map on basis products
        {
            bool ok = true;
            std::string witness;
            for (std::size_t k = 0; k < A.rank() && ok; ++k)
                for (std::size_t l = 0; l < A.rank(); ++l) {
                    auto lhs = tensor2_mul(S, d, e, apply_nabla(S, d, e, od_basis(S, d + e, k)),
                                           apply_nabla(S, d, e, od_basis(S, d + e, l)));
                    auto rhs = apply_nabla(
                        S, d, e, od_mul(S, d + e, od_basis(S, d + e, k), od_basis(S, d + e, l)));
                    if (!tensor2_equal(lhs, rhs)) {
                        ok = false;
                        witness = A.basis[k] + " * " + A.basis[l];
                        break;
                    }
                }
            rep.add(tag + " is a ring map", ok, witness);
        }
        // co-unit behavior
        if (e == 0) {
            bool ok = true;
            for (std::size_t k = 0; k < A.rank() && ok; ++k) {
                auto img = apply_nabla(S, d, 0, od_basis(S, d, k));
                for (std::size_t i = 0; i < S.algebra(d).rank(); ++i) {
                    const Element want =
                        (i == k) ? Element::one(S.O) : Element::zero(S.O);
                    if (!img[i][0].equals(want)) ok = false;
                }
            }
            rep.add(tag + " reduces to identity coordinates", ok);
        }
        if (d == 0) {
            bool ok = true;
            for (std::size_t k = 0; k < A.rank() && ok; ++k) {
                auto img = apply_nabla(S, 0, e, od_basis(S, e, k));
                for (std::size_t j = 0; j < S.algebra(e).rank(); ++j) {
                    const Element want =
                        (j == k) ? Element::one(S.O) : Element::zero(S.O);
                    if (!img[0][j].equals(want)) ok = false;
                }
            }
            rep.add(tag + " reduces to identity coordinates", ok);
        }
        // t-compatibility: nabla(t_{d+e}(a)) = t_d(a) (x) 1 on each u-variable
        {
            bool ok = true;
            for (unsigned ui = 0; ui < S.O->num_u && ok; ++ui) {
                auto lhs = apply_nabla(S, d, e, A.t_images[ui]);
                // t_d(u) (x) 1: expand t_d(u) = sum s(w_i) e_i, cross w_i
                // through t_e into the right factor.
                const OdElement td = S.algebra(d).t_images[ui];
                std::vector<std::vector<Element>> rhs(
                    S.algebra(d).rank(),
                    std::vector<Element>(S.algebra(e).rank(), Element::zero(S.O)));
                for (std::size_t i = 0; i < td.size(); ++i) {
                    const OdElement crossed = apply_t(S, e, td[i]);
                    for (std::size_t j = 0; j < crossed.size(); ++j)
                        rhs[i][j] = rhs[i][j] + crossed[j];
                }
                if (!tensor2_equal(lhs, rhs)) ok = false;
            }
            rep.add(tag + " compatible with t", ok);
        }
    }

    // coassociativity where degrees permit
    for (unsigned d = 0; d <= S.D; ++d)
        for (unsigned e = 0; d + e <= S.D; ++e)
            for (unsigned f = 0; d + e + f <= S.D; ++f) {
                const OdAlgebra& A = S.algebra(d + e + f);
                bool ok = true;
                for (std::size_t g = 0; g < A.rank() && ok; ++g) {
                    // route 1: nabla_{d+e,f} then nabla_{d,e} (x) id
                    const std::size_t rd = S.algebra(d).rank(), re2 = S.algebra(e).rank(),
                                      rf = S.algebra(f).rank();
                    std::vector<Element> r1((rd * re2) * rf, Element::zero(S.O));
                    {
                        auto first = apply_nabla(S, d + e, f, od_basis(S, d + e + f, g));
                        for (std::size_t m = 0; m < S.algebra(d + e).rank(); ++m)
                            for (std::size_t j = 0; j < rf; ++j) {
                                if (first[m][j].is_zero()) continue;
                                auto second = apply_nabla(S, d, e, od_basis(S, d + e, m));
                                for (std::size_t i = 0; i < rd; ++i)
                                    for (std::size_t k = 0; k < re2; ++k) {
                                        if (second[i][k].is_zero()) continue;
                                        // e_i (x) s_e(c) h_k (x) s_f(b) f_j:
                                        // cross c into the last factor via t_f.
                                        OdElement z = od_scale(
                                            first[m][j],
                                            od_mul(S, f, apply_t(S, f, second[i][k]),
                                                   od_basis(S, f, j)));
                                        for (std::size_t jj = 0; jj < rf; ++jj)
                                            r1[(i * re2 + k) * rf + jj] =
                                                r1[(i * re2 + k) * rf + jj] + z[jj];
                                    }
                            }
                    }
                    // route 2: nabla_{d,e+f} then id (x) nabla_{e,f}
                    std::vector<Element> r2((rd * re2) * rf, Element::zero(S.O));
                    {
                        auto first = apply_nabla(S, d, e + f, od_basis(S, d + e + f, g));
                        for (std::size_t i = 0; i < rd; ++i)
                            for (std::size_t m = 0; m < S.algebra(e + f).rank(); ++m) {
                                if (first[i][m].is_zero()) continue;
                                auto second = apply_nabla(S, e, f, od_basis(S, e + f, m));
                                for (std::size_t k = 0; k < re2; ++k)
                                    for (std::size_t j = 0; j < rf; ++j)
                                        r2[(i * re2 + k) * rf + j] =
                                            r2[(i * re2 + k) * rf + j] +
                                            first[i][m] * second[k][j];
                            }
                    }
                    for (std::size_t idx = 0; idx < r1.size(); ++idx)
                        if (!r1[idx].equals(r2[idx])) ok = false;
                }
                rep.add("coassociativity at degrees (" + std::to_string(d) + "," +
                            std::to_string(e) + "," + std::to_string(f) + ")",
                        ok);
            }

    // psi_{O_d}: ring map, unit-preserving, and congruent to p^h-powering mod m_d
    for (unsigned d = 0; d <= S.D; ++d) {
        const OdAlgebra& A = S.algebra(d);
        rep.add(detail::axiom(d, "psi preserves the unit"),
                od_equal(A.psi_images[0], od_unit(S, d)));
        bool ring_ok = true;
        std::string witness;
        for (std::size_t i = 0; i < A.rank() && ring_ok; ++i)
            for (std::size_t j = 0; j < A.rank(); ++j) {
                OdElement lhs = od_mul(S, d, A.psi_images[i], A.psi_images[j]);
                OdElement rhs =
                    apply_psi_od(S, d, od_mul(S, d, od_basis(S, d, i), od_basis(S, d, j)));
                if (!od_equal(lhs, rhs)) {
                    ring_ok = false;
                    witness = A.basis[i] + " * " + A.basis[j];
                    break;
                }
            }
        rep.add(detail::axiom(d, "psi is a ring map"), ring_ok, witness);
        bool cong = true;
        for (std::size_t i = 0; i < A.rank() && cong; ++i) {
            OdElement diff =
                od_sub(A.psi_images[i], od_pow(S, d, od_basis(S, d, i), q));
            if (!detail::in_md(S, d, diff)) {
                cong = false;
                witness = A.basis[i];
            }
        }
        for (unsigned ui = 0; ui < S.O->num_u && cong; ++ui) {
            // generators s(u_i): psi(s(u)) = s(psi_O(u)), congruent to s(u)^{p^h}
            OdElement lhs = od_scale(S.psi_O.apply(Element::u_var(S.O, ui)), od_unit(S, d));
            OdElement rhs = od_pow(S, d, od_scale(Element::u_var(S.O, ui), od_unit(S, d)), q);
            if (!detail::in_md(S, d, od_sub(lhs, rhs))) {
                cong = false;
                witness = "s(u" + std::to_string(ui + 1) + ")";
            }
        }
        rep.add(detail::axiom(d, "psi(x) = x^{p^h} mod m_d"), cong, witness);
    }
    return rep;
}

// Frobenius-classifier axioms: nu_d is a surjective ring map onto O/p with
// nu_d s_d the quotient map, nu_d t_d the p^d-th power map, and the residue
// factorization through kappa killing m_d.
inline Report validate_frobenius_classifiers(const StackData& S) {
    Report rep;
    for (unsigned d = 0; d <= S.D; ++d) {
        const OdAlgebra& A = S.algebra(d);
        // nu ring map on basis products
        bool ring_ok = true;
        std::string witness;
        for (std::size_t i = 0; i < A.rank() && ring_ok; ++i)
            for (std::size_t j = 0; j < A.rank(); ++j) {
                Element lhs = (A.nu[i] * A.nu[j]).reduced_mod_p();
                Element rhs =
                    apply_nu(S, d, od_mul(S, d, od_basis(S, d, i), od_basis(S, d, j)));
                if (!lhs.equals(rhs)) {
                    ring_ok = false;
                    witness = A.basis[i] + " * " + A.basis[j];
                    break;
                }
            }
        rep.add(detail::axiom(d, "nu is a ring map"), ring_ok, witness);
        // nu s = quotient map (in particular nu is surjective)
        rep.add(detail::axiom(d, "nu s is the quotient map onto O/p"),
                A.nu[0].reduced_mod_p().equals(Element::one(S.O)));
        // nu t = p^d-th power map; on the coefficient field this is Fermat,
        // verified numerically on every residue, and on the u-variables it is
        // the stated power-map condition.
        {
            bool ok = true;
            std::uint64_t pd = 1;
            for (unsigned i = 0; i < d; ++i) pd *= S.ctx.p;
            for (std::uint64_t c = 0; c < S.ctx.p && ok; ++c)
                if (powmod(c, pd, S.ctx.p) != c % S.ctx.p) ok = false;
            for (unsigned ui = 0; ui < S.O->num_u && ok; ++ui) {
                Element lhs = apply_nu(S, d, A.t_images[ui]);
                Element rhs = Element::u_var(S.O, ui).pow(pd).reduced_mod_p();
                if (!lhs.equals(rhs)) ok = false;
            }
            rep.add(detail::axiom(d, "nu t is the p^d-th power map"), ok);
        }
        // factorization through kappa: nu kills m_d up to m/p
        {
            bool ok = true;
            for (const auto& g : A.m_gens)
                if (apply_nu(S, d, g).kappa_residue() != 0) ok = false;
            rep.add(detail::axiom(d, "quotient factors through nu (m_d maps into m/p)"), ok);
        }
        // residue ring O_d/m_d = kappa: p and the declared generators must
        // include the augmentation coordinates of every basis element beyond
        // the unit; at finite precision we check nu-residues are constants.
        {
            bool ok = true;
            for (std::size_t i = 0; i < A.rank(); ++i) {
                Element r = A.nu[i].reduced_mod_p();
                OdElement v = od_sub(od_basis(S, d, i),
                                     od_scale(Element::constant(S.O, r.kappa_residue()),
                                              od_unit(S, d)));
                if (!detail::in_md(S, d, v)) ok = false;
            }
            rep.add(detail::axiom(d, "residue ring O_d/m_d has p elements"), ok);
        }
    }
    return rep;
}

// p-th power structure: q s_h = id, q t_h = psi_O, and the naturality square
// (psi_{O_d} (x) q) nabla_{d,h} = (q (x) id) nabla_{h,d} on O_{d+h}.
inline Report validate_p_power_structure(const StackData& S) {
    Report rep;
    const unsigned h = S.ctx.h;
    if (S.D < h) {
        rep.add("q s_h = id", false, "stack data does not reach degree h");
        return rep;
    }
    const OdAlgebra& Ah = S.algebra(h);
    // q ring map
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < Ah.rank() && ok; ++i)
            for (std::size_t j = 0; j < Ah.rank(); ++j) {
                Element lhs = S.q_images[i] * S.q_images[j];
                Element rhs = apply_q(S, od_mul(S, h, od_basis(S, h, i), od_basis(S, h, j)));
                if (!lhs.equals(rhs)) {
                    ok = false;
                    witness = Ah.basis[i] + " * " + Ah.basis[j];
                    break;
                }
            }
        rep.add("q is a ring map", ok, witness);
    }
    rep.add("q s_h = id", S.q_images[0].equals(Element::one(S.O)));
    {
        bool ok = true;
        for (unsigned ui = 0; ui < S.O->num_u; ++ui) {
            Element lhs = apply_q(S, Ah.t_images[ui]);
            Element rhs = S.psi_O.apply(Element::u_var(S.O, ui));
            if (!lhs.equals(rhs)) ok = false;
        }
        rep.add("q t_h = psi_O", ok);
    }
    for (unsigned d = 0; d + h <= S.D; ++d) {
        bool ok = true;
        std::string witness;
        const OdAlgebra& A = S.algebra(d + h);
        for (std::size_t k = 0; k < A.rank() && ok; ++k) {
            // LHS: (psi_{O_d} (x) q) nabla_{d,h}: e_i (x) s(b) f_j |->
            //      s_d(b * q(f_j)) psi_{O_d}(e_i)
            OdElement lhs = od_zero(S, d);
            {
                auto cds = apply_nabla(S, d, h, od_basis(S, d + h, k));
                for (std::size_t i = 0; i < S.algebra(d).rank(); ++i)
                    for (std::size_t j = 0; j < Ah.rank(); ++j) {
                        if (cds[i][j].is_zero()) continue;
                        lhs = od_add(lhs, od_scale(cds[i][j] * S.q_images[j],
                                                   apply_psi_od(S, d, od_basis(S, d, i))));
                    }
            }
            // RHS: (q (x) id) nabla_{h,d}: f_i (x) s(b) e_j |->
            //      t_d(q(f_i)) * s_d(b) e_j
            OdElement rhs = od_zero(S, d);
            {
                auto cds = apply_nabla(S, h, d, od_basis(S, d + h, k));
                for (std::size_t i = 0; i < Ah.rank(); ++i)
                    for (std::size_t j = 0; j < S.algebra(d).rank(); ++j) {
                        if (cds[i][j].is_zero()) continue;
                        rhs = od_add(rhs, od_mul(S, d, apply_t(S, d, S.q_images[i]),
                                                 od_scale(cds[i][j], od_basis(S, d, j))));
                    }
            }
            if (!od_equal(lhs, rhs)) {
                ok = false;
                witness = A.basis[k];
            }
        }
        rep.add("p-th power naturality square at d=" + std::to_string(d), ok, witness);
    }
    return rep;
}

inline Report validate_stack(const StackData& S) {
    Report rep = validate_category_axioms(S);
    rep.merge(validate_frobenius_classifiers(S));
    rep.merge(validate_p_power_structure(S));
    return rep;
}

} // namespace froblift
