#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "element.hpp"
#include "errors.hpp"
#include "precision.hpp"

namespace froblift {

// A ring homomorphism presented by generator images: one target element per
// u-variable and per polynomial generator of the source.  The coefficient
// ring Z_p maps identically.  Images of u-variables must lie in m (order >= 1)
// so that substitution respects the truncated storage model.
class AlgebraMap {
public:
    AlgebraMap() = default;

    AlgebraMap(RingDescPtr source, RingDescPtr target, std::vector<Element> u_images,
               std::vector<Element> gen_images)
        : source_(std::move(source)),
          target_(std::move(target)),
          u_images_(std::move(u_images)),
          gen_images_(std::move(gen_images)) {
        if (u_images_.size() != source_->num_u || gen_images_.size() != source_->gens.size())
            throw ring_mismatch_error("AlgebraMap: image count mismatch");
        for (const auto& img : u_images_) {
            if (!img.ring()->same_ring(*target_))
                throw ring_mismatch_error("AlgebraMap: image in wrong ring");
            if (img.madic_order() < 1)
                throw precision_error("AlgebraMap: u-variable image must lie in m");
        }
        for (const auto& img : gen_images_)
            if (!img.ring()->same_ring(*target_))
                throw ring_mismatch_error("AlgebraMap: image in wrong ring");
    }

    static AlgebraMap identity(const RingDescPtr& ring) {
        std::vector<Element> u, g;
        for (unsigned i = 0; i < ring->num_u; ++i) u.push_back(Element::u_var(ring, i));
        for (std::size_t i = 0; i < ring->gens.size(); ++i)
            g.push_back(Element::generator(ring, i));
        return AlgebraMap(ring, ring, std::move(u), std::move(g));
    }

    const RingDescPtr& source() const { return source_; }
    const RingDescPtr& target() const { return target_; }
    const std::vector<Element>& u_images() const { return u_images_; }
    const std::vector<Element>& gen_images() const { return gen_images_; }

    const Element& image(std::size_t i) const {
        return i < u_images_.size() ? u_images_[i] : gen_images_[i - u_images_.size()];
    }
    std::size_t num_images() const { return u_images_.size() + gen_images_.size(); }

    bool is_endomorphism() const { return source_->same_ring(*target_); }

    Element apply(const Element& x) const {
        if (!x.ring()->same_ring(*source_))
            throw ring_mismatch_error("apply: element not in source ring");
        // Powers of each image, grown on demand.
        std::vector<std::vector<Element>> pw(num_images());
        for (std::size_t i = 0; i < pw.size(); ++i) pw[i].push_back(Element::one(target_));
        Element result = Element::zero(target_);
        for (const auto& [m, c] : x.terms()) {
            Element t = Element::constant(target_, c);
            for (std::size_t i = 0; i < m.exps.size(); ++i) {
                if (m.exps[i] == 0) continue;
                while (pw[i].size() <= m.exps[i]) pw[i].push_back(pw[i].back() * image(i));
                t = t * pw[i][m.exps[i]];
            }
            result = result + t;
        }
        return result;
    }

    // (f o g): apply f to every image of g.
    static AlgebraMap compose(const AlgebraMap& f, const AlgebraMap& g) {
        if (!g.target_->same_ring(*f.source_))
            throw ring_mismatch_error("compose: inner target does not match outer source");
        std::vector<Element> u, gi;
        for (const auto& e : g.u_images_) u.push_back(f.apply(e));
        for (const auto& e : g.gen_images_) gi.push_back(f.apply(e));
        return AlgebraMap(g.source_, f.target_, std::move(u), std::move(gi));
    }

    // True iff f(x_i) - g(x_i) lies in m^k of the target for every generator.
    static bool equal_mod(const AlgebraMap& f, const AlgebraMap& g, unsigned k) {
        if (!f.source_->same_ring(*g.source_) || !f.target_->same_ring(*g.target_))
            throw ring_mismatch_error("equal_mod: maps have different source/target");
        if (k > f.target_->ctx.M)
            throw precision_error("equal_mod: modulus exceeds working precision");
        for (std::size_t i = 0; i < f.num_images(); ++i)
            if ((f.image(i) - g.image(i)).madic_order() < k) return false;
        return true;
    }

    bool equals(const AlgebraMap& o) const {
        if (!source_->same_ring(*o.source_) || !target_->same_ring(*o.target_)) return false;
        for (std::size_t i = 0; i < num_images(); ++i)
            if (!image(i).equals(o.image(i))) return false;
        return true;
    }

    // Inverse of an endomorphism that is congruent to the identity modulo m
    // and has an m-invertible linearization.  Newton iteration on the images
    // of the inverse; plain linear successive approximation is the k=1 case
    // of the same update.
    AlgebraMap inverse() const;

private:
    RingDescPtr source_;
    RingDescPtr target_;
    std::vector<Element> u_images_;
    std::vector<Element> gen_images_;
};

namespace detail {

// Solve J e = rhs over the local ring (pivots must be units).
inline std::vector<Element> solve_linear_system(std::vector<std::vector<Element>> J,
                                                std::vector<Element> rhs) {
    const std::size_t n = rhs.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t row = col; row < n; ++row) {
            if (J[row][col].kappa_residue() != 0) {
                piv = row;
                break;
            }
        }
        if (piv == n)
            throw not_invertible_error("inverse: linearization is singular modulo m");
        std::swap(J[col], J[piv]);
        std::swap(rhs[col], rhs[piv]);
        const Element inv = J[col][col].invert_unit();
        for (std::size_t j = col; j < n; ++j) J[col][j] = J[col][j] * inv;
        rhs[col] = rhs[col] * inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || J[row][col].is_zero()) continue;
            const Element f = J[row][col];
            for (std::size_t j = col; j < n; ++j) J[row][j] = J[row][j] - f * J[col][j];
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }
    return rhs;
}

} // namespace detail

inline AlgebraMap AlgebraMap::inverse() const {
    if (!is_endomorphism())
        throw ring_mismatch_error("inverse: map is not an endomorphism");
    const auto& ring = source_;
    const std::size_t n = num_images();
    const unsigned M = ring->ctx.M;

    // Unknowns v_i = inverse images; equations psi(g_i) evaluated at v = g_i.
    std::vector<Element> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Element::variable(ring, i));

    auto subst = [&](const std::vector<Element>& vals) {
        std::vector<Element> u(vals.begin(), vals.begin() + ring->num_u);
        std::vector<Element> g(vals.begin() + ring->num_u, vals.end());
        return AlgebraMap(ring, ring, std::move(u), std::move(g));
    };

    auto residual = [&](const std::vector<Element>& vals) {
        AlgebraMap phi = subst(vals);
        std::vector<Element> r;
        for (std::size_t i = 0; i < n; ++i)
            r.push_back(phi.apply(image(i)) - Element::variable(ring, i));
        return r;
    };

    auto min_order = [&](const std::vector<Element>& r) {
        unsigned best = kInfiniteOrder;
        for (const auto& e : r) best = std::min(best, e.madic_order());
        return best;
    };

    std::vector<Element> r = residual(v);
    if (min_order(r) < 1)
        throw not_invertible_error("inverse: map is not congruent to the identity modulo m");

    for (unsigned step = 0; step <= M + 1 && min_order(r) != kInfiniteOrder; ++step) {
        if (step == M + 1)
            throw convergence_error("inverse: no convergence within the precision budget");
        // Jacobian of the equations at the current approximation.
        std::vector<std::vector<Element>> J(n, std::vector<Element>(n, Element::zero(ring)));
        AlgebraMap phi = subst(v);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                J[i][j] = phi.apply(image(i).derivative(j));
        std::vector<Element> neg;
        for (auto& e : r) neg.push_back(-e);
        std::vector<Element> corr = detail::solve_linear_system(std::move(J), std::move(neg));
        for (std::size_t i = 0; i < n; ++i) v[i] = v[i] + corr[i];
        r = residual(v);
    }

    AlgebraMap phi = subst(v);
    if (!compose(*this, phi).equals(identity(ring)))
        throw not_invertible_error("inverse: left composite is not the identity");
    return phi;
}

} // namespace froblift
