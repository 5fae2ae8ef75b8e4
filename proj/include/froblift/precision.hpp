#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"

namespace froblift {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod m for gcd(a, m) = 1.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a % m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw not_invertible_error("invmod: argument is not a unit");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

// The prime p, the height h, and the working m-adic precision M.  All
// equalities in the library are taken modulo m^M for m = (p, u_1, ..., u_{h-1}).
struct PrecisionContext {
    std::uint64_t p = 2;
    unsigned h = 1;
    unsigned M = 1;

    void validate() const {
        if (!is_prime(p)) throw error("PrecisionContext: p must be prime");
        if (h < 1) throw error("PrecisionContext: h must be >= 1");
        if (M < 1) throw error("PrecisionContext: M must be >= 1");
    }

    std::uint64_t ph() const {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < h; ++i) r *= p;
        return r;
    }

    bool operator==(const PrecisionContext&) const = default;
};

// A polynomial algebra O[x_1,...,x_n] over O = Z_p[[u_1,...,u_{num_u}]],
// handled at precision M.  O itself is the case of an empty generator list.
// Storage rule: the coefficient of a monomial of total u-degree e is kept
// modulo p^{M-e}; monomials of u-degree >= M are dropped.
class RingDesc {
public:
    PrecisionContext ctx;
    unsigned num_u = 0;
    std::vector<std::string> gens;

    static std::shared_ptr<const RingDesc> make(PrecisionContext c, unsigned num_u,
                                                std::vector<std::string> gens = {}) {
        c.validate();
        auto d = std::make_shared<RingDesc>();
        d->ctx = c;
        d->num_u = num_u;
        d->gens = std::move(gens);
        d->init();
        return d;
    }

    // Lubin-Tate ring O for the given context: h-1 deformation variables.
    static std::shared_ptr<const RingDesc> base_ring(PrecisionContext c) {
        return make(c, c.h - 1);
    }

    std::size_t num_vars() const { return num_u + gens.size(); }

    const std::string& var_name(std::size_t i) const {
        if (i < num_u) return u_names_[i];
        return gens[i - num_u];
    }

    // p^k for k <= M.
    std::uint64_t p_pow(unsigned k) const { return p_pow_[k]; }

    // Modulus for the coefficient of a monomial of u-degree e.
    std::uint64_t modulus_for(unsigned udeg) const { return p_pow_[ctx.M - udeg]; }

    bool same_ring(const RingDesc& o) const {
        return ctx == o.ctx && num_u == o.num_u && gens == o.gens;
    }

    // O with the same context but no polynomial generators.
    std::shared_ptr<const RingDesc> coefficient_ring() const {
        return make(ctx, num_u);
    }

    void init() {
        ctx.validate();
        p_pow_.assign(ctx.M + 1, 1);
        for (unsigned k = 1; k <= ctx.M; ++k) {
            const std::uint64_t prev = p_pow_[k - 1];
            if (prev > std::numeric_limits<std::uint64_t>::max() / ctx.p)
                throw precision_error("p^M does not fit in 64 bits");
            p_pow_[k] = prev * ctx.p;
        }
        u_names_.clear();
        for (unsigned i = 0; i < num_u; ++i) u_names_.push_back("u" + std::to_string(i + 1));
        for (const auto& g : gens) {
            if (g.empty()) throw error("RingDesc: empty generator name");
            for (const auto& u : u_names_)
                if (g == u) throw error("RingDesc: generator name collides with " + u);
            std::size_t n = 0;
            for (const auto& g2 : gens)
                if (g2 == g) ++n;
            if (n != 1) throw error("RingDesc: duplicate generator name " + g);
        }
    }

private:
    std::vector<std::uint64_t> p_pow_;
    std::vector<std::string> u_names_;
};

using RingDescPtr = std::shared_ptr<const RingDesc>;

} // namespace froblift
