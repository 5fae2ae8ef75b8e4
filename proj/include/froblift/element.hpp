#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace froblift {

// Exponent vector: u-variables first, then the polynomial generators.
struct Monomial {
    std::vector<std::uint32_t> exps;

    unsigned udeg(unsigned num_u) const {
        unsigned d = 0;
        for (unsigned i = 0; i < num_u; ++i) d += exps[i];
        return d;
    }

    unsigned total_deg() const {
        return std::accumulate(exps.begin(), exps.end(), 0u);
    }

    bool operator==(const Monomial&) const = default;
};

// Graded lexicographic: lower total degree first, ties broken by the
// exponent vector.  Fixes the canonical term order used for rendering.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.total_deg(), db = b.total_deg();
        if (da != db) return da < db;
        return a.exps > b.exps;
    }
};

// Describes the ideal generated by p together with a subset of the
// u-variables, as an ideal of a given carrier ring.  The maximal ideal m is
// the case where every u-variable is included.
struct IdealSpec {
    std::vector<bool> u_included; // size = carrier num_u

    static IdealSpec maximal(const RingDesc& d) {
        return IdealSpec{std::vector<bool>(d.num_u, true)};
    }
    static IdealSpec p_only(const RingDesc& d) {
        return IdealSpec{std::vector<bool>(d.num_u, false)};
    }
    bool is_maximal() const {
        return std::all_of(u_included.begin(), u_included.end(), [](bool b) { return b; });
    }
    bool operator==(const IdealSpec&) const = default;
};

constexpr unsigned kInfiniteOrder = 0xffffffffu;

class Element {
public:
    Element() = default;

    explicit Element(RingDescPtr ring) : ring_(std::move(ring)) {}

    static Element zero(RingDescPtr ring) { return Element(std::move(ring)); }

    static Element constant(RingDescPtr ring, std::uint64_t c) {
        Element e(std::move(ring));
        e.add_term(Monomial{std::vector<std::uint32_t>(e.ring_->num_vars(), 0)}, c);
        return e;
    }

    static Element one(RingDescPtr ring) { return constant(std::move(ring), 1); }

    // The i-th variable in combined indexing (u-vars first, then generators).
    static Element variable(RingDescPtr ring, std::size_t i) {
        Element e(std::move(ring));
        Monomial m{std::vector<std::uint32_t>(e.ring_->num_vars(), 0)};
        m.exps[i] = 1;
        e.add_term(m, 1);
        return e;
    }

    static Element u_var(RingDescPtr ring, unsigned i) { return variable(std::move(ring), i); }

    static Element generator(RingDescPtr ring, std::size_t i) {
        auto n = ring->num_u;
        return variable(std::move(ring), n + i);
    }

    const RingDescPtr& ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, std::uint64_t, MonomialLess>& terms() const { return terms_; }

    bool equals(const Element& o) const {
        check_same(o);
        return terms_ == o.terms_;
    }

    Element operator+(const Element& o) const {
        check_same(o);
        Element r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    Element operator-() const {
        Element r(ring_);
        for (const auto& [m, c] : terms_) {
            const auto mod = ring_->modulus_for(m.udeg(ring_->num_u));
            r.add_term(m, mod - c);
        }
        return r;
    }

    Element operator-(const Element& o) const { return *this + (-o); }

    Element operator*(const Element& o) const {
        check_same(o);
        Element r(ring_);
        const unsigned num_u = ring_->num_u;
        const unsigned M = ring_->ctx.M;
        for (const auto& [m1, c1] : terms_) {
            const unsigned e1 = m1.udeg(num_u);
            for (const auto& [m2, c2] : o.terms_) {
                const unsigned e2 = m2.udeg(num_u);
                if (e1 + e2 >= M) continue;
                Monomial m{m1.exps};
                for (std::size_t i = 0; i < m.exps.size(); ++i) m.exps[i] += m2.exps[i];
                r.add_term(m, mulmod(c1, c2, ring_->modulus_for(e1 + e2)));
            }
        }
        return r;
    }

    Element scaled(std::uint64_t c) const {
        Element r(ring_);
        for (const auto& [m, co] : terms_) {
            const auto mod = ring_->modulus_for(m.udeg(ring_->num_u));
            r.add_term(m, mulmod(co, c % mod, mod));
        }
        return r;
    }

    Element pow(std::uint64_t n) const {
        Element r = one(ring_);
        Element b = *this;
        while (n) {
            if (n & 1) r = r * b;
            if (n >>= 1) b = b * b;
        }
        return r;
    }

    // Largest k <= M with x in m^k; kInfiniteOrder if x = 0 mod m^M.
    unsigned madic_order() const {
        return ideal_order(IdealSpec::maximal(*ring_));
    }

    // I-adic order for I = (p, selected u-variables) * carrier.
    unsigned ideal_order(const IdealSpec& ideal) const {
        if (ideal.u_included.size() != ring_->num_u)
            throw ring_mismatch_error("ideal_order: ideal shape does not match carrier");
        unsigned best = kInfiniteOrder;
        for (const auto& [m, c] : terms_) {
            unsigned ord = 0;
            for (unsigned i = 0; i < ring_->num_u; ++i)
                if (ideal.u_included[i]) ord += m.exps[i];
            std::uint64_t v = c;
            while (v % ring_->ctx.p == 0) {
                v /= ring_->ctx.p;
                ++ord;
            }
            best = std::min(best, ord);
        }
        return best;
    }

    // Partial derivative with respect to the i-th variable (combined index).
    Element derivative(std::size_t i) const {
        Element r(ring_);
        for (const auto& [m, c] : terms_) {
            if (m.exps[i] == 0) continue;
            Monomial d{m.exps};
            const std::uint32_t k = d.exps[i]--;
            const auto mod = ring_->modulus_for(d.udeg(ring_->num_u));
            r.add_term(d, mulmod(c % mod, k % mod, mod));
        }
        return r;
    }

    // Inverse of a unit (constant coefficient prime to p), at precision M.
    Element invert_unit() const {
        const Monomial unit_mon{std::vector<std::uint32_t>(ring_->num_vars(), 0)};
        auto it = terms_.find(unit_mon);
        if (it == terms_.end() || it->second % ring_->ctx.p == 0)
            throw not_invertible_error("invert_unit: element is not a unit");
        Element z = constant(ring_, invmod(it->second, ring_->p_pow(ring_->ctx.M)));
        const Element two = constant(ring_, 2);
        // z <- z(2 - az) doubles the m-adic agreement each round.
        for (unsigned k = 1; k < ring_->ctx.M; k *= 2) z = z * (two - *this * z);
        if (!(z * *this).equals(one(ring_)))
            throw not_invertible_error("invert_unit: iteration failed");
        return z;
    }

    // Same element reduced to a lower working precision.
    Element truncated(unsigned newM) const {
        if (newM > ring_->ctx.M) throw precision_error("truncated: cannot raise precision");
        PrecisionContext c = ring_->ctx;
        c.M = newM;
        auto nd = RingDesc::make(c, ring_->num_u, ring_->gens);
        Element r(nd);
        for (const auto& [m, co] : terms_) {
            if (m.udeg(ring_->num_u) >= newM) continue;
            r.add_term(m, co);
        }
        return r;
    }

    // Representative of the image in R/pR: coefficients reduced mod p.
    Element reduced_mod_p() const {
        Element r(ring_);
        for (const auto& [m, c] : terms_) r.add_term(m, c % ring_->ctx.p, ring_->ctx.p);
        return r;
    }

    // Residue in kappa = F_p (the constant coefficient mod p); this is the
    // composite O -> O/m when applied to coefficient-ring elements.
    std::uint64_t kappa_residue() const {
        const Monomial unit_mon{std::vector<std::uint32_t>(ring_->num_vars(), 0)};
        auto it = terms_.find(unit_mon);
        return it == terms_.end() ? 0 : it->second % ring_->ctx.p;
    }

    // Re-interpret over a target ring with the same u-variables but a
    // (super)set of generators; used for the coefficient inclusion O -> R.
    Element embedded(const RingDescPtr& target) const {
        if (target->ctx != ring_->ctx || target->num_u != ring_->num_u)
            throw ring_mismatch_error("embedded: incompatible target ring");
        std::vector<std::size_t> pos(ring_->gens.size());
        for (std::size_t i = 0; i < ring_->gens.size(); ++i) {
            auto it = std::find(target->gens.begin(), target->gens.end(), ring_->gens[i]);
            if (it == target->gens.end())
                throw ring_mismatch_error("embedded: generator " + ring_->gens[i] +
                                          " missing in target");
            pos[i] = static_cast<std::size_t>(it - target->gens.begin());
        }
        Element r(target);
        for (const auto& [m, c] : terms_) {
            Monomial t{std::vector<std::uint32_t>(target->num_vars(), 0)};
            for (unsigned i = 0; i < ring_->num_u; ++i) t.exps[i] = m.exps[i];
            for (std::size_t i = 0; i < pos.size(); ++i)
                t.exps[target->num_u + pos[i]] = m.exps[ring_->num_u + i];
            r.add_term(t, c);
        }
        return r;
    }

    // True if no polynomial generator occurs (the element lies in iota(O)).
    bool coefficient_only() const {
        for (const auto& [m, c] : terms_)
            for (std::size_t i = ring_->num_u; i < m.exps.size(); ++i)
                if (m.exps[i] != 0) return false;
        return true;
    }

    // Restriction to the coefficient ring O; requires coefficient_only().
    Element restricted_to_coefficients() const {
        if (!coefficient_only())
            throw ring_mismatch_error("restricted_to_coefficients: element involves generators");
        auto od = ring_->coefficient_ring();
        Element r(od);
        for (const auto& [m, c] : terms_) {
            Monomial t{std::vector<std::uint32_t>(ring_->num_u, 0)};
            for (unsigned i = 0; i < ring_->num_u; ++i) t.exps[i] = m.exps[i];
            r.add_term(t, c);
        }
        return r;
    }

    // Canonical text rendering: decimal coefficients, monomials as
    // u1^a*x^b, terms in graded-lex order joined by " + ".
    std::string render() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) out << " + ";
            first = false;
            std::string mon = render_monomial(m);
            if (mon.empty()) {
                out << c;
            } else {
                if (c != 1) out << c << "*";
                out << mon;
            }
        }
        return out.str();
    }

    static Element parse(const RingDescPtr& ring, const std::string& text);

private:
    RingDescPtr ring_;
    std::map<Monomial, std::uint64_t, MonomialLess> terms_;

    void check_same(const Element& o) const {
        if (!ring_ || !o.ring_ || !ring_->same_ring(*o.ring_))
            throw ring_mismatch_error("operands belong to different ring objects");
    }

    void add_term(const Monomial& m, std::uint64_t c) {
        add_term(m, c, ring_->modulus_for(m.udeg(ring_->num_u)));
    }

    void add_term(const Monomial& m, std::uint64_t c, std::uint64_t mod) {
        if (m.udeg(ring_->num_u) >= ring_->ctx.M) return;
        c %= mod;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(m, c);
            return;
        }
        it->second = (it->second + c) % mod;
        if (it->second == 0) terms_.erase(it);
    }

    std::string render_monomial(const Monomial& m) const {
        std::ostringstream out;
        bool first = true;
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            if (m.exps[i] == 0) continue;
            if (!first) out << "*";
            first = false;
            out << ring_->var_name(i);
            if (m.exps[i] > 1) out << "^" << m.exps[i];
        }
        return out.str();
    }

    friend class ElementParser;
};

class ElementParser {
public:
    ElementParser(RingDescPtr ring, const std::string& text)
        : ring_(std::move(ring)), s_(text) {}

    Element parse() {
        Element result(ring_);
        skip_ws();
        if (pos_ >= s_.size()) throw schema_error("parse: empty element text");
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        result = term(neg);
        skip_ws();
        while (pos_ < s_.size()) {
            char op = s_[pos_];
            if (op != '+' && op != '-') throw schema_error("parse: expected '+' near \"" + rest() + "\"");
            ++pos_;
            result = result + term(op == '-');
            skip_ws();
        }
        return result;
    }

private:
    RingDescPtr ring_;
    const std::string& s_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string rest() const { return s_.substr(pos_); }

    Element term(bool neg) {
        std::uint64_t coeff = 1;
        Monomial m{std::vector<std::uint32_t>(ring_->num_vars(), 0)};
        bool expect_factor = true;
        while (expect_factor) {
            skip_ws();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                coeff = mul_checked(coeff, integer());
            } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
                std::string name = identifier();
                std::size_t idx = var_index(name);
                std::uint32_t e = 1;
                skip_ws();
                if (peek() == '^') {
                    ++pos_;
                    skip_ws();
                    e = static_cast<std::uint32_t>(integer());
                }
                m.exps[idx] += e;
            } else {
                throw schema_error("parse: unexpected character near \"" + rest() + "\"");
            }
            skip_ws();
            if (peek() == '*') {
                ++pos_;
            } else {
                expect_factor = false;
            }
        }
        Element e(ring_);
        e.add_term(m, coeff);
        return neg ? -e : e;
    }

    std::uint64_t integer() {
        std::uint64_t v = 0;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw schema_error("parse: expected integer near \"" + rest() + "\"");
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = mul_checked(v, 10);
            v += static_cast<std::uint64_t>(s_[pos_++] - '0');
        }
        return v;
    }

    static std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
        unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
        if (r > std::numeric_limits<std::uint64_t>::max())
            throw schema_error("parse: integer literal overflows");
        return static_cast<std::uint64_t>(r);
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::size_t var_index(const std::string& name) const {
        for (std::size_t i = 0; i < ring_->num_vars(); ++i)
            if (ring_->var_name(i) == name) return i;
        throw schema_error("parse: unknown variable " + name);
    }
};

inline Element Element::parse(const RingDescPtr& ring, const std::string& text) {
    return ElementParser(ring, text).parse();
}

} // namespace froblift
