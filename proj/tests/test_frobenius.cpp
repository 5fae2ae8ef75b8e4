#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <froblift/frobenius.hpp>

#include "oracles.hpp"

using namespace froblift;

namespace {

FrobeniusRing zp_ring(std::uint64_t p, unsigned M) {
    auto R = RingDesc::base_ring(PrecisionContext{p, 1, M});
    return FrobeniusRing(R, IdealSpec::p_only(*R), AlgebraMap::identity(R), true);
}

// Z_p[x] with psi(x) = x^p + p*g(x).
FrobeniusRing delta_poly_ring(std::uint64_t p, unsigned M, const std::vector<std::uint64_t>& g) {
    auto R = RingDesc::make(PrecisionContext{p, 1, M}, 0, {"x"});
    Element img = Element::generator(R, 0).pow(p);
    Element xp = Element::one(R);
    for (std::uint64_t c : g) {
        img = img + xp.scaled(p * c);
        xp = xp * Element::generator(R, 0);
    }
    return FrobeniusRing(R, IdealSpec::p_only(*R), AlgebraMap(R, R, {}, {img}));
}

} // namespace

TEST_CASE("frobenius structure checker") {
    SECTION("(Z_p, (p), id) passes") {
        CHECK(check_frobenius_structure(zp_ring(5, 3)).ok());
    }
    SECTION("psi(x) = x^p + p passes") {
        CHECK(check_frobenius_structure(delta_poly_ring(3, 3, {1})).ok());
    }
    SECTION("psi(x) = x^p + 1 fails on x") {
        auto R = RingDesc::make(PrecisionContext{3, 1, 3}, 0, {"x"});
        AlgebraMap psi(R, R, {}, {Element::generator(R, 0).pow(3) + Element::one(R)});
        Report rep = check_frobenius_structure(FrobeniusRing(R, IdealSpec::p_only(*R), psi));
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.first_failure()->name.find("x") != std::string::npos);
    }
}

TEST_CASE("conjugate step examples") {
    SECTION("psi_S = id degenerates to post-composition with psi_R") {
        const FrobeniusRing R = delta_poly_ring(3, 3, {});
        const FrobeniusRing S = zp_ring(3, 3);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, 4)});
        const AlgebraMap step = conjugate_step(mu, R, S);
        CHECK(step.gen_images()[0].render() == "10"); // 4^3 = 64 = 10 mod 27
    }
    SECTION("p=2: psi_R(x) = x^2+2, mu(x) = 0 steps to 2") {
        const FrobeniusRing R = delta_poly_ring(2, 4, {1});
        const FrobeniusRing S = zp_ring(2, 4);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::zero(S.carrier)});
        CHECK(conjugate_step(mu, R, S).gen_images()[0].render() == "2");
    }
    SECTION("an equivariant map is a fixed point") {
        const FrobeniusRing R = delta_poly_ring(5, 3, {});
        const FrobeniusRing S = zp_ring(5, 3);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, 57)});
        CHECK(conjugate_step(mu, R, S).equals(mu));
    }
    SECTION("target must be perfect") {
        const FrobeniusRing R = delta_poly_ring(3, 3, {});
        AlgebraMap mu(R.carrier, R.carrier, {}, {Element::zero(R.carrier)});
        CHECK_THROWS_AS(conjugate_step(mu, R, R), not_invertible_error);
    }
}

TEST_CASE("frobenius lift examples") {
    SECTION("p=5, mu(x)=2, M=3 lifts to 57") {
        const FrobeniusRing R = delta_poly_ring(5, 3, {});
        const FrobeniusRing S = zp_ring(5, 3);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, 2)});
        const FrobeniusMorphism hat = frobenius_lift_hom(mu, R, S);
        CHECK(hat.underlying.gen_images()[0].render() == "57");
    }
    SECTION("p=2, psi_R(x)=x^2+2, mu(x)=0, M=4 lifts to 6") {
        const FrobeniusRing R = delta_poly_ring(2, 4, {1});
        const FrobeniusRing S = zp_ring(2, 4);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::zero(S.carrier)});
        CHECK(frobenius_lift_hom(mu, R, S).underlying.gen_images()[0].render() == "6");
    }
    SECTION("equivariant input returns immediately") {
        const FrobeniusRing R = delta_poly_ring(5, 3, {});
        const FrobeniusRing S = zp_ring(5, 3);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, 57)});
        const FrobeniusMorphism hat = frobenius_lift_hom(mu, R, S);
        CHECK(hat.underlying.equals(mu));
        CHECK(hat.iterations == 0);
    }
    SECTION("equivariance of the output") {
        const FrobeniusRing R = delta_poly_ring(3, 5, {2, 0, 1});
        const FrobeniusRing S = zp_ring(3, 5);
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, 7)});
        const AlgebraMap hat = frobenius_lift_hom(mu, R, S).underlying;
        CHECK(AlgebraMap::compose(hat, R.psi).equals(AlgebraMap::compose(S.psi, hat)));
    }
}

TEST_CASE("teichmuller lifts") {
    SECTION("0 and 1 are fixed") {
        const FrobeniusRing S = zp_ring(7, 5);
        CHECK(teichmuller_lift(S, 0).is_zero());
        CHECK(teichmuller_lift(S, std::uint64_t{1}).equals(Element::one(S.carrier)));
    }
    SECTION("a=2 at p=5, M=3 gives 57") {
        CHECK(teichmuller_lift(zp_ring(5, 3), 2).render() == "57");
    }
    SECTION("matches the Hensel oracle") {
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
            const FrobeniusRing S = zp_ring(p, 6);
            for (std::uint64_t a = 0; a < p; ++a) {
                const Element t = teichmuller_lift(S, a);
                const std::uint64_t expected = oracles::hensel_teichmuller(p, 6, a);
                CHECK(t.equals(Element::constant(S.carrier, expected)));
            }
        }
    }
    SECTION("multiplicativity") {
        const FrobeniusRing S = zp_ring(7, 4);
        for (std::uint64_t a = 0; a < 7; ++a)
            for (std::uint64_t b = 0; b < 7; ++b) {
                const Element lhs = teichmuller_lift(S, a * b % 7);
                CHECK(lhs.equals(teichmuller_lift(S, a) * teichmuller_lift(S, b)));
            }
    }
    SECTION("nonzero residues give (p-1)-th roots of unity") {
        const FrobeniusRing S = zp_ring(5, 5);
        for (std::uint64_t a = 1; a < 5; ++a)
            CHECK(teichmuller_lift(S, a).pow(4).equals(Element::one(S.carrier)));
    }
}

TEST_CASE("agreement order") {
    const FrobeniusRing S = zp_ring(3, 4);
    auto R = RingDesc::make(PrecisionContext{3, 1, 4}, 0, {"x"});
    AlgebraMap m1(R, S.carrier, {}, {Element::constant(S.carrier, 5)});
    AlgebraMap m2(R, S.carrier, {}, {Element::constant(S.carrier, 8)});
    AlgebraMap m3(R, S.carrier, {}, {Element::constant(S.carrier, 14)});
    CHECK(agreement_order(m1, m1, S) == 4);
    CHECK(agreement_order(m1, m2, S) == 1);
    CHECK(agreement_order(m1, m3, S) == 2);
}

TEST_CASE("contraction property on randomized pairs") {
    std::mt19937_64 rng(5);
    const std::uint64_t p = 3;
    const unsigned M = 6;
    const FrobeniusRing S = zp_ring(p, M);
    for (int trial = 0; trial < 40; ++trial) {
        const FrobeniusRing R =
            delta_poly_ring(p, M, {rng() % 9, rng() % 9, rng() % 9});
        const std::uint64_t base = rng() % S.carrier->p_pow(M);
        const unsigned r = 1 + rng() % (M - 1);
        AlgebraMap m1(R.carrier, S.carrier, {}, {Element::constant(S.carrier, base)});
        AlgebraMap m2(R.carrier, S.carrier, {},
                      {Element::constant(S.carrier,
                                         base + S.carrier->p_pow(r) * (1 + rng() % (p - 1)))});
        const unsigned before = agreement_order(m1, m2, S);
        REQUIRE(before == r);
        const unsigned after =
            agreement_order(conjugate_step(m1, R, S), conjugate_step(m2, R, S), S);
        CHECK(after >= std::min(r + 1, M));
    }
}

TEST_CASE("lift uniqueness across set-level lifts") {
    std::mt19937_64 rng(13);
    const std::uint64_t p = 5;
    const unsigned M = 5;
    const FrobeniusRing S = zp_ring(p, M);
    const FrobeniusRing R = delta_poly_ring(p, M, {3, 1});
    const std::uint64_t residue = 2;
    AlgebraMap first(R.carrier, S.carrier, {}, {Element::constant(S.carrier, residue)});
    const AlgebraMap ref = frobenius_lift_hom(first, R, S).underlying;
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t lift = residue + p * (rng() % S.carrier->p_pow(M - 1));
        AlgebraMap mu(R.carrier, S.carrier, {}, {Element::constant(S.carrier, lift)});
        CHECK(AlgebraMap::equal_mod(frobenius_lift_hom(mu, R, S).underlying, ref, M));
    }
}
