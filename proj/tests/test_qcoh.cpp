#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <froblift/qcoh.hpp>
#include <froblift/sheaf_io.hpp>

#include "test_support.hpp"

using namespace froblift;

namespace {

StackPtr h1_stack(std::uint64_t p, unsigned M, unsigned D = 2) {
    return std::make_shared<const StackData>(height_one_stack(p, M, D));
}

// Height-1 single-generator sheaf with nabla_{R,1}(x) given by a polynomial.
SheafOfRings h1_sheaf(const StackPtr& S, const std::string& image) {
    auto Rc = RingDesc::make(S->ctx, 0, {"x"});
    return height_one_sheaf(S, {"x"}, {Element::parse(Rc, image)});
}

} // namespace

TEST_CASE("extend_comodule") {
    auto S = h1_stack(3, 4);
    const SheafOfRings sheaf = h1_sheaf(S, "x^3");
    SECTION("unit goes to the unit tensor") {
        const TensorElement t = extend_comodule(sheaf, 1, Element::one(sheaf.R));
        CHECK(t.equals(tensor_unit(S, 1, sheaf.R)));
    }
    SECTION("coefficients route through t") {
        const Element c = Element::constant(sheaf.R, 7);
        const TensorElement t = extend_comodule(sheaf, 2, c);
        CHECK(t.coords[0].equals(c));
    }
    SECTION("homomorphic extension") {
        const Element x = Element::generator(sheaf.R, 0);
        const TensorElement t = extend_comodule(sheaf, 1, x * x + x);
        CHECK(t.coords[0].equals(x.pow(6) + x.pow(3)));
    }
    SECTION("degree out of range") {
        CHECK_THROWS_AS(extend_comodule(sheaf, 9, Element::one(sheaf.R)), precision_error);
    }
}

TEST_CASE("comodule validation at height 1") {
    auto S = h1_stack(3, 4, 3);
    SECTION("iterated maps pass") {
        CHECK(validate_comodule_algebra(h1_sheaf(S, "x^3 + 3*x")).ok());
        CHECK(validate_comodule_algebra(h1_sheaf(S, "x^3")).ok());
    }
    SECTION("corrupted degree-2 image fails coassociativity") {
        SheafOfRings sheaf = h1_sheaf(S, "x^3");
        sheaf.nabla_images[1][0].coords[0] =
            sheaf.nabla_images[1][0].coords[0] + Element::constant(sheaf.R, 3);
        const Report rep = validate_comodule_algebra(sheaf);
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.first_failure()->name.find("coassociativity") != std::string::npos);
    }
}

TEST_CASE("frobenius congruence") {
    auto S = h1_stack(3, 4);
    CHECK(check_frobenius_congruence(h1_sheaf(S, "x^3")));
    CHECK(check_frobenius_congruence(h1_sheaf(S, "x^3 + 3*x^2 + 6")));
    CHECK_FALSE(check_frobenius_congruence(h1_sheaf(S, "x^3 + 1")));
}

TEST_CASE("adams operation") {
    SECTION("unit sheaf: psi equals psi_O") {
        auto S = h1_stack(5, 3);
        const SheafOfRings unit = unit_sheaf(S);
        const AlgebraMap psi = adams_map(unit);
        CHECK(psi.equals(S->psi_O));
    }
    SECTION("height-1 polynomial sheaf: psi is the degree-1 image") {
        auto S = h1_stack(3, 4);
        const SheafOfRings sheaf = h1_sheaf(S, "x^3");
        const Element x = Element::generator(sheaf.R, 0);
        CHECK(adams_operation(sheaf, x).equals(x.pow(3)));
    }
    SECTION("coefficients map by psi_O") {
        auto S = std::make_shared<const StackData>(test_support::height_two_chain_stack(6));
        SheafOfRings sheaf;
        sheaf.stack = S;
        sheaf.R = RingDesc::make(S->ctx, 1, {"x"});
        const Element x = Element::generator(sheaf.R, 0);
        sheaf.nabla_images.assign(S->D, {});
        for (unsigned d = 1; d <= S->D; ++d)
            sheaf.nabla_images[d - 1].push_back(
                TensorElement{S, d, {x.pow(std::uint64_t{1} << d)}});
        REQUIRE(validate_comodule_algebra(sheaf).ok());
        const Element iu = Element::u_var(sheaf.R, 0);
        CHECK(adams_operation(sheaf, iu).equals(iu.pow(4)));
        CHECK(adams_operation(sheaf, x).equals(x.pow(4)));
    }
    SECTION("psi_R is a ring homomorphism") {
        std::mt19937_64 rng(41);
        auto S = h1_stack(3, 4);
        const SheafOfRings sheaf = h1_sheaf(S, "x^3 + 3*x");
        const Element x = Element::generator(sheaf.R, 0);
        for (int trial = 0; trial < 10; ++trial) {
            const Element a = x.pow(rng() % 3) + Element::constant(sheaf.R, rng() % 81);
            const Element b = x.pow(rng() % 3).scaled(rng() % 81);
            CHECK(adams_operation(sheaf, a + b)
                      .equals(adams_operation(sheaf, a) + adams_operation(sheaf, b)));
            CHECK(adams_operation(sheaf, a * b)
                      .equals(adams_operation(sheaf, a) * adams_operation(sheaf, b)));
        }
    }
}

TEST_CASE("adams property suite") {
    SECTION("delta-style sheaf passes all properties") {
        auto S = h1_stack(3, 4);
        const SheafOfRings sheaf = h1_sheaf(S, "x^3 + 3");
        CHECK(adams_property_suite(sheaf).ok());
    }
    SECTION("unit sheaf passes") {
        auto S = h1_stack(5, 3);
        CHECK(adams_property_suite(unit_sheaf(S)).ok());
    }
    SECTION("height-2 chain sheaf passes") {
        auto S = std::make_shared<const StackData>(test_support::height_two_chain_stack(6));
        SheafOfRings sheaf;
        sheaf.stack = S;
        sheaf.R = RingDesc::make(S->ctx, 1, {"x"});
        sheaf.nabla_images.assign(S->D, {});
        for (unsigned d = 1; d <= S->D; ++d)
            sheaf.nabla_images[d - 1].push_back(TensorElement{
                S, d, {Element::generator(sheaf.R, 0).pow(std::uint64_t{1} << d)}});
        CHECK(adams_property_suite(sheaf).ok());
    }
    SECTION("congruence failure is reported, not asserted") {
        auto S = h1_stack(3, 4);
        const Report rep = adams_property_suite(h1_sheaf(S, "x^3 + 1"));
        REQUIRE_FALSE(rep.ok());
        bool reported = false;
        for (const auto& c : rep.checks)
            if (!c.pass && c.detail.find("congruence fails") != std::string::npos)
                reported = true;
        CHECK(reported);
    }
    SECTION("congruence at degree 1 implies the degree-2 square") {
        for (const char* img : {"x^3", "x^3 + 3*x", "x^3 + 6*x^2 + 3"}) {
            auto S = h1_stack(3, 4);
            const SheafOfRings sheaf = h1_sheaf(S, img);
            REQUIRE(check_frobenius_congruence(sheaf));
            // the d=2 reduction: (nu_2 (x) id) nabla_{R,2}(x) = x^{p^2} in R/pR
            const TensorElement t = sheaf.nabla_gen(2, 0);
            Element lhs = Element::zero(sheaf.R);
            for (std::size_t i = 0; i < t.coords.size(); ++i)
                lhs = lhs + S->algebra(2).nu[i].embedded(sheaf.R) * t.coords[i];
            const Element rhs = Element::generator(sheaf.R, 0).pow(9);
            CHECK(lhs.reduced_mod_p().equals(rhs.reduced_mod_p()));
        }
    }
}

TEST_CASE("sheaf as an object with a frobenius lift") {
    SECTION("unit sheaf at height 1 is perfect") {
        auto S = h1_stack(3, 4);
        const FrobeniusRing F = sheaf_as_frobenius_ring(unit_sheaf(S));
        CHECK(F.perfect);
        CHECK(F.psi.equals(AlgebraMap::identity(F.carrier)));
    }
    SECTION("polynomial sheaf is not perfect") {
        auto S = h1_stack(3, 4);
        const FrobeniusRing F = sheaf_as_frobenius_ring(h1_sheaf(S, "x^3"));
        CHECK_FALSE(F.perfect);
        CHECK(check_frobenius_structure(F).ok());
    }
    SECTION("congruence violation is an error") {
        auto S = h1_stack(3, 4);
        CHECK_THROWS_AS(sheaf_as_frobenius_ring(h1_sheaf(S, "x^3 + 1")), validation_error);
    }
}

TEST_CASE("height-1 dictionary") {
    // a height-1 sheaf satisfying the Frobenius congruence is the same thing
    // as a delta-ring structure on its carrier
    auto S = h1_stack(3, 4);
    for (const char* img : {"x^3", "x^3 + 3*x", "x^3 + 21", "x^3 + 1", "x^3 + x"}) {
        const SheafOfRings sheaf = h1_sheaf(S, img);
        auto Rc = sheaf.R;
        AlgebraMap psi(Rc, Rc, {}, {Element::parse(Rc, img)});
        const FrobeniusRing F(Rc, IdealSpec::p_only(*Rc), psi);
        const bool qcoh_valid =
            validate_comodule_algebra(sheaf).ok() && check_frobenius_congruence(sheaf);
        CHECK(qcoh_valid == check_frobenius_structure(F).ok());
    }
}

TEST_CASE("sheaf document round trip") {
    auto S = h1_stack(3, 4, 3);
    const SheafOfRings sheaf = h1_sheaf(S, "x^3 + 3*x");
    const nlohmann::json doc = serialize_sheaf(sheaf);
    const SheafOfRings back = parse_sheaf(doc);
    REQUIRE(back.R->gens == sheaf.R->gens);
    for (unsigned d = 1; d <= S->D; ++d)
        CHECK(back.nabla_gen(d, 0).coords[0].render() ==
              sheaf.nabla_gen(d, 0).coords[0].render());
    SECTION("schema violations") {
        nlohmann::json bad = doc;
        bad.erase("generators");
        CHECK_THROWS_AS(parse_sheaf(bad), schema_error);
        nlohmann::json bad2 = doc;
        bad2["nabla"].erase(0);
        CHECK_THROWS_AS(parse_sheaf(bad2), schema_error);
    }
}
