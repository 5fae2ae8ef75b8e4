#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <froblift/cofreeness.hpp>

#include "oracles.hpp"

using namespace froblift;

namespace {

StackPtr h1_stack(std::uint64_t p, unsigned M) {
    return std::make_shared<const StackData>(height_one_stack(p, M));
}

SheafOfRings h1_sheaf(const StackPtr& S, const std::string& image) {
    auto Rc = RingDesc::make(S->ctx, 0, {"x"});
    return height_one_sheaf(S, {"x"}, {Element::parse(Rc, image)});
}

AlgebraMap const_map(const SheafOfRings& Rs, const SheafOfRings& Ss, std::uint64_t c) {
    return AlgebraMap(Rs.R, Ss.R, {}, {Element::constant(Ss.R, c)});
}

} // namespace

TEST_CASE("is_sheaf_map") {
    auto S = h1_stack(5, 3);
    const SheafOfRings Rs = h1_sheaf(S, "x^5");
    const SheafOfRings unit = unit_sheaf(S);
    SECTION("identity is a sheaf map") {
        CHECK(is_sheaf_map(Rs, Rs, AlgebraMap::identity(Rs.R)));
        CHECK(is_sheaf_map(unit, unit, AlgebraMap::identity(unit.R)));
    }
    SECTION("x -> 57 is a sheaf map into the unit sheaf") {
        CHECK(is_sheaf_map(Rs, unit, const_map(Rs, unit, 57)));
    }
    SECTION("x -> 2 is not") {
        CHECK_FALSE(is_sheaf_map(Rs, unit, const_map(Rs, unit, 2)));
    }
}

TEST_CASE("lift_to_sheaf_map") {
    auto S = h1_stack(5, 3);
    const SheafOfRings Rs = h1_sheaf(S, "x^5");
    const SheafOfRings unit = unit_sheaf(S);
    SECTION("x -> 2 lifts to x -> 57") {
        const AlgebraMap hat = lift_to_sheaf_map(Rs, unit, const_map(Rs, unit, 2));
        CHECK(hat.gen_images()[0].render() == "57");
        CHECK(is_sheaf_map(Rs, unit, hat));
    }
    SECTION("a sheaf map is its own lift") {
        const AlgebraMap mu = const_map(Rs, unit, 57);
        CHECK(lift_to_sheaf_map(Rs, unit, mu).equals(mu));
    }
    SECTION("identity on the unit sheaf lifts to itself") {
        const AlgebraMap id = AlgebraMap::identity(unit.R);
        CHECK(lift_to_sheaf_map(unit, unit, id).equals(id));
    }
}

TEST_CASE("solve_cofree examples") {
    SECTION("p=5, x^5, point 2 gives 57") {
        auto S = h1_stack(5, 3);
        const AlgebraMap m = solve_cofree(h1_sheaf(S, "x^5"), KappaPoint{{2}});
        CHECK(m.gen_images()[0].render() == "57");
    }
    SECTION("p=5, x^5 + 5, point 0 gives 5") {
        auto S = h1_stack(5, 3);
        const AlgebraMap m = solve_cofree(h1_sheaf(S, "x^5 + 5"), KappaPoint{{0}});
        CHECK(m.gen_images()[0].render() == "5");
    }
    SECTION("point 0 with the pure power map gives 0") {
        auto S = h1_stack(3, 5);
        const AlgebraMap m = solve_cofree(h1_sheaf(S, "x^3"), KappaPoint{{0}});
        CHECK(m.gen_images()[0].is_zero());
    }
}

TEST_CASE("enumerate_kappa_points") {
    auto S3 = h1_stack(3, 3);
    CHECK(enumerate_kappa_points(h1_sheaf(S3, "x^3")).size() == 3);
    auto S2 = h1_stack(2, 3);
    auto Rc = RingDesc::make(S2->ctx, 0, {"x", "y"});
    const SheafOfRings two_gen = height_one_sheaf(
        S2, {"x", "y"},
        {Element::generator(Rc, 0).pow(2), Element::generator(Rc, 1).pow(2)});
    const auto pts = enumerate_kappa_points(two_gen);
    REQUIRE(pts.size() == 4);
    CHECK(pts.front() == KappaPoint{{0, 0}});
    CHECK(pts.back() == KappaPoint{{1, 1}});
    CHECK(enumerate_kappa_points(unit_sheaf(S2)).size() == 1);
    CHECK_THROWS_AS(enumerate_kappa_points(two_gen, 3), budget_error);
}

TEST_CASE("cofreeness bijection check") {
    SECTION("p=3, x^3, M=3: lifts are 0, 1, 26") {
        auto S = h1_stack(3, 3);
        const SheafOfRings Rs = h1_sheaf(S, "x^3");
        const Report rep = cofreeness_bijection_check(Rs);
        CHECK(rep.ok());
        std::set<std::string> images;
        for (const KappaPoint& pt : enumerate_kappa_points(Rs))
            images.insert(solve_cofree(Rs, pt).gen_images()[0].render());
        CHECK(images == std::set<std::string>{"0", "1", "26"});
    }
    SECTION("unit sheaf has exactly the identity") {
        auto S = h1_stack(5, 3);
        const Report rep = cofreeness_bijection_check(unit_sheaf(S));
        CHECK(rep.ok());
        const AlgebraMap m = solve_cofree(unit_sheaf(S), KappaPoint{{}});
        CHECK(m.equals(AlgebraMap::identity(m.source())));
    }
    SECTION("p=2, x^2 + 2, M=4: fixed points 6 and 11") {
        auto S = h1_stack(2, 4);
        const SheafOfRings Rs = h1_sheaf(S, "x^2 + 2");
        CHECK(cofreeness_bijection_check(Rs).ok());
        CHECK(solve_cofree(Rs, KappaPoint{{0}}).gen_images()[0].render() == "6");
        CHECK(solve_cofree(Rs, KappaPoint{{1}}).gen_images()[0].render() == "11");
    }
    SECTION("lifted set matches the Hensel oracle") {
        for (std::uint64_t p : {2ull, 3ull, 5ull}) {
            auto S = h1_stack(p, 5);
            const SheafOfRings Rs = h1_sheaf(S, "x^" + std::to_string(p));
            std::set<std::uint64_t> got;
            for (const KappaPoint& pt : enumerate_kappa_points(Rs)) {
                const Element img = solve_cofree(Rs, pt).gen_images()[0];
                got.insert(img.is_zero() ? 0 : img.terms().begin()->second);
            }
            CHECK(got == oracles::roots_of_frobenius(p, 5));
        }
    }
}
