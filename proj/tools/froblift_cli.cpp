// Command-line front end: Teichmuller lifts, stack/sheaf validation, Adams
// operations, sheaf-map lifting and the cofreeness solver, over JSON config
// files.  Exit codes: 0 all checks pass, 1 a mathematical check fails,
// 2 usage or parse error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <froblift/froblift.hpp>

using namespace froblift;

namespace {

int report_exit(const Report& rep, bool machine) {
    rep.print(std::cout);
    if (machine) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : rep.checks)
            j.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        std::cout << j.dump(2) << "\n";
    }
    return rep.ok() ? 0 : 1;
}

SheafOfRings load_sheaf_arg(const std::string& sheaf_path, const std::string& stack_path) {
    StackPtr stack;
    if (!stack_path.empty())
        stack = std::make_shared<const StackData>(load_stack_file(stack_path));
    return load_sheaf_file(sheaf_path, std::move(stack));
}

KappaPoint parse_point(const std::string& text, std::size_t want, std::uint64_t p) {
    KappaPoint pt;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        pt.values.push_back(std::stoull(tok));
    if (pt.values.size() != want)
        throw schema_error("point needs " + std::to_string(want) + " coordinates");
    for (std::uint64_t v : pt.values)
        if (v >= p) throw schema_error("point coordinates must lie in 0..p-1");
    return pt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic for Frobenius lifts, deformation stacks, Adams "
                 "operations and the cofreeness solver"};
    app.require_subcommand(1);
    bool machine = false;
    app.add_flag("--json", machine, "also emit a machine-readable JSON report");

    // teich
    auto* teich = app.add_subcommand("teich", "Teichmuller lift of a residue in Z_p");
    std::uint64_t teich_p = 0, teich_a = 0;
    unsigned teich_M = 0;
    teich->add_option("--p", teich_p, "prime")->required();
    teich->add_option("--precision", teich_M, "m-adic precision M")
        ->envname("FROBLIFT_PRECISION")
        ->required();
    teich->add_option("a", teich_a, "residue, 0 <= a < p")->required();

    // validate-stack
    auto* vstack = app.add_subcommand("validate-stack", "run all stack validators on a config");
    std::string vstack_path;
    vstack->add_option("path", vstack_path, "stack config file")->required();

    // check-sheaf
    auto* csheaf = app.add_subcommand(
        "check-sheaf", "validate a sheaf: comodule axioms, Frobenius congruence, Adams suite");
    std::string csheaf_sheaf, csheaf_stack;
    csheaf->add_option("--sheaf", csheaf_sheaf, "sheaf config file")->required();
    csheaf->add_option("--stack", csheaf_stack, "stack config overriding the sheaf's reference");

    // adams
    auto* adams = app.add_subcommand("adams", "apply the Adams operation to an element of R");
    std::string adams_sheaf, adams_stack, adams_elt;
    adams->add_option("--sheaf", adams_sheaf, "sheaf config file")->required();
    adams->add_option("--stack", adams_stack, "stack config overriding the sheaf's reference");
    adams->add_option("element", adams_elt, "element of R in canonical rendering")->required();

    // lift
    auto* lift = app.add_subcommand(
        "lift", "unique sheaf-map lift of an O-algebra map into the unit sheaf");
    std::string lift_sheaf, lift_stack;
    std::vector<std::string> lift_images;
    lift->add_option("--sheaf", lift_sheaf, "source sheaf config file")->required();
    lift->add_option("--stack", lift_stack, "stack config overriding the sheaf's reference");
    lift->add_option("images", lift_images,
                     "image in O of each generator, in declaration order")
        ->required();

    // cofree
    auto* cofree = app.add_subcommand("cofree", "cofreeness solver over kappa-points");
    std::string cofree_sheaf, cofree_stack, cofree_point;
    bool cofree_all = false;
    cofree->add_option("--sheaf", cofree_sheaf, "sheaf config file")->required();
    cofree->add_option("--stack", cofree_stack, "stack config overriding the sheaf's reference");
    cofree->add_option("--point", cofree_point, "comma-separated residues, one per generator");
    cofree->add_flag("--all", cofree_all, "run the full bijection check over all points");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "list the kappa-points of a sheaf");
    std::string enum_sheaf, enum_stack;
    enumerate->add_option("--sheaf", enum_sheaf, "sheaf config file")->required();
    enumerate->add_option("--stack", enum_stack,
                          "stack config overriding the sheaf's reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*teich) {
            if (teich_a >= teich_p) {
                std::cerr << "residue must satisfy 0 <= a < p\n";
                return 2;
            }
            auto R = RingDesc::base_ring(PrecisionContext{teich_p, 1, teich_M});
            const FrobeniusRing S(R, IdealSpec::p_only(*R), AlgebraMap::identity(R), true);
            std::cout << teichmuller_lift(S, teich_a).render() << "\n";
            return 0;
        }
        if (*vstack) {
            const StackData S = parse_stack([&] {
                std::ifstream in(vstack_path);
                if (!in) throw schema_error("cannot open stack config " + vstack_path);
                nlohmann::json j;
                in >> j;
                return j;
            }());
            return report_exit(validate_stack(S), machine);
        }
        if (*csheaf) {
            const SheafOfRings sheaf = load_sheaf_arg(csheaf_sheaf, csheaf_stack);
            Report rep = validate_comodule_algebra(sheaf);
            if (check_frobenius_congruence(sheaf)) {
                rep.add("Frobenius congruence", true);
                rep.merge(adams_property_suite(sheaf));
            } else {
                for (std::size_t g = 0; g < sheaf.R->gens.size(); ++g) {
                    const TensorElement t = sheaf.nabla_gen(1, g);
                    Element lhs = Element::zero(sheaf.R);
                    for (std::size_t i = 0; i < t.coords.size(); ++i)
                        lhs = lhs +
                              sheaf.stack->algebra(1).nu[i].embedded(sheaf.R) * t.coords[i];
                    const Element rhs =
                        Element::generator(sheaf.R, g).pow(sheaf.stack->ctx.p);
                    if (!lhs.reduced_mod_p().equals(rhs.reduced_mod_p()))
                        rep.add("Frobenius congruence", false,
                                "Frobenius congruence failed at generator " +
                                    sheaf.R->gens[g]);
                }
            }
            return report_exit(rep, machine);
        }
        if (*adams) {
            const SheafOfRings sheaf = load_sheaf_arg(adams_sheaf, adams_stack);
            const Element x = Element::parse(sheaf.R, adams_elt);
            std::cout << adams_operation(sheaf, x).render() << "\n";
            return 0;
        }
        if (*lift) {
            const SheafOfRings Rs = load_sheaf_arg(lift_sheaf, lift_stack);
            const SheafOfRings unit = unit_sheaf(Rs.stack);
            if (lift_images.size() != Rs.R->gens.size()) {
                std::cerr << "need one image per generator (" << Rs.R->gens.size() << ")\n";
                return 2;
            }
            std::vector<Element> u, g;
            for (unsigned i = 0; i < Rs.R->num_u; ++i)
                u.push_back(Element::u_var(unit.R, i));
            for (const auto& text : lift_images) g.push_back(Element::parse(unit.R, text));
            AlgebraMap mu(Rs.R, unit.R, std::move(u), std::move(g));
            const AlgebraMap hat = lift_to_sheaf_map(Rs, unit, mu);
            for (std::size_t i = 0; i < Rs.R->gens.size(); ++i)
                std::cout << Rs.R->gens[i] << " -> " << hat.gen_images()[i].render() << "\n";
            return 0;
        }
        if (*cofree) {
            const SheafOfRings Rs = load_sheaf_arg(cofree_sheaf, cofree_stack);
            if (!cofree_all && cofree_point.empty() && !Rs.R->gens.empty()) {
                std::cerr << "need --point or --all\n";
                return 2;
            }
            if (cofree_all) {
                return report_exit(cofreeness_bijection_check(Rs), machine);
            }
            const KappaPoint pt =
                parse_point(cofree_point, Rs.R->gens.size(), Rs.R->ctx.p);
            const AlgebraMap m = solve_cofree(Rs, pt);
            for (std::size_t i = 0; i < Rs.R->gens.size(); ++i)
                std::cout << Rs.R->gens[i] << " -> " << m.gen_images()[i].render() << "\n";
            return 0;
        }
        if (*enumerate) {
            const SheafOfRings sheaf = load_sheaf_arg(enum_sheaf, enum_stack);
            for (const KappaPoint& pt : enumerate_kappa_points(sheaf))
                std::cout << pt.render() << "\n";
            return 0;
        }
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
