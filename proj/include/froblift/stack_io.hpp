#pragma once

#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "stack.hpp"

namespace froblift {

// Stack config document: header {p, h, M, D}, per-degree blocks, degree-pair
// nabla blocks, psi_O u-images and a single q block.  All ring elements use
// the canonical text rendering.
inline nlohmann::json serialize_stack(const StackData& S) {
    nlohmann::json j;
    j["p"] = S.ctx.p;
    j["h"] = S.ctx.h;
    j["M"] = S.ctx.M;
    j["D"] = S.D;
    auto render_vec = [](const std::vector<Element>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& e : v) a.push_back(e.render());
        return a;
    };
    {
        nlohmann::json psi_o = nlohmann::json::array();
        for (const auto& e : S.psi_O.u_images()) psi_o.push_back(e.render());
        j["psi_O"] = psi_o;
    }
    j["degrees"] = nlohmann::json::array();
    for (unsigned d = 0; d <= S.D; ++d) {
        const OdAlgebra& A = S.algebra(d);
        nlohmann::json block;
        block["d"] = d;
        block["rank"] = A.rank();
        block["basis"] = A.basis;
        block["mult"] = render_vec(A.mult);
        nlohmann::json t = nlohmann::json::array();
        for (const auto& v : A.t_images) t.push_back(render_vec(v));
        block["t"] = t;
        nlohmann::json m = nlohmann::json::array();
        for (const auto& v : A.m_gens) m.push_back(render_vec(v));
        block["m"] = m;
        block["nu"] = render_vec(A.nu);
        nlohmann::json psi = nlohmann::json::array();
        for (const auto& v : A.psi_images) psi.push_back(render_vec(v));
        block["psi"] = psi;
        j["degrees"].push_back(block);
    }
    j["nabla"] = nlohmann::json::array();
    for (const auto& [de, N] : S.nabla) {
        nlohmann::json block;
        block["d"] = de.first;
        block["e"] = de.second;
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& mat : N) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : mat) rows.push_back(render_vec(row));
            coords.push_back(rows);
        }
        block["coords"] = coords;
        j["nabla"].push_back(block);
    }
    j["q"] = render_vec(S.q_images);
    return j;
}

namespace detail {

inline std::vector<Element> parse_vec(const RingDescPtr& O, const nlohmann::json& a,
                                      std::size_t want, const std::string& where) {
    if (!a.is_array() || a.size() != want)
        throw schema_error("stack config: bad array size at " + where);
    std::vector<Element> v;
    for (const auto& s : a) {
        if (!s.is_string()) throw schema_error("stack config: expected string at " + where);
        v.push_back(Element::parse(O, s.get<std::string>()));
    }
    return v;
}

} // namespace detail

// Parses the document without running validators.
inline StackData parse_stack(const nlohmann::json& j) {
    for (const char* key : {"p", "h", "M", "D", "degrees", "nabla", "q", "psi_O"})
        if (!j.contains(key)) throw schema_error(std::string("stack config: missing ") + key);
    StackData S;
    S.ctx = PrecisionContext{j.at("p").get<std::uint64_t>(), j.at("h").get<unsigned>(),
                             j.at("M").get<unsigned>()};
    S.ctx.validate();
    S.D = j.at("D").get<unsigned>();
    if (S.D < 2 * S.ctx.h)
        throw schema_error("stack config: D must be at least 2h");
    S.O = RingDesc::base_ring(S.ctx);
    {
        const auto& a = j.at("psi_O");
        std::vector<Element> u = detail::parse_vec(S.O, a, S.O->num_u, "psi_O");
        S.psi_O = AlgebraMap(S.O, S.O, std::move(u), {});
    }
    if (!j.at("degrees").is_array() || j.at("degrees").size() != S.D + 1)
        throw schema_error("stack config: degrees must cover 0..D");
    S.deg.resize(S.D + 1);
    std::vector<bool> seen(S.D + 1, false);
    for (const auto& block : j.at("degrees")) {
        for (const char* key : {"d", "rank", "basis", "mult", "t", "m", "nu", "psi"})
            if (!block.contains(key))
                throw schema_error(std::string("stack config: degree block missing ") + key);
        const unsigned d = block.at("d").get<unsigned>();
        if (d > S.D || seen[d]) throw schema_error("stack config: bad degree index");
        seen[d] = true;
        OdAlgebra A;
        A.d = d;
        A.basis = block.at("basis").get<std::vector<std::string>>();
        const std::size_t r = block.at("rank").get<std::size_t>();
        if (r == 0 || A.basis.size() != r)
            throw schema_error("stack config: rank/basis mismatch at degree " + std::to_string(d));
        A.mult = detail::parse_vec(S.O, block.at("mult"), r * r * r,
                                   "mult[" + std::to_string(d) + "]");
        if (block.at("t").size() != S.O->num_u)
            throw schema_error("stack config: t block must have h-1 entries");
        for (const auto& v : block.at("t"))
            A.t_images.push_back(detail::parse_vec(S.O, v, r, "t"));
        for (const auto& v : block.at("m"))
            A.m_gens.push_back(detail::parse_vec(S.O, v, r, "m"));
        A.nu = detail::parse_vec(S.O, block.at("nu"), r, "nu");
        if (block.at("psi").size() != r)
            throw schema_error("stack config: psi block must have rank entries");
        for (const auto& v : block.at("psi"))
            A.psi_images.push_back(detail::parse_vec(S.O, v, r, "psi"));
        S.deg[d] = std::move(A);
    }
    for (const auto& block : j.at("nabla")) {
        const unsigned d = block.at("d").get<unsigned>();
        const unsigned e = block.at("e").get<unsigned>();
        if (d + e > S.D) throw schema_error("stack config: nabla degrees exceed D");
        const std::size_t rde = S.deg[d + e].rank(), rd = S.deg[d].rank(),
                          re = S.deg[e].rank();
        const auto& coords = block.at("coords");
        if (!coords.is_array() || coords.size() != rde)
            throw schema_error("stack config: nabla coords shape");
        NablaCoords N;
        for (const auto& mat : coords) {
            if (!mat.is_array() || mat.size() != rd)
                throw schema_error("stack config: nabla coords shape");
            std::vector<std::vector<Element>> rows;
            for (const auto& row : mat) rows.push_back(detail::parse_vec(S.O, row, re, "nabla"));
            N.push_back(std::move(rows));
        }
        S.nabla[{d, e}] = std::move(N);
    }
    for (unsigned d = 0; d <= S.D; ++d)
        for (unsigned e = 0; d + e <= S.D; ++e)
            if (!S.nabla.count({d, e}))
                throw schema_error("stack config: missing nabla_{" + std::to_string(d) + "," +
                                   std::to_string(e) + "}");
    if (S.ctx.h > S.D) throw schema_error("stack config: no degree-h block for q");
    S.q_images = detail::parse_vec(S.O, j.at("q"), S.deg[S.ctx.h].rank(), "q");
    return S;
}

// Parses and validates; fails with the first violated axiom.
inline StackData load_stack(const nlohmann::json& j) {
    StackData S = parse_stack(j);
    Report rep = validate_stack(S);
    if (const auto* f = rep.first_failure())
        throw validation_error("stack validation failed: " + f->name +
                               (f->detail.empty() ? "" : " (" + f->detail + ")"));
    return S;
}

inline StackData load_stack_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open stack config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw schema_error("stack config " + path + ": " + e.what());
    }
    return load_stack(j);
}

inline bool stacks_equal(const StackData& a, const StackData& b) {
    if (a.ctx != b.ctx || a.D != b.D) return false;
    if (!a.psi_O.equals(b.psi_O)) return false;
    for (unsigned d = 0; d <= a.D; ++d) {
        const OdAlgebra &x = a.algebra(d), &y = b.algebra(d);
        if (x.basis != y.basis || x.mult.size() != y.mult.size()) return false;
        for (std::size_t i = 0; i < x.mult.size(); ++i)
            if (!x.mult[i].equals(y.mult[i])) return false;
        if (x.t_images.size() != y.t_images.size() || x.m_gens.size() != y.m_gens.size())
            return false;
        for (std::size_t i = 0; i < x.t_images.size(); ++i)
            if (!od_equal(x.t_images[i], y.t_images[i])) return false;
        for (std::size_t i = 0; i < x.m_gens.size(); ++i)
            if (!od_equal(x.m_gens[i], y.m_gens[i])) return false;
        for (std::size_t i = 0; i < x.rank(); ++i)
            if (!x.nu[i].reduced_mod_p().equals(y.nu[i].reduced_mod_p())) return false;
        for (std::size_t i = 0; i < x.rank(); ++i)
            if (!od_equal(x.psi_images[i], y.psi_images[i])) return false;
    }
    if (a.nabla.size() != b.nabla.size()) return false;
    for (const auto& [de, N] : a.nabla) {
        auto it = b.nabla.find(de);
        if (it == b.nabla.end()) return false;
        for (std::size_t k = 0; k < N.size(); ++k)
            if (!tensor2_equal(N[k], it->second[k])) return false;
    }
    for (std::size_t i = 0; i < a.q_images.size(); ++i)
        if (!a.q_images[i].equals(b.q_images[i])) return false;
    return true;
}

} // namespace froblift
