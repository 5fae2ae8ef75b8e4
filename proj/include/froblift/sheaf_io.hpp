#pragma once

#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "qcoh.hpp"
#include "stack_io.hpp"

namespace froblift {

// Sheaf presentation document: a stack reference (inline object or file
// path), the generator list of R, and the nabla_{R,d} generator images as
// arrays of rendered R-elements, one per O_d basis label, for 1 <= d <= D.
inline nlohmann::json serialize_sheaf(const SheafOfRings& sheaf) {
    nlohmann::json j;
    j["stack"] = serialize_stack(*sheaf.stack);
    j["generators"] = sheaf.R->gens;
    j["nabla"] = nlohmann::json::array();
    for (unsigned d = 1; d <= sheaf.stack->D; ++d) {
        nlohmann::json block;
        block["d"] = d;
        nlohmann::json images = nlohmann::json::array();
        for (std::size_t g = 0; g < sheaf.R->gens.size(); ++g) {
            nlohmann::json coords = nlohmann::json::array();
            for (const auto& c : sheaf.nabla_gen(d, g).coords) coords.push_back(c.render());
            images.push_back(coords);
        }
        block["images"] = images;
        j["nabla"].push_back(block);
    }
    return j;
}

// Parses a sheaf document.  The "stack" field is either an inline stack
// config or a file path resolved against base_dir; a preloaded stack may be
// supplied instead, in which case the field is optional.
inline SheafOfRings parse_sheaf(const nlohmann::json& j, StackPtr stack = nullptr,
                                const std::string& base_dir = ".") {
    if (!stack) {
        if (!j.contains("stack"))
            throw schema_error("sheaf config: missing stack (and none supplied)");
        const auto& s = j.at("stack");
        if (s.is_string()) {
            std::string path = s.get<std::string>();
            if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
            stack = std::make_shared<const StackData>(load_stack_file(path));
        } else if (s.is_object()) {
            stack = std::make_shared<const StackData>(load_stack(s));
        } else {
            throw schema_error("sheaf config: stack must be a path or an inline object");
        }
    }
    for (const char* key : {"generators", "nabla"})
        if (!j.contains(key)) throw schema_error(std::string("sheaf config: missing ") + key);
    SheafOfRings sheaf;
    sheaf.stack = stack;
    sheaf.R = RingDesc::make(stack->ctx, stack->O->num_u,
                             j.at("generators").get<std::vector<std::string>>());
    const std::size_t n = sheaf.R->gens.size();
    sheaf.nabla_images.assign(stack->D, {});
    std::vector<bool> seen(stack->D + 1, false);
    if (!j.at("nabla").is_array() || j.at("nabla").size() != stack->D)
        throw schema_error("sheaf config: nabla must cover degrees 1..D");
    for (const auto& block : j.at("nabla")) {
        if (!block.contains("d") || !block.contains("images"))
            throw schema_error("sheaf config: nabla block needs d and images");
        const unsigned d = block.at("d").get<unsigned>();
        if (d < 1 || d > stack->D || seen[d])
            throw schema_error("sheaf config: bad nabla degree");
        seen[d] = true;
        const std::size_t rank = stack->algebra(d).rank();
        const auto& images = block.at("images");
        if (!images.is_array() || images.size() != n)
            throw schema_error("sheaf config: one image per generator required at degree " +
                               std::to_string(d));
        for (const auto& coords : images) {
            if (!coords.is_array() || coords.size() != rank)
                throw schema_error("sheaf config: image needs one coordinate per basis label");
            TensorElement t = tensor_zero(stack, d, sheaf.R);
            for (std::size_t i = 0; i < rank; ++i) {
                if (!coords[i].is_string())
                    throw schema_error("sheaf config: coordinates must be rendered elements");
                t.coords[i] = Element::parse(sheaf.R, coords[i].get<std::string>());
            }
            sheaf.nabla_images[d - 1].push_back(std::move(t));
        }
    }
    return sheaf;
}

inline SheafOfRings load_sheaf_file(const std::string& path, StackPtr stack = nullptr) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open sheaf config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw schema_error("sheaf config " + path + ": " + e.what());
    }
    std::string dir = ".";
    if (auto slash = path.find_last_of('/'); slash != std::string::npos)
        dir = path.substr(0, slash);
    return parse_sheaf(j, std::move(stack), dir);
}

} // namespace froblift
