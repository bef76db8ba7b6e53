#pragma once

#include <string>

#include <json.hpp>

#include "propgen/errors.hpp"
#include "propgen/formula.hpp"
#include "propgen/signature.hpp"

namespace propgen {

/// {"atom":"p1"} for leaves, {"op":"and","args":[...]} for applications.
inline nlohmann::json to_json_ast(const Formula& f) {
    if (f.is_atom())
        return nlohmann::json{{"atom", f.label()}};
    nlohmann::json args = nlohmann::json::array();
    for (const Formula& a : f.args())
        args.push_back(to_json_ast(a));
    return nlohmann::json{{"op", f.label()}, {"args", std::move(args)}};
}

inline std::string to_json_line(const Formula& f) { return to_json_ast(f).dump(); }

/// Inverse of to_json_ast, validating declarations and arities.
inline Formula from_json_ast(const nlohmann::json& j, const Signature& sig,
                             const AtomSet& atoms) {
    if (j.contains("atom")) {
        if (!j["atom"].is_string() || j.size() != 1)
            throw config_error("malformed json-ast atom node");
        std::string name = j["atom"].get<std::string>();
        if (!atoms.index_of(name))
            throw config_error("undeclared atom '" + name + "' in json-ast");
        return Formula::atom(std::move(name));
    }
    if (!j.contains("op") || !j["op"].is_string() || !j.contains("args") ||
        !j["args"].is_array() || j.size() != 2)
        throw config_error("malformed json-ast node: expected {\"atom\":...} or "
                           "{\"op\":...,\"args\":[...]}");
    std::string name = j["op"].get<std::string>();
    const Signature::Connective* c = sig.find(name);
    if (!c)
        throw config_error("undeclared connective '" + name + "' in json-ast");
    if (j["args"].size() != static_cast<std::size_t>(c->arity))
        throw config_error("connective '" + name + "' expects " +
                           std::to_string(c->arity) + " arguments, got " +
                           std::to_string(j["args"].size()));
    std::vector<Formula> args;
    args.reserve(j["args"].size());
    for (const auto& a : j["args"])
        args.push_back(from_json_ast(a, sig, atoms));
    return Formula::apply(std::move(name), std::move(args));
}

} // namespace propgen
