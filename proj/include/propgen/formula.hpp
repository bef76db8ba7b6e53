#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "propgen/errors.hpp"
#include "propgen/signature.hpp"

namespace propgen {

/// An immutable syntax tree: an atom leaf or a connective applied to one
/// or more arguments. Copies are cheap (shared nodes) and instances are
/// safe to share across threads. Equality is structural — two formulae are
/// equal iff they are the same tree, never up to logical equivalence.
class Formula {
public:
    static Formula atom(std::string name) {
        if (!is_identifier(name))
            throw config_error("invalid atom name '" + name + "'");
        return Formula(std::make_shared<const Node>(Node{std::move(name), {}, 0}));
    }

    static Formula apply(std::string connective, std::vector<Formula> args) {
        if (!is_identifier(connective))
            throw config_error("invalid connective name '" + connective + "'");
        if (args.empty())
            throw config_error("connective '" + connective +
                               "' applied to no arguments; nullary symbols are atoms");
        int depth = 0;
        for (const Formula& a : args)
            depth = std::max(depth, a.depth());
        return Formula(std::make_shared<const Node>(
            Node{std::move(connective), std::move(args), depth + 1}));
    }

    bool is_atom() const noexcept { return node_->args.empty(); }

    /// Atom name for leaves, connective name for applications.
    const std::string& label() const noexcept { return node_->label; }

    const std::vector<Formula>& args() const noexcept { return node_->args; }

    /// Longest root-to-leaf path length; atoms have depth 0.
    int depth() const noexcept { return node_->depth; }

    friend bool operator==(const Formula& a, const Formula& b) {
        if (a.node_ == b.node_)
            return true;
        if (a.node_->depth != b.node_->depth || a.node_->label != b.node_->label ||
            a.node_->args.size() != b.node_->args.size())
            return false;
        for (std::size_t i = 0; i < a.node_->args.size(); ++i)
            if (!(a.node_->args[i] == b.node_->args[i]))
                return false;
        return true;
    }

    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node {
        std::string label;
        std::vector<Formula> args;
        int depth;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

inline int depth(const Formula& f) noexcept { return f.depth(); }

inline std::set<std::string> atoms_used(const Formula& f) {
    std::set<std::string> out;
    auto walk = [&out](auto&& self, const Formula& g) -> void {
        if (g.is_atom()) {
            out.insert(g.label());
            return;
        }
        for (const Formula& a : g.args())
            self(self, a);
    };
    walk(walk, f);
    return out;
}

namespace detail {
inline void write_prefix(std::string& out, const Formula& f) {
    out += f.label();
    if (f.is_atom())
        return;
    out += '(';
    for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i)
            out += ',';
        write_prefix(out, f.args()[i]);
    }
    out += ')';
}

inline void write_sexpr(std::string& out, const Formula& f) {
    if (f.is_atom()) {
        out += f.label();
        return;
    }
    out += '(';
    out += f.label();
    for (const Formula& a : f.args()) {
        out += ' ';
        write_sexpr(out, a);
    }
    out += ')';
}
} // namespace detail

/// Canonical prefix text: "p1", "and(p1,not(p2))". No whitespace; round-trips
/// through parse_prefix bit-exactly.
inline std::string to_prefix(const Formula& f) {
    std::string out;
    detail::write_prefix(out, f);
    return out;
}

/// Lisp-style rendering: "(and p1 (not p2))"; bare name for atoms.
inline std::string to_sexpr(const Formula& f) {
    std::string out;
    detail::write_sexpr(out, f);
    return out;
}

/// Checks every symbol is declared and every application matches its
/// declared arity.
inline void validate(const Formula& f, const Signature& sig, const AtomSet& atoms) {
    if (f.is_atom()) {
        if (!atoms.index_of(f.label()))
            throw config_error("undeclared atom '" + f.label() + "'");
        return;
    }
    const Signature::Connective* c = sig.find(f.label());
    if (!c)
        throw config_error("undeclared connective '" + f.label() + "'");
    if (static_cast<std::size_t>(c->arity) != f.args().size())
        throw config_error("connective '" + f.label() + "' expects " +
                           std::to_string(c->arity) + " arguments, got " +
                           std::to_string(f.args().size()));
    for (const Formula& a : f.args())
        validate(a, sig, atoms);
}

} // namespace propgen
