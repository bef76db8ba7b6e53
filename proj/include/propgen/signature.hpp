#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "propgen/errors.hpp"

namespace propgen {

/// Identifiers start with a letter or underscore; the rest are letters,
/// digits or underscores. ASCII only, so serialized formulae are portable.
inline bool is_identifier(std::string_view s) {
    auto head = [](char c) {
        return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (s.empty() || !head(s[0]))
        return false;
    return std::all_of(s.begin() + 1, s.end(), tail);
}

namespace detail {
inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}
} // namespace detail

/// An ordered set of named connectives with fixed arities. Arities are
/// strictly positive: sentential constants (arity 0) are modeled as extra
/// atoms, which keeps the counting recurrences unchanged.
class Signature {
public:
    struct Connective {
        std::string name;
        int arity;
    };

    Signature() = default;

    explicit Signature(std::vector<Connective> connectives)
        : connectives_(std::move(connectives)) {
        for (std::size_t i = 0; i < connectives_.size(); ++i) {
            const Connective& c = connectives_[i];
            if (!is_identifier(c.name))
                throw config_error("invalid connective name '" + c.name + "'");
            if (c.arity < 1)
                throw config_error("nullary connective '" + c.name +
                                   "': declare sentential constants as extra atoms instead");
            for (std::size_t j = 0; j < i; ++j)
                if (connectives_[j].name == c.name)
                    throw config_error("duplicate connective name '" + c.name + "'");
            by_arity_[c.arity].push_back(i);
        }
    }

    /// Parses the inline form "not:1,and:2".
    static Signature parse(std::string_view text) {
        std::vector<Connective> list;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t comma = text.find(',', start);
            std::string_view item =
                detail::trim(text.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start));
            if (!item.empty())
                list.push_back(parse_connective(item));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (list.empty())
            throw config_error("signature is empty: expected 'name:arity[,name:arity...]'");
        return Signature(std::move(list));
    }

    static Connective parse_connective(std::string_view item) {
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos)
            throw config_error("malformed connective '" + std::string(item) +
                               "': expected 'name:arity'");
        std::string name(detail::trim(item.substr(0, colon)));
        std::string_view digits = detail::trim(item.substr(colon + 1));
        if (digits.empty() ||
            !std::all_of(digits.begin(), digits.end(),
                         [](char c) { return c >= '0' && c <= '9'; }) ||
            digits.size() > 6)
            throw config_error("malformed arity in '" + std::string(item) + "'");
        return Connective{std::move(name), std::stoi(std::string(digits))};
    }

    const std::vector<Connective>& connectives() const noexcept { return connectives_; }
    bool empty() const noexcept { return connectives_.empty(); }
    std::size_t size() const noexcept { return connectives_.size(); }

    /// Maximum arity; 0 for the empty signature.
    int max_arity() const noexcept {
        return by_arity_.empty() ? 0 : by_arity_.rbegin()->first;
    }

    /// Number of connectives of the given arity.
    int arity_count(int arity) const noexcept {
        auto it = by_arity_.find(arity);
        return it == by_arity_.end() ? 0 : static_cast<int>(it->second.size());
    }

    /// Indices (declaration order) of the connectives of the given arity.
    const std::vector<std::size_t>& with_arity(int arity) const noexcept {
        static const std::vector<std::size_t> none;
        auto it = by_arity_.find(arity);
        return it == by_arity_.end() ? none : it->second;
    }

    /// Distinct arities, ascending.
    std::vector<int> arities() const {
        std::vector<int> out;
        out.reserve(by_arity_.size());
        for (const auto& [arity, ignored] : by_arity_)
            out.push_back(arity);
        return out;
    }

    const Connective* find(std::string_view name) const noexcept {
        for (const Connective& c : connectives_)
            if (c.name == name)
                return &c;
        return nullptr;
    }

private:
    std::vector<Connective> connectives_;
    std::map<int, std::vector<std::size_t>> by_arity_;
};

/// A nonempty ordered set of atom names. Order matters: it fixes the
/// deterministic enumeration order and the meaning of stored seeds.
class AtomSet {
public:
    explicit AtomSet(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty())
            throw config_error("atom set is empty");
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!is_identifier(atoms_[i]))
                throw config_error("invalid atom name '" + atoms_[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (atoms_[j] == atoms_[i])
                    throw config_error("duplicate atom name '" + atoms_[i] + "'");
        }
    }

    /// Parses the inline form "p1,p2,p3".
    static AtomSet parse(std::string_view csv) {
        std::vector<std::string> names;
        std::size_t start = 0;
        while (start <= csv.size()) {
            std::size_t comma = csv.find(',', start);
            std::string_view item =
                detail::trim(csv.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
            if (!item.empty())
                names.emplace_back(item);
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        return AtomSet(std::move(names));
    }

    const std::vector<std::string>& names() const noexcept { return atoms_; }
    int size() const noexcept { return static_cast<int>(atoms_.size()); }
    const std::string& name(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }

    std::optional<int> index_of(std::string_view name) const noexcept {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i] == name)
                return static_cast<int>(i);
        return std::nullopt;
    }

private:
    std::vector<std::string> atoms_;
};

/// Connective and atom names must not overlap when used together.
inline void require_disjoint(const Signature& sig, const AtomSet& atoms) {
    for (const auto& name : atoms.names())
        if (sig.find(name))
            throw config_error("name '" + name + "' is declared both as an atom and a connective");
}

} // namespace propgen
