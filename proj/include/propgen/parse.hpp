#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "propgen/errors.hpp"
#include "propgen/formula.hpp"
#include "propgen/signature.hpp"

namespace propgen {

namespace detail {

class PrefixParser {
public:
    PrefixParser(std::string_view text, const Signature& sig, const AtomSet& atoms)
        : text_(text), sig_(sig), atoms_(atoms) {}

    Formula parse() {
        skip_ws();
        Formula f = formula();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error(parse_error::Kind::syntax, pos_, "trailing input after formula");
        return f;
    }

private:
    Formula formula() {
        std::size_t start = pos_;
        std::string id = identifier();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const Signature::Connective* c = sig_.find(id);
            if (!c)
                throw parse_error(parse_error::Kind::undeclared_symbol, start,
                                  "'" + id + "' is not a declared connective");
            ++pos_; // '('
            std::vector<Formula> args;
            skip_ws();
            args.push_back(formula());
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                skip_ws();
                args.push_back(formula());
                skip_ws();
            }
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw parse_error(parse_error::Kind::syntax, pos_, "expected ',' or ')'");
            ++pos_; // ')'
            if (args.size() != static_cast<std::size_t>(c->arity))
                throw parse_error(parse_error::Kind::arity_mismatch, start,
                                  "connective '" + id + "' expects " +
                                      std::to_string(c->arity) + " arguments, got " +
                                      std::to_string(args.size()));
            return Formula::apply(std::move(id), std::move(args));
        }
        if (atoms_.index_of(id))
            return Formula::atom(std::move(id));
        if (sig_.find(id))
            throw parse_error(parse_error::Kind::syntax, start,
                              "expected '(' after connective '" + id + "'");
        throw parse_error(parse_error::Kind::undeclared_symbol, start,
                          "undeclared symbol '" + id + "'");
    }

    std::string identifier() {
        std::size_t start = pos_;
        auto head = [](char c) {
            return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
        };
        auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
        if (pos_ >= text_.size() || !head(text_[pos_]))
            throw parse_error(parse_error::Kind::syntax, pos_, "expected an identifier");
        ++pos_;
        while (pos_ < text_.size() && tail(text_[pos_]))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
            ++pos_;
    }

    std::string_view text_;
    const Signature& sig_;
    const AtomSet& atoms_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses canonical prefix text back into a formula, validating arities and
/// declarations. Inverse of to_prefix on its image; whitespace between
/// tokens is tolerated on input.
inline Formula parse_prefix(std::string_view text, const Signature& sig,
                            const AtomSet& atoms) {
    require_disjoint(sig, atoms);
    return detail::PrefixParser(text, sig, atoms).parse();
}

} // namespace propgen
