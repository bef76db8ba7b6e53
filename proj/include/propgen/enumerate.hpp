#pragma once

#include <set>
#include <string>
#include <vector>

#include "propgen/counting.hpp"
#include "propgen/errors.hpp"
#include "propgen/formula.hpp"
#include "propgen/signature.hpp"

namespace propgen {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

namespace detail {

/// Builds the formula space level by level. Level d holds every formula of
/// exact depth d, in canonical order: atoms in declared order at level 0;
/// at level d >= 1, connectives in declaration order, argument tuples in
/// lexicographic order over the concatenated levels 0..d-1 (with at least
/// one argument from level d-1). This order is part of the contract: golden
/// files and seeded replays rely on it.
inline std::vector<std::vector<Formula>> build_levels(int n, const AtomSet& atoms,
                                                      const Signature& sig,
                                                      std::size_t cap) {
    if (n < 0)
        throw config_error("depth n must be >= 0");
    require_disjoint(sig, atoms);
    CountCache counts{sig};
    BigCount size = counts.q_us(n, atoms.size());
    if (size > cap)
        throw capacity_error("space of depth <= " + std::to_string(n) + " holds " +
                             size.str() + " formulae, over the cap of " +
                             std::to_string(cap));

    std::vector<std::vector<Formula>> levels;
    std::vector<Formula> pool; // levels 0..d-1 concatenated
    levels.emplace_back();
    for (const auto& name : atoms.names())
        levels.back().push_back(Formula::atom(name));
    for (int d = 1; d <= n; ++d) {
        pool.insert(pool.end(), levels.back().begin(), levels.back().end());
        const std::size_t boundary = pool.size() - levels.back().size();
        std::vector<Formula> level;
        for (const auto& conn : sig.connectives()) {
            const int m = conn.arity;
            std::vector<std::size_t> index(static_cast<std::size_t>(m), 0);
            for (;;) {
                bool reaches = false;
                for (std::size_t i : index)
                    reaches = reaches || i >= boundary;
                if (reaches) {
                    std::vector<Formula> args;
                    args.reserve(index.size());
                    for (std::size_t i : index)
                        args.push_back(pool[i]);
                    level.push_back(Formula::apply(conn.name, std::move(args)));
                }
                int slot = m - 1;
                while (slot >= 0 && index[static_cast<std::size_t>(slot)] + 1 == pool.size()) {
                    index[static_cast<std::size_t>(slot)] = 0;
                    --slot;
                }
                if (slot < 0)
                    break;
                ++index[static_cast<std::size_t>(slot)];
            }
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

} // namespace detail

/// Every formula of depth <= n over the atoms, each exactly once, in the
/// canonical deterministic order. Throws capacity_error when the space
/// exceeds the cap.
inline std::vector<Formula> enumerate_up_to(int n, const AtomSet& atoms,
                                            const Signature& sig,
                                            std::size_t cap = kDefaultEnumerationCap) {
    auto levels = detail::build_levels(n, atoms, sig, cap);
    std::vector<Formula> out;
    for (auto& level : levels)
        out.insert(out.end(), level.begin(), level.end());
    return out;
}

/// Every formula of depth exactly n, canonical order.
inline std::vector<Formula> enumerate_exact(int n, const AtomSet& atoms,
                                            const Signature& sig,
                                            std::size_t cap = kDefaultEnumerationCap) {
    auto levels = detail::build_levels(n, atoms, sig, cap);
    return std::move(levels.back());
}

/// Every formula of depth exactly n that uses every atom, canonical order.
inline std::vector<Formula> enumerate_exact_all(int n, const AtomSet& atoms,
                                                const Signature& sig,
                                                std::size_t cap = kDefaultEnumerationCap) {
    std::set<std::string> everything(atoms.names().begin(), atoms.names().end());
    std::vector<Formula> out;
    for (Formula& f : enumerate_exact(n, atoms, sig, cap))
        if (atoms_used(f) == everything)
            out.push_back(std::move(f));
    return out;
}

} // namespace propgen
