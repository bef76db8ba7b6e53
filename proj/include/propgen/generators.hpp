#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "propgen/bigcount.hpp"
#include "propgen/counting.hpp"
#include "propgen/errors.hpp"
#include "propgen/formula.hpp"
#include "propgen/random.hpp"
#include "propgen/signature.hpp"

namespace propgen {

enum class GeneratorKind { es_biased, es_uniform, us, ea };

inline const char* to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::es_biased: return "es-biased";
        case GeneratorKind::es_uniform: return "es";
        case GeneratorKind::us: return "us";
        case GeneratorKind::ea: return "ea";
    }
    return "?";
}

/// Per-argument depths chosen in the exact-depth recursive step.
using DepthVector = std::vector<int>;

/// A subset of an AtomSet, as a bitmask over atom indices. The all-atoms
/// generator tracks which atoms each argument must cover; 64 atoms is far
/// beyond what its distribution enumeration can reach anyway.
class AtomSubset {
public:
    AtomSubset() = default;

    static AtomSubset full(int count) {
        AtomSubset s;
        s.bits_ = count >= 64 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << count) - 1;
        return s;
    }

    void insert(int i) { bits_ |= std::uint64_t{1} << i; }
    void erase(int i) { bits_ &= ~(std::uint64_t{1} << i); }
    bool contains(int i) const { return (bits_ >> i) & 1u; }
    int count() const noexcept { return std::popcount(bits_); }
    bool empty() const noexcept { return bits_ == 0; }
    std::uint64_t bits() const noexcept { return bits_; }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (std::uint64_t rest = bits_; rest; rest &= rest - 1)
            out.push_back(std::countr_zero(rest));
        return out;
    }

    std::vector<std::string> names(const AtomSet& atoms) const {
        std::vector<std::string> out;
        for (int i : indices())
            out.push_back(atoms.name(i));
        return out;
    }

    friend bool operator==(const AtomSubset&, const AtomSubset&) = default;

private:
    std::uint64_t bits_ = 0;
};

/// One argument slot of an all-atoms distribution: the argument's exact
/// depth and the atoms it must contain.
struct EaPart {
    int depth = 0;
    AtomSubset atoms;
    friend bool operator==(const EaPart&, const EaPart&) = default;
};

/// A full per-argument assignment ((d1,P1),...,(dm,Pm)): some di = n-1,
/// every Pi nonempty, and the Pi jointly cover the target atom set.
struct EaDistribution {
    std::vector<EaPart> parts;
    friend bool operator==(const EaDistribution&, const EaDistribution&) = default;
};

struct WeightedEaDistribution {
    EaDistribution distribution;
    BigCount weight;
};

inline constexpr std::size_t kDefaultDistributionCap = 5'000'000;

// ---------------------------------------------------------------------------
// Biased exact-depth generator.
// ---------------------------------------------------------------------------

namespace detail {

inline Formula gen_es_biased_impl(int n, const AtomSet& atoms, const Signature& sig,
                                  RandomSource& rng) {
    if (n == 0)
        return Formula::atom(atoms.name(static_cast<int>(
            uniform_index(rng, static_cast<std::size_t>(atoms.size())))));
    const auto& conns = sig.connectives();
    const auto& chosen = conns[uniform_index(rng, conns.size())];
    const int m = chosen.arity;
    std::vector<std::optional<Formula>> args(static_cast<std::size_t>(m));
    std::size_t deep = uniform_index(rng, static_cast<std::size_t>(m));
    args[deep] = gen_es_biased_impl(n - 1, atoms, sig, rng);
    for (int x = 0; x < m; ++x) {
        if (static_cast<std::size_t>(x) == deep)
            continue;
        int j = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
        args[static_cast<std::size_t>(x)] = gen_es_biased_impl(j, atoms, sig, rng);
    }
    std::vector<Formula> collected;
    collected.reserve(args.size());
    for (auto& a : args)
        collected.push_back(std::move(*a));
    return Formula::apply(chosen.name, std::move(collected));
}

} // namespace detail

/// Exact-depth generator, deliberately non-uniform: the connective and the
/// non-deepest argument depths are drawn uniformly instead of by space size,
/// so structures with fewer instances come out too often. Every formula of
/// depth n over the atoms still has positive probability. Kept as the
/// baseline the uniform generators are measured against.
inline Formula gen_es_biased(int n, const AtomSet& atoms, const Signature& sig,
                             RandomSource& rng) {
    if (n < 0)
        throw config_error("depth n must be >= 0");
    require_disjoint(sig, atoms);
    if (n > 0 && sig.empty())
        throw empty_space_error("no formula has positive depth over an empty signature");
    return detail::gen_es_biased_impl(n, atoms, sig, rng);
}

// ---------------------------------------------------------------------------
// Uniform exact-depth generator.
// ---------------------------------------------------------------------------

/// Samples (d1,...,dm), each in [0, n-1] with at least one di = n-1, with
/// probability proportional to q_es(d1,p) * ... * q_es(dm,p) — the number of
/// argument combinations realizing those depths.
///
/// Sampled one slot at a time instead of materializing all n^m vectors:
/// with T = q_us(n-1,p) and U = q_us(n-2,p), a slot with s successors and
/// the depth constraint still unmet extends to T^s - U^s completions
/// (all-depths minus all-below-(n-1)), and to T^s once met. Each candidate
/// depth d is weighted by q_es(d,p) times the completion count of the state
/// it leads to, which reproduces the joint distribution above exactly.
inline DepthVector sample_exact_depth_vector(int m, int n, CountCache& counts,
                                             int p, RandomSource& rng) {
    if (m < 1 || n < 1)
        throw config_error("sample_exact_depth_vector: need m >= 1 and n >= 1");
    const BigCount t = counts.q_us(n - 1, p);
    const BigCount u = counts.q_us(n - 2, p);
    std::vector<BigCount> es(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d)
        es[static_cast<std::size_t>(d)] = counts.q_es(d, p);

    DepthVector depths(static_cast<std::size_t>(m));
    bool met = false;
    for (int slot = 0; slot < m; ++slot) {
        const int successors = m - slot - 1;
        std::vector<BigCount> weights(static_cast<std::size_t>(n));
        if (met) {
            weights = es; // completion factor T^successors cancels
        } else {
            const BigCount t_pow = pow_count(t, successors);
            const BigCount u_pow = pow_count(u, successors);
            for (int d = 0; d + 1 < n; ++d)
                weights[static_cast<std::size_t>(d)] =
                    es[static_cast<std::size_t>(d)] * (t_pow - u_pow);
            weights[static_cast<std::size_t>(n - 1)] =
                es[static_cast<std::size_t>(n - 1)] * t_pow;
        }
        int d = static_cast<int>(weighted_index(rng, WeightTable(std::move(weights))));
        depths[static_cast<std::size_t>(slot)] = d;
        met = met || d == n - 1;
    }
    return depths;
}

namespace detail {

inline Formula gen_es_uniform_impl(int n, const AtomSet& atoms, CountCache& counts,
                                   RandomSource& rng) {
    const int p = atoms.size();
    if (n == 0)
        return Formula::atom(atoms.name(static_cast<int>(
            uniform_index(rng, static_cast<std::size_t>(p)))));
    const Signature& sig = counts.signature();
    const BigCount t = counts.q_us(n - 1, p);
    const BigCount u = counts.q_us(n - 2, p);

    // Arity first (each arity-m connective heads T^m - U^m formulae), then a
    // uniform choice among the connectives of that arity.
    std::vector<int> arities = sig.arities();
    std::vector<BigCount> arity_weights;
    arity_weights.reserve(arities.size());
    for (int m : arities)
        arity_weights.push_back(sig.arity_count(m) *
                                (pow_count(t, m) - pow_count(u, m)));
    int m = arities[weighted_index(rng, WeightTable(std::move(arity_weights)))];
    const auto& candidates = sig.with_arity(m);
    const auto& conn = sig.connectives()[candidates[uniform_index(rng, candidates.size())]];

    DepthVector depths = sample_exact_depth_vector(m, n, counts, p, rng);
    std::vector<Formula> args;
    args.reserve(depths.size());
    for (int d : depths)
        args.push_back(gen_es_uniform_impl(d, atoms, counts, rng));
    return Formula::apply(conn.name, std::move(args));
}

} // namespace detail

/// Uniform over the q_es(n, p) formulae of depth exactly n over at most the
/// given atoms: each comes out with probability exactly 1/q_es(n, p).
inline Formula gen_es_uniform(int n, const AtomSet& atoms, CountCache& counts,
                              RandomSource& rng) {
    if (n < 0)
        throw config_error("depth n must be >= 0");
    require_disjoint(counts.signature(), atoms);
    if (counts.q_es(n, atoms.size()) == 0)
        throw empty_space_error("no formula of depth exactly " + std::to_string(n) +
                                " over " + std::to_string(atoms.size()) +
                                " atoms with this signature");
    return detail::gen_es_uniform_impl(n, atoms, counts, rng);
}

// ---------------------------------------------------------------------------
// Uniform up-to-depth generator.
// ---------------------------------------------------------------------------

/// Uniform over the q_us(n, p) formulae of depth at most n: draws the exact
/// depth d with probability q_es(d,p)/q_us(n,p), then delegates.
inline Formula gen_us(int n, const AtomSet& atoms, CountCache& counts,
                      RandomSource& rng) {
    if (n < 0)
        throw config_error("depth n must be >= 0");
    require_disjoint(counts.signature(), atoms);
    const int p = atoms.size();
    std::vector<BigCount> weights;
    weights.reserve(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d)
        weights.push_back(counts.q_es(d, p));
    int d = static_cast<int>(weighted_index(rng, WeightTable(std::move(weights))));
    return detail::gen_es_uniform_impl(d, atoms, counts, rng);
}

// ---------------------------------------------------------------------------
// Uniform exact-depth all-atoms generator.
// ---------------------------------------------------------------------------

namespace detail {

/// q_es with the p = 0 column extended to 0, as needed by the
/// inclusion-exclusion sums below.
inline BigCount es_or_zero(CountCache& counts, int d, int t) {
    return t == 0 ? BigCount(0) : counts.q_es(d, t);
}

/// Sum over all covers (P1..Pm) of a p-atom set (each Pi nonempty, union
/// everything) of prod_i q_ea(d_i, |Pi|), for the depth suffix d[from..].
/// By inclusion-exclusion over the atoms missed, with the partition identity
/// sum_c C(t,c) q_ea(d,c) = q_es(d,t) collapsing each factor:
///   sum_{j=0..p} (-1)^j C(p,j) prod_i q_es(d_i, p-j).
inline BigCount cover_weight_sum(CountCache& counts, const DepthVector& depths,
                                 std::size_t from, int p) {
    BigCount total = 0;
    for (int j = 0; j <= p; ++j) {
        BigCount term = binomial(p, j);
        for (std::size_t i = from; i < depths.size(); ++i)
            term *= es_or_zero(counts, depths[i], p - j);
        if (j % 2 == 0)
            total += term;
        else
            total -= term;
    }
    return total;
}

struct EaDepthChoice {
    int arity;
    DepthVector depths;
    BigCount weight; // c(arity) * cover_weight_sum over the full atom set
};

/// All (arity, depth-vector) pairs with their aggregated weights: the
/// marginal law of the distribution choice after summing out the subsets.
inline std::vector<EaDepthChoice> ea_depth_choices(int n, int p, CountCache& counts) {
    const Signature& sig = counts.signature();
    std::vector<EaDepthChoice> out;
    for (int m : sig.arities()) {
        const BigCount multiplicity = sig.arity_count(m);
        DepthVector depths(static_cast<std::size_t>(m), 0);
        for (;;) {
            bool reaches = false;
            for (int d : depths)
                reaches = reaches || d == n - 1;
            if (reaches) {
                BigCount w = multiplicity * cover_weight_sum(counts, depths, 0, p);
                out.push_back({m, depths, std::move(w)});
            }
            // odometer, last slot fastest
            int slot = m - 1;
            while (slot >= 0 && depths[static_cast<std::size_t>(slot)] == n - 1) {
                depths[static_cast<std::size_t>(slot)] = 0;
                --slot;
            }
            if (slot < 0)
                break;
            ++depths[static_cast<std::size_t>(slot)];
        }
    }
    return out;
}

/// Removes `take` uniformly chosen elements from `pool` and appends them to
/// `out` (partial Fisher-Yates).
inline void draw_without_replacement(std::vector<int>& pool, int take,
                                     RandomSource& rng, std::vector<int>& out) {
    for (int t = 0; t < take; ++t) {
        std::size_t i = static_cast<std::size_t>(t) +
                        uniform_index(rng, pool.size() - static_cast<std::size_t>(t));
        std::swap(pool[static_cast<std::size_t>(t)], pool[i]);
        out.push_back(pool[static_cast<std::size_t>(t)]);
    }
    pool.erase(pool.begin(), pool.begin() + take);
}

inline Formula gen_ea_impl(int n, const AtomSubset& subset, const AtomSet& atoms,
                           CountCache& counts, RandomSource& rng) {
    const int p = subset.count();
    if (BigCount(p) > counts.max_atoms(n)) {
        const int k = counts.signature().max_arity();
        throw infeasible_error("cannot place " + std::to_string(p) +
                               " distinct atoms in a formula of depth " +
                               std::to_string(n) + ": the bound is k^n = " +
                               std::to_string(k) + "^" + std::to_string(n) + " = " +
                               counts.max_atoms(n).str());
    }
    if (n == 0)
        return Formula::atom(atoms.name(subset.indices().front()));

    // Stage 1: arity + depth vector, by marginal weight.
    std::vector<EaDepthChoice> choices = ea_depth_choices(n, p, counts);
    std::vector<BigCount> marginals;
    marginals.reserve(choices.size());
    for (const auto& c : choices)
        marginals.push_back(c.weight);
    std::size_t pick;
    try {
        pick = weighted_index(rng, WeightTable(std::move(marginals)));
    } catch (const empty_space_error&) {
        throw empty_space_error("no depth-" + std::to_string(n) +
                                " formula uses all " + std::to_string(p) +
                                " atoms with this signature");
    }
    const int m = choices[pick].arity;
    const DepthVector& depths = choices[pick].depths;

    // Stage 2: assign each argument its atom subset, one argument at a time.
    // The completion count for arguments i.. with r atoms still uncovered is
    //   V(i, r) = sum_{j=0..r} (-1)^j C(r,j) prod_{x>=i} q_es(d_x, p-j),
    // so a subset of size c meeting h of the uncovered atoms carries weight
    //   C(r,h) * C(p-r,c-h) * q_ea(d_i, c) * V(i+1, r-h),
    // and the concrete atoms are then uniform among subsets with that split.
    std::vector<std::vector<BigCount>> suffix(static_cast<std::size_t>(m) + 1,
                                              std::vector<BigCount>(
                                                  static_cast<std::size_t>(p) + 1, 1));
    for (int i = m - 1; i >= 0; --i)
        for (int j = 0; j <= p; ++j)
            suffix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                es_or_zero(counts, depths[static_cast<std::size_t>(i)], p - j) *
                suffix[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)];
    auto completion = [&](int i, int r) {
        BigCount total = 0;
        for (int j = 0; j <= r; ++j) {
            BigCount term =
                binomial(r, j) * suffix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (j % 2 == 0)
                total += term;
            else
                total -= term;
        }
        return total;
    };

    std::vector<int> uncovered = subset.indices();
    std::vector<int> covered;
    std::vector<EaPart> parts;
    parts.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const int r = static_cast<int>(uncovered.size());
        const int d = depths[static_cast<std::size_t>(i)];
        std::vector<std::pair<int, int>> splits; // (size c, uncovered hit h)
        std::vector<BigCount> weights;
        for (int c = 1; c <= p; ++c) {
            const BigCount ea_c = counts.q_ea(d, c);
            if (ea_c == 0)
                continue;
            for (int h = std::max(0, c - (p - r)); h <= std::min(c, r); ++h) {
                BigCount w = binomial(r, h) * binomial(p - r, c - h) * ea_c *
                             completion(i + 1, r - h);
                splits.emplace_back(c, h);
                weights.push_back(std::move(w));
            }
        }
        std::size_t s = weighted_index(rng, WeightTable(std::move(weights)));
        const auto [c, h] = splits[s];
        std::vector<int> chosen;
        chosen.reserve(static_cast<std::size_t>(c));
        draw_without_replacement(uncovered, h, rng, chosen);
        draw_without_replacement(covered, c - h, rng, chosen);
        AtomSubset part_atoms;
        for (int a : chosen)
            part_atoms.insert(a);
        covered.insert(covered.end(), chosen.begin(), chosen.end());
        std::sort(covered.begin(), covered.end());
        parts.push_back({d, part_atoms});
    }

    // Stage 3: uniform connective among those of the chosen arity, then the
    // arguments themselves.
    const Signature& sig = counts.signature();
    const auto& candidates = sig.with_arity(m);
    const auto& conn = sig.connectives()[candidates[uniform_index(rng, candidates.size())]];
    std::vector<Formula> args;
    args.reserve(parts.size());
    for (const EaPart& part : parts)
        args.push_back(gen_ea_impl(part.depth, part.atoms, atoms, counts, rng));
    return Formula::apply(conn.name, std::move(args));
}

} // namespace detail

/// Uniform over the q_ea(n, p) formulae of depth exactly n containing every
/// one of the given atoms. Fails fast with infeasible_error when p > k^n.
///
/// The per-argument (depth, atom-subset) distribution is drawn in stages
/// with exact completion counts rather than by materializing the full
/// distribution set, so generation works wherever the space is nonempty;
/// the law is identical to a weighted draw over enumerate_ea_distributions.
inline Formula gen_ea(int n, const AtomSet& atoms, CountCache& counts,
                      RandomSource& rng) {
    if (n < 0)
        throw config_error("depth n must be >= 0");
    require_disjoint(counts.signature(), atoms);
    if (atoms.size() > 64)
        throw capacity_error("gen_ea supports at most 64 atoms");
    return detail::gen_ea_impl(n, AtomSubset::full(atoms.size()), atoms, counts, rng);
}

// ---------------------------------------------------------------------------
// Extensional distribution set for the all-atoms generator.
// ---------------------------------------------------------------------------

/// Materializes, for the subset's atoms, every per-argument distribution
/// ((d1,P1),...,(dm,Pm)) — m an arity present in the signature, every di in
/// [0, n-1] with some di = n-1, every Pi a nonempty subset of the target
/// atoms with the Pi jointly covering them — together with its unnormalized
/// weight c(m) * q_ea(d1,|P1|) * ... * q_ea(dm,|Pm|). Members whose weight
/// is zero are included. Weights sum to q_ea(n, |subset|).
///
/// Order is deterministic: arity ascending, then depth vectors and covers
/// lexicographically. The member count explodes combinatorially, so a cap
/// guards materialization; sampling itself (gen_ea) does not go through
/// this function and is not capped.
inline std::vector<WeightedEaDistribution>
enumerate_ea_distributions(int n, const AtomSet& atoms, const AtomSubset& subset,
                           CountCache& counts,
                           std::size_t cap = kDefaultDistributionCap) {
    if (n < 1)
        throw config_error("enumerate_ea_distributions: need n >= 1");
    if (subset.empty())
        throw config_error("enumerate_ea_distributions: empty atom subset");
    if (atoms.size() > 64)
        throw capacity_error("enumerate_ea_distributions supports at most 64 atoms");
    const Signature& sig = counts.signature();
    const int q = subset.count();

    BigCount projected = 0;
    for (int m : sig.arities())
        projected += (pow_count(BigCount(n), m) - pow_count(BigCount(n - 1), m)) *
                     pow_count((BigCount(1) << m) - 1, q);
    if (projected > cap)
        throw capacity_error("distribution set would hold up to " + projected.str() +
                             " members, over the cap of " + std::to_string(cap));

    const std::vector<int> members = subset.indices();
    std::vector<WeightedEaDistribution> out;
    for (int m : sig.arities()) {
        const BigCount multiplicity = sig.arity_count(m);
        DepthVector depths(static_cast<std::size_t>(m), 0);
        for (;;) {
            bool reaches = false;
            for (int d : depths)
                reaches = reaches || d == n - 1;
            if (reaches) {
                // Covers: every atom picks a nonempty set of argument slots.
                std::vector<std::uint32_t> pick(static_cast<std::size_t>(q), 1);
                const std::uint32_t pick_max = (std::uint32_t{1} << m) - 1;
                for (;;) {
                    std::vector<EaPart> parts(static_cast<std::size_t>(m));
                    bool all_nonempty = true;
                    for (int i = 0; i < m; ++i) {
                        AtomSubset slot;
                        for (int j = 0; j < q; ++j)
                            if ((pick[static_cast<std::size_t>(j)] >> i) & 1u)
                                slot.insert(members[static_cast<std::size_t>(j)]);
                        all_nonempty = all_nonempty && !slot.empty();
                        parts[static_cast<std::size_t>(i)] = {
                            depths[static_cast<std::size_t>(i)], slot};
                    }
                    if (all_nonempty) {
                        BigCount w = multiplicity;
                        for (const EaPart& part : parts)
                            w *= counts.q_ea(part.depth, part.atoms.count());
                        out.push_back({EaDistribution{std::move(parts)}, std::move(w)});
                    }
                    int j = q - 1;
                    while (j >= 0 && pick[static_cast<std::size_t>(j)] == pick_max) {
                        pick[static_cast<std::size_t>(j)] = 1;
                        --j;
                    }
                    if (j < 0)
                        break;
                    ++pick[static_cast<std::size_t>(j)];
                }
            }
            int slot = m - 1;
            while (slot >= 0 && depths[static_cast<std::size_t>(slot)] == n - 1) {
                depths[static_cast<std::size_t>(slot)] = 0;
                --slot;
            }
            if (slot < 0)
                break;
            ++depths[static_cast<std::size_t>(slot)];
        }
    }
    return out;
}

inline std::vector<WeightedEaDistribution>
enumerate_ea_distributions(int n, const AtomSet& atoms, CountCache& counts,
                           std::size_t cap = kDefaultDistributionCap) {
    require_disjoint(counts.signature(), atoms);
    return enumerate_ea_distributions(n, atoms, AtomSubset::full(atoms.size()),
                                      counts, cap);
}

} // namespace propgen
