#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "propgen/bigcount.hpp"
#include "propgen/errors.hpp"

namespace propgen {

/// Seedable source of uniform 64-bit words. mt19937_64 is fully specified
/// by the standard, so a seed reproduces the same stream on any platform.
/// Not cryptographic. One source per thread; there is no shared state.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    static RandomSource from_entropy() {
        std::random_device device;
        std::uint64_t seed =
            (static_cast<std::uint64_t>(device()) << 32) ^ device();
        return RandomSource(seed);
    }

    /// The seed this source was built from, for replay diagnostics.
    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_word() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Uniform integer in [0, bound), exact. Draws fixed-width blocks of the
/// minimal bit width and rejects values >= bound, so there is no modulo
/// bias at any magnitude. Expected < 2 blocks per call.
inline BigCount uniform_below(RandomSource& rng, const BigCount& bound) {
    if (bound <= 0)
        throw config_error("uniform_below: bound must be >= 1");
    if (bound == 1)
        return BigCount(0);
    const unsigned bits = boost::multiprecision::msb(BigCount(bound - 1)) + 1;
    const unsigned words = (bits + 63) / 64;
    const unsigned top_bits = bits - 64 * (words - 1);
    const std::uint64_t top_mask =
        top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    for (;;) {
        BigCount value = 0;
        for (unsigned w = 0; w < words; ++w) {
            std::uint64_t word = rng.next_word();
            if (w == 0)
                word &= top_mask;
            value <<= 64;
            value |= word;
        }
        if (value < bound)
            return value;
    }
}

/// Uniform index in [0, count).
inline std::size_t uniform_index(RandomSource& rng, std::size_t count) {
    return uniform_below(rng, BigCount(count)).convert_to<std::size_t>();
}

/// Nonnegative integer weights with their precomputed total.
class WeightTable {
public:
    explicit WeightTable(std::vector<BigCount> weights)
        : weights_(std::move(weights)) {
        for (const BigCount& w : weights_) {
            if (w < 0)
                throw config_error("WeightTable: negative weight");
            total_ += w;
        }
    }

    std::size_t size() const noexcept { return weights_.size(); }
    const BigCount& total() const noexcept { return total_; }
    const BigCount& weight(std::size_t i) const { return weights_.at(i); }

private:
    std::vector<BigCount> weights_;
    BigCount total_ = 0;
};

/// Returns index i with probability weight(i)/total, exactly: one draw of
/// uniform_below(total), then a walk over cumulative sums.
inline std::size_t weighted_index(RandomSource& rng, const WeightTable& table) {
    if (table.size() == 0 || table.total() == 0)
        throw empty_space_error("weighted_index: no positive weight");
    BigCount u = uniform_below(rng, table.total());
    BigCount cumulative = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        cumulative += table.weight(i);
        if (u < cumulative)
            return i;
    }
    throw std::logic_error("weighted_index: cumulative walk overran the total");
}

} // namespace propgen
