#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

#include "propgen/counting.hpp"
#include "propgen/enumerate.hpp"
#include "propgen/errors.hpp"
#include "propgen/generators.hpp"
#include "propgen/random.hpp"

namespace propgen {

// ---------------------------------------------------------------------------
// Chi-square machinery. Signatures of any size produce arbitrary degrees of
// freedom, so critical values come from the regularized incomplete gamma
// function (series below a+1, continued fraction above) instead of a table.
// ---------------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_continued_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15)
            break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

/// Regularized lower incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0)
        throw config_error("regularized_gamma_p: a must be positive");
    if (x <= 0.0)
        return 0.0;
    if (x < a + 1.0)
        return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_continued_fraction(a, x);
}

inline double chi_square_cdf(double x, int df) {
    if (df < 1)
        throw config_error("chi_square_cdf: df must be >= 1");
    return regularized_gamma_p(df / 2.0, x / 2.0);
}

/// Smallest x with CDF(x) >= level, by bracketing and bisection.
inline double chi_square_quantile(int df, double level) {
    if (df < 1)
        throw config_error("chi_square_quantile: df must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw config_error("chi_square_quantile: level must be in (0, 1)");
    double hi = df + 10.0;
    while (chi_square_cdf(hi, df) < level)
        hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, df) < level)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Uniformity trials.
// ---------------------------------------------------------------------------

/// Observed counts over an enumerated space, with the goodness-of-fit
/// verdict against the uniform law at the given quantile level.
struct FrequencyReport {
    struct Row {
        std::string formula;
        std::uint64_t observed = 0;
        double expected = 0.0; // expected count under uniformity
    };

    std::vector<Row> rows; // canonical enumeration order
    std::uint64_t samples = 0;
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    double level = 0.0;
    double quantile = 0.0;
    bool insufficient_samples = false;
    bool pass = false;

    /// One tab-separated row per formula plus a single summary line.
    std::string to_tsv() const {
        std::string out;
        char buf[160];
        for (const Row& row : rows) {
            std::snprintf(buf, sizeof buf, "%s\t%llu\t%.6g\n", row.formula.c_str(),
                          static_cast<unsigned long long>(row.observed), row.expected);
            out += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "# samples=%llu space=%zu chi_square=%.6g df=%d "
                      "quantile=%.6g level=%g verdict=%s%s\n",
                      static_cast<unsigned long long>(samples), rows.size(),
                      chi_square, degrees_of_freedom, quantile, level,
                      pass ? "PASS" : "FAIL",
                      insufficient_samples ? " reason=insufficient-samples" : "");
        out += buf;
        return out;
    }
};

/// Draws `samples` formulae from the chosen generator and tallies them over
/// the oracle-enumerated space (exact depth for the es generators, up-to
/// depth for us, exact depth and all atoms for ea). Expected counts are
/// uniform: the biased generator is expected to fail this test.
inline FrequencyReport run_uniformity_trial(GeneratorKind kind, int n,
                                            const AtomSet& atoms, const Signature& sig,
                                            std::uint64_t samples, std::uint64_t seed,
                                            double level = 0.999,
                                            std::size_t cap = kDefaultEnumerationCap) {
    std::vector<Formula> space;
    switch (kind) {
        case GeneratorKind::es_biased:
        case GeneratorKind::es_uniform:
            space = enumerate_exact(n, atoms, sig, cap);
            break;
        case GeneratorKind::us:
            space = enumerate_up_to(n, atoms, sig, cap);
            break;
        case GeneratorKind::ea:
            space = enumerate_exact_all(n, atoms, sig, cap);
            break;
    }
    if (space.empty())
        throw empty_space_error("the sampled space is empty; nothing to tally");

    std::unordered_map<std::string, std::size_t> position;
    position.reserve(space.size());
    FrequencyReport report;
    report.rows.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        std::string key = to_prefix(space[i]);
        position.emplace(key, i);
        report.rows.push_back({std::move(key), 0, 0.0});
    }

    CountCache counts{sig};
    RandomSource rng{seed};
    for (std::uint64_t s = 0; s < samples; ++s) {
        Formula f = [&] {
            switch (kind) {
                case GeneratorKind::es_biased:
                    return gen_es_biased(n, atoms, sig, rng);
                case GeneratorKind::es_uniform:
                    return gen_es_uniform(n, atoms, counts, rng);
                case GeneratorKind::us:
                    return gen_us(n, atoms, counts, rng);
                case GeneratorKind::ea:
                    return gen_ea(n, atoms, counts, rng);
            }
            throw std::logic_error("unknown generator kind");
        }();
        auto it = position.find(to_prefix(f));
        if (it == position.end())
            throw std::logic_error("generator produced a formula outside its space: " +
                                   to_prefix(f));
        ++report.rows[it->second].observed;
    }

    report.samples = samples;
    report.level = level;
    report.degrees_of_freedom = static_cast<int>(space.size()) - 1;
    const double expected =
        static_cast<double>(samples) / static_cast<double>(space.size());
    for (auto& row : report.rows)
        row.expected = expected;
    if (samples == 0) {
        report.insufficient_samples = true;
        report.pass = false;
        return report;
    }
    double chi = 0.0;
    for (const auto& row : report.rows) {
        const double diff = static_cast<double>(row.observed) - expected;
        chi += diff * diff / expected;
    }
    report.chi_square = chi;
    if (report.degrees_of_freedom == 0) {
        report.pass = true; // single-cell space: uniform by construction
    } else {
        report.quantile = chi_square_quantile(report.degrees_of_freedom, level);
        report.pass = chi < report.quantile;
    }
    return report;
}

} // namespace propgen
