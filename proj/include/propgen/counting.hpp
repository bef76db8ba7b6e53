#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "propgen/bigcount.hpp"
#include "propgen/errors.hpp"
#include "propgen/signature.hpp"

namespace propgen {

/// Exact cardinalities of the three formula spaces over a fixed signature,
/// memoized. All three depend on the atom set only through its size p and
/// on the signature only through its arity multiset.
///
///   q_us(n, p)  — formulae of depth <= n over at most p given atoms
///   q_es(n, p)  — formulae of depth exactly n over at most p given atoms
///   q_ea(n, p)  — formulae of depth exactly n using all p given atoms
///
/// Recurrences (k = max arity, c(i) = number of arity-i connectives):
///   q_us(n, p) = p                                        for n = 0
///              = p + sum_i c(i) * q_us(n-1, p)^i          for n > 0
///   q_es(n, p) = q_us(n, p) - q_us(n-1, p)
///   q_ea(n, p) = 0                                        if p > k^n
///              = q_es(n, p) - sum_{i=1..p-1} C(p,i) * q_ea(n, i)
///
/// q_us(n, p) = 0 for n < 0: the unique extension under which the exact-depth
/// argument weights below sum to 1 at n = 1.
///
/// Thread safety: calls may race; the memo is guarded by a mutex.
class CountCache {
public:
    explicit CountCache(Signature sig) : sig_(std::move(sig)) {}

    const Signature& signature() const noexcept { return sig_; }

    BigCount q_us(int n, int p) {
        require_p(p);
        if (n < 0)
            return 0;
        std::lock_guard<std::mutex> lock(mu_);
        return us_locked(n, p);
    }

    BigCount q_es(int n, int p) {
        require_p(p);
        require_n(n);
        std::lock_guard<std::mutex> lock(mu_);
        return es_locked(n, p);
    }

    BigCount q_ea(int n, int p) {
        require_p(p);
        require_n(n);
        std::lock_guard<std::mutex> lock(mu_);
        return ea_locked(n, p);
    }

    /// k^n — the most distinct atoms any depth-n formula can contain.
    BigCount max_atoms(int n) const {
        require_n(n);
        if (n == 0)
            return 1;
        return pow_count(BigCount(sig_.max_arity()), n);
    }

private:
    static void require_p(int p) {
        if (p < 1)
            throw config_error("atom count p must be >= 1");
    }
    static void require_n(int n) {
        if (n < 0)
            throw config_error("depth n must be >= 0");
    }

    const BigCount& us_locked(int n, int p) {
        std::vector<BigCount>& column = us_[p];
        while (static_cast<int>(column.size()) <= n) {
            int m = static_cast<int>(column.size());
            if (m == 0) {
                column.emplace_back(p);
                continue;
            }
            BigCount total = p;
            for (const auto& conn_arity : sig_.arities())
                total += sig_.arity_count(conn_arity) *
                         pow_count(column[m - 1], conn_arity);
            column.push_back(std::move(total));
        }
        return column[static_cast<std::size_t>(n)];
    }

    BigCount es_locked(int n, int p) {
        if (n == 0)
            return p;
        // Copy before the second lookup: us_locked can grow the memo vector
        // and invalidate references into it.
        BigCount upper = us_locked(n, p);
        upper -= us_locked(n - 1, p);
        return upper;
    }

    const BigCount& ea_locked(int n, int p) {
        auto found = ea_.find({n, p});
        if (found != ea_.end())
            return found->second;
        BigCount bound = n == 0 ? BigCount(1) : pow_count(BigCount(sig_.max_arity()), n);
        for (int i = 1; i <= p; ++i) {
            if (ea_.count({n, i}))
                continue;
            BigCount value;
            if (i > bound) {
                value = 0;
            } else {
                value = es_locked(n, i);
                for (int j = 1; j < i; ++j)
                    value -= binomial(i, j) * ea_.at({n, j});
            }
            ea_.emplace(std::make_pair(n, i), std::move(value));
        }
        return ea_.at({n, p});
    }

    Signature sig_;
    std::map<int, std::vector<BigCount>> us_; // p -> [q_us(0..n, p)]
    std::map<std::pair<int, int>, BigCount> ea_;
    std::mutex mu_;
};

} // namespace propgen
