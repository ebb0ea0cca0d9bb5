#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace coldstart {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used for deriving independent child seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-task seed stream: same (master, index) always yields the
// same child seed, independent of how many other children were derived.
inline constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) + index);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). n must be positive.
inline std::uint64_t uniform_index(Rng& g, std::uint64_t n) {
    if (n == 0) throw std::logic_error("uniform_index: empty range");
    std::uint64_t x, r;
    do {
        x = g();
        r = x % n;
    } while (x - r > std::uint64_t(0) - n);
    return r;
}

template <typename T>
void shuffle_values(std::vector<T>& values, Rng& g) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(g, i));
        std::swap(values[i - 1], values[j]);
    }
}

// Fenwick tree over nonnegative weights supporting sequential weighted
// sampling without replacement: each draw removes the drawn element's weight,
// which is equivalent to renormalizing the remaining weights.
class WeightedSampler {
public:
    explicit WeightedSampler(std::span<const double> weights)
        : size_(weights.size()), tree_(weights.size() + 1, 0.0),
          weight_(weights.begin(), weights.end()) {
        for (std::size_t i = 0; i < size_; ++i) {
            if (!(weights[i] >= 0.0)) throw std::invalid_argument("WeightedSampler: negative or NaN weight");
            add(i, weights[i]);
        }
    }

    std::size_t remaining_positive() const {
        std::size_t c = 0;
        for (double w : weight_) c += (w > 0.0);
        return c;
    }

    double total() const { return prefix(size_); }

    // Draws one index with probability proportional to its current weight.
    std::size_t draw(Rng& g) {
        double tot = total();
        if (!(tot > 0.0)) throw std::logic_error("WeightedSampler: no mass left");
        double target = uniform_unit(g) * tot;
        std::size_t pos = locate(target);
        // Boundary rounding can land on an exhausted slot; step to the next live one.
        while (pos < size_ && weight_[pos] == 0.0) ++pos;
        if (pos >= size_) {
            pos = size_;
            while (pos > 0 && weight_[pos - 1] == 0.0) --pos;
            if (pos == 0) throw std::logic_error("WeightedSampler: no mass left");
            --pos;
        }
        add(pos, -weight_[pos]);
        weight_[pos] = 0.0;
        return pos;
    }

private:
    std::size_t size_;
    std::vector<double> tree_;   // 1-based Fenwick array
    std::vector<double> weight_;

    void add(std::size_t i, double delta) {
        for (std::size_t p = i + 1; p <= size_; p += p & (~p + 1)) tree_[p] += delta;
    }

    double prefix(std::size_t count) const {
        double s = 0.0;
        for (std::size_t p = count; p > 0; p -= p & (~p + 1)) s += tree_[p];
        return s;
    }

    // Largest index whose prefix sum is <= target; that element covers target.
    std::size_t locate(double target) const {
        std::size_t pos = 0;
        std::size_t mask = 1;
        while ((mask << 1) <= size_) mask <<= 1;
        double rem = target;
        for (; mask; mask >>= 1) {
            std::size_t next = pos + mask;
            if (next <= size_ && tree_[next] <= rem) {
                rem -= tree_[next];
                pos = next;
            }
        }
        return pos;  // 0-based element index
    }
};

}  // namespace coldstart
