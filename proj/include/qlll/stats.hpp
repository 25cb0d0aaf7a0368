#pragma once
// Running mean and standard error.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace qlll {

struct MeanEstimate {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double v) {
        ++count;
        sum += v;
        sum_sq += v * v;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        double mu = mean();
        return std::max(0.0, (sum_sq - static_cast<double>(count) * mu * mu) / static_cast<double>(count - 1));
    }
    double std_error() const { return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

// Standard error of a Bernoulli frequency with known success probability p.
inline double binomial_sigma(double p, std::size_t n) {
    return n ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0;
}

}  // namespace qlll
