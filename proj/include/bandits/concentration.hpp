// concentration.hpp
#pragma once
#include <cmath>
#include <stdexcept>

namespace bandits {

// Two-sided confidence radii. All take the number of samples n and the target
// failure probability delta in (0,1), and return the half-width eps such that
// the corresponding deviation bound fails with probability at most delta.

// Mean of i.i.d. variables with range `width`:
//   P(|mean_hat - mean| > eps) <= 2 exp(-2 n eps^2 / width^2).
inline double hoeffding_radius(std::int64_t n, double width, double delta) {
    if (n <= 0) throw std::invalid_argument("hoeffding_radius: n must be positive");
    if (width <= 0.0) throw std::invalid_argument("hoeffding_radius: width must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("hoeffding_radius: delta must be in (0,1)");
    return width * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

// Mean of i.i.d. variables with variance var and |X - mean| <= c:
//   P(|mean_hat - mean| > eps) <= 2 exp(-n eps^2 / (2 var + 2 c eps / 3)).
// Solving 2 exp(...) = delta for eps gives the larger root of
//   n eps^2 - (2c/3) L eps - 2 var L = 0,  L = ln(2/delta).
inline double bernstein_radius(std::int64_t n, double var, double c, double delta) {
    if (n <= 0) throw std::invalid_argument("bernstein_radius: n must be positive");
    if (var < 0.0) throw std::invalid_argument("bernstein_radius: var must be nonnegative");
    if (c < 0.0) throw std::invalid_argument("bernstein_radius: c must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bernstein_radius: delta must be in (0,1)");
    const double L = std::log(2.0 / delta);
    const double nd = static_cast<double>(n);
    const double b = (2.0 * c / 3.0) * L;
    return (b + std::sqrt(b * b + 8.0 * nd * var * L)) / (2.0 * nd);
}

// Uniform CDF deviation (Dvoretzky-Kiefer-Wolfowitz):
//   P(sup_x |F_hat(x) - F(x)| > eps) <= 2 exp(-2 n eps^2).
inline double dkw_radius(std::int64_t n, double delta) {
    if (n <= 0) throw std::invalid_argument("dkw_radius: n must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dkw_radius: delta must be in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

} // namespace bandits
