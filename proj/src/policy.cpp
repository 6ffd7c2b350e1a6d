// policy.cpp
#include "bandits/policy.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bandits {

namespace {

std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void require_well_formed(const ProphetAction& action, int n) {
    if (static_cast<int>(action.thresholds.size()) != n - 1) {
        throw std::invalid_argument("prophet action: expected n-1 thresholds");
    }
    for (double t : action.thresholds) {
        if (is_above(t)) continue;
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::invalid_argument("prophet action: threshold outside [0,1]");
        }
    }
}

void require_well_formed(const PandoraPolicy& policy) {
    const int n = policy.n();
    if (n < 1 || static_cast<int>(policy.thresholds.size()) != n) {
        throw std::invalid_argument("inspection policy: order/threshold size mismatch");
    }
    std::vector<bool> seen(n, false);
    for (int b : policy.order) {
        if (b < 0 || b >= n || seen[b]) {
            throw std::invalid_argument("inspection policy: order is not a permutation");
        }
        seen[b] = true;
    }
    for (double t : policy.thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::invalid_argument("inspection policy: threshold outside [0,1]");
        }
    }
    for (int k = 1; k < n; ++k) {
        if (policy.thresholds[policy.order[k - 1]] < policy.thresholds[policy.order[k]]) {
            throw std::invalid_argument("inspection policy: thresholds increase along the order");
        }
    }
}

std::string describe(const ProphetAction& action) {
    std::string out;
    for (std::size_t i = 0; i < action.thresholds.size(); ++i) {
        if (i) out += ';';
        out += is_above(action.thresholds[i]) ? "above" : shortest(action.thresholds[i]);
    }
    return out;
}

std::string describe(const PandoraPolicy& policy) {
    std::string out;
    for (int k = 0; k < policy.n(); ++k) {
        if (k) out += ';';
        out += std::to_string(policy.order[k] + 1);
    }
    out += '|';
    for (int k = 0; k < policy.n(); ++k) {
        if (k) out += ';';
        out += shortest(policy.thresholds[policy.order[k]]);
    }
    return out;
}

} // namespace bandits
