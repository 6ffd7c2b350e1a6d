// oracle.cpp
#include "bandits/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "bandits/rng.hpp"

namespace bandits {

double prophet_expected_reward(const ProphetInstance& inst, const ProphetAction& action) {
    require_well_formed(action, inst.n());
    // W = expected reward collected from the current box on, given it is
    // reached. The last box is taken unconditionally.
    double w = inst.boxes.back().mean();
    for (int i = inst.n() - 2; i >= 0; --i) {
        const double tau = action.thresholds[i];
        if (is_above(tau)) continue;  // box skipped, W unchanged
        w = inst.boxes[i].partial_mean_above(tau, /*include_tau=*/false) +
            inst.boxes[i].cdf(tau) * w;
    }
    return w;
}

ProphetOpt prophet_opt(const ProphetInstance& inst) {
    const int n = inst.n();
    ProphetOpt out;
    out.opt_values.assign(n, 0.0);
    out.opt_thresholds.assign(n - 1, 0.0);
    out.opt_values[n - 1] = inst.boxes[n - 1].mean();
    for (int i = n - 2; i >= 0; --i) {
        const double cont = out.opt_values[i + 1];
        out.opt_thresholds[i] = cont;
        out.opt_values[i] = inst.boxes[i].partial_mean_above(cont, /*include_tau=*/false) +
                            inst.boxes[i].cdf(cont) * cont;
    }
    return out;
}

WeitzmanPolicy weitzman(const PandoraInstance& inst) {
    const int n = inst.n();
    WeitzmanPolicy out;
    out.sigmas.reserve(n);
    for (int i = 0; i < n; ++i) {
        out.sigmas.push_back(inst.boxes[i].reservation_value(inst.costs[i]));
    }
    out.policy.order.resize(n);
    std::iota(out.policy.order.begin(), out.policy.order.end(), 0);
    std::stable_sort(out.policy.order.begin(), out.policy.order.end(),
                     [&](int a, int b) { return out.sigmas[a] > out.sigmas[b]; });
    out.policy.thresholds = out.sigmas;
    return out;
}

namespace {

void require_matching(const PandoraInstance& inst, const PandoraPolicy& policy) {
    require_well_formed(policy);
    if (policy.n() != inst.n()) {
        throw std::invalid_argument("inspection policy: box count mismatch");
    }
}

// Walks the policy on one realization; values[i] is the draw of box i.
double play_pandora(const PandoraInstance& inst, const PandoraPolicy& policy,
                    const std::vector<double>& values) {
    double best = 0.0;
    double paid = 0.0;
    for (int k = 0; k < policy.n(); ++k) {
        const int b = policy.order[k];
        if (k > 0 && best >= policy.thresholds[b]) break;
        paid += inst.costs[b];
        best = std::max(best, values[b]);
    }
    return best - paid;
}

} // namespace

double pandora_expected_utility_exact(const PandoraInstance& inst, const PandoraPolicy& policy) {
    require_matching(inst, policy);
    std::int64_t outcomes = 1;
    for (const auto& box : inst.boxes) {
        if (!box.atoms_only()) {
            throw std::runtime_error("exact utility requires atom-only boxes");
        }
        outcomes *= static_cast<std::int64_t>(box.atoms().size());
        if (outcomes > kExactOutcomeCap) {
            throw std::runtime_error("exact utility: joint support too large");
        }
    }
    double total = 0.0;
    // DFS over the joint support in inspection order; stopped branches need no
    // draws for the remaining boxes.
    std::function<void(int, double, double, double)> rec = [&](int k, double best, double paid,
                                                               double prob) {
        if (k == policy.n() || (k > 0 && best >= policy.thresholds[policy.order[k]])) {
            total += prob * (best - paid);
            return;
        }
        const int b = policy.order[k];
        for (const Atom& a : inst.boxes[b].atoms()) {
            rec(k + 1, std::max(best, a.x), paid + inst.costs[b], prob * a.mass);
        }
    };
    rec(0, 0.0, 0.0, 1.0);
    return total;
}

UtilityEstimate pandora_expected_utility(const PandoraInstance& inst, const PandoraPolicy& policy,
                                         std::uint64_t seed, std::int64_t mc_rounds) {
    require_matching(inst, policy);
    bool exact_ok = true;
    std::int64_t outcomes = 1;
    for (const auto& box : inst.boxes) {
        if (!box.atoms_only()) {
            exact_ok = false;
            break;
        }
        outcomes *= static_cast<std::int64_t>(box.atoms().size());
        if (outcomes > kExactOutcomeCap) {
            exact_ok = false;
            break;
        }
    }
    if (exact_ok) {
        return UtilityEstimate{pandora_expected_utility_exact(inst, policy), 0.0, true};
    }
    if (mc_rounds < 2) throw std::invalid_argument("pandora_expected_utility: mc_rounds < 2");
    RngStream rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<double> values(inst.boxes.size());
    for (std::int64_t t = 1; t <= mc_rounds; ++t) {
        for (std::size_t i = 0; i < inst.boxes.size(); ++i) values[i] = inst.boxes[i].sample(rng);
        const double u = play_pandora(inst, policy, values);
        const double delta = u - mean;
        mean += delta / static_cast<double>(t);
        m2 += delta * (u - mean);
    }
    const double var = m2 / static_cast<double>(mc_rounds - 1);
    return UtilityEstimate{mean, std::sqrt(var / static_cast<double>(mc_rounds)), false};
}

namespace {

// int_a^b gain(v, cost) dv for one box, exact: gain is piecewise quadratic
// with gain' = F - 1 and gain'' = density between structural breakpoints.
double integral_gain(const BoundedDistribution& d, double cost, double a, double b) {
    if (b <= a) return 0.0;
    const auto& bp = d.breakpoints();
    double total = 0.0;
    double x = a;
    auto it = std::upper_bound(bp.begin(), bp.end(), a);
    double gx = d.gain(x, cost);
    while (x < b) {
        const double next = (it == bp.end()) ? b : std::min(*it, b);
        if (next > x) {
            const double h = next - x;
            const double slope = d.cdf(x) - 1.0;
            const double dd = d.density_at(x);
            total += gx * h + slope * h * h / 2.0 + dd * h * h * h / 6.0;
            gx += slope * h + dd * h * h / 2.0;
            x = next;
        }
        if (it != bp.end() && *it <= x) ++it;
    }
    return total;
}

} // namespace

double pandora2_fixed_order_reward(const PandoraInstance& inst, double tau) {
    if (inst.n() != 2) throw std::invalid_argument("pandora2 reward: needs exactly 2 boxes");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("pandora2 reward: tau outside [0,1]");
    const BoundedDistribution& d1 = inst.boxes[0];
    const BoundedDistribution& d2 = inst.boxes[1];
    double r = -inst.costs[0] + d1.mean();
    // Continuation happens exactly when X_0 < tau; conditioned on X_0 = v the
    // added utility is gain_1(v).
    for (const Atom& a : d1.atoms()) {
        if (a.x < tau) r += a.mass * d2.gain(a.x, inst.costs[1]);
    }
    for (const Segment& s : d1.segments()) {
        const double hi = std::min(s.hi, tau);
        if (hi > s.lo) r += s.density * integral_gain(d2, inst.costs[1], s.lo, hi);
    }
    return r;
}

double pandora2_fixed_order_regret(const PandoraInstance& inst, double tau) {
    const double sigma1 = inst.boxes[1].reservation_value(inst.costs[1]);
    return pandora2_fixed_order_reward(inst, sigma1) - pandora2_fixed_order_reward(inst, tau);
}

double reach_probability(const PandoraInstance& inst, const PandoraPolicy& policy, int box,
                         double x) {
    require_matching(inst, policy);
    double p = 1.0;
    for (int k = 0; k < policy.n(); ++k) {
        if (policy.order[k] == box) return p;
        p *= inst.boxes[policy.order[k]].cdf_left(x);
    }
    throw std::invalid_argument("reach_probability: box not in policy order");
}

double swap_difference(const PandoraInstance& inst, const PandoraPolicy& policy, int box_i,
                       int box_j) {
    require_matching(inst, policy);
    int pos_i = -1, pos_j = -1;
    for (int k = 0; k < policy.n(); ++k) {
        if (policy.order[k] == box_i) pos_i = k;
        if (policy.order[k] == box_j) pos_j = k;
    }
    if (pos_i < 0 || pos_j < 0 || std::abs(pos_i - pos_j) != 1) {
        throw std::invalid_argument("swap_difference: boxes must be adjacent in the order");
    }
    const double tau = policy.thresholds[box_i];
    if (policy.thresholds[box_j] != tau) {
        throw std::invalid_argument("swap_difference: boxes must share one threshold");
    }
    const int front = std::min(pos_i, pos_j);
    double reach = 1.0;
    for (int k = 0; k < front; ++k) reach *= inst.boxes[policy.order[k]].cdf_left(tau);
    const double gi = inst.boxes[box_i].gain(tau, inst.costs[box_i]);
    const double gj = inst.boxes[box_j].gain(tau, inst.costs[box_j]);
    const double si = 1.0 - inst.boxes[box_i].cdf_left(tau);
    const double sj = 1.0 - inst.boxes[box_j].cdf_left(tau);
    return reach * (gi * sj - gj * si);
}

double one_round_regret(const ProphetInstance& inst, const ProphetAction& action) {
    return one_round_regret(inst, prophet_opt(inst), action);
}

double one_round_regret(const ProphetInstance& inst, const ProphetOpt& opt,
                        const ProphetAction& action) {
    return opt.value() - prophet_expected_reward(inst, action);
}

double one_round_regret(const PandoraInstance& inst, const PandoraPolicy& policy) {
    const WeitzmanPolicy w = weitzman(inst);
    return pandora_expected_utility_exact(inst, w.policy) -
           pandora_expected_utility_exact(inst, policy);
}

} // namespace bandits
