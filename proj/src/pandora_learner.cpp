// pandora_learner.cpp
#include "bandits/pandora_learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bandits {
namespace {

double play_average(const PandoraPlayFn& play, const PandoraPolicy& policy, std::int64_t rounds) {
    double sum = 0.0;
    for (std::int64_t t = 0; t < rounds; ++t) sum += play(policy);
    return rounds > 0 ? sum / static_cast<double>(rounds) : 0.0;
}

void require_box(int box, int n, const char* what) {
    if (box < 0 || box >= n)
        throw std::invalid_argument(std::string(what) + ": box id out of range");
}

// Emits `ids` with larger keys first while never placing a box before one of
// its relation predecessors; equal keys fall back to the lower box id. Under
// interval dominance the relations already agree with the keys, so the
// output is key-sorted with deterministic ties.
std::vector<int> order_desc(std::vector<int> ids, const std::vector<double>& key,
                            const std::set<std::pair<int, int>>& relations) {
    std::vector<int> out;
    out.reserve(ids.size());
    while (!ids.empty()) {
        int pick = -1;
        for (int cand : ids) {
            bool blocked = false;
            for (int other : ids) {
                if (other != cand && relations.count({other, cand}) != 0) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            if (pick < 0 || key[cand] > key[pick] || (key[cand] == key[pick] && cand < pick))
                pick = cand;
        }
        if (pick < 0) throw std::logic_error("order relations contain a cycle");
        out.push_back(pick);
        ids.erase(std::find(ids.begin(), ids.end(), pick));
    }
    return out;
}

void close_transitively(std::set<std::pair<int, int>>& relations) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ab : relations) {
            for (const auto& bc : relations) {
                if (ab.second != bc.first) continue;
                std::pair<int, int> ac{ab.first, bc.second};
                if (ac.first == ac.second)
                    throw std::logic_error("order relation would close a cycle");
                if (relations.insert(ac).second) changed = true;
            }
        }
    }
}

void tighten_intervals(ConfidenceIntervals& intervals,
                       const std::set<std::pair<int, int>>& relations) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : relations) {
            Interval& ia = intervals.bounds[a];
            Interval& ib = intervals.bounds[b];
            if (ib.hi > ia.hi) {
                ib.hi = ia.hi;
                changed = true;
            }
            if (ia.lo < ib.lo) {
                ia.lo = ib.lo;
                changed = true;
            }
        }
    }
    for (const Interval& b : intervals.bounds) {
        if (b.lo > b.hi)
            throw std::logic_error("interval tightening inverted a confidence interval");
    }
}

// Signed integral of (fhat - 1) over [a, b]; negative orientation flips sign.
double imo(const EmpiricalCdf& f, double a, double b) {
    return a <= b ? f.integral_minus_one(a, b) : -f.integral_minus_one(b, a);
}

// Exact integral over [a, b] of prod_front fhat_k(x) * (fi(x) - 1) dx. Every
// factor is a step function, so the integrand is constant between the pooled
// sample points.
double front_weighted_integral(const std::vector<const EmpiricalCdf*>& front,
                               const EmpiricalCdf& fi, double a, double b) {
    if (a >= b) return 0.0;
    std::vector<double> cuts{a, b};
    auto add = [&](const std::vector<double>& samples) {
        for (double s : samples)
            if (s > a && s < b) cuts.push_back(s);
    };
    add(fi.sorted_samples());
    for (const EmpiricalCdf* f : front) add(f->sorted_samples());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        double x = cuts[t];
        double piece = fi.value(x) - 1.0;
        for (const EmpiricalCdf* f : front) piece *= f->value(x);
        total += piece * (cuts[t + 1] - cuts[t]);
    }
    return total;
}

// Node abscissae of the piecewise-linear penalty curve inside `box`: both
// endpoints plus every kink of fi strictly inside.
std::vector<double> kink_nodes(const EmpiricalCdf& fi, const Interval& box) {
    std::vector<double> nodes{box.lo};
    if (box.hi > box.lo) {
        for (double s : fi.sorted_samples())
            if (s > box.lo && s < box.hi && s != nodes.back()) nodes.push_back(s);
        nodes.push_back(box.hi);
    }
    return nodes;
}

// Values of a piecewise-linear curve at the nodes, walked from its value at
// nodes[0]; slope_at gives the constant slope on [nodes[t], nodes[t+1]).
std::vector<double> walk_curve(double value_at_lo, const std::function<double(double)>& slope_at,
                               const std::vector<double>& nodes) {
    std::vector<double> vals(nodes.size());
    vals[0] = value_at_lo;
    for (std::size_t t = 0; t + 1 < nodes.size(); ++t)
        vals[t + 1] = vals[t] + slope_at(nodes[t]) * (nodes[t + 1] - nodes[t]);
    return vals;
}

// Subinterval of [nodes.front(), nodes.back()] where the nondecreasing curve
// stays within [-lower_cut, upper_cut]; collapses to the nearer endpoint
// (degenerate) when the whole span violates one side.
AffineRefinement refine_monotone_curve(const std::vector<double>& nodes,
                                       const std::vector<double>& vals, double lower_cut,
                                       double upper_cut) {
    AffineRefinement out{{nodes.front(), nodes.back()}, false};
    if (vals.back() < -lower_cut) return {{nodes.back(), nodes.back()}, true};
    if (vals.front() > upper_cut) return {{nodes.front(), nodes.front()}, true};
    if (vals.front() < -lower_cut) {
        for (std::size_t t = 0; t + 1 < nodes.size(); ++t) {
            if (vals[t + 1] < -lower_cut) continue;
            double run = vals[t + 1] - vals[t];
            out.refined.lo = run > 0.0 ? nodes[t] + (-lower_cut - vals[t]) * (nodes[t + 1] - nodes[t]) / run
                                       : nodes[t + 1];
            break;
        }
    }
    if (vals.back() > upper_cut) {
        for (std::size_t t = nodes.size(); t-- > 1;) {
            if (vals[t - 1] > upper_cut) continue;
            double run = vals[t] - vals[t - 1];
            out.refined.hi = run > 0.0 ? nodes[t - 1] + (upper_cut - vals[t - 1]) * (nodes[t] - nodes[t - 1]) / run
                                       : nodes[t - 1];
            break;
        }
    }
    if (out.refined.lo > out.refined.hi) out.refined.lo = out.refined.hi;
    return out;
}

struct PenaltyCurve {
    std::vector<double> nodes;
    std::vector<double> vals;
};

double curve_value(const PenaltyCurve& c, double x) {
    if (x <= c.nodes.front()) return c.vals.front();
    if (x >= c.nodes.back()) return c.vals.back();
    std::size_t hi = std::upper_bound(c.nodes.begin(), c.nodes.end(), x) - c.nodes.begin();
    std::size_t lo = hi - 1;
    double run = c.nodes[hi] - c.nodes[lo];
    return run > 0.0 ? c.vals[lo] + (c.vals[hi] - c.vals[lo]) * (x - c.nodes[lo]) / run
                     : c.vals[lo];
}

// delta_hat over `span` for target CDF fi with the given front product
// values at the two arms: closed form at span.lo, then an exact walk along
// fi's kinks. The curve is linear between kinks with slope
// (p_hi - p_lo) * (1 - fi), hence nondecreasing.
PenaltyCurve penalty_curve(const std::vector<const EmpiricalCdf*>& front, const EmpiricalCdf& fi,
                           double lo, double hi, double p_lo, double p_hi, double arm_gap,
                           const Interval& span) {
    PenaltyCurve out;
    out.nodes = kink_nodes(fi, span);
    double base = front_weighted_integral(front, fi, lo, hi);
    double at_lo = p_hi * imo(fi, span.lo, hi) + p_lo * imo(fi, lo, span.lo) - base - arm_gap;
    out.vals = walk_curve(
        at_lo, [&](double x) { return (p_hi - p_lo) * (1.0 - fi.value(x)); }, out.nodes);
    return out;
}

void append_trace(PhaseReport& report, const PenaltyCurve& curve, const Interval& span) {
    for (int g = 0; g <= 4; ++g) {
        double tau = span.lo + (span.hi - span.lo) * (static_cast<double>(g) / 4.0);
        report.delta_hat_trace.emplace_back(tau, curve_value(curve, tau));
    }
}

struct FrontChoice {
    std::vector<int> front;  // ascending box ids
    double lo = 0.0;
    double hi = 0.0;
    double gap = -1.0;  // negative: nothing admissible found
};

double front_product(const std::vector<int>& front, const CdfEstimates& cdfs, double x) {
    double p = 1.0;
    for (int k : front) p *= cdfs.fhat[k].value(x);
    return p;
}

FrontChoice movebound_exact(const ConstraintGroup& group, int box, const CdfEstimates& cdfs) {
    int n = group.n();
    std::vector<int> others;
    for (int k = 0; k < n; ++k)
        if (k != box) others.push_back(k);
    int m = static_cast<int>(others.size());
    FrontChoice best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<char> in_front(n, 0);
        for (int t = 0; t < m; ++t)
            if (mask >> t & 1u) in_front[others[t]] = 1;
        bool ok = true;
        for (const auto& [a, b] : group.order_constraints) {
            // Predecessors of `box` must be in front, successors behind, and
            // the front must be closed under predecessors.
            if ((b == box && !in_front[a]) || (a == box && in_front[b]) ||
                (a != box && b != box && in_front[b] && !in_front[a])) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double hi = group.intervals.bounds[box].hi;
        double lo = group.intervals.bounds[box].lo;
        for (int t = 0; t < m; ++t) {
            int k = others[t];
            if (in_front[k]) hi = std::min(hi, group.intervals.bounds[k].hi);
            else lo = std::max(lo, group.intervals.bounds[k].lo);
        }
        if (lo > hi) continue;
        std::vector<int> front;
        for (int t = 0; t < m; ++t)
            if (mask >> t & 1u) front.push_back(others[t]);
        double gap = front_product(front, cdfs, hi) - front_product(front, cdfs, lo);
        if (gap > best.gap) best = FrontChoice{std::move(front), lo, hi, gap};
    }
    return best;
}

FrontChoice movebound_approx(const ConstraintGroup& group, int box, const CdfEstimates& cdfs) {
    int n = group.n();
    const Interval& own = group.intervals.bounds[box];
    std::vector<double> lows{own.lo};
    std::vector<double> highs{own.hi};
    for (int k = 0; k < n; ++k) {
        if (k == box) continue;
        lows.push_back(group.intervals.bounds[k].lo);
        highs.push_back(group.intervals.bounds[k].hi);
    }
    FrontChoice best;
    for (double lo : lows) {
        if (lo < own.lo || lo > own.hi) continue;
        for (double hi : highs) {
            if (hi < lo || hi > own.hi) continue;
            // 1 = must be in front, -1 = must stay behind, 0 = free.
            std::vector<int> state(n, 0);
            bool feasible = true;
            for (int k = 0; k < n; ++k) {
                if (k == box) continue;
                bool in = group.has(k, box) || group.intervals.bounds[k].lo > lo;
                bool out = group.has(box, k) || group.intervals.bounds[k].hi < hi;
                if (in && out) {
                    feasible = false;
                    break;
                }
                state[k] = in ? 1 : (out ? -1 : 0);
            }
            bool changed = feasible;
            while (changed) {
                changed = false;
                for (const auto& [a, b] : group.order_constraints) {
                    if (a == box || b == box) continue;
                    if (state[b] == 1 && state[a] != 1) {
                        if (state[a] == -1) {
                            feasible = false;
                            break;
                        }
                        state[a] = 1;
                        changed = true;
                    }
                    if (state[a] == -1 && state[b] != -1) {
                        if (state[b] == 1) {
                            feasible = false;
                            break;
                        }
                        state[b] = -1;
                        changed = true;
                    }
                }
                if (!feasible) break;
            }
            if (!feasible) continue;
            std::vector<int> elements;
            std::vector<int> elem_id(n, -1);
            for (int k = 0; k < n; ++k) {
                if (k == box || state[k] == -1) continue;
                elem_id[k] = static_cast<int>(elements.size());
                elements.push_back(k);
            }
            ProblemAInstance pa;
            for (int k : elements) {
                pa.a.push_back(cdfs.fhat[k].value(lo));
                pa.b.push_back(cdfs.fhat[k].value(hi));
            }
            for (const auto& [a, b] : group.order_constraints) {
                if (a == box || b == box || elem_id[a] < 0 || elem_id[b] < 0) continue;
                pa.implications.push_back({elem_id[b], elem_id[a]});
            }
            // Boxes forced to the front must appear in every candidate set:
            // chain them in a cycle and point every free element at it.
            std::vector<int> forced;
            for (int k : elements)
                if (state[k] == 1) forced.push_back(k);
            if (!forced.empty()) {
                for (std::size_t t = 0; t + 1 < forced.size(); ++t)
                    pa.implications.push_back({elem_id[forced[t]], elem_id[forced[t + 1]]});
                pa.implications.push_back({elem_id[forced.back()], elem_id[forced.front()]});
                for (int k : elements)
                    if (state[k] == 0) pa.implications.push_back({elem_id[k], elem_id[forced.front()]});
            }
            ProblemAResult res = problem_a_approx(pa);
            std::vector<int> front;
            for (int e : res.best_set) front.push_back(elements[e]);
            double gap = res.value;
            if (front.empty() && !forced.empty()) {
                // The scorer returned the empty set; the minimal feasible
                // front is the forced set itself.
                front = forced;
                double pb = 1.0, pav = 1.0;
                for (int k : forced) {
                    pb *= cdfs.fhat[k].value(hi);
                    pav *= cdfs.fhat[k].value(lo);
                }
                gap = pb - pav;
            }
            if (gap > best.gap) best = FrontChoice{std::move(front), lo, hi, gap};
        }
    }
    return best;
}

MoveBoundResult build_movebound(const ConstraintGroup& group, int box, const FrontChoice& choice) {
    int n = group.n();
    MoveBoundResult out;
    out.box = box;
    if (choice.gap < 0.0) {
        out.policy = canonical_policy(group);
        out.lo = out.hi = group.intervals.bounds[box].lo;
        out.reach_gap = 0.0;
        out.degenerate = true;
        return out;
    }
    std::vector<int> back;
    std::vector<char> in_front(n, 0);
    for (int k : choice.front) in_front[k] = 1;
    for (int k = 0; k < n; ++k)
        if (k != box && !in_front[k]) back.push_back(k);
    std::vector<double> key(n, 0.0);
    for (int k : choice.front) key[k] = group.intervals.bounds[k].hi;
    for (int k : back) key[k] = group.intervals.bounds[k].lo;
    out.policy.order = order_desc(choice.front, key, group.order_constraints);
    out.policy.order.push_back(box);
    std::vector<int> back_order = order_desc(back, key, group.order_constraints);
    out.policy.order.insert(out.policy.order.end(), back_order.begin(), back_order.end());
    out.policy.thresholds.assign(n, 0.0);
    for (int k : choice.front) out.policy.thresholds[k] = group.intervals.bounds[k].hi;
    for (int k : back) out.policy.thresholds[k] = group.intervals.bounds[k].lo;
    out.policy.thresholds[box] = choice.lo;
    out.lo = choice.lo;
    out.hi = choice.hi;
    out.reach_gap = choice.gap;
    return out;
}

void require_problem_a(const ProblemAInstance& inst) {
    if (inst.a.size() != inst.b.size())
        throw std::invalid_argument("problem A: a and b sizes differ");
    for (std::size_t i = 0; i < inst.a.size(); ++i) {
        if (!(inst.a[i] >= 0.0 && inst.a[i] <= inst.b[i] && inst.b[i] <= 1.0))
            throw std::invalid_argument("problem A: needs 0 <= a_i <= b_i <= 1");
    }
    for (const auto& [p, q] : inst.implications) {
        if (p < 0 || p >= inst.n() || q < 0 || q >= inst.n())
            throw std::invalid_argument("problem A: implication endpoint out of range");
    }
}

}  // namespace

void ConstraintGroup::add_constraint(int i, int j) {
    require_box(i, n(), "add_constraint");
    require_box(j, n(), "add_constraint");
    if (i == j) throw std::logic_error("order relation would close a cycle");
    if (has(j, i)) throw std::logic_error("order relation would close a cycle");
    order_constraints.insert({i, j});
    close_transitively(order_constraints);
    tighten_intervals(intervals, order_constraints);
}

void require_valid_group(const ConstraintGroup& group) {
    int n = group.n();
    if (n < 1) throw std::invalid_argument("constraint group: needs at least one box");
    for (int i = 0; i < n; ++i) {
        const Interval& b = group.intervals.bounds[i];
        if (!(b.lo >= 0.0 && b.lo <= b.hi && b.hi <= 1.0))
            throw std::invalid_argument("constraint group: interval of box " + std::to_string(i) +
                                        " must satisfy 0 <= lo <= hi <= 1");
    }
    for (const auto& [a, b] : group.order_constraints) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("constraint group: relation endpoint out of range");
        if (a == b || group.has(b, a))
            throw std::invalid_argument("constraint group: relations contain a cycle");
        if (group.intervals.bounds[a].hi < group.intervals.bounds[b].hi ||
            group.intervals.bounds[a].lo < group.intervals.bounds[b].lo)
            throw std::invalid_argument("constraint group: relation (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ") lacks interval dominance");
    }
    for (const auto& ab : group.order_constraints) {
        for (const auto& bc : group.order_constraints) {
            if (ab.second == bc.first && group.order_constraints.count({ab.first, bc.second}) == 0)
                throw std::invalid_argument("constraint group: relations are not transitively closed");
        }
    }
}

std::vector<std::string> validate_policy(const ConstraintGroup& group,
                                         const PandoraPolicy& policy) {
    std::vector<std::string> out;
    int n = group.n();
    if (policy.n() != n || static_cast<int>(policy.thresholds.size()) != n) {
        out.push_back("policy shape mismatch: expected " + std::to_string(n) + " boxes");
        return out;
    }
    std::vector<int> pos(n, -1);
    for (int k = 0; k < n; ++k) {
        int b = policy.order[k];
        if (b < 0 || b >= n || pos[b] >= 0) {
            out.push_back("order is not a permutation");
            return out;
        }
        pos[b] = k;
    }
    for (int b = 0; b < n; ++b) {
        const Interval& iv = group.intervals.bounds[b];
        double tau = policy.thresholds[b];
        if (!(tau >= iv.lo && tau <= iv.hi)) {
            std::ostringstream msg;
            msg << "threshold of box " << b << " (" << tau << ") outside its interval [" << iv.lo
                << ", " << iv.hi << "]";
            out.push_back(msg.str());
        }
    }
    for (const auto& [a, b] : group.order_constraints) {
        if (pos[a] > pos[b])
            out.push_back("order relation (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") violated: box " + std::to_string(b) + " is opened first");
    }
    for (int k = 0; k + 1 < n; ++k) {
        if (policy.thresholds[policy.order[k]] < policy.thresholds[policy.order[k + 1]])
            out.push_back("thresholds increase from position " + std::to_string(k + 1) + " to " +
                          std::to_string(k + 2));
    }
    return out;
}

ProblemAResult problem_a_exact(const ProblemAInstance& inst) {
    require_problem_a(inst);
    int n = inst.n();
    if (n > 20) throw std::runtime_error("problem A: exhaustive search capped at 20 elements");
    std::uint32_t best_mask = 0;
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (const auto& [p, q] : inst.implications) {
            if ((mask >> p & 1u) != 0 && (mask >> q & 1u) == 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double pb = 1.0, pa = 1.0;
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                pb *= inst.b[i];
                pa *= inst.a[i];
            }
        }
        if (pb - pa > best) {
            best = pb - pa;
            best_mask = mask;
        }
    }
    ProblemAResult out;
    out.value = best;
    for (int i = 0; i < n; ++i)
        if (best_mask >> i & 1u) out.best_set.push_back(i);
    return out;
}

ProblemAResult problem_a_approx(const ProblemAInstance& inst) {
    require_problem_a(inst);
    int n = inst.n();
    std::vector<std::vector<int>> adj(n);
    for (const auto& [p, q] : inst.implications) adj[p].push_back(q);
    ProblemAResult out;
    for (int j = 0; j < n; ++j) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{j};
        seen[j] = 1;
        std::vector<int> members;
        double pb = 1.0, pa = 1.0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            pb *= inst.b[v];
            pa *= inst.a[v];
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        if (pb - pa > out.value) {
            out.value = pb - pa;
            std::sort(members.begin(), members.end());
            out.best_set = std::move(members);
        }
    }
    return out;
}

MoveBoundResult find_movebound(const ConstraintGroup& group, int box, const CdfEstimates& cdfs,
                               SearchMode mode) {
    require_valid_group(group);
    int n = group.n();
    require_box(box, n, "find_movebound");
    if (static_cast<int>(cdfs.fhat.size()) != n)
        throw std::invalid_argument("find_movebound: need one CDF estimate per box");
    if (mode == SearchMode::kExact && n > 16)
        throw std::runtime_error("find_movebound: exact front-set search capped at 16 boxes");
    FrontChoice choice = mode == SearchMode::kExact ? movebound_exact(group, box, cdfs)
                                                    : movebound_approx(group, box, cdfs);
    return build_movebound(group, box, choice);
}

PhaseReport pbisa(const PandoraPlayFn& play, std::int64_t T, const ConstraintGroup& group,
                  int box, const CdfEstimates& cdfs, double epsilon, double c_explore,
                  SearchMode mode, int expected_generation, std::int64_t max_rounds) {
    require_valid_group(group);
    int n = group.n();
    require_box(box, n, "pbisa");
    if (static_cast<int>(cdfs.fhat.size()) != n)
        throw std::invalid_argument("pbisa: need one CDF estimate per box");
    if (cdfs.generation != expected_generation)
        throw std::invalid_argument("pbisa: stale CDF estimates (generation " +
                                    std::to_string(cdfs.generation) + ", expected " +
                                    std::to_string(expected_generation) + ")");
    if (T < 4) throw std::invalid_argument("pbisa: need T >= 4");
    if (!(epsilon > 16.0 / std::sqrt(static_cast<double>(T))))
        throw std::invalid_argument("pbisa: epsilon must exceed 16/sqrt(T)");

    PhaseReport out;
    out.epsilon = epsilon;
    out.refined = group.intervals;

    MoveBoundResult mb = find_movebound(group, box, cdfs, mode);
    if (mb.degenerate || mb.reach_gap <= 0.0) {
        out.flags.push_back("no_reach_gap");
        return out;
    }

    std::int64_t k = explore_round_count(T, c_explore, epsilon);
    std::int64_t budget = max_rounds < 0 ? 2 * k : max_rounds;
    std::int64_t k_hi = std::min(k, budget);
    budget -= k_hi;
    std::int64_t k_lo = std::min(k, budget);

    PandoraPolicy arm = mb.policy;
    arm.thresholds[box] = mb.hi;
    double r_hi = play_average(play, arm, k_hi);
    arm.thresholds[box] = mb.lo;
    double r_lo = play_average(play, arm, k_lo);
    out.rounds_used = k_hi + k_lo;
    if (k_hi < k || k_lo < k) {
        out.flags.push_back("truncated");
        if (k_hi == 0 || k_lo == 0) return out;
    }

    std::vector<const EmpiricalCdf*> front;
    for (int b : mb.policy.order) {
        if (b == box) break;
        front.push_back(&cdfs.fhat[b]);
    }
    double p_hi = 1.0, p_lo = 1.0;
    for (const EmpiricalCdf* f : front) {
        p_hi *= f->value(mb.hi);
        p_lo *= f->value(mb.lo);
    }
    const Interval& span = group.intervals.bounds[box];
    PenaltyCurve curve =
        penalty_curve(front, cdfs.fhat[box], mb.lo, mb.hi, p_lo, p_hi, r_hi - r_lo, span);
    AffineRefinement ref = refine_monotone_curve(curve.nodes, curve.vals, epsilon, epsilon);
    out.refined.bounds[box] = ref.refined;
    if (ref.degenerate) out.flags.push_back("degenerate");
    append_trace(out, curve, span);
    return out;
}

SwapTestResult swaptest(const PandoraPlayFn& play, std::int64_t T, const ConstraintGroup& group,
                        int i, int j, double epsilon, double c_explore) {
    require_valid_group(group);
    int n = group.n();
    require_box(i, n, "swaptest");
    require_box(j, n, "swaptest");
    if (i == j) throw std::invalid_argument("swaptest: need two distinct boxes");
    if (group.has(i, j) || group.has(j, i))
        throw std::invalid_argument("swaptest: pair is already ordered");
    if (T < 4) throw std::invalid_argument("swaptest: need T >= 4");
    const Interval& ii = group.intervals.bounds[i];
    const Interval& ij = group.intervals.bounds[j];
    double tau = std::max(ii.lo, ij.lo);
    if (tau > std::min(ii.hi, ij.hi))
        throw std::invalid_argument("swaptest: intervals of the tested pair do not overlap");

    std::vector<int> front, back;
    for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (group.has(k, i) || group.has(k, j) || group.intervals.bounds[k].lo > tau)
            front.push_back(k);
        else
            back.push_back(k);
    }
    std::vector<double> key(n, 0.0);
    for (int k : front) key[k] = group.intervals.bounds[k].hi;
    for (int k : back) key[k] = group.intervals.bounds[k].lo;
    std::vector<int> front_order = order_desc(front, key, group.order_constraints);
    std::vector<int> back_order = order_desc(back, key, group.order_constraints);

    SwapTestResult out;
    out.group = group;
    out.i_first.thresholds.assign(n, 0.0);
    for (int k : front) out.i_first.thresholds[k] = group.intervals.bounds[k].hi;
    for (int k : back) out.i_first.thresholds[k] = group.intervals.bounds[k].lo;
    out.i_first.thresholds[i] = tau;
    out.i_first.thresholds[j] = tau;
    out.j_first.thresholds = out.i_first.thresholds;
    out.i_first.order = front_order;
    out.i_first.order.push_back(i);
    out.i_first.order.push_back(j);
    out.i_first.order.insert(out.i_first.order.end(), back_order.begin(), back_order.end());
    out.j_first.order = front_order;
    out.j_first.order.push_back(j);
    out.j_first.order.push_back(i);
    out.j_first.order.insert(out.j_first.order.end(), back_order.begin(), back_order.end());
    for (const PandoraPolicy* p : {&out.i_first, &out.j_first}) {
        std::vector<std::string> viol = validate_policy(group, *p);
        if (!viol.empty())
            throw std::logic_error("swaptest: probe policy invalid: " + viol.front());
    }

    std::int64_t k_rounds = explore_round_count(T, c_explore, static_cast<double>(n) * epsilon);
    double r_ij = play_average(play, out.i_first, k_rounds);
    double r_ji = play_average(play, out.j_first, k_rounds);
    out.rounds_used = 2 * k_rounds;
    out.gap = r_ij - r_ji;
    if (std::abs(out.gap) > 40.0 * n * epsilon) {
        out.constraint_added = true;
        out.added = out.gap > 0.0 ? std::pair<int, int>{i, j} : std::pair<int, int>{j, i};
        out.group.add_constraint(out.added.first, out.added.second);
    }
    return out;
}

PanAlgReport pan_alg(const PandoraPlayFn& play, const ConstraintGroup& group,
                     const std::vector<double>& costs, double epsilon, const LearnerConfig& cfg,
                     SearchMode mode) {
    require_valid_group(group);
    int n = group.n();
    if (static_cast<int>(costs.size()) != n)
        throw std::invalid_argument("pan_alg: need one cost per box");
    if (!(epsilon > 16.0 / std::sqrt(static_cast<double>(cfg.T))))
        throw std::invalid_argument("pan_alg: epsilon must exceed 16/sqrt(T)");

    PanAlgReport rep;
    rep.group = group;
    std::int64_t per_box = estimate_sample_count(cfg.T, cfg.c_estimate, epsilon, n);
    int generation = 0;
    for (int i = 0; i < n; ++i) {
        ++generation;
        CdfEstimates est = estimate_pandora_cdfs(play, costs, per_box, generation);
        est.product_error_budget = std::sqrt(epsilon);
        rep.rounds_estimate += static_cast<std::int64_t>(n) * per_box;
        PhaseReport pr =
            pbisa(play, cfg.T, rep.group, i, est, epsilon, cfg.c_explore, mode, generation);
        rep.rounds_pbisa += pr.rounds_used;
        ++rep.pbisa_calls;
        if (pr.has_flag("no_reach_gap")) rep.flags.push_back("no_reach_gap:" + std::to_string(i));
        if (pr.has_flag("degenerate")) rep.flags.push_back("degenerate:" + std::to_string(i));
        rep.group.intervals = pr.refined;
    }
    tighten_intervals(rep.group.intervals, rep.group.order_constraints);
    bool added = true;
    while (added) {
        added = false;
        for (int a = 0; a < n && !added; ++a) {
            for (int b = 0; b < n && !added; ++b) {
                if (a == b || rep.group.has(a, b) || rep.group.has(b, a)) continue;
                if (rep.group.intervals.bounds[a].lo > rep.group.intervals.bounds[b].hi) {
                    rep.group.add_constraint(a, b);
                    added = true;
                }
            }
        }
    }

    std::deque<std::pair<int, int>> queue;
    std::set<std::pair<int, int>> queued;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (rep.group.has(a, b) || rep.group.has(b, a)) continue;
            queue.push_back({a, b});
            queued.insert({a, b});
        }
    }
    std::int64_t test_budget = 4LL * n * n * n;
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        queued.erase({a, b});
        if (rep.group.has(a, b) || rep.group.has(b, a)) continue;
        if (rep.group.intervals.bounds[a].lo > rep.group.intervals.bounds[b].hi) {
            rep.group.add_constraint(a, b);
            continue;
        }
        if (rep.group.intervals.bounds[b].lo > rep.group.intervals.bounds[a].hi) {
            rep.group.add_constraint(b, a);
            continue;
        }
        if (rep.swaptest_calls >= test_budget)
            throw std::logic_error("pan_alg: swaptest budget 4n^3 exceeded");
        std::vector<double> lows(n);
        for (int k = 0; k < n; ++k) lows[k] = rep.group.intervals.bounds[k].lo;
        SwapTestResult st = swaptest(play, cfg.T, rep.group, a, b, epsilon, cfg.c_explore);
        ++rep.swaptest_calls;
        rep.rounds_swaptest += st.rounds_used;
        rep.group = st.group;
        if (!st.constraint_added) continue;
        for (int k = 0; k < n; ++k) {
            if (rep.group.intervals.bounds[k].lo == lows[k]) continue;
            for (int k2 = 0; k2 < n; ++k2) {
                if (k2 == k || rep.group.has(k, k2) || rep.group.has(k2, k)) continue;
                std::pair<int, int> p{std::min(k, k2), std::max(k, k2)};
                if (queued.insert(p).second) queue.push_back(p);
            }
        }
    }
    require_valid_group(rep.group);
    return rep;
}

PandoraPolicy apply_op(const PandoraPolicy& policy, const PolicyOp& op) {
    PandoraPolicy out = policy;
    int n = out.n();
    if (op.box < 0 || op.box >= n) throw std::invalid_argument("apply_op: box id out of range");
    if (!op.swap) {
        if (out.thresholds[op.box] != op.from)
            throw std::invalid_argument("apply_op: move does not match the current threshold");
        out.thresholds[op.box] = op.to;
        return out;
    }
    if (op.other < 0 || op.other >= n || op.other == op.box)
        throw std::invalid_argument("apply_op: swap partner out of range");
    auto it = std::find(out.order.begin(), out.order.end(), op.box);
    std::size_t pos = static_cast<std::size_t>(it - out.order.begin());
    if (it == out.order.end() || pos == 0 || out.order[pos - 1] != op.other)
        throw std::invalid_argument("apply_op: swap needs its partner directly before the box");
    if (out.thresholds[op.box] != out.thresholds[op.other])
        throw std::invalid_argument("apply_op: swapped boxes must share a threshold");
    std::swap(out.order[pos - 1], out.order[pos]);
    return out;
}

PandoraPolicy canonical_policy(const ConstraintGroup& group) {
    require_valid_group(group);
    int n = group.n();
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<double> key(n);
    for (int k = 0; k < n; ++k) key[k] = group.intervals.bounds[k].lo;
    PandoraPolicy out;
    out.order = order_desc(ids, key, group.order_constraints);
    out.thresholds = key;
    return out;
}

std::vector<PolicyOp> convert_policy(const ConstraintGroup& group, const PandoraPolicy& policy) {
    std::vector<std::string> viol = validate_policy(group, policy);
    if (!viol.empty())
        throw std::invalid_argument("convert_policy: input policy invalid: " + viol.front());
    // Build the canonical -> policy sequence by settling target positions
    // front to back (raise the settling box's threshold to each predecessor's
    // and swap past it, then set its target threshold), and return the
    // inverted sequence.
    PandoraPolicy cur = canonical_policy(group);
    int n = cur.n();
    std::vector<PolicyOp> forward;
    for (int pos = 0; pos < n; ++pos) {
        int b = policy.order[pos];
        int cp = static_cast<int>(std::find(cur.order.begin(), cur.order.end(), b) -
                                  cur.order.begin());
        while (cp > pos) {
            int p = cur.order[cp - 1];
            if (cur.thresholds[b] != cur.thresholds[p]) {
                forward.push_back(PolicyOp{false, b, -1, cur.thresholds[b], cur.thresholds[p]});
                cur.thresholds[b] = cur.thresholds[p];
            }
            forward.push_back(PolicyOp{true, b, p, 0.0, 0.0});
            std::swap(cur.order[cp - 1], cur.order[cp]);
            --cp;
        }
        if (cur.thresholds[b] != policy.thresholds[b]) {
            forward.push_back(PolicyOp{false, b, -1, cur.thresholds[b], policy.thresholds[b]});
            cur.thresholds[b] = policy.thresholds[b];
        }
    }
    std::vector<PolicyOp> out;
    out.reserve(forward.size());
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
        if (it->swap) out.push_back(PolicyOp{true, it->other, it->box, 0.0, 0.0});
        else out.push_back(PolicyOp{false, it->box, -1, it->to, it->from});
    }
    return out;
}

PandoraPolicy single_open_policy(int n, int box) {
    if (n < 1) throw std::invalid_argument("single_open_policy: need n >= 1");
    require_box(box, n, "single_open_policy");
    PandoraPolicy p;
    p.order.reserve(static_cast<std::size_t>(n));
    p.order.push_back(box);
    for (int k = 0; k < n; ++k)
        if (k != box) p.order.push_back(k);
    p.thresholds.assign(static_cast<std::size_t>(n), 0.0);
    return p;
}

std::vector<double> harvest_box_samples(const PandoraPlayFn& play, int n, int box, double cost,
                                        std::int64_t count) {
    if (count < 1) throw std::invalid_argument("harvest_box_samples: need count >= 1");
    PandoraPolicy p = single_open_policy(n, box);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (std::int64_t t = 0; t < count; ++t) samples.push_back(play(p) + cost);
    return samples;
}

CdfEstimates estimate_pandora_cdfs(const PandoraPlayFn& play, const std::vector<double>& costs,
                                   std::int64_t samples_per_box, int generation) {
    int n = static_cast<int>(costs.size());
    if (n < 1) throw std::invalid_argument("estimate_pandora_cdfs: need at least one box");
    CdfEstimates out;
    out.generation = generation;
    for (int b = 0; b < n; ++b)
        out.fhat.emplace_back(harvest_box_samples(play, n, b, costs[b], samples_per_box),
                              generation);
    return out;
}

double empirical_gain(const EmpiricalCdf& fhat, double cost, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("empirical_gain: v outside [0, 1]");
    return -cost + (1.0 - v) - fhat.integral(v, 1.0);
}

PandoraInit init_pandora(const PandoraPlayFn& play, int n, std::int64_t T, double c_init,
                         const std::vector<double>& costs) {
    if (n < 1) throw std::invalid_argument("init_pandora: need n >= 1");
    if (static_cast<int>(costs.size()) != n)
        throw std::invalid_argument("init_pandora: need one cost per box");
    std::int64_t N = init_sample_count(T, c_init, 1);
    double half = 0.5 * std::pow(static_cast<double>(T), -0.25);
    PandoraInit out;
    out.cdfs.generation = 0;
    out.cdfs.product_error_budget = std::pow(static_cast<double>(T), -0.25);
    out.intervals.bounds.assign(static_cast<std::size_t>(n), Interval{});
    for (int b = 0; b < n; ++b) {
        out.cdfs.fhat.emplace_back(harvest_box_samples(play, n, b, costs[b], N), 0);
        const EmpiricalCdf& f = out.cdfs.fhat.back();
        // The negated empirical gain is nondecreasing: value cost - mean_hat
        // at zero, slope 1 - fhat.
        std::vector<double> nodes = kink_nodes(f, Interval{0.0, 1.0});
        double at_zero = -empirical_gain(f, costs[b], 0.0);
        std::vector<double> vals =
            walk_curve(at_zero, [&](double x) { return 1.0 - f.value(x); }, nodes);
        AffineRefinement band = refine_monotone_curve(nodes, vals, half, half);
        if (band.degenerate)
            throw std::runtime_error("init_pandora: empirical gain of box " + std::to_string(b) +
                                     " never enters the bracketing band (cost too large)");
        out.intervals.bounds[b] = band.refined;
    }
    out.rounds_used = static_cast<std::int64_t>(n) * N;
    return out;
}

PhaseReport isa_fixed_order(const PandoraPlayFn& play, std::int64_t T, const Interval& interval,
                            const EmpiricalCdf& fhat0, const EmpiricalCdf& fhat1, double epsilon,
                            double c_explore, std::int64_t max_rounds) {
    if (T < 4) throw std::invalid_argument("isa_fixed_order: need T >= 4");
    if (!(epsilon > 1.0 / std::sqrt(static_cast<double>(T))))
        throw std::invalid_argument("isa_fixed_order: epsilon must exceed 1/sqrt(T)");
    if (!(interval.lo >= 0.0 && interval.lo <= interval.hi && interval.hi <= 1.0))
        throw std::invalid_argument("isa_fixed_order: interval must satisfy 0 <= lo <= hi <= 1");

    PhaseReport out;
    out.epsilon = epsilon;
    out.refined.bounds = {interval};

    std::int64_t k = explore_round_count(T, c_explore, epsilon);
    std::int64_t budget = max_rounds < 0 ? 2 * k : max_rounds;
    std::int64_t k_lo = std::min(k, budget);
    budget -= k_lo;
    std::int64_t k_hi = std::min(k, budget);

    PandoraPolicy arm{{0, 1}, {1.0, interval.lo}};
    double r_lo = play_average(play, arm, k_lo);
    arm.thresholds[1] = interval.hi;
    double r_hi = play_average(play, arm, k_hi);
    out.rounds_used = k_lo + k_hi;
    if (k_lo < k || k_hi < k) {
        out.flags.push_back("truncated");
        if (k_lo == 0 || k_hi == 0) return out;
    }

    std::vector<const EmpiricalCdf*> front{&fhat0};
    double p_lo = fhat0.value(interval.lo);
    double p_hi = fhat0.value(interval.hi);
    PenaltyCurve curve = penalty_curve(front, fhat1, interval.lo, interval.hi, p_lo, p_hi,
                                       r_hi - r_lo, interval);
    AffineRefinement ref =
        refine_monotone_curve(curve.nodes, curve.vals, 4.0 * epsilon, 4.0 * epsilon);
    out.refined.bounds[0] = ref.refined;
    if (ref.degenerate) out.flags.push_back("degenerate");
    append_trace(out, curve, interval);
    return out;
}

} // namespace bandits
