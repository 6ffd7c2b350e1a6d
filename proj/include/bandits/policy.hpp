// policy.hpp
#pragma once
#include <limits>
#include <string>
#include <vector>

namespace bandits {

// Threshold sentinel meaning "never accept here": no realized value exceeds
// it. Distinct from tau = 1 so that atoms at 1 are never silently accepted.
inline constexpr double kAbove = std::numeric_limits<double>::infinity();

inline bool is_above(double tau) { return tau == kAbove; }

// Selection-game action: take the first box i whose draw strictly exceeds
// thresholds[i]; the last box has no threshold and is taken whenever reached,
// so thresholds has n-1 entries, each in [0,1] or kAbove.
struct ProphetAction {
    std::vector<double> thresholds;
};

// Inspection-game action: boxes are opened along `order`; before opening the
// box at position k >= 1 the game stops if the best value opened so far is
// >= that box's threshold. The first box is always opened. Thresholds are
// indexed by box id, must lie in [0,1], and must be nonincreasing along the
// order. A trailing threshold of 0 therefore acts as an always-stop barrier:
// "open this box, then stop", which is how single-box free samples are played.
struct PandoraPolicy {
    std::vector<int> order;          // permutation of {0, ..., n-1}
    std::vector<double> thresholds;  // size n, indexed by box id

    int n() const { return static_cast<int>(order.size()); }
};

// Throw std::invalid_argument describing the first structural violation.
void require_well_formed(const ProphetAction& action, int n);
void require_well_formed(const PandoraPolicy& policy);

// Compact digests for trace files. Prophet: thresholds joined by ';' with
// kAbove printed as "above". Pandora: 1-based order, then thresholds along
// the order, e.g. "2;1|0.55;0.3". Numbers use shortest round-trip form.
std::string describe(const ProphetAction& action);
std::string describe(const PandoraPolicy& policy);

} // namespace bandits
