// distribution.cpp
#include "bandits/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bandits {

namespace {

constexpr double kMassTolerance = 1e-12;

void fail(const std::string& what) { throw std::invalid_argument(what); }

} // namespace

BoundedDistribution::BoundedDistribution(std::vector<Atom> atoms, std::vector<Segment> segments)
    : atoms_(std::move(atoms)), segments_(std::move(segments)) {
    for (const Atom& a : atoms_) {
        if (!(a.x >= 0.0 && a.x <= 1.0)) fail("distribution: atom location outside [0,1]");
        if (!(a.mass > 0.0)) fail("distribution: atom mass must be positive");
    }
    for (const Segment& s : segments_) {
        if (!(s.lo >= 0.0 && s.hi <= 1.0 && s.lo < s.hi)) fail("distribution: bad segment bounds");
        if (!(s.density > 0.0)) fail("distribution: segment density must be positive");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    // Merge exact-duplicate atom locations; overlapping segments are rejected.
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
        if (!merged.empty() && merged.back().x == a.x) merged.back().mass += a.mass;
        else merged.push_back(a);
    }
    atoms_ = std::move(merged);
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].lo < segments_[i - 1].hi) fail("distribution: overlapping segments");
    }

    double total = 0.0;
    mean_ = 0.0;
    for (const Atom& a : atoms_) {
        total += a.mass;
        mean_ += a.x * a.mass;
    }
    for (const Segment& s : segments_) {
        const double m = s.density * (s.hi - s.lo);
        total += m;
        mean_ += s.density * (s.hi * s.hi - s.lo * s.lo) / 2.0;
    }
    if (std::abs(total - 1.0) > kMassTolerance) fail("distribution: total mass must be 1");
    if (atoms_.empty() && segments_.empty()) fail("distribution: empty law");

    support_min_ = 1.0;
    support_max_ = 0.0;
    breakpoints_.push_back(0.0);
    breakpoints_.push_back(1.0);
    for (const Atom& a : atoms_) {
        breakpoints_.push_back(a.x);
        support_min_ = std::min(support_min_, a.x);
        support_max_ = std::max(support_max_, a.x);
    }
    for (const Segment& s : segments_) {
        breakpoints_.push_back(s.lo);
        breakpoints_.push_back(s.hi);
        support_min_ = std::min(support_min_, s.lo);
        support_max_ = std::max(support_max_, s.hi);
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

BoundedDistribution BoundedDistribution::point(double x) {
    return BoundedDistribution({Atom{x, 1.0}}, {});
}

BoundedDistribution BoundedDistribution::uniform(double lo, double hi) {
    return BoundedDistribution({}, {Segment{lo, hi, 1.0 / (hi - lo)}});
}

BoundedDistribution BoundedDistribution::from_atoms(std::vector<Atom> atoms) {
    return BoundedDistribution(std::move(atoms), {});
}

double BoundedDistribution::cdf(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cdf: x outside [0,1]");
    double p = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x <= x) p += a.mass;
    }
    for (const Segment& s : segments_) {
        if (x >= s.hi) p += s.density * (s.hi - s.lo);
        else if (x > s.lo) p += s.density * (x - s.lo);
    }
    return p;
}

double BoundedDistribution::cdf_left(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cdf_left: x outside [0,1]");
    double p = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x < x) p += a.mass;
    }
    for (const Segment& s : segments_) {
        if (x >= s.hi) p += s.density * (s.hi - s.lo);
        else if (x > s.lo) p += s.density * (x - s.lo);
    }
    return p;
}

double BoundedDistribution::partial_mean_above(double tau, bool include_tau) const {
    double v = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x > tau || (include_tau && a.x == tau)) v += a.x * a.mass;
    }
    for (const Segment& s : segments_) {
        const double lo = std::max(s.lo, tau);
        if (lo < s.hi) v += s.density * (s.hi * s.hi - lo * lo) / 2.0;
    }
    return v;
}

double BoundedDistribution::integral_cdf(double a, double b) const {
    if (b < a) fail("integral_cdf: requires a <= b");
    // F vanishes below 0 and is 1 above 1.
    double total = 0.0;
    if (b > 1.0) {
        total += b - std::max(a, 1.0);
        b = 1.0;
    }
    a = std::max(a, 0.0);
    if (a >= b) return total;
    // Walk structural pieces: on each gap F is linear with slope density_at.
    auto lo_it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
    double x = a;
    while (x < b) {
        const double next = (lo_it == breakpoints_.end()) ? b : std::min(*lo_it, b);
        if (next > x) {
            const double d = density_at(x);
            const double base = cdf(x);
            total += base * (next - x) + d * (next - x) * (next - x) / 2.0;
            x = next;
        }
        if (lo_it != breakpoints_.end() && *lo_it <= x) ++lo_it;
    }
    return total;
}

double BoundedDistribution::gain(double v, double cost) const {
    if (v >= 1.0) return -cost;
    v = std::max(v, 0.0);
    // E[max(X - v, 0)] = int_v^1 (1 - F), exact for atoms and segments alike.
    return -cost + (1.0 - v) - integral_cdf(v, 1.0);
}

double BoundedDistribution::reservation_value(double cost) const {
    if (cost < 0.0) fail("reservation_value: negative cost");
    if (cost > mean_ + 1e-15) fail("reservation_value: cost exceeds mean, gain has no root in [0,1]");
    // gain is continuous, nonincreasing, gain(0) = mean - cost >= 0, and
    // piecewise quadratic between breakpoints. Return the first zero.
    double gp = gain(0.0, cost);
    if (gp <= 0.0) return 0.0;
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        const double p = breakpoints_[k];
        const double q = breakpoints_[k + 1];
        if (q <= 0.0) continue;
        const double gq = gain(q, cost);
        if (gq > 0.0) {
            gp = gq;
            continue;
        }
        // Root inside (p, q]: gain(p + t) = gp + (F(p) - 1) t + d t^2 / 2.
        const double b = cdf(p) - 1.0;
        const double d = density_at(p);
        double t;
        if (d > 0.0) {
            const double disc = b * b - 2.0 * d * gp;
            const double root = std::sqrt(std::max(disc, 0.0));
            t = 2.0 * gp / (-b + root);  // smaller positive root, stable form
        } else if (b < 0.0) {
            t = gp / (-b);
        } else {
            t = 0.0;  // gain constant on the piece and gq <= 0 forces gp <= 0
        }
        return std::min(p + t, q);
    }
    return 1.0;
}

double BoundedDistribution::sample(double u01) const {
    // Inverse CDF over the merged piece sequence. Atom at x consumes [c, c+mass).
    double c = 0.0;
    std::size_t ai = 0, si = 0;
    while (ai < atoms_.size() || si < segments_.size()) {
        const bool take_atom =
            si >= segments_.size() ||
            (ai < atoms_.size() && atoms_[ai].x <= segments_[si].lo);
        if (take_atom) {
            const Atom& a = atoms_[ai++];
            if (u01 < c + a.mass) return a.x;
            c += a.mass;
        } else {
            const Segment& s = segments_[si++];
            const double m = s.density * (s.hi - s.lo);
            if (u01 < c + m) return s.lo + (u01 - c) / s.density;
            c += m;
        }
    }
    return support_max_;
}

double BoundedDistribution::density_at(double x) const {
    for (const Segment& s : segments_) {
        if (x >= s.lo && x < s.hi) return s.density;
    }
    return 0.0;
}

BoundedDistribution BoundedDistribution::scaled(double factor) const {
    if (!(factor > 0.0 && factor <= 1.0)) fail("scaled: factor must be in (0,1]");
    std::vector<Atom> a = atoms_;
    std::vector<Segment> s = segments_;
    for (Atom& at : a) at.x *= factor;
    for (Segment& sg : s) {
        sg.lo *= factor;
        sg.hi *= factor;
        sg.density /= factor;
    }
    return BoundedDistribution(std::move(a), std::move(s));
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples, int generation)
    : sorted_(std::move(samples)), generation_(generation) {
    std::sort(sorted_.begin(), sorted_.end());
    prefix_.resize(sorted_.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
}

double EmpiricalCdf::value(double x) const {
    if (sorted_.empty()) throw std::logic_error("EmpiricalCdf: no samples");
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::integral(double a, double b) const {
    if (sorted_.empty()) throw std::logic_error("EmpiricalCdf: no samples");
    if (b < a) throw std::invalid_argument("EmpiricalCdf::integral: requires a <= b");
    // int_a^b F_hat = (1/N) [ (b-a) #{s <= a} + sum_{a < s_k <= b} (b - s_k) ].
    const double n = static_cast<double>(sorted_.size());
    const auto ia = std::upper_bound(sorted_.begin(), sorted_.end(), a) - sorted_.begin();
    const auto ib = std::upper_bound(sorted_.begin(), sorted_.end(), b) - sorted_.begin();
    const double inner_count = static_cast<double>(ib - ia);
    const double inner_sum = prefix_[static_cast<std::size_t>(ib)] - prefix_[static_cast<std::size_t>(ia)];
    return ((b - a) * static_cast<double>(ia) + b * inner_count - inner_sum) / n;
}

PandoraInstance PandoraInstance::normalized() const {
    if (is_scaled()) return *this;
    PandoraInstance out;
    const double f = 1.0 / (2.0 * static_cast<double>(n()));
    out.scale = f;
    out.costs = costs;
    for (double& c : out.costs) c *= f;
    out.boxes.reserve(boxes.size());
    for (const auto& b : boxes) out.boxes.push_back(b.scaled(f));
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& context) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail("instance parse: bad number '" + s + "' in " + context);
        return 0.0;
    }
    if (pos != s.size()) fail("instance parse: trailing junk in number '" + s + "' in " + context);
    return v;
}

} // namespace

BoundedDistribution parse_distribution_line(const std::string& line,
                                            std::optional<double>* cost_out) {
    std::vector<Atom> atoms;
    std::vector<Segment> segments;
    std::optional<double> cost;
    for (const std::string& raw : split(line, ';')) {
        const std::string clause = trim(raw);
        if (clause.empty()) continue;
        const std::size_t eq = clause.find('=');
        if (eq == std::string::npos) fail("instance parse: clause without '=': " + clause);
        const std::string key = trim(clause.substr(0, eq));
        const std::string payload = trim(clause.substr(eq + 1));
        if (key == "atoms") {
            if (payload.empty()) continue;
            for (const std::string& item : split(payload, ',')) {
                const auto parts = split(trim(item), ':');
                if (parts.size() != 2) fail("instance parse: atom needs loc:mass, got '" + item + "'");
                atoms.push_back(Atom{parse_number(trim(parts[0]), "atoms"),
                                     parse_number(trim(parts[1]), "atoms")});
            }
        } else if (key == "segments") {
            if (payload.empty()) continue;
            for (const std::string& item : split(payload, ',')) {
                const auto parts = split(trim(item), ':');
                if (parts.size() != 3) fail("instance parse: segment needs lo:hi:density, got '" + item + "'");
                segments.push_back(Segment{parse_number(trim(parts[0]), "segments"),
                                           parse_number(trim(parts[1]), "segments"),
                                           parse_number(trim(parts[2]), "segments")});
            }
        } else if (key == "cost") {
            cost = parse_number(payload, "cost");
        } else {
            fail("instance parse: unknown section '" + key + "'");
        }
    }
    if (cost_out) *cost_out = cost;
    else if (cost) fail("instance parse: unexpected cost section");
    return BoundedDistribution(std::move(atoms), std::move(segments));
}

namespace {

template <typename PerLine>
void for_each_box_line(const std::string& text, PerLine fn) {
    int lineno = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        try {
            fn(line);
        } catch (const std::invalid_argument& e) {
            fail("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

} // namespace

ProphetInstance parse_prophet_instance(const std::string& text) {
    ProphetInstance inst;
    for_each_box_line(text, [&](const std::string& line) {
        std::optional<double> cost;
        inst.boxes.push_back(parse_distribution_line(line, &cost));
        if (cost) fail("prophet boxes must not carry a cost");
    });
    if (inst.n() < 2) fail("prophet instance needs at least 2 boxes");
    return inst;
}

PandoraInstance parse_pandora_instance(const std::string& text) {
    PandoraInstance inst;
    for_each_box_line(text, [&](const std::string& line) {
        std::optional<double> cost;
        inst.boxes.push_back(parse_distribution_line(line, &cost));
        if (!cost) fail("inspection boxes must carry a cost");
        if (*cost < 0.0) fail("inspection cost must be nonnegative");
        inst.costs.push_back(*cost);
    });
    if (inst.n() < 2) fail("inspection instance needs at least 2 boxes");
    return inst;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ProphetInstance load_prophet_instance_file(const std::string& path) {
    return parse_prophet_instance(read_file(path));
}

PandoraInstance load_pandora_instance_file(const std::string& path) {
    return parse_pandora_instance(read_file(path));
}

std::string format_distribution_line(const BoundedDistribution& d, std::optional<double> cost) {
    std::ostringstream ss;
    ss.precision(17);
    bool first = true;
    if (!d.atoms().empty()) {
        ss << "atoms= ";
        for (std::size_t i = 0; i < d.atoms().size(); ++i) {
            if (i) ss << ",";
            ss << d.atoms()[i].x << ":" << d.atoms()[i].mass;
        }
        first = false;
    }
    if (!d.segments().empty()) {
        if (!first) ss << " ; ";
        ss << "segments= ";
        for (std::size_t i = 0; i < d.segments().size(); ++i) {
            if (i) ss << ",";
            ss << d.segments()[i].lo << ":" << d.segments()[i].hi << ":" << d.segments()[i].density;
        }
        first = false;
    }
    if (cost) {
        if (!first) ss << " ; ";
        ss << "cost= " << *cost;
    }
    return ss.str();
}

} // namespace bandits
