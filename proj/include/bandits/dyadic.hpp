// dyadic.hpp
#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bandits {

// Exact dyadic fraction in [0,1), stored as its binary expansion msb-first:
// value = sum_k bits[k] * 2^-(k+1). With a shared length, numeric order equals
// lexicographic bit order, so comparison never loses precision even at lengths
// of tens of thousands of bits (doubles top out near 2^-1074).
class Dyadic {
public:
    Dyadic() = default;
    explicit Dyadic(std::vector<bool> bits) : bits_(std::move(bits)) {}

    // Parse "0"/"1" strings, e.g. from_bits("0011") = 3/16.
    static Dyadic from_bits(const std::string& s) {
        std::vector<bool> b;
        b.reserve(s.size());
        for (char ch : s) {
            if (ch == '0') b.push_back(false);
            else if (ch == '1') b.push_back(true);
            else throw std::invalid_argument("Dyadic::from_bits: expected only 0/1");
        }
        return Dyadic(std::move(b));
    }

    std::size_t size() const { return bits_.size(); }
    bool bit(std::size_t k) const { return bits_.at(k); }
    const std::vector<bool>& bits() const { return bits_; }

    // Trailing bits beyond either length are zero, so differing lengths compare
    // as if zero-padded.
    int compare(const Dyadic& o) const {
        const std::size_t n = bits_.size() > o.bits_.size() ? bits_.size() : o.bits_.size();
        for (std::size_t k = 0; k < n; ++k) {
            const bool a = k < bits_.size() && bits_[k];
            const bool b = k < o.bits_.size() && o.bits_[k];
            if (a != b) return a ? 1 : -1;
        }
        return 0;
    }

    bool operator<(const Dyadic& o) const { return compare(o) < 0; }
    bool operator>(const Dyadic& o) const { return compare(o) > 0; }
    bool operator==(const Dyadic& o) const { return compare(o) == 0; }

    // Exact for <= 53 significant bits, truncated beyond 64; comparisons that
    // must see deep bits go through compare(), never through this.
    double to_double() const {
        double v = 0.0;
        double w = 0.5;
        const std::size_t n = bits_.size() < 64 ? bits_.size() : 64;
        for (std::size_t k = 0; k < n; ++k) {
            if (bits_[k]) v += w;
            w *= 0.5;
        }
        return v;
    }

private:
    std::vector<bool> bits_;
};

} // namespace bandits
