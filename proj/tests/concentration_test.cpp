// concentration_test.cpp
// Confidence radii against hand-computed values, plus exact-arithmetic dyadic
// comparisons used by the adversarial environments.
#include "bandits/concentration.hpp"
#include "bandits/dyadic.hpp"

#include <cmath>

#include "test_util.hpp"

using namespace bandits;

namespace {

void test_hoeffding() {
    // width * sqrt(ln(2/delta) / (2n)) at n=200, width=1, delta=0.05.
    CHECK_NEAR(hoeffding_radius(200, 1.0, 0.05), 0.09603227913199208, 1e-12);
    // Doubling n shrinks the radius by sqrt(2).
    CHECK_NEAR(hoeffding_radius(100, 1.0, 0.05) / hoeffding_radius(200, 1.0, 0.05),
               std::sqrt(2.0), 1e-12);
    // Radius scales linearly in the range width.
    CHECK_NEAR(hoeffding_radius(50, 0.25, 0.1), 0.25 * hoeffding_radius(50, 1.0, 0.1), 1e-15);
    // Inverting the bound recovers delta.
    const double eps = hoeffding_radius(123, 1.0, 0.03);
    CHECK_NEAR(2.0 * std::exp(-2.0 * 123 * eps * eps), 0.03, 1e-12);

    CHECK_THROWS(hoeffding_radius(0, 1.0, 0.05));
    CHECK_THROWS(hoeffding_radius(10, 0.0, 0.05));
    CHECK_THROWS(hoeffding_radius(10, 1.0, 0.0));
    CHECK_THROWS(hoeffding_radius(10, 1.0, 1.0));
}

void test_bernstein() {
    // Zero variance: radius = (2c/3) ln(2/delta) / n, here exactly 2/3.
    CHECK_NEAR(bernstein_radius(100, 0.0, 1.0, 2.0 * std::exp(-100.0)), 2.0 / 3.0, 1e-12);
    // The radius satisfies the bound with equality:
    //   n eps^2 = L (2 var + 2 c eps / 3).
    const double L = std::log(2.0 / 0.01);
    const double eps = bernstein_radius(500, 0.04, 1.0, 0.01);
    CHECK_NEAR(500.0 * eps * eps, L * (2.0 * 0.04 + 2.0 * eps / 3.0), 1e-12);
    // Small variance beats the range-based radius.
    CHECK(bernstein_radius(10000, 1e-4, 1.0, 0.05) < hoeffding_radius(10000, 2.0, 0.05));

    CHECK_THROWS(bernstein_radius(10, -1.0, 1.0, 0.05));
    CHECK_THROWS(bernstein_radius(10, 0.1, -1.0, 0.05));
}

void test_dkw() {
    CHECK_NEAR(dkw_radius(4000, 0.01), 0.025734989232919926, 1e-12);
    CHECK_NEAR(dkw_radius(1, 2.0 * std::exp(-2.0)), 1.0, 1e-12);
    CHECK(dkw_radius(100, 0.05) > dkw_radius(101, 0.05));
    CHECK_THROWS(dkw_radius(-5, 0.05));
}

void test_dyadic() {
    const auto a = Dyadic::from_bits("0011");  // 3/16
    CHECK_NEAR(a.to_double(), 3.0 / 16.0, 0.0);
    CHECK(a.size() == 4);
    CHECK(!a.bit(0) && a.bit(2));

    // Zero-padded comparison: 0.01 == 0.0100, 0.011 > 0.0101.
    CHECK(Dyadic::from_bits("01") == Dyadic::from_bits("0100"));
    CHECK(Dyadic::from_bits("011") > Dyadic::from_bits("0101"));
    CHECK(Dyadic::from_bits("0101") < Dyadic::from_bits("011"));
    CHECK(Dyadic() == Dyadic::from_bits("000"));

    // Long tails keep exact order where doubles collapse: x = 2^-1 and
    // y = 2^-1 + 2^-20000 differ only past double precision.
    std::string x(20000, '0');
    x[0] = '1';
    std::string y = x;
    y[19999] = '1';
    CHECK(Dyadic::from_bits(y) > Dyadic::from_bits(x));
    CHECK(Dyadic::from_bits(x).to_double() == Dyadic::from_bits(y).to_double());

    CHECK_THROWS(Dyadic::from_bits("01a"));
}

} // namespace

int main() {
    test_hoeffding();
    test_bernstein();
    test_dkw();
    test_dyadic();
    testutil::done("concentration_test");
    return 0;
}
