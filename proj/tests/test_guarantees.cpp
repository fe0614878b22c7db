#include "amrc/guarantees.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace amrc;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double a : v) out(i++) = a;
    return out;
}

}  // namespace

TEST_CASE("alpha") {
    CHECK(alpha_bound(vec({1.0, 2.0}), vec({1.1, 1.8}), vec({0.2, 0.3}), vec({5.0, 5.0})) == 0.0);
    CHECK(alpha_bound(vec({1.2}), vec({1.0}), vec({0.1}), vec({2.0})) == doctest::Approx(0.2));
    CHECK(alpha_bound(vec({1.2}), vec({1.0}), vec({0.1}), vec({0.0})) == 0.0);
}

TEST_CASE("beta") {
    const Vector mu = vec({0.4, -1.0});
    CHECK(beta_bound(vec({1.0, 0.0}), vec({0.0, 0.0}), vec({0.1, 0.1}), mu, mu) == 0.0);
    CHECK(beta_bound(vec({1.0, 0.5}), vec({1.0, 0.5}), vec({0.0, 0.0}), mu, vec({2.0, 1.0})) == 0.0);
    CHECK(beta_bound(vec({1.1}), vec({1.0}), vec({0.2}), vec({0.0}), vec({1.0})) ==
          doctest::Approx(0.4));  // lambda covers: 2 * 0.2 * 1
    CHECK(beta_bound(vec({1.3}), vec({1.0}), vec({0.2}), vec({0.0}), vec({1.0})) ==
          doctest::Approx(0.5));  // general: (0.3 + 0.2) * 1
}

TEST_CASE("beta general case") {
    // |tau - tau_hat| = 0.1 exceeds lambda = 0.05: (0.1 + 0.05) * |1 - 0|.
    CHECK(beta_bound(vec({1.0}), vec({1.1}), vec({0.05}), vec({0.0}), vec({1.0})) ==
          doctest::Approx(0.15));
}

TEST_CASE("alpha and beta are nonnegative") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 1000; ++trial) {
        Vector t(3), th(3), l(3), mu(3), mi(3);
        for (Index i = 0; i < 3; ++i) {
            t(i) = normal(rng);
            th(i) = normal(rng);
            l(i) = std::abs(normal(rng));
            mu(i) = normal(rng);
            mi(i) = normal(rng);
        }
        CHECK(alpha_bound(t, th, l, mu) >= 0.0);
        CHECK(beta_bound(t, th, l, mu, mi) >= 0.0);
    }
}

TEST_CASE("mistake bound") {
    const std::vector<double> risks(100, 0.2);
    const double expected = 0.2 + std::sqrt(2.0 * std::log(20.0) / 100.0);
    CHECK(std::abs(mistake_bound_per_step(risks, 0.05) - expected) <= 1e-12);
    CHECK(mistake_bound_per_step(risks, 0.05) == doctest::Approx(0.4448).epsilon(1e-4));
    CHECK(mistake_bound(risks, 0.05) == doctest::Approx(100.0 * expected));

    const std::vector<double> one = {0.5};
    CHECK(mistake_bound(one, std::exp(-0.5)) == doctest::Approx(1.5));

    CHECK(mistake_bound(risks, 1.0 - 1e-15) == doctest::Approx(20.0).epsilon(1e-6));

    CHECK_THROWS_AS(mistake_bound(risks, 0.0), InputError);
    CHECK_THROWS_AS(mistake_bound(risks, 1.0), InputError);
    CHECK_THROWS_AS(mistake_bound(std::vector<double>{}, 0.5), InputError);
    CHECK(azuma_slack(0, 0.5) == 0.0);
}
