#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jdrift/distance_chain.hpp"
#include "jdrift/hitting_times.hpp"
#include "jdrift/shell_combinatorics.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace jdrift;

namespace {

// Independent oracle: solve the birth-death first-step equations
//   h_0 = 0,  h_d = 1 + q_d h_{d-1} + r_d h_d + p_d h_{d+1}
// directly with a Thomas sweep in exact rationals. No closed form involved.
std::vector<BigRat> first_step_system(const DistanceChain& chain) {
    const long d_max = chain.params.d_max();
    std::vector<BigRat> diag(d_max + 1), rhs(d_max + 1);
    // unknowns h_1..h_{d_max}; the h_0 = 0 boundary removes the q_1 coupling
    for (long d = 1; d <= d_max; ++d) {
        diag[d] = chain.p_exact[d] + chain.q_exact[d];
        rhs[d] = 1;
    }
    for (long d = 2; d <= d_max; ++d) {
        const BigRat w = chain.q_exact[d] / diag[d - 1];
        diag[d] -= w * chain.p_exact[d - 1];
        rhs[d] += w * rhs[d - 1];
    }
    std::vector<BigRat> h(d_max + 1);
    h[0] = 0;
    h[d_max] = rhs[d_max] / diag[d_max];
    for (long d = d_max - 1; d >= 1; --d)
        h[d] = (rhs[d] + chain.p_exact[d] * h[d + 1]) / diag[d];
    return h;
}

}  // namespace

TEST_CASE("J(5,2) hitting times, hand-computed") {
    const JohnsonParams params(5, 2);
    CHECK(hitting_time_rw(params, 0) == BigRat(0));
    CHECK(hitting_time_rw(params, 1) == BigRat(9));
    CHECK(hitting_time_rw(params, 2) == BigRat(21, 2));
}

TEST_CASE("m outside [0, d_max] is rejected") {
    const JohnsonParams params(5, 2);
    CHECK_THROWS_AS(hitting_time_rw(params, -1), std::domain_error);
    CHECK_THROWS_AS(hitting_time_rw(params, 3), std::domain_error);
    CHECK_THROWS_AS(log_hitting_time_rw(params, 3), std::domain_error);
    CHECK_THROWS_AS(log_hitting_time_metropolis(params, 1.0, -1), std::domain_error);
    CHECK_THROWS_AS(log_hitting_time_metropolis(params, -1.0, 1), std::domain_error);
    CHECK_THROWS_AS(
        log_hitting_time_metropolis(params, std::numeric_limits<double>::infinity(), 1),
        std::domain_error);
    CHECK_THROWS_AS(
        log_hitting_time_metropolis(params, std::numeric_limits<double>::quiet_NaN(), 1),
        std::domain_error);
}

TEST_CASE("closed form equals the first-step linear system exactly") {
    for (long n = 2; n <= 12; ++n) {
        for (long k = 1; k <= n - 1; ++k) {
            const JohnsonParams params(n, k);
            if (!params.chain_supported()) continue;
            const std::vector<BigRat> solved = first_step_system(build_chain(params, 0.0));
            for (long m = 0; m <= params.d_max(); ++m) {
                CAPTURE(n); CAPTURE(k); CAPTURE(m);
                CHECK(hitting_time_rw(params, m) == solved[m]);
            }
        }
    }
}

TEST_CASE("one step from the target always costs C(n,k) - 1 on average") {
    for (long n = 2; n <= 30; ++n) {
        for (long k = 1; k <= n - 1; ++k) {
            const JohnsonParams params(n, k);
            CHECK(hitting_time_rw(params, 1) == BigRat(binomial(n, k) - 1));
        }
    }
    const JohnsonParams large(200, 40);
    const BigInt expected = binomial(200, 40) - 1;
    CHECK(hitting_time_rw(large, 1) == BigRat(expected));
    // the log-space path must agree with the exact value at this scale
    const double log_exact = log_big(expected);
    CHECK(std::fabs(log_hitting_time_rw(large, 1) - log_exact) < 1e-12 * std::fabs(log_exact));
}

TEST_CASE("hitting times are strictly increasing in the start distance") {
    for (const JohnsonParams& params :
         {JohnsonParams(7, 3), JohnsonParams(12, 5), JohnsonParams(20, 10), JohnsonParams(30, 6)}) {
        BigRat previous = 0;
        for (long m = 1; m <= params.d_max(); ++m) {
            const BigRat h = hitting_time_rw(params, m);
            CHECK(h > previous);
            previous = h;
        }
    }
}

TEST_CASE("guidance strictly shortens the wait") {
    const JohnsonParams params(20, 8);
    double previous = log_hitting_time_metropolis(params, 0.0, params.d_max());
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double value = log_hitting_time_metropolis(params, beta, params.d_max());
        CHECK(value < previous);
        previous = value;
    }
    // but never below the beta -> infinity limit, sum of 1/(q_i) adjusted terms
    CHECK(std::exp(previous) > 1.0);
}

TEST_CASE("log-space evaluation matches the exact rational") {
    for (long n = 2; n <= 30; n += 2) {
        for (long k = 1; k <= n - 1; ++k) {
            const JohnsonParams params(n, k);
            for (long m = 1; m <= params.d_max(); ++m) {
                const double log_exact = log_big_rat(hitting_time_rw(params, m));
                CAPTURE(n); CAPTURE(k); CAPTURE(m);
                CHECK(std::fabs(log_hitting_time_rw(params, m) - log_exact) <=
                      1e-10 * std::max(1.0, std::fabs(log_exact)));
            }
        }
    }
}

TEST_CASE("guided hitting time on J(5,2), hand-computed") {
    const JohnsonParams params(5, 2);
    const double e1 = std::exp(-1.0);
    CHECK(hitting_time_metropolis(params, 1.0, 1) ==
          doctest::Approx(6.0 + 3.0 * e1).epsilon(1e-13));
    CHECK(hitting_time_metropolis(params, 1.0, 2) ==
          doctest::Approx(7.5 + 3.0 * e1).epsilon(1e-13));
    CHECK(hitting_time_metropolis(params, 0.0, 2) == doctest::Approx(10.5).epsilon(1e-13));
    CHECK(hitting_time_metropolis(params, 1.0, 0) == 0.0);
    CHECK(log_hitting_time_metropolis(params, 1.0, 0) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("iid baseline is the vertex count") {
    CHECK(iid_baseline(JohnsonParams(5, 2)) == 10);
    CHECK(iid_baseline(JohnsonParams(7, 3)) == 35);
    // cross-check the binomial routine against Pascal's triangle
    std::vector<BigInt> row{1};
    for (long n = 1; n <= 200; ++n) {
        std::vector<BigInt> next(n + 1, 1);
        for (long k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
        row = std::move(next);
        if (n == 5) CHECK(row[2] == iid_baseline(JohnsonParams(5, 2)));
        if (n == 30) CHECK(row[11] == iid_baseline(JohnsonParams(30, 11)));
        if (n == 200) CHECK(row[40] == iid_baseline(JohnsonParams(200, 40)));
    }
}

TEST_CASE("walk-vs-iid log ratio on J(5,2)") {
    const JohnsonParams params(5, 2);
    CHECK(log_ratio_vs_iid(params, 1) == doctest::Approx(std::log(0.9)).epsilon(1e-13));
    CHECK(log_ratio_vs_iid(params, 2) == doctest::Approx(std::log(1.05)).epsilon(1e-13));
    CHECK_THROWS_AS(log_ratio_vs_iid(params, 0), std::domain_error);
}

TEST_CASE("near-cancellation at m = 1 survives at large scale") {
    const JohnsonParams params(200, 40);
    const double at_one = log_ratio_vs_iid(params, 1);
    CHECK(at_one < 0.0);
    CHECK(std::fabs(at_one) < 1e-40);
    // log(1 - 1/C) = -1/C to far more digits than a double can represent
    const double inv_count = rat_to_double(BigRat(1, iid_baseline(params)));
    CHECK(std::fabs(at_one + inv_count) < 1e-50);
    for (long m = 2; m <= params.d_max(); ++m) {
        CAPTURE(m);
        CHECK(log_ratio_vs_iid(params, m) > 0.0);
    }
}

TEST_CASE("the walk never strays far from the iid cost") {
    const JohnsonParams params(200, 40);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (long m = 1; m <= params.d_max(); ++m) {
        const double value = log_ratio_vs_iid(params, m);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    CHECK(hi - lo < std::log(2.0));
    CHECK(hi < std::log(2.0));
}

TEST_CASE("hitting time table carries exactness only where promised") {
    const HittingTimeTable flat = hitting_time_table(JohnsonParams(10, 4), 0.0);
    REQUIRE(flat.entries.size() == 5);
    CHECK(flat.iid == 210);
    CHECK(flat.entries[0].log_value == -std::numeric_limits<double>::infinity());
    CHECK(flat.entries[0].value == 0.0);
    for (long m = 0; m <= 4; ++m) {
        REQUIRE(flat.entries[m].exact.has_value());
        CHECK(*flat.entries[m].exact == hitting_time_rw(JohnsonParams(10, 4), m));
        if (m > 0)
            CHECK(flat.entries[m].value ==
                  doctest::Approx(rat_to_double(*flat.entries[m].exact)).epsilon(1e-10));
    }

    const HittingTimeTable guided = hitting_time_table(JohnsonParams(10, 4), 0.5);
    for (const HittingTimeEntry& entry : guided.entries) CHECK(!entry.exact.has_value());

    const HittingTimeTable beyond = hitting_time_table(JohnsonParams(70, 3), 0.0);
    for (const HittingTimeEntry& entry : beyond.entries) CHECK(!entry.exact.has_value());
    const HittingTimeTable raised = hitting_time_table(JohnsonParams(70, 3), 0.0, 70);
    REQUIRE(raised.entries[3].exact.has_value());
    CHECK(*raised.entries[3].exact == hitting_time_rw(JohnsonParams(70, 3), 3));
}

TEST_CASE("normalized farthest-shell cost climbs toward the entropy rate") {
    const std::vector<long> n_list{20, 40, 60, 80, 100};
    const std::vector<ScalingPoint> points = entropy_scaling_trend(1, 5, n_list);
    REQUIRE(points.size() == 5);
    double previous = 0.0;
    for (const ScalingPoint& point : points) {
        CHECK(point.k * 5 == point.n);
        CHECK(point.normalized_log_h > previous);
        previous = point.normalized_log_h;
    }
    const double limit = binary_entropy(0.2);
    CHECK(limit == doctest::Approx(0.500402).epsilon(1e-5));
    CHECK(points.back().normalized_log_h < limit);
    CHECK(limit - points.back().normalized_log_h < 0.06);
}

TEST_CASE("scaling trend rejects bad ratio families") {
    CHECK_THROWS_AS(entropy_scaling_trend(0, 5, {20}), std::domain_error);
    CHECK_THROWS_AS(entropy_scaling_trend(5, 5, {20}), std::domain_error);
    CHECK_THROWS_AS(entropy_scaling_trend(1, 5, {21}), std::domain_error);
    CHECK_THROWS_AS(entropy_scaling_trend(1, 2, {2}), std::domain_error);
}
