#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jdrift/shell_combinatorics.hpp"
#include "jdrift/walker.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace jdrift;

namespace {

bool batches_identical(const TrajectoryBatch& a, const TrajectoryBatch& b) {
    return a.distances == b.distances && a.hit_steps == b.hit_steps &&
           a.mean_path == b.mean_path && a.std_path == b.std_path;
}

}  // namespace

TEST_CASE("subset state construction and element accounting") {
    const JohnsonParams params(7, 3);
    const SubsetState base = SubsetState::first_k(params);
    CHECK(base.n() == 7);
    CHECK(base.k() == 3);
    CHECK(base.elements() == std::vector<long>{0, 1, 2});
    CHECK(base.contains(2));
    CHECK(!base.contains(3));

    const SubsetState moved = SubsetState::start_at_distance(params, 2);
    CHECK(distance(moved, base) == 2);
    CHECK(SubsetState::start_at_distance(params, 0) == base);
    CHECK(distance(SubsetState::start_at_distance(params, 3), base) == 3);

    const SubsetState custom = SubsetState::from_elements(params, {6, 0, 4});
    CHECK(custom.elements() == std::vector<long>{0, 4, 6});
    CHECK(distance(custom, base) == 2);
    CHECK(custom.member_list().size() == 3);
    CHECK(custom.nonmember_list().size() == 4);
    // slot bookkeeping: every element is findable through its list
    for (long e = 0; e < 7; ++e) {
        const bool in = custom.contains(e);
        const auto& list = in ? custom.member_list() : custom.nonmember_list();
        bool found = false;
        for (int16_t entry : list) found = found || entry == e;
        CHECK(found);
    }
}

TEST_CASE("subset state rejects malformed input") {
    const JohnsonParams params(7, 3);
    CHECK_THROWS_AS(SubsetState::from_elements(params, {0, 1}), std::domain_error);
    CHECK_THROWS_AS(SubsetState::from_elements(params, {0, 1, 7}), std::domain_error);
    CHECK_THROWS_AS(SubsetState::from_elements(params, {0, 1, -1}), std::domain_error);
    CHECK_THROWS_AS(SubsetState::from_elements(params, {0, 1, 1}), std::domain_error);
    CHECK_THROWS_AS(SubsetState::start_at_distance(params, 4), std::domain_error);
    CHECK_THROWS_AS(SubsetState::start_at_distance(params, -1), std::domain_error);
    CHECK_THROWS_AS(SubsetState::first_k(JohnsonParams(300, 3)), std::domain_error);
    CHECK_THROWS_AS(distance(SubsetState::first_k(params), SubsetState::first_k(JohnsonParams(7, 2))),
                    std::domain_error);
}

TEST_CASE("swap distance against a direct set-difference count") {
    const JohnsonParams params(9, 4);
    const SubsetState target = SubsetState::from_elements(params, {0, 2, 4, 6});
    for (const std::vector<long>& elements :
         {std::vector<long>{0, 2, 4, 6}, {0, 2, 4, 7}, {1, 3, 5, 7}, {0, 1, 2, 3}, {5, 6, 7, 8}}) {
        const SubsetState x = SubsetState::from_elements(params, elements);
        long outside = 0;
        for (long e : elements) outside += target.contains(e) ? 0 : 1;
        CHECK(distance(x, target) == outside);
        CHECK(distance(target, x) == outside);  // symmetric
    }
}

TEST_CASE("seed mixing gives stable, well-spread substreams") {
    CHECK(mix_seed(12345, 0) == mix_seed(12345, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(mix_seed(12345, i));
    CHECK(seen.size() == 10000);
    CHECK(mix_seed(1, 7) != mix_seed(2, 7));
}

TEST_CASE("bounded draws are uniform and in range") {
    Rng rng(42);
    for (int i = 0; i < 100; ++i) CHECK(next_below(rng, 1) == 0);
    const std::uint64_t bound = 7;
    std::vector<long> counts(bound, 0);
    const long draws = 140000;
    for (long i = 0; i < draws; ++i) ++counts[next_below(rng, bound)];
    const double expected = double(draws) / double(bound);
    const double sigma = std::sqrt(expected * (1.0 - 1.0 / double(bound)));
    for (std::uint64_t v = 0; v < bound; ++v) {
        CAPTURE(v);
        CHECK(std::fabs(double(counts[v]) - expected) < 4.5 * sigma);
    }
}

TEST_CASE("unit draws live in [0,1) with the right mean") {
    Rng rng(7);
    double sum = 0.0;
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
        const double u = next_unit(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // sigma of the mean = 1/sqrt(12 draws)
    CHECK(std::fabs(sum / double(draws) - 0.5) < 4.0 / std::sqrt(12.0 * double(draws)));
}

TEST_CASE("one-step move frequencies match the lumped chain") {
    const JohnsonParams params(5, 2);
    const SubsetState target = SubsetState::first_k(params);
    const SubsetState start = SubsetState::start_at_distance(params, 1);
    REQUIRE(distance(start, target) == 1);
    Rng rng(2026);
    const long draws = 200000;
    long down = 0, up = 0, stay = 0;
    for (long i = 0; i < draws; ++i) {
        const long d = distance(step(start, 0.0, target, rng), target);
        if (d == 0) ++down;
        else if (d == 2) ++up;
        else ++stay;
    }
    const auto within = [&](long count, double prob) {
        const double sigma = std::sqrt(prob * (1.0 - prob) * double(draws));
        return std::fabs(double(count) - prob * double(draws)) < 4.5 * sigma;
    };
    CHECK(within(down, 1.0 / 6.0));
    CHECK(within(up, 1.0 / 3.0));
    CHECK(within(stay, 1.0 / 2.0));
}

TEST_CASE("guidance thins the uphill rate by e^{-beta}") {
    const JohnsonParams params(5, 2);
    const SubsetState target = SubsetState::first_k(params);
    const SubsetState start = SubsetState::start_at_distance(params, 1);
    Rng rng(99);
    const long draws = 200000;
    long up_guided = 0;
    for (long i = 0; i < draws; ++i)
        if (distance(step(start, 1.0, target, rng), target) == 2) ++up_guided;
    const double expected = std::exp(-1.0) / 3.0;
    const double sigma = std::sqrt(expected * (1.0 - expected) * double(draws));
    CHECK(std::fabs(double(up_guided) - expected * double(draws)) < 4.5 * sigma);

    // at beta = 50 an uphill acceptance has probability e^{-50}: never seen
    for (long i = 0; i < 10000; ++i)
        CHECK(distance(step(start, 50.0, target, rng), target) <= 1);
}

TEST_CASE("walks conserve k and move one swap at a time") {
    const JohnsonParams params(12, 5);
    const SubsetState target = SubsetState::first_k(params);
    SubsetState state = SubsetState::start_at_distance(params, 3);
    Rng rng(5);
    long d = 3;
    for (long t = 0; t < 10000; ++t) {
        const int delta = step_in_place(state, 0.3, target, rng);
        CHECK((delta == -1 || delta == 0 || delta == 1));
        d += delta;
        CHECK(long(state.elements().size()) == 5);
        CHECK(distance(state, target) == d);
    }
}

TEST_CASE("parallel and serial simulators are bit-identical") {
    WalkConfig config{JohnsonParams(9, 4), 0.4, 80, 64, 777, 2, WalkMode::full_state, false};
    const SubsetState target = SubsetState::first_k(config.params);
    const TrajectoryBatch parallel = simulate_batch(config, target);
    const TrajectoryBatch serial = simulate_batch_serial(config, target);
    CHECK(batches_identical(parallel, serial));
    // rerun reproduces itself
    CHECK(batches_identical(simulate_batch(config, target), parallel));

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const TrajectoryBatch one_thread = simulate_batch(config, target);
    omp_set_num_threads(2);
    const TrajectoryBatch two_threads = simulate_batch(config, target);
    omp_set_num_threads(saved);
    CHECK(batches_identical(one_thread, serial));
    CHECK(batches_identical(two_threads, serial));
#endif

    const DistanceChain chain = build_chain(config.params, config.beta);
    config.mode = WalkMode::lumped;
    const TrajectoryBatch lumped = simulate_lumped(config, chain);
    CHECK(batches_identical(lumped, simulate_lumped_serial(config, chain)));
}

TEST_CASE("simulator rejects inconsistent input") {
    WalkConfig config{JohnsonParams(5, 2), 0.0, 10, 4, 1, 1, WalkMode::full_state, false};
    CHECK_THROWS_AS(simulate_batch(config, SubsetState::first_k(JohnsonParams(6, 2))),
                    std::domain_error);
    const DistanceChain other_beta = build_chain(JohnsonParams(5, 2), 1.0);
    CHECK_THROWS_AS(simulate_lumped(config, other_beta), std::domain_error);

    WalkConfig bad = config;
    bad.steps = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.trajectories = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.start_distance = 3;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.beta = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("trajectory bookkeeping: starts, hits, shapes") {
    WalkConfig config{JohnsonParams(5, 2), 0.0, 60, 400, 31, 1, WalkMode::full_state, false};
    const SubsetState target = SubsetState::first_k(config.params);
    const TrajectoryBatch batch = simulate_batch(config, target);
    CHECK(long(batch.distances.size()) == config.trajectories * (config.steps + 1));
    CHECK(long(batch.mean_path.size()) == config.steps + 1);
    CHECK(batch.mean_path[0] == 1.0);
    CHECK(batch.std_path[0] == 0.0);
    for (long i = 0; i < config.trajectories; ++i) {
        CHECK(batch.at(i, 0) == 1);
        if (batch.hit_steps[i] >= 0) {
            CHECK(batch.at(i, batch.hit_steps[i]) == 0);
            for (long t = 0; t < batch.hit_steps[i]; ++t) CHECK(batch.at(i, t) != 0);
        }
        // free walk at beta = 0: the target is reflecting, every visit exits
        for (long t = 0; t < config.steps; ++t)
            if (batch.at(i, t) == 0) CHECK(batch.at(i, t + 1) == 1);
    }

    WalkConfig at_target = config;
    at_target.start_distance = 0;
    at_target.trajectories = 3;
    const TrajectoryBatch from_zero = simulate_batch(at_target, target);
    for (long i = 0; i < 3; ++i) CHECK(from_zero.hit_steps[i] == 0);
}

TEST_CASE("absorption freezes trajectories at the target") {
    WalkConfig config{JohnsonParams(5, 2), 0.0, 200, 500, 8, 2, WalkMode::full_state, true};
    const SubsetState target = SubsetState::first_k(config.params);
    const TrajectoryBatch batch = simulate_batch(config, target);
    long hits = 0;
    for (long i = 0; i < config.trajectories; ++i) {
        if (batch.hit_steps[i] < 0) continue;
        ++hits;
        for (long t = batch.hit_steps[i]; t <= config.steps; ++t) CHECK(batch.at(i, t) == 0);
    }
    CHECK(hits > 450);  // expected absorption time is ~10 steps

    config.mode = WalkMode::lumped;
    const TrajectoryBatch lumped = simulate_lumped(config, build_chain(config.params, 0.0));
    for (long i = 0; i < config.trajectories; ++i) {
        if (lumped.hit_steps[i] < 0) continue;
        for (long t = lumped.hit_steps[i]; t <= config.steps; ++t) CHECK(lumped.at(i, t) == 0);
    }
}

TEST_CASE("full-state and lumped time marginals agree") {
    const JohnsonParams params(5, 2);
    const long trajectories = 50000;
    WalkConfig config{params, 0.0, 3, trajectories, 2718, 1, WalkMode::full_state, false};
    const TrajectoryBatch full = simulate_batch(config, SubsetState::first_k(params));
    config.mode = WalkMode::lumped;
    config.base_seed = 314;
    const TrajectoryBatch lumped = simulate_lumped(config, build_chain(params, 0.0));
    std::vector<double> full_hist(3, 0.0), lumped_hist(3, 0.0);
    for (long i = 0; i < trajectories; ++i) {
        full_hist[full.at(i, 3)] += 1.0;
        lumped_hist[lumped.at(i, 3)] += 1.0;
    }
    double tv = 0.0;
    for (long d = 0; d < 3; ++d)
        tv += std::fabs(full_hist[d] - lumped_hist[d]) / double(trajectories);
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("conditional one-step means recover the drift") {
    {
        WalkConfig config{JohnsonParams(5, 2), 0.0, 1, 200000, 11, 1, WalkMode::full_state, false};
        const TrajectoryBatch batch = simulate_batch(config, SubsetState::first_k(config.params));
        const std::vector<DriftSample> samples = empirical_drift(batch);
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].d == 1);
        CHECK(samples[0].count == 200000);
        CHECK(std::fabs(samples[0].mean_delta - 1.0 / 6.0) < 0.007);
    }
    {
        WalkConfig config{JohnsonParams(200, 40), 0.0, 1, 20000, 12, 16, WalkMode::full_state, false};
        const TrajectoryBatch batch = simulate_batch(config, SubsetState::first_k(config.params));
        const std::vector<DriftSample> samples = empirical_drift(batch);
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].d == 16);
        CHECK(std::fabs(samples[0].mean_delta - 0.5) < 0.02);
    }
}

TEST_CASE("empirical drift skips post-absorption time") {
    WalkConfig config{JohnsonParams(5, 2), 0.0, 100, 2000, 6, 2, WalkMode::full_state, true};
    const TrajectoryBatch batch = simulate_batch(config, SubsetState::first_k(config.params));
    // with the frozen tail excluded, d = 0 is never the source of a counted
    // transition, so no group for it is reported at all
    for (const DriftSample& sample : empirical_drift(batch)) CHECK(sample.d != 0);
    // without absorption, d = 0 always steps to 1: conditional mean exactly 1
    config.absorbing = false;
    const TrajectoryBatch free_walk = simulate_batch(config, SubsetState::first_k(config.params));
    for (const DriftSample& sample : empirical_drift(free_walk))
        if (sample.d == 0) CHECK(sample.mean_delta == 1.0);
}

TEST_CASE("long-run shell occupancy matches the uniform law") {
    const JohnsonParams params(10, 4);
    WalkConfig config{params, 0.0, 1000000, 1, 123, 0, WalkMode::full_state, false};
    const TrajectoryBatch batch = simulate_batch(config, SubsetState::first_k(params));
    const long burn_in = 10000;
    std::vector<double> occupancy(params.d_max() + 1, 0.0);
    for (long t = burn_in; t <= config.steps; ++t) occupancy[batch.at(0, t)] += 1.0;
    const double total = double(config.steps - burn_in + 1);
    const std::vector<BigRat> law = shell_distribution(params);
    double tv = 0.0;
    for (long d = 0; d <= params.d_max(); ++d)
        tv += std::fabs(occupancy[d] / total - rat_to_double(law[d]));
    CHECK(tv / 2.0 < 0.02);
}
