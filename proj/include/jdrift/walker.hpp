#pragma once

#include "jdrift/distance_chain.hpp"
#include "jdrift/params.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace jdrift {

// One configuration x: a k-subset of {0..n-1}. Alongside the bit-set, the
// member/nonmember index lists (plus each element's slot in its list) give
// O(1) uniform swap proposals.
class SubsetState {
public:
    static constexpr long max_n = 256;

    SubsetState() = default;

    // The canonical subset {0..k-1}.
    static SubsetState first_k(const JohnsonParams& params);

    // A state at the requested swap distance from first_k(params), built by
    // swapping the first m members out. Distance-transitivity makes the
    // specific choice irrelevant.
    static SubsetState start_at_distance(const JohnsonParams& params, long m);

    static SubsetState from_elements(const JohnsonParams& params, const std::vector<long>& elements);

    long n() const { return n_; }
    long k() const { return k_; }
    bool contains(long element) const {
        return (words_[element >> 6] >> (element & 63)) & 1u;
    }
    const std::vector<int16_t>& member_list() const { return members_; }
    const std::vector<int16_t>& nonmember_list() const { return nonmembers_; }

    // Swap members_[member_slot] out and nonmembers_[nonmember_slot] in.
    void swap_slots(long member_slot, long nonmember_slot);

    std::vector<long> elements() const;  // sorted member view

    friend long distance(const SubsetState& x, const SubsetState& target);
    friend bool operator==(const SubsetState& a, const SubsetState& b) {
        return a.n_ == b.n_ && a.k_ == b.k_ && a.words_ == b.words_;
    }

private:
    long n_ = 0;
    long k_ = 0;
    std::array<std::uint64_t, max_n / 64> words_{};
    std::vector<int16_t> members_;
    std::vector<int16_t> nonmembers_;
    std::vector<int16_t> slot_;  // position of each element in its list
};

// Swap distance |x \ target|; one per swap needed to turn x into target.
long distance(const SubsetState& x, const SubsetState& target);

// Deterministic 64-bit stream splitter: substream seed for one trajectory.
std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index);

using Rng = std::mt19937_64;

// Uniform draw in [0, bound) by rejection, identical on every platform
// (std::uniform_int_distribution is implementation-defined, so it is not
// usable under the bit-reproducibility contract).
std::uint64_t next_below(Rng& rng, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double next_unit(Rng& rng);

// One proposal/acceptance round, in place. Proposes a uniform
// (member, nonmember) swap; distance-increasing proposals are accepted with
// probability e^{-beta}, everything else always. Returns the realized
// distance change (0 on rejection).
int step_in_place(SubsetState& state, double beta, const SubsetState& target, Rng& rng);

// Value-returning convenience wrapper over step_in_place.
SubsetState step(const SubsetState& state, double beta, const SubsetState& target, Rng& rng);

enum class WalkMode { full_state, lumped };

struct WalkConfig {
    JohnsonParams params;
    double beta = 0.0;
    long steps = 1;
    long trajectories = 1;
    std::uint64_t base_seed = 0;
    long start_distance = 1;
    WalkMode mode = WalkMode::full_state;
    // When set, reaching distance 0 freezes the trajectory there. Off by
    // default: hitting times are first-passage statistics of the free walk.
    bool absorbing = false;

    void validate() const;
};

struct TrajectoryBatch {
    WalkConfig config;
    // Row-major trajectories x (steps+1) distance samples.
    std::vector<int16_t> distances;
    std::vector<double> mean_path;  // per time index
    std::vector<double> std_path;   // population standard deviation
    std::vector<long> hit_steps;    // first step with d = 0, -1 if never

    int16_t at(long trajectory, long t) const {
        return distances[std::size_t(trajectory) * (config.steps + 1) + t];
    }
};

// Full-state Monte Carlo over independent trajectories. The OpenMP variant
// distributes trajectories across threads; per-trajectory RNG substreams and
// a fixed-order statistics pass make the output bit-identical to the serial
// reference for any thread count.
TrajectoryBatch simulate_batch(const WalkConfig& config, const SubsetState& target);
TrajectoryBatch simulate_batch_serial(const WalkConfig& config, const SubsetState& target);

// Direct simulation of the lumped distance chain.
TrajectoryBatch simulate_lumped(const WalkConfig& config, const DistanceChain& chain);
TrajectoryBatch simulate_lumped_serial(const WalkConfig& config, const DistanceChain& chain);

struct DriftSample {
    long d = 0;
    double mean_delta = 0.0;
    long count = 0;
};

// Conditional sample mean of the one-step distance change, grouped by
// current distance. Pairs after absorption are excluded.
std::vector<DriftSample> empirical_drift(const TrajectoryBatch& batch);

}  // namespace jdrift
