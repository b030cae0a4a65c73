#include "jdrift/walker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jdrift {

SubsetState SubsetState::first_k(const JohnsonParams& params) {
    params.validate();
    if (params.n > max_n)
        throw std::domain_error("SubsetState: n exceeds the fixed capacity " +
                                std::to_string(max_n));
    SubsetState state;
    state.n_ = params.n;
    state.k_ = params.k;
    state.members_.resize(params.k);
    state.nonmembers_.resize(params.n - params.k);
    state.slot_.resize(params.n);
    for (long e = 0; e < params.n; ++e) {
        if (e < params.k) {
            state.words_[e >> 6] |= std::uint64_t(1) << (e & 63);
            state.members_[e] = int16_t(e);
            state.slot_[e] = int16_t(e);
        } else {
            state.nonmembers_[e - params.k] = int16_t(e);
            state.slot_[e] = int16_t(e - params.k);
        }
    }
    return state;
}

SubsetState SubsetState::start_at_distance(const JohnsonParams& params, long m) {
    if (m < 0 || m > params.d_max())
        throw std::domain_error("start_at_distance: m out of range [0, d_max]");
    SubsetState state = first_k(params);
    for (long i = 0; i < m; ++i) state.swap_slots(i, i);
    return state;
}

SubsetState SubsetState::from_elements(const JohnsonParams& params,
                                       const std::vector<long>& elements) {
    params.validate();
    if (params.n > max_n)
        throw std::domain_error("SubsetState: n exceeds the fixed capacity " +
                                std::to_string(max_n));
    if (long(elements.size()) != params.k)
        throw std::domain_error("from_elements: expected exactly k elements");
    SubsetState state;
    state.n_ = params.n;
    state.k_ = params.k;
    state.slot_.resize(params.n);
    for (long e : elements) {
        if (e < 0 || e >= params.n) throw std::domain_error("from_elements: element out of [0, n)");
        if (state.contains(e)) throw std::domain_error("from_elements: duplicate element");
        state.words_[e >> 6] |= std::uint64_t(1) << (e & 63);
    }
    for (long e = 0; e < params.n; ++e) {
        if (state.contains(e)) {
            state.slot_[e] = int16_t(state.members_.size());
            state.members_.push_back(int16_t(e));
        } else {
            state.slot_[e] = int16_t(state.nonmembers_.size());
            state.nonmembers_.push_back(int16_t(e));
        }
    }
    return state;
}

void SubsetState::swap_slots(long member_slot, long nonmember_slot) {
    const int16_t a = members_[member_slot];
    const int16_t b = nonmembers_[nonmember_slot];
    members_[member_slot] = b;
    nonmembers_[nonmember_slot] = a;
    slot_[a] = int16_t(nonmember_slot);
    slot_[b] = int16_t(member_slot);
    words_[a >> 6] &= ~(std::uint64_t(1) << (a & 63));
    words_[b >> 6] |= std::uint64_t(1) << (b & 63);
}

std::vector<long> SubsetState::elements() const {
    std::vector<long> out(members_.begin(), members_.end());
    std::sort(out.begin(), out.end());
    return out;
}

long distance(const SubsetState& x, const SubsetState& target) {
    if (x.n_ != target.n_ || x.k_ != target.k_)
        throw std::domain_error("distance: states live on different J(n,k)");
    long d = 0;
    for (std::size_t w = 0; w < x.words_.size(); ++w)
        d += std::popcount(x.words_[w] & ~target.words_[w]);
    return d;
}

std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t next_below(Rng& rng, std::uint64_t bound) {
    unsigned __int128 m = (unsigned __int128)(rng()) * bound;
    auto low = std::uint64_t(m);
    if (low < bound) {
        const std::uint64_t threshold = std::uint64_t(-bound) % bound;
        while (low < threshold) {
            m = (unsigned __int128)(rng()) * bound;
            low = std::uint64_t(m);
        }
    }
    return std::uint64_t(m >> 64);
}

double next_unit(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

int step_in_place(SubsetState& state, double beta, const SubsetState& target, Rng& rng) {
    if (state.n() != target.n() || state.k() != target.k())
        throw std::domain_error("step: state and target live on different J(n,k)");
    const long member_slot = long(next_below(rng, std::uint64_t(state.k())));
    const long nonmember_slot = long(next_below(rng, std::uint64_t(state.n() - state.k())));
    const int16_t out_elem = state.member_list()[member_slot];
    const int16_t in_elem = state.nonmember_list()[nonmember_slot];
    const int delta = (target.contains(in_elem) ? 0 : 1) - (target.contains(out_elem) ? 0 : 1);
    if (beta > 0.0 && delta > 0 && next_unit(rng) >= std::exp(-beta)) return 0;
    state.swap_slots(member_slot, nonmember_slot);
    return delta;
}

SubsetState step(const SubsetState& state, double beta, const SubsetState& target, Rng& rng) {
    SubsetState next = state;
    step_in_place(next, beta, target, rng);
    return next;
}

void WalkConfig::validate() const {
    params.validate();
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::domain_error("WalkConfig: beta must be finite and >= 0");
    if (steps < 1) throw std::domain_error("WalkConfig: steps must be >= 1");
    if (trajectories < 1) throw std::domain_error("WalkConfig: trajectories must be >= 1");
    if (start_distance < 0 || start_distance > params.d_max())
        throw std::domain_error("WalkConfig: start_distance out of range [0, d_max]");
}

namespace {

void run_full_trajectory(const WalkConfig& config, const SubsetState& target, long trajectory,
                         int16_t* row, long& hit_step) {
    Rng rng(mix_seed(config.base_seed, std::uint64_t(trajectory)));
    SubsetState state = SubsetState::start_at_distance(config.params, config.start_distance);
    long d = config.start_distance;
    row[0] = int16_t(d);
    hit_step = d == 0 ? 0 : -1;
    for (long t = 1; t <= config.steps; ++t) {
        if (config.absorbing && d == 0) {
            row[t] = 0;
            continue;
        }
        d += step_in_place(state, config.beta, target, rng);
        row[t] = int16_t(d);
        if (d == 0 && hit_step < 0) hit_step = t;
    }
}

void run_lumped_trajectory(const WalkConfig& config, const DistanceChain& chain, long trajectory,
                           int16_t* row, long& hit_step) {
    Rng rng(mix_seed(config.base_seed, std::uint64_t(trajectory)));
    long d = config.start_distance;
    row[0] = int16_t(d);
    hit_step = d == 0 ? 0 : -1;
    for (long t = 1; t <= config.steps; ++t) {
        if (config.absorbing && d == 0) {
            row[t] = 0;
            continue;
        }
        const double u = next_unit(rng);
        if (u < chain.q[d])
            --d;
        else if (u < chain.q[d] + chain.p[d])
            ++d;
        row[t] = int16_t(d);
        if (d == 0 && hit_step < 0) hit_step = t;
    }
}

// Statistics run in a fixed trajectory order per time index, so they are
// identical however the trajectories themselves were scheduled.
void compute_stats(TrajectoryBatch& batch) {
    const long trajectories = batch.config.trajectories;
    const long steps = batch.config.steps;
    batch.mean_path.assign(steps + 1, 0.0);
    batch.std_path.assign(steps + 1, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long t = 0; t <= steps; ++t) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (long i = 0; i < trajectories; ++i) {
            const double v = batch.at(i, t);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / double(trajectories);
        batch.mean_path[t] = mean;
        batch.std_path[t] = std::sqrt(std::max(0.0, sum_sq / double(trajectories) - mean * mean));
    }
}

TrajectoryBatch make_batch(const WalkConfig& config) {
    TrajectoryBatch batch;
    batch.config = config;
    batch.distances.resize(std::size_t(config.trajectories) * (config.steps + 1));
    batch.hit_steps.assign(config.trajectories, -1);
    return batch;
}

}  // namespace

TrajectoryBatch simulate_batch(const WalkConfig& config, const SubsetState& target) {
    config.validate();
    if (target.n() != config.params.n || target.k() != config.params.k)
        throw std::domain_error("simulate_batch: target does not match params");
    TrajectoryBatch batch = make_batch(config);
    const std::size_t stride = config.steps + 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long trajectory = 0; trajectory < config.trajectories; ++trajectory)
        run_full_trajectory(config, target, trajectory,
                            batch.distances.data() + std::size_t(trajectory) * stride,
                            batch.hit_steps[trajectory]);
    compute_stats(batch);
    return batch;
}

TrajectoryBatch simulate_batch_serial(const WalkConfig& config, const SubsetState& target) {
    config.validate();
    if (target.n() != config.params.n || target.k() != config.params.k)
        throw std::domain_error("simulate_batch_serial: target does not match params");
    TrajectoryBatch batch = make_batch(config);
    const std::size_t stride = config.steps + 1;
    for (long trajectory = 0; trajectory < config.trajectories; ++trajectory)
        run_full_trajectory(config, target, trajectory,
                            batch.distances.data() + std::size_t(trajectory) * stride,
                            batch.hit_steps[trajectory]);
    compute_stats(batch);
    return batch;
}

TrajectoryBatch simulate_lumped(const WalkConfig& config, const DistanceChain& chain) {
    config.validate();
    if (chain.params.n != config.params.n || chain.params.k != config.params.k ||
        chain.beta != config.beta)
        throw std::domain_error("simulate_lumped: chain does not match config");
    TrajectoryBatch batch = make_batch(config);
    const std::size_t stride = config.steps + 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long trajectory = 0; trajectory < config.trajectories; ++trajectory)
        run_lumped_trajectory(config, chain, trajectory,
                              batch.distances.data() + std::size_t(trajectory) * stride,
                              batch.hit_steps[trajectory]);
    compute_stats(batch);
    return batch;
}

TrajectoryBatch simulate_lumped_serial(const WalkConfig& config, const DistanceChain& chain) {
    config.validate();
    if (chain.params.n != config.params.n || chain.params.k != config.params.k ||
        chain.beta != config.beta)
        throw std::domain_error("simulate_lumped_serial: chain does not match config");
    TrajectoryBatch batch = make_batch(config);
    const std::size_t stride = config.steps + 1;
    for (long trajectory = 0; trajectory < config.trajectories; ++trajectory)
        run_lumped_trajectory(config, chain, trajectory,
                              batch.distances.data() + std::size_t(trajectory) * stride,
                              batch.hit_steps[trajectory]);
    compute_stats(batch);
    return batch;
}

std::vector<DriftSample> empirical_drift(const TrajectoryBatch& batch) {
    if (batch.distances.empty()) throw std::domain_error("empirical_drift: empty batch");
    const long d_max = batch.config.params.d_max();
    std::vector<double> delta_sum(d_max + 1, 0.0);
    std::vector<long> visits(d_max + 1, 0);
    for (long i = 0; i < batch.config.trajectories; ++i) {
        long last = batch.config.steps;
        if (batch.config.absorbing && batch.hit_steps[i] >= 0)
            last = std::min(last, batch.hit_steps[i]);
        for (long t = 0; t < last; ++t) {
            const int d = batch.at(i, t);
            delta_sum[d] += batch.at(i, t + 1) - d;
            ++visits[d];
        }
    }
    std::vector<DriftSample> samples;
    for (long d = 0; d <= d_max; ++d)
        if (visits[d] > 0) samples.push_back({d, delta_sum[d] / double(visits[d]), visits[d]});
    return samples;
}

}  // namespace jdrift
