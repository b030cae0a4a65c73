#include "jdrift/hitting_times.hpp"

#include "jdrift/shell_combinatorics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jdrift {

namespace {

void check_m(const JohnsonParams& params, long m) {
    params.validate();
    if (m < 0 || m > params.d_max())
        throw std::domain_error("hitting time: m out of range [0, d_max]");
}

}  // namespace

BigRat hitting_time_rw(const JohnsonParams& params, long m) {
    check_m(params, m);
    const long d_max = params.d_max();
    const long degree = params.degree();

    // tail[i] = sum_{j=i..d_max} |shell j|, built backward.
    std::vector<BigInt> tail(d_max + 2);
    tail[d_max + 1] = 0;
    for (long i = d_max; i >= 1; --i) tail[i] = shell_size(params, i) + tail[i + 1];

    BigRat h = 0;
    for (long i = 1; i <= m; ++i) {
        // q_i |shell i| = (i^2 / degree) * |shell i|
        const BigRat weight(BigInt(degree) * tail[i], BigInt(i) * i * shell_size(params, i));
        h += weight;
    }
    return h;
}

double log_hitting_time_rw(const JohnsonParams& params, long m) {
    return log_hitting_time_metropolis(params, 0.0, m);
}

double log_hitting_time_metropolis(const JohnsonParams& params, double beta, long m) {
    check_m(params, m);
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::domain_error("hitting time: beta must be finite and >= 0");
    if (m == 0) return -std::numeric_limits<double>::infinity();

    const long d_max = params.d_max();
    const long n = params.n;
    const long k = params.k;
    const double log_degree = std::log(double(params.degree()));

    std::vector<double> log_shell(d_max + 1);
    for (long d = 0; d <= d_max; ++d) log_shell[d] = log_shell_size_approx(n, k, d);

    // log_tail[i] = log sum_{j=i..d_max} |shell j| e^{-beta(j-i)} via the
    // backward recurrence tail_i = |shell i| + e^{-beta} tail_{i+1}.
    std::vector<double> log_tail(d_max + 1);
    log_tail[d_max] = log_shell[d_max];
    for (long i = d_max - 1; i >= 1; --i)
        log_tail[i] = logaddexp(log_shell[i], log_tail[i + 1] - beta);

    LogSumAccumulator acc;
    for (long i = 1; i <= m; ++i) {
        const double log_q_shell = 2.0 * std::log(double(i)) - log_degree + log_shell[i];
        acc.add(log_tail[i] - log_q_shell);
    }
    return acc.log_sum();
}

double hitting_time_metropolis(const JohnsonParams& params, double beta, long m) {
    if (m == 0) {
        check_m(params, m);
        return 0.0;
    }
    return std::exp(log_hitting_time_metropolis(params, beta, m));
}

BigInt iid_baseline(const JohnsonParams& params) {
    params.validate();
    return binomial(params.n, params.k);
}

double log_ratio_vs_iid(const JohnsonParams& params, long m) {
    check_m(params, m);
    if (m == 0) throw std::domain_error("log_ratio_vs_iid: m = 0 gives log 0");
    const BigRat ratio = hitting_time_rw(params, m) / BigRat(iid_baseline(params));
    const double offset = rat_to_double(ratio - 1);
    if (std::fabs(offset) <= 0.5) return std::log1p(offset);
    return log_big_rat(ratio);
}

HittingTimeTable hitting_time_table(const JohnsonParams& params, double beta,
                                    long exactness_cutoff) {
    params.validate();
    HittingTimeTable table;
    table.params = params;
    table.beta = beta;
    table.iid = iid_baseline(params);
    const bool carry_exact = beta == 0.0 && params.n <= exactness_cutoff;
    for (long m = 0; m <= params.d_max(); ++m) {
        HittingTimeEntry entry;
        entry.m = m;
        entry.log_value = log_hitting_time_metropolis(params, beta, m);
        entry.value = m == 0 ? 0.0 : std::exp(entry.log_value);
        if (carry_exact) entry.exact = hitting_time_rw(params, m);
        table.entries.push_back(std::move(entry));
    }
    return table;
}

std::vector<ScalingPoint> entropy_scaling_trend(long alpha_num, long alpha_den,
                                                const std::vector<long>& n_list) {
    if (alpha_num <= 0 || alpha_den <= 0 || alpha_num >= alpha_den)
        throw std::domain_error("entropy_scaling_trend: need 0 < alpha < 1");
    std::vector<ScalingPoint> points;
    points.reserve(n_list.size());
    for (long n : n_list) {
        if ((n * alpha_num) % alpha_den != 0)
            throw std::domain_error("entropy_scaling_trend: alpha * n is not an integer for n=" +
                                    std::to_string(n));
        const JohnsonParams params(n, n * alpha_num / alpha_den);
        if (!params.chain_supported())
            throw std::domain_error("entropy_scaling_trend: (2,1) has no distance chain");
        ScalingPoint point;
        point.n = n;
        point.k = params.k;
        point.normalized_log_h =
            log_hitting_time_rw(params, params.d_max()) / double(n);
        points.push_back(point);
    }
    return points;
}

}  // namespace jdrift
