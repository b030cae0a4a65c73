#include "jdrift/shell_combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jdrift {

BigInt shell_size(const JohnsonParams& params, long d) {
    params.validate();
    if (d < 0 || d > params.d_max())
        throw std::out_of_range("shell_size: d out of range [0, d_max]");
    return binomial(params.k, d) * binomial(params.n - params.k, d);
}

ShellProfile shell_profile(const JohnsonParams& params) {
    params.validate();
    ShellProfile profile;
    profile.params = params;
    const long d_max = params.d_max();

    profile.sizes.reserve(d_max + 1);
    profile.log_sizes.reserve(d_max + 1);
    for (long d = 0; d <= d_max; ++d) {
        profile.sizes.push_back(shell_size(params, d));
        profile.log_sizes.push_back(log_big(profile.sizes.back()));
    }

    // The exact ratio sizes[d+1]/sizes[d] collapses to
    // (k-d)(n-k-d) / (d+1)^2, which stays in comfortable double range.
    profile.increments.reserve(d_max);
    for (long d = 0; d < d_max; ++d) {
        const double up = double(params.k - d) * double(params.n - params.k - d);
        const double down = double(d + 1) * double(d + 1);
        profile.increments.push_back(std::log(up / down));
    }

    BigInt best = 0;
    for (long d = 0; d <= d_max; ++d)
        if (profile.sizes[d] > best) best = profile.sizes[d];
    for (long d = 0; d <= d_max; ++d)
        if (profile.sizes[d] == best) profile.argmax_set.push_back(d);

    profile.continuous_argmax_exact =
        BigRat(BigInt(params.k) * BigInt(params.n - params.k) - 1, BigInt(params.n + 2));
    profile.continuous_argmax = rat_to_double(profile.continuous_argmax_exact);
    return profile;
}

std::vector<BigRat> shell_distribution(const JohnsonParams& params) {
    params.validate();
    const BigInt total = binomial(params.n, params.k);
    std::vector<BigRat> dist;
    dist.reserve(params.d_max() + 1);
    for (long d = 0; d <= params.d_max(); ++d)
        dist.emplace_back(shell_size(params, d), total);
    return dist;
}

double log_shell_size_approx(long n, long k, long d) {
    if (d < 0 || d > std::min(k, n - k))
        throw std::out_of_range("log_shell_size_approx: d out of range [0, d_max]");
    return log_binomial(k, d) + log_binomial(n - k, d);
}

}  // namespace jdrift
