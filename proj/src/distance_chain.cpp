#include "jdrift/distance_chain.hpp"

#include "jdrift/shell_combinatorics.hpp"

#include <cmath>
#include <stdexcept>

namespace jdrift {

DistanceChain build_chain(const JohnsonParams& params, double beta) {
    params.validate();
    if (!params.chain_supported())
        throw std::domain_error("build_chain: (n,k)=(2,1) has a degenerate distance process");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::domain_error("build_chain: beta must be finite and >= 0");

    DistanceChain chain;
    chain.params = params;
    chain.beta = beta;

    const long d_max = params.d_max();
    const long degree = params.degree();
    const double accept = std::exp(-beta);
    const bool exact = beta == 0.0;

    chain.p.resize(d_max + 1);
    chain.q.resize(d_max + 1);
    chain.r.resize(d_max + 1);
    if (exact) {
        chain.p_exact.resize(d_max + 1);
        chain.q_exact.resize(d_max + 1);
        chain.r_exact.resize(d_max + 1);
    }

    for (long d = 0; d <= d_max; ++d) {
        const long up_neighbors = (params.k - d) * (params.n - params.k - d);
        const long down_neighbors = d * d;
        chain.q[d] = double(down_neighbors) / double(degree);
        chain.p[d] = accept * double(up_neighbors) / double(degree);
        chain.r[d] = 1.0 - chain.p[d] - chain.q[d];
        if (exact) {
            chain.q_exact[d] = BigRat(down_neighbors, degree);
            chain.p_exact[d] = BigRat(up_neighbors, degree);
            chain.r_exact[d] = BigRat(1) - chain.p_exact[d] - chain.q_exact[d];
            chain.p[d] = rat_to_double(chain.p_exact[d]);
            chain.r[d] = rat_to_double(chain.r_exact[d]);
        }
    }
    return chain;
}

DriftProfile drift_profile(const DistanceChain& chain) {
    DriftProfile profile;
    const long d_max = chain.params.d_max();
    profile.drift.resize(d_max + 1);
    profile.variance.resize(d_max + 1);
    for (long d = 0; d <= d_max; ++d) {
        profile.drift[d] = chain.p[d] - chain.q[d];
        profile.variance[d] = chain.p[d] + chain.q[d] - profile.drift[d] * profile.drift[d];
    }
    profile.equilibrium = equilibrium_distance(chain.params, chain.beta);
    profile.equilibrium_clamped =
        !(profile.equilibrium > 0.0 && profile.equilibrium < double(d_max));
    return profile;
}

double equilibrium_distance(const JohnsonParams& params, double beta) {
    params.validate();
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::domain_error("equilibrium_distance: beta must be finite and >= 0");
    const double big_k = double(params.k) * double(params.n - params.k);
    const double n = double(params.n);
    const double e = std::expm1(beta);
    return 2.0 * big_k / (n + std::sqrt(n * n + 4.0 * e * big_k));
}

double mean_reversion_form(const JohnsonParams& params, long d) {
    params.validate();
    if (d < 0 || d > params.d_max())
        throw std::out_of_range("mean_reversion_form: d out of range [0, d_max]");
    const double big_k = double(params.degree());
    const double d_star = big_k / double(params.n);
    return -(double(params.n) / big_k) * (double(d) - d_star);
}

std::vector<std::pair<BigRat, BigRat>> detailed_balance_check(const JohnsonParams& params) {
    const DistanceChain chain = build_chain(params, 0.0);
    const long d_max = params.d_max();
    std::vector<std::pair<BigRat, BigRat>> pairs;
    pairs.reserve(d_max);
    for (long i = 0; i < d_max; ++i) {
        const BigRat lhs = BigRat(shell_size(params, i)) * chain.p_exact[i];
        const BigRat rhs = BigRat(shell_size(params, i + 1)) * chain.q_exact[i + 1];
        pairs.emplace_back(lhs, rhs);
    }
    return pairs;
}

EntropyGradientDiagnostic entropy_gradient_diagnostic(const JohnsonParams& params, long d) {
    const DistanceChain chain = build_chain(params, 0.0);
    if (d < 1 || d > params.d_max() - 1)
        throw std::domain_error("entropy_gradient_diagnostic: need 1 <= d <= d_max-1");
    EntropyGradientDiagnostic diag;
    diag.log_ratio = log_big_rat(chain.p_exact[d] / chain.q_exact[d]);
    diag.entropy_diff = log_big(shell_size(params, d + 1)) - log_big(shell_size(params, d - 1));
    return diag;
}

}  // namespace jdrift
