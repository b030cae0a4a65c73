#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace jdrift {

// Parameters of the Johnson graph J(n,k): vertices are the k-subsets of an
// n-element ground set, adjacent when they differ by a single swap.
struct JohnsonParams {
    long n = 0;
    long k = 0;

    JohnsonParams() = default;
    JohnsonParams(long n_, long k_) : n(n_), k(k_) { validate(); }

    void validate() const {
        if (n < 2) throw std::domain_error("JohnsonParams: need n >= 2, got n=" + std::to_string(n));
        if (k < 1 || k > n - 1)
            throw std::domain_error("JohnsonParams: need 1 <= k <= n-1, got k=" + std::to_string(k) +
                                    " with n=" + std::to_string(n));
    }

    long d_max() const { return std::min(k, n - k); }
    long degree() const { return k * (n - k); }
    double alpha() const { return double(k) / double(n); }

    // J(2,1) is a single edge: its distance process alternates 0,1,0,1,...
    // deterministically and the drift/equilibrium quantities degenerate, so
    // transition-chain builders reject it while pure counting still works.
    bool chain_supported() const { return !(n == 2 && k == 1); }
};

}  // namespace jdrift
