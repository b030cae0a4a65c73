#pragma once

#include "jdrift/numeric.hpp"
#include "jdrift/params.hpp"

#include <utility>
#include <vector>

namespace jdrift {

// Lumped birth-death chain of the distance process on J(n,k). From distance
// d the walk moves down with probability q_d = d^2/(k(n-k)), up with
// p_d = (k-d)(n-k-d)/(k(n-k)), and stays put otherwise. A guidance strength
// beta > 0 rescales only the up probabilities by e^{-beta} (downhill moves
// are always accepted), pushing the rejected mass into the self-loop.
struct DistanceChain {
    JohnsonParams params;
    double beta = 0.0;
    std::vector<double> p;  // up, indexed 0..d_max
    std::vector<double> q;  // down
    std::vector<double> r;  // stay

    // Exact companions, populated only when beta == 0.
    std::vector<BigRat> p_exact;
    std::vector<BigRat> q_exact;
    std::vector<BigRat> r_exact;

    bool has_exact() const { return !p_exact.empty(); }
};

struct DriftProfile {
    std::vector<double> drift;     // E[delta d | d] = p_d - q_d
    std::vector<double> variance;  // Var(delta d | d) = p_d + q_d - drift^2
    double equilibrium = 0.0;      // d*, the root of the drift
    bool equilibrium_clamped = false;  // true if d* fell outside [0, d_max]
};

DistanceChain build_chain(const JohnsonParams& params, double beta);

DriftProfile drift_profile(const DistanceChain& chain);

// Root of the drift: k(n-k)/n at beta = 0, and for beta > 0 the positive
// root of e^{-beta}(k-d)(n-k-d) = d^2, written in the rationalized form
// 2k(n-k) / (n + sqrt(n^2 + 4(e^beta - 1)k(n-k))) so the beta -> 0 limit is
// exact and small beta loses no precision.
double equilibrium_distance(const JohnsonParams& params, double beta);

// The beta = 0 drift rewritten as mean reversion, -(n/(k(n-k)))(d - d*).
double mean_reversion_form(const JohnsonParams& params, long d);

// Exact flow balance across adjacent shells: returns the pairs
// (|shell i| * p_i, |shell i+1| * q_{i+1}) for i = 0..d_max-1, which must be
// equal componentwise at beta = 0.
std::vector<std::pair<BigRat, BigRat>> detailed_balance_check(const JohnsonParams& params);

// Side-by-side report of log(p_d/q_d) and S(d+1) - S(d-1). The two are NOT
// equal in general (J(5,2), d=1 gives log 2 vs log 3); this is a diagnostic
// for inspecting the transition asymmetry against the entropy gradient, and
// deliberately asserts nothing.
struct EntropyGradientDiagnostic {
    double log_ratio;     // log(p_d / q_d)
    double entropy_diff;  // S(d+1) - S(d-1)
};

EntropyGradientDiagnostic entropy_gradient_diagnostic(const JohnsonParams& params, long d);

}  // namespace jdrift
