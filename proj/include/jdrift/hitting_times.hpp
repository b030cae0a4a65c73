#pragma once

#include "jdrift/numeric.hpp"
#include "jdrift/params.hpp"

#include <optional>
#include <vector>

namespace jdrift {

// Expected number of steps for the plain random walk started at distance m
// to first hit the target:
//   h_m = sum_{i=1..m} (1/(q_i |shell i|)) * sum_{j=i..d_max} |shell j|.
// Exact rational; the inner tail sums are built by one backward pass.
BigRat hitting_time_rw(const JohnsonParams& params, long m);

// log h_m evaluated entirely in log space (no big integers), usable at any
// scale a double logarithm can hold.
double log_hitting_time_rw(const JohnsonParams& params, long m);

// Guided-walk analogue: inner terms pick up the weight e^{-beta(j-i)} while
// q_i keeps its plain-walk value (inward moves are always accepted).
// Returns log h_m; the companion below renders it as a double.
double log_hitting_time_metropolis(const JohnsonParams& params, double beta, long m);
double hitting_time_metropolis(const JohnsonParams& params, double beta, long m);

// Expected draws for IID uniform sampling to first produce the target.
BigInt iid_baseline(const JohnsonParams& params);

// log(h_m / C(n,k)) for the plain walk, computed through the exact rational
// ratio so the near-cancellation at m = 1 (h_1 = C(n,k) - 1) survives:
// the result there is log(1 - 1/C(n,k)), tiny but strictly negative.
double log_ratio_vs_iid(const JohnsonParams& params, long m);

struct HittingTimeEntry {
    long m = 0;
    std::optional<BigRat> exact;  // populated on the exact path (beta == 0)
    double log_value = 0.0;       // log h_m, -inf at m = 0
    double value = 0.0;           // double rendering, may be +inf at scale
};

struct HittingTimeTable {
    JohnsonParams params;
    double beta = 0.0;
    std::vector<HittingTimeEntry> entries;  // indexed m = 0..d_max
    BigInt iid;                             // C(n,k)
};

// Full table for one beta. Exact entries are carried when beta == 0 and
// n <= exactness_cutoff; log-space values are always present.
HittingTimeTable hitting_time_table(const JohnsonParams& params, double beta,
                                    long exactness_cutoff = 64);

struct ScalingPoint {
    long n = 0;
    long k = 0;
    double normalized_log_h = 0.0;  // log h_{d_max} / n
};

// Normalized farthest-shell hitting times along a fixed-ratio family
// k = alpha * n; the sequence approaches the binary entropy H(alpha) from
// below as n grows. alpha is given as alpha_num/alpha_den and each n must
// make k integral.
std::vector<ScalingPoint> entropy_scaling_trend(long alpha_num, long alpha_den,
                                                const std::vector<long>& n_list);

}  // namespace jdrift
