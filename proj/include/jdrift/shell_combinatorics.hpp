#pragma once

#include "jdrift/numeric.hpp"
#include "jdrift/params.hpp"

#include <vector>

namespace jdrift {

// Distance-shell decomposition of J(n,k) around a fixed target vertex.
// Shell d holds the vertices at swap distance d; its size is
// C(k,d) * C(n-k,d).
struct ShellProfile {
    JohnsonParams params;
    std::vector<BigInt> sizes;        // |shell d| for d = 0..d_max
    std::vector<double> log_sizes;    // natural log of each size
    std::vector<double> increments;   // log(sizes[d+1]/sizes[d]), length d_max
    std::vector<long> argmax_set;     // every d attaining the maximal size
    BigRat continuous_argmax_exact;   // (k(n-k)-1)/(n+2)
    double continuous_argmax;
};

BigInt shell_size(const JohnsonParams& params, long d);

ShellProfile shell_profile(const JohnsonParams& params);

// Probability that a uniformly random vertex lies in shell d, i.e. the
// shell sizes normalized by C(n,k). Exact rationals, indexed d = 0..d_max.
std::vector<BigRat> shell_distribution(const JohnsonParams& params);

// lgamma-based log shell size; usable far beyond exact-integer territory.
double log_shell_size_approx(long n, long k, long d);

}  // namespace jdrift
