#pragma once

#include "jdrift/numeric.hpp"
#include "jdrift/params.hpp"
#include "jdrift/walker.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jdrift {

// Fully materialized J(n,k) with shells labeled relative to one target
// vertex. Vertices are stored in colex rank order so neighbor lookup is a
// rank computation, not a search.
struct EnumeratedGraph {
    JohnsonParams params;
    std::vector<SubsetState> vertices;
    std::vector<std::vector<std::int32_t>> adjacency;
    std::vector<std::int16_t> shell_of;  // swap distance to the target
    long target_index = 0;
};

inline constexpr long kDefaultEnumerationCap = 100000;
inline constexpr long kRationalSolveCap = 5000;

EnumeratedGraph enumerate_graph(const JohnsonParams& params, const SubsetState& target,
                                long vertex_cap = kDefaultEnumerationCap);

struct CheckResult {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct OracleReport {
    JohnsonParams params;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const CheckResult& check : checks)
            if (!check.pass) return false;
        return true;
    }
};

std::string report_to_json(const OracleReport& report);
std::string report_to_text(const OracleReport& report);

// Structural audit: vertex count, degrees, adjacency symmetry, per-shell
// cardinalities against C(k,d) C(n-k,d), and per-vertex up/down neighbor
// counts against (k-d)(n-k-d) and d^2.
OracleReport verify_shell_counts(const EnumeratedGraph& graph);

// Confirms the distance process is Markov on shells: every vertex at
// distance d must step down/stay/up with exactly d^2/deg, 1-..., and
// (k-d)(n-k-d)/deg, in exact rational arithmetic.
OracleReport verify_lumpability(const EnumeratedGraph& graph);

// Finds a triangle (odd cycle), ruling out bipartiteness for n >= 3.
CheckResult verify_triangle(const EnumeratedGraph& graph);

// Per-shell expected hitting times to the target from the full-state
// first-step system h(v) = 1 + sum_u P(v,u) h(u), solved by dense Gaussian
// elimination over exact rationals (plain walk). Verifies along the way
// that every shell is constant, as distance-transitivity demands.
std::vector<BigRat> solve_hitting_exact(const EnumeratedGraph& graph);

// Same system under the guided walk (uphill acceptance e^{-beta}), solved
// in 50-digit floats and returned as doubles.
std::vector<double> solve_hitting_metropolis(const EnumeratedGraph& graph, double beta);

// Fast path on the lumped chain: tridiagonal solve with d_max+1 unknowns.
std::vector<double> solve_hitting_lumped(const DistanceChain& chain);
std::vector<BigRat> solve_hitting_lumped_exact(const DistanceChain& chain);

}  // namespace jdrift
