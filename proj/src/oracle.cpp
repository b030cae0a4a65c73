#include "jdrift/oracle.hpp"

#include "jdrift/shell_combinatorics.hpp"

#include "json.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jdrift {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

// Binomial table sized for combination ranking: entries C(i, j) with
// j <= k+1 stay below cap * n, far inside 64-bit range.
std::vector<std::vector<long>> pascal_table(long n, long k) {
    std::vector<std::vector<long>> table(n + 1, std::vector<long>(k + 2, 0));
    for (long i = 0; i <= n; ++i) {
        table[i][0] = 1;
        for (long j = 1; j <= std::min(i, k + 1); ++j)
            table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
    }
    return table;
}

// Colex rank of an ascending combination: sum of C(c_i, i+1).
long colex_rank(const std::vector<long>& elements, const std::vector<std::vector<long>>& pascal) {
    long rank = 0;
    for (std::size_t i = 0; i < elements.size(); ++i) rank += pascal[elements[i]][i + 1];
    return rank;
}

std::string to_string_rat(const BigRat& value) { return value.str(); }

CheckResult make_check(std::string name, std::string expected, std::string actual) {
    CheckResult check;
    check.pass = expected == actual;
    check.name = std::move(name);
    check.expected = std::move(expected);
    check.actual = std::move(actual);
    return check;
}

// Dense Gaussian elimination with partial pivoting; T is an exact rational
// or a wide float.
template <class T>
std::vector<T> gaussian_solve(std::vector<std::vector<T>> a, std::vector<T> b) {
    using boost::multiprecision::abs;
    const std::size_t size = a.size();
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < size; ++row)
            if (abs(a[row][col]) > abs(a[pivot][col])) pivot = row;
        if (a[pivot][col] == 0)
            throw std::logic_error("gaussian_solve: singular system (chain must be irreducible)");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = col + 1; row < size; ++row) {
            if (a[row][col] == 0) continue;
            const T factor = a[row][col] / a[col][col];
            for (std::size_t c = col; c < size; ++c) a[row][c] -= factor * a[col][c];
            b[row] -= factor * b[col];
        }
    }
    std::vector<T> x(size);
    for (std::size_t row = size; row-- > 0;) {
        T acc = b[row];
        for (std::size_t c = row + 1; c < size; ++c) acc -= a[row][c] * x[c];
        x[row] = acc / a[row][row];
    }
    return x;
}

// Thomas algorithm for the absorbing birth-death system
// (p_d + q_d) h_d - q_d h_{d-1} - p_d h_{d+1} = 1, h_0 = 0.
template <class T>
std::vector<T> tridiagonal_hitting(const std::vector<T>& p, const std::vector<T>& q, long d_max) {
    std::vector<T> diag(d_max + 1), rhs(d_max + 1);
    for (long d = 1; d <= d_max; ++d) {
        diag[d] = p[d] + q[d];
        rhs[d] = 1;
    }
    for (long d = 2; d <= d_max; ++d) {
        // eliminate the subdiagonal -q_d against the row above; the
        // superdiagonal there is -p_{d-1} (h_0 = 0 removes the d = 1 case)
        const T w = q[d] / diag[d - 1];
        diag[d] -= w * p[d - 1];
        rhs[d] += w * rhs[d - 1];
    }
    std::vector<T> h(d_max + 1);
    h[0] = 0;
    h[d_max] = rhs[d_max] / diag[d_max];
    for (long d = d_max - 1; d >= 1; --d) h[d] = (rhs[d] + p[d] * h[d + 1]) / diag[d];
    return h;
}

// Per-shell grouping of a full-state solution vector (unknowns exclude the
// target); `close` decides whether two same-shell values agree.
template <class T, class Close>
std::vector<T> group_by_shell(const EnumeratedGraph& graph, const std::vector<T>& solution,
                              Close close) {
    const long d_max = graph.params.d_max();
    std::vector<T> by_shell(d_max + 1, T(0));
    std::vector<bool> seen(d_max + 1, false);
    seen[0] = true;
    for (std::size_t v = 0, unknown = 0; v < graph.vertices.size(); ++v) {
        if (long(v) == graph.target_index) continue;
        const long d = graph.shell_of[v];
        const T& value = solution[unknown++];
        if (!seen[d]) {
            by_shell[d] = value;
            seen[d] = true;
        } else if (!close(by_shell[d], value)) {
            throw std::logic_error("hitting solve: shell " + std::to_string(d) +
                                   " is not constant, distance-transitivity violated");
        }
    }
    return by_shell;
}

}  // namespace

EnumeratedGraph enumerate_graph(const JohnsonParams& params, const SubsetState& target,
                                long vertex_cap) {
    params.validate();
    if (target.n() != params.n || target.k() != params.k)
        throw std::domain_error("enumerate_graph: target does not match params");
    const BigInt count_big = binomial(params.n, params.k);
    if (count_big > vertex_cap)
        throw std::runtime_error("enumerate_graph: C(n,k) = " + count_big.str() +
                                 " exceeds the enumeration cap " + std::to_string(vertex_cap));
    const long count = count_big.convert_to<long>();
    const long n = params.n;
    const long k = params.k;

    EnumeratedGraph graph;
    graph.params = params;
    graph.vertices.resize(count);
    graph.adjacency.resize(count);
    graph.shell_of.resize(count);

    const std::vector<std::vector<long>> pascal = pascal_table(n, k);

    std::vector<long> combo(k);
    for (long i = 0; i < k; ++i) combo[i] = i;
    while (true) {
        graph.vertices[colex_rank(combo, pascal)] = SubsetState::from_elements(params, combo);
        long i = k - 1;
        while (i >= 0 && combo[i] == n - k + i) --i;
        if (i < 0) break;
        ++combo[i];
        for (long j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }

    std::vector<long> neighbor(k);
    for (long v = 0; v < count; ++v) {
        const SubsetState& state = graph.vertices[v];
        graph.shell_of[v] = std::int16_t(distance(state, target));
        graph.adjacency[v].reserve(params.degree());
        const std::vector<long> elems = state.elements();
        for (long slot = 0; slot < k; ++slot) {
            for (std::int16_t incoming : state.nonmember_list()) {
                neighbor = elems;
                neighbor[slot] = incoming;
                std::sort(neighbor.begin(), neighbor.end());
                graph.adjacency[v].push_back(std::int32_t(colex_rank(neighbor, pascal)));
            }
        }
    }
    graph.target_index = colex_rank(target.elements(), pascal);
    return graph;
}

OracleReport verify_shell_counts(const EnumeratedGraph& graph) {
    const JohnsonParams& params = graph.params;
    const long k = params.k;
    const long n = params.n;
    const long d_max = params.d_max();

    OracleReport report;
    report.params = params;
    report.checks.push_back(make_check("vertex_count", binomial(n, k).str(),
                                       std::to_string(graph.vertices.size())));

    long bad_degree = 0;
    for (const auto& neighbors : graph.adjacency)
        if (long(neighbors.size()) != params.degree()) ++bad_degree;
    report.checks.push_back(make_check("degree_uniform_" + std::to_string(params.degree()),
                                       "0 mismatches", std::to_string(bad_degree) + " mismatches"));

    std::vector<std::vector<std::int32_t>> sorted_adjacency = graph.adjacency;
    for (auto& neighbors : sorted_adjacency) std::sort(neighbors.begin(), neighbors.end());
    long asymmetric = 0;
    long multi_swap = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        for (std::int32_t u : graph.adjacency[v]) {
            const auto& back = sorted_adjacency[u];
            if (!std::binary_search(back.begin(), back.end(), std::int32_t(v))) ++asymmetric;
            if (distance(graph.vertices[v], graph.vertices[u]) != 1) ++multi_swap;
        }
    }
    report.checks.push_back(
        make_check("adjacency_symmetric", "0 asymmetric edges", std::to_string(asymmetric) + " asymmetric edges"));
    report.checks.push_back(
        make_check("neighbors_one_swap", "0 non-swap edges", std::to_string(multi_swap) + " non-swap edges"));

    std::vector<long> counts(d_max + 1, 0);
    for (std::int16_t d : graph.shell_of) ++counts[d];
    for (long d = 0; d <= d_max; ++d)
        report.checks.push_back(make_check("shell_count_d" + std::to_string(d),
                                           shell_size(params, d).str(), std::to_string(counts[d])));

    long bad_up_down = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const long d = graph.shell_of[v];
        long up = 0;
        long down = 0;
        for (std::int32_t u : graph.adjacency[v]) {
            if (graph.shell_of[u] == d + 1) ++up;
            if (graph.shell_of[u] == d - 1) ++down;
        }
        if (up != (k - d) * (n - k - d) || down != d * d) ++bad_up_down;
    }
    report.checks.push_back(make_check("up_down_neighbor_counts", "0 mismatches",
                                       std::to_string(bad_up_down) + " mismatches"));
    return report;
}

OracleReport verify_lumpability(const EnumeratedGraph& graph) {
    const JohnsonParams& params = graph.params;
    const long degree = params.degree();
    const long d_max = params.d_max();

    OracleReport report;
    report.params = params;
    long mismatched_vertices = 0;
    long long_jumps = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const long d = graph.shell_of[v];
        long down = 0, same = 0, up = 0;
        for (std::int32_t u : graph.adjacency[v]) {
            const long delta = graph.shell_of[u] - d;
            if (delta == -1)
                ++down;
            else if (delta == 0)
                ++same;
            else if (delta == 1)
                ++up;
            else
                ++long_jumps;
        }
        const BigRat q_emp(down, degree), r_emp(same, degree), p_emp(up, degree);
        const BigRat q_formula(d * d, degree);
        const BigRat p_formula((params.k - d) * (params.n - params.k - d), degree);
        const BigRat r_formula = BigRat(1) - q_formula - p_formula;
        if (q_emp != q_formula || p_emp != p_formula || r_emp != r_formula) ++mismatched_vertices;
    }
    report.checks.push_back(make_check("single_swap_distance_steps", "0 jumps beyond +-1",
                                       std::to_string(long_jumps) + " jumps beyond +-1"));
    report.checks.push_back(make_check("per_vertex_shell_transition_probabilities", "0 mismatches",
                                       std::to_string(mismatched_vertices) + " mismatches"));

    // one representative line per shell for the report reader
    for (long d = 0; d <= d_max; ++d) {
        const BigRat q_formula(d * d, degree);
        const BigRat p_formula((params.k - d) * (params.n - params.k - d), degree);
        const BigRat r_formula = BigRat(1) - q_formula - p_formula;
        std::ostringstream expected;
        expected << "(q,r,p) = (" << to_string_rat(q_formula) << ", " << to_string_rat(r_formula)
                 << ", " << to_string_rat(p_formula) << ")";
        report.checks.push_back(
            make_check("shell_d" + std::to_string(d) + "_transitions", expected.str(),
                       mismatched_vertices == 0 ? expected.str() : "see per-vertex mismatches"));
    }
    return report;
}

CheckResult verify_triangle(const EnumeratedGraph& graph) {
    if (graph.params.n < 3)
        return make_check("odd_cycle_exists", "skipped for n < 3", "skipped for n < 3");
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const auto& neighbors = graph.adjacency[v];
        for (std::size_t i = 0; i < neighbors.size(); ++i)
            for (std::size_t j = i + 1; j < neighbors.size(); ++j)
                if (distance(graph.vertices[neighbors[i]], graph.vertices[neighbors[j]]) == 1) {
                    std::ostringstream found;
                    found << "triangle at vertices (" << v << ", " << neighbors[i] << ", "
                          << neighbors[j] << ")";
                    CheckResult check;
                    check.name = "odd_cycle_exists";
                    check.expected = "triangle found";
                    check.actual = found.str();
                    check.pass = true;
                    return check;
                }
    }
    return make_check("odd_cycle_exists", "triangle found", "no triangle in the whole graph");
}

std::vector<BigRat> solve_hitting_exact(const EnumeratedGraph& graph) {
    const long count = long(graph.vertices.size());
    if (count > kRationalSolveCap)
        throw std::runtime_error("solve_hitting_exact: " + std::to_string(count) +
                                 " vertices exceeds the rational-solve cap " +
                                 std::to_string(kRationalSolveCap));
    const long unknowns = count - 1;
    const BigRat step_probability(1, graph.params.degree());

    auto unknown_index = [&](long v) { return v < graph.target_index ? v : v - 1; };
    std::vector<std::vector<BigRat>> a(unknowns, std::vector<BigRat>(unknowns, BigRat(0)));
    std::vector<BigRat> b(unknowns, BigRat(1));
    for (long v = 0; v < count; ++v) {
        if (v == graph.target_index) continue;
        const long row = unknown_index(v);
        a[row][row] = 1;
        for (std::int32_t u : graph.adjacency[v]) {
            if (u == graph.target_index) continue;
            a[row][unknown_index(u)] -= step_probability;
        }
    }
    const std::vector<BigRat> solution = gaussian_solve(std::move(a), std::move(b));
    return group_by_shell(graph, solution,
                          [](const BigRat& x, const BigRat& y) { return x == y; });
}

std::vector<double> solve_hitting_metropolis(const EnumeratedGraph& graph, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::domain_error("solve_hitting_metropolis: beta must be finite and >= 0");
    const long count = long(graph.vertices.size());
    const long unknowns = count - 1;
    const Float50 inv_degree = Float50(1) / graph.params.degree();
    const Float50 accept_up = exp(-Float50(beta));

    auto unknown_index = [&](long v) { return v < graph.target_index ? v : v - 1; };
    std::vector<std::vector<Float50>> a(unknowns, std::vector<Float50>(unknowns, Float50(0)));
    std::vector<Float50> b(unknowns, Float50(1));
    for (long v = 0; v < count; ++v) {
        if (v == graph.target_index) continue;
        const long row = unknown_index(v);
        Float50 self_loop = 0;  // rejected uphill proposals stay put
        for (std::int32_t u : graph.adjacency[v]) {
            Float50 move = inv_degree;
            if (graph.shell_of[u] > graph.shell_of[v]) {
                move *= accept_up;
                self_loop += inv_degree * (1 - accept_up);
            }
            if (u != graph.target_index) a[row][unknown_index(u)] -= move;
        }
        a[row][row] += 1 - self_loop;
    }
    const std::vector<Float50> solution = gaussian_solve(std::move(a), std::move(b));
    const std::vector<Float50> by_shell =
        group_by_shell(graph, solution, [](const Float50& x, const Float50& y) {
            Float50 scale = abs(x);
            if (abs(y) > scale) scale = abs(y);
            if (scale < 1) scale = 1;
            return abs(x - y) < scale * Float50("1e-30");
        });
    std::vector<double> result;
    result.reserve(by_shell.size());
    for (const Float50& value : by_shell) result.push_back(value.convert_to<double>());
    return result;
}

std::vector<double> solve_hitting_lumped(const DistanceChain& chain) {
    return tridiagonal_hitting(chain.p, chain.q, chain.params.d_max());
}

std::vector<BigRat> solve_hitting_lumped_exact(const DistanceChain& chain) {
    if (!chain.has_exact())
        throw std::domain_error("solve_hitting_lumped_exact: chain has no exact arrays (beta > 0)");
    return tridiagonal_hitting(chain.p_exact, chain.q_exact, chain.params.d_max());
}

std::string report_to_json(const OracleReport& report) {
    nlohmann::json doc;
    doc["n"] = report.params.n;
    doc["k"] = report.params.k;
    doc["all_pass"] = report.all_pass();
    doc["checks"] = nlohmann::json::array();
    for (const CheckResult& check : report.checks) {
        doc["checks"].push_back({{"name", check.name},
                                 {"expected", check.expected},
                                 {"actual", check.actual},
                                 {"pass", check.pass}});
    }
    return doc.dump(2);
}

std::string report_to_text(const OracleReport& report) {
    std::ostringstream out;
    out << "J(" << report.params.n << "," << report.params.k << ")\n";
    for (const CheckResult& check : report.checks) {
        out << "  [" << (check.pass ? "PASS" : "FAIL") << "] " << check.name;
        if (!check.pass) out << "  expected: " << check.expected << "  actual: " << check.actual;
        out << "\n";
    }
    return out.str();
}

}  // namespace jdrift
