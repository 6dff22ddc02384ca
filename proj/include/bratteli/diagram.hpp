#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bratteli/errors.hpp"

namespace bratteli {

// Path counts grow multiplicatively with depth; 128 bits cover every depth the
// exact algorithms visit. Arithmetic is overflow-checked.
using BigCount = unsigned __int128;

BigCount checked_add(BigCount a, BigCount b);
BigCount checked_mul(BigCount a, BigCount b);
std::string count_to_string(BigCount v);

enum class Extreme { Max, Min };

struct EdgeSpec {
    std::string source; // vertex id at level n-1
    std::string range;  // vertex id at level n
    int rank = 0;       // position in the total order of r^{-1}(range); 0 = minimal

    bool operator==(const EdgeSpec&) const = default;
};

struct LevelSpec {
    std::vector<std::string> vertices; // range-side vertex ids, unique
    std::vector<EdgeSpec> edges;

    bool operator==(const LevelSpec&) const = default;
};

struct ValidationIssue {
    long long level = 0;
    std::string subject; // vertex / edge / fiber the issue names
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

struct ValidationError : std::runtime_error {
    ValidationReport report;
    explicit ValidationError(ValidationReport r)
        : std::runtime_error(r.to_string()), report(std::move(r)) {}
};

// One edge level resolved into index form: fibers list source indices by rank,
// out lists (range index, rank) pairs per source vertex.
struct CompiledLevel {
    std::vector<std::string> prev;  // source-side vertex ids
    std::vector<std::string> verts; // range-side vertex ids
    std::map<std::string, int> prev_index;
    std::map<std::string, int> vert_index;
    std::vector<std::vector<int>> fiber;                    // [range idx][rank] -> source idx
    std::vector<std::vector<std::pair<int, int>>> out;      // [source idx] -> (range idx, rank)

    int fiber_size(int v) const { return static_cast<int>(fiber[v].size()); }
    int extreme_rank(int v, Extreme kind) const {
        return kind == Extreme::Min ? 0 : fiber_size(v) - 1;
    }
};

// Eventually-periodic presentation: concrete levels 1..p (preamble) followed by
// the cycle repeating forever. An empty cycle is a purely finite test fixture;
// infinite-path operations reject it.
class Diagram {
public:
    Diagram() = default;
    Diagram(std::vector<LevelSpec> preamble, std::vector<LevelSpec> cycle);

    const std::vector<LevelSpec>& preamble() const { return preamble_; }
    const std::vector<LevelSpec>& cycle() const { return cycle_; }
    long long preamble_length() const { return static_cast<long long>(preamble_.size()); }
    long long cycle_length() const { return static_cast<long long>(cycle_.size()); }
    bool finite() const { return cycle_.empty(); }

    bool level_exists(long long n) const;
    void require_level(long long n) const; // throws FiniteDiagramExhausted
    const LevelSpec& level_spec(long long n) const;
    const CompiledLevel& level(long long n) const;
    const std::vector<std::string>& vertices_at(long long n) const; // n >= 0
    const std::string& root() const;

    // smallest aligned depth >= n: past the preamble and congruent to it mod cycle
    long long align_up(long long n) const;

    // number of paths from the root to each vertex of level n (n >= 0)
    std::vector<BigCount> path_counts(long long n) const;
    BigCount total_paths(long long n) const;

    bool operator==(const Diagram& o) const {
        return preamble_ == o.preamble_ && cycle_ == o.cycle_;
    }

private:
    std::vector<LevelSpec> preamble_;
    std::vector<LevelSpec> cycle_;
    std::vector<CompiledLevel> compiled_preamble_;
    std::vector<CompiledLevel> compiled_cycle_;
    std::string root_;
    std::vector<std::string> root_vec_;

    void compile();
};

ValidationReport validate_diagram(const Diagram& d);
void require_valid(const Diagram& d); // throws ValidationError

std::vector<LevelSpec> unroll(const Diagram& d, long long n);

// Replaces edge levels by composed paths between consecutive cuts, ordered
// reverse-lexicographically (last edge most significant). Result is a purely
// finite diagram with one level per cut.
Diagram telescope(const Diagram& d, const std::vector<long long>& cuts, long long depth);

struct AdjacencyMatrix {
    std::vector<std::string> rows; // V_n
    std::vector<std::string> cols; // V_{n-1}
    std::vector<std::vector<long long>> entries;
};

AdjacencyMatrix adjacency_matrix(const Diagram& d, long long n);

// true iff M_{i+1} ... M_j has all entries strictly positive
bool is_simple_window(const Diagram& d, long long i, long long j);

// exhaustive over the periodic structure: positivity of some window starting at
// every level, which the window product extends cofinally
bool is_simple(const Diagram& d);

// sends each vertex of V_n to the source of its extreme edge
std::map<std::string, std::string> extreme_successor_map(const Diagram& d, long long n,
                                                         Extreme kind);

} // namespace bratteli
