#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bratteli/diagram.hpp"

namespace bratteli {

struct PrefixEdge {
    std::string range;
    int rank = 0;
    bool operator==(const PrefixEdge&) const = default;
};

// A finite initial path; the edge at position i (1-based) lives at level i.
struct PathPrefix {
    std::vector<PrefixEdge> edges;

    long long length() const { return static_cast<long long>(edges.size()); }
    bool empty() const { return edges.empty(); }
    bool operator==(const PathPrefix&) const = default;
};

void validate_prefix(const Diagram& d, const PathPrefix& p); // throws InvalidPrefix
std::string terminal_vertex(const Diagram& d, const PathPrefix& p);
std::string prefix_to_string(const PathPrefix& p);

// reverse-lexicographic rank of p among all root-to-terminal paths
BigCount prefix_rank(const Diagram& d, const PathPrefix& p);
PathPrefix prefix_unrank(const Diagram& d, long long n, const std::string& vertex, BigCount rank);
PathPrefix all_extreme_prefix(const Diagram& d, long long n, const std::string& vertex,
                              Extreme kind);
bool prefix_all_extreme(const Diagram& d, const PathPrefix& p, Extreme kind);

// tail edge choices are (range, rank) per level, repeated with the cycle
struct TailEdge {
    std::string range;
    int rank = 0;
    bool operator==(const TailEdge&) const = default;
};

enum class TailKind { AllMax, AllMin, Periodic };

// Infinite path stored as an explicit prefix plus a periodic tail whose length
// is a multiple of the diagram cycle and whose start is cycle-aligned.
class EventuallyPeriodicPath {
public:
    EventuallyPeriodicPath() = default;

    // normalizes and validates; AllMax/AllMin tails are resolved against the
    // diagram's extreme-path witnesses and must be unambiguous
    static EventuallyPeriodicPath make(const Diagram& d, PathPrefix prefix, TailKind kind,
                                       std::vector<TailEdge> periodic = {});
    // trusted constructor for already-normalized data (used by witness builders)
    static EventuallyPeriodicPath raw(PathPrefix prefix, std::vector<TailEdge> tail);

    const PathPrefix& prefix() const { return prefix_; }
    const std::vector<TailEdge>& tail() const { return tail_; }
    long long prefix_length() const { return prefix_.length(); }
    long long tail_period() const { return static_cast<long long>(tail_.size()); }

    PrefixEdge edge_at(long long n) const; // n >= 1
    PathPrefix prefix_to(long long n) const;

private:
    PathPrefix prefix_;
    std::vector<TailEdge> tail_;
};

bool path_equal(const Diagram& d, const EventuallyPeriodicPath& a,
                const EventuallyPeriodicPath& b);
bool path_all_extreme(const Diagram& d, const EventuallyPeriodicPath& x, Extreme kind);
bool is_eventually_extreme(const Diagram& d, const EventuallyPeriodicPath& x, Extreme kind);

// deterministic infinite continuation of a prefix (smallest outgoing edge each
// level until the (phase, vertex) state repeats); test and CLI plumbing
EventuallyPeriodicPath extend_periodically(const Diagram& d, const PathPrefix& p);

struct StepResult {
    std::optional<PathPrefix> next; // nullopt: successor not determined by the prefix
    bool determined() const { return next.has_value(); }
};

StepResult vershik_step(const Diagram& d, const PathPrefix& p);
StepResult vershik_predecessor(const Diagram& d, const PathPrefix& p);

struct ExtremeSet {
    long long count = 0;
    std::vector<EventuallyPeriodicPath> witnesses;
};

ExtremeSet count_extreme_paths(const Diagram& d, Extreme kind);

// true iff every infinite extension of the prefix is all-extreme
bool cylinder_in_extreme(const Diagram& d, const PathPrefix& p, Extreme kind);
bool extreme_set_interior_empty(const Diagram& d, Extreme kind);

// explicit assignment of each infinite max path to an infinite min path
struct NaturalExtensionRule {
    std::vector<std::pair<EventuallyPeriodicPath, EventuallyPeriodicPath>> pairs;

    const EventuallyPeriodicPath* lookup(const Diagram& d,
                                         const EventuallyPeriodicPath& max_path) const;
};

ValidationReport validate_extension_rule(const Diagram& d, const NaturalExtensionRule& rule);
NaturalExtensionRule unique_min_rule(const Diagram& d); // throws MaxPathNoExtension if min not unique

EventuallyPeriodicPath vershik_step_infinite(const Diagram& d, const EventuallyPeriodicPath& x,
                                             const NaturalExtensionRule* ext = nullptr);

std::vector<EventuallyPeriodicPath> orbit_segment(const Diagram& d,
                                                  const EventuallyPeriodicPath& x, long long len,
                                                  const NaturalExtensionRule* ext = nullptr);

// the i-th letter is the depth-k prefix of T^i x
std::vector<PathPrefix> truncation_itinerary(const Diagram& d, const EventuallyPeriodicPath& x,
                                             long long k, long long len,
                                             const NaturalExtensionRule* ext = nullptr);

} // namespace bratteli
