#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bratteli/premorphism.hpp"

namespace bratteli {

struct ConstructionLevelRecord {
    long long level = 0;
    std::string new_vertex;      // v at this level carrying the added fiber
    long long h_count = 0;       // fiber size at the max path's range vertex
    long long g_count = 0;       // fiber size at the min path's range vertex
    bool identified = false;     // whether the h-top/g-bottom edge is merged
};

struct ConstructionResult {
    Diagram b_prime;
    Premorphism premorphism; // B -> B'
    EventuallyPeriodicPath x;
    EventuallyPeriodicPath tx; // successor of x
    std::vector<ConstructionLevelRecord> bookkeeping; // preamble + one period
    std::optional<NaturalExtensionRule> b_prime_extension;
    std::string warning; // non-fatal notes (e.g. z equals the extended image of y)
};

// Adds one vertex per level carrying copies of the fibers of the chosen max
// path y and min path z (top copy and bottom copy merged from level 2 on), plus
// the stationary premorphism whose induced map sends x to y and its successor
// to z. z must be all-min and y all-max.
ConstructionResult build_counterexample(const Diagram& b, const EventuallyPeriodicPath& z,
                                        const EventuallyPeriodicPath& y,
                                        const NaturalExtensionRule* ext_b = nullptr);

enum class DecisiveVerdict { Decisive, NotDecisive, SemiDecisiveOnly };

struct DecisivenessClassification {
    bool z_eventually_maximal = false;
    bool y_eventually_minimal = false;
    bool max_set_interior_empty = false;
    bool source_simple = false;
    bool source_space_infinite = false;
    bool extension_bijective = false; // checkable surrogate for the source being decisive
    int matched_case = 0;             // 1, 2, or 0
    DecisiveVerdict verdict = DecisiveVerdict::NotDecisive;
};

DecisivenessClassification classify_decisiveness(const Diagram& b,
                                                 const EventuallyPeriodicPath& z,
                                                 const EventuallyPeriodicPath& y,
                                                 const ConstructionResult& result,
                                                 const NaturalExtensionRule* ext_b = nullptr);

struct UniqueMin {
    bool unique = false;
    ExtremeSet min_set;
};

UniqueMin unique_min_witness(const Diagram& b);

enum class Rank2Kind { TwoOdometers, OdometerConjugacy };

struct Rank2Outcome {
    Rank2Kind kind = Rank2Kind::TwoOdometers;
    // TwoOdometers: the two single-vertex sub-diagrams and the level they split at
    Diagram first;
    Diagram second;
    long long split_level = 0;
    // OdometerConjugacy: the rank-1 diagram plus the premorphism from the
    // (possibly telescoped) source presentation used for the reduction
    Diagram c;
    std::optional<Premorphism> conjugacy; // source_presentation -> c
    Diagram source_presentation;
};

Rank2Outcome rank2_reduce(const Diagram& b, const NaturalExtensionRule& pairing,
                          int window_periods = 3);

struct FactoringWitness {
    EventuallyPeriodicPath path; // point of the domain where equivariance fails
    long long level = 0;         // first disagreeing level
    PathPrefix expected;
    PathPrefix actual;
};

struct EquivConditionRecord {
    int case_matched = 0; // 1: preimage all-max, 2: preimage not all-max
    bool holds = false;
    long long fail_level = 0;
    std::string detail;
};

struct FactoringReport {
    bool pass = false;
    std::vector<FactoringWitness> witnesses;
    std::vector<EquivConditionRecord> equiv_conditions;
    std::string note;
};

// (a) prefix equivariance swept over the fibers at the check depth, (b) the
// exact preimages of the max-path witnesses compared through one extended
// step, (c) the structural minimal-edge / successor-edge conditions.
FactoringReport check_factoring(const Premorphism& f, long long depth,
                                const NaturalExtensionRule& ext_b,
                                const NaturalExtensionRule& ext_c);

// enumerates the preimages of the max-path witnesses of the source system
// exactly, via backward-coherent preimage chains over one stabilized period
std::vector<EventuallyPeriodicPath> max_path_preimages(const Premorphism& f);

} // namespace bratteli
