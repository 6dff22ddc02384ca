#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bratteli/edge_set.hpp"
#include "bratteli/paths.hpp"

namespace bratteli {

// Ordered premorphism f : B -> C. The level map is a preamble plus an
// arithmetic tail; the layers F_n repeat with a block aligned to both cycles.
// F_0 (the forced singleton root edge) is implicit.
class Premorphism {
public:
    Diagram source; // B
    Diagram target; // C
    std::vector<long long> fmap_preamble{0}; // f_0 .. f_{k-1}
    long long fmap_step = 1;                 // f_{n+1} = f_n + step past the preamble
    std::vector<std::vector<EdgeSpec>> layers_preamble; // F_1 .. F_m
    std::vector<std::vector<EdgeSpec>> layers_cycle;    // repeats after the preamble

    long long f(long long n) const;
    // smallest n such that all data at levels >= n repeats with period layer_period()
    long long periodic_start() const;
    long long layer_period() const { return static_cast<long long>(layers_cycle.size()); }
    OrderedEdgeSet layer(long long n) const; // F_n, n >= 0
    const std::vector<EdgeSpec>& layer_spec(long long n) const; // n >= 1

    // depth such that commutativity up to it certifies every level
    long long certify_depth() const;
};

ValidationReport validate_premorphism(const Premorphism& f, long long depth);
bool premorphism_valid(const Premorphism& f); // auto-certification depth
void require_valid(const Premorphism& f);

// smallest multiple of the layer block aligned with both diagram cycles
long long aligned_period(const Premorphism& f);

// an F_n edge identified by (codomain vertex index, position in its fiber)
struct LayerEdge {
    int w = 0;
    int pos = 0;
    bool operator==(const LayerEdge&) const = default;
    bool operator<(const LayerEdge& o) const {
        return w != o.w ? w < o.w : pos < o.pos;
    }
};

// The ordered isomorphism E_{n+1} ∘ F_{n+1} ≅ F_n ∘ S_{f_n,f_{n+1}} as a
// computable two-way step: forward turns a layer edge plus a target window
// into the next source edge and layer edge; inverse recovers them.
class LevelCorrespondence {
public:
    LevelCorrespondence(const Premorphism& f, long long n);

    long long window_from() const { return cfrom_; }
    long long window_to() const { return cto_; }

    std::pair<PrefixEdge, LayerEdge> forward(LayerEdge dn,
                                             const std::vector<PrefixEdge>& window) const;
    std::pair<LayerEdge, std::vector<PrefixEdge>> inverse(const PrefixEdge& source_edge,
                                                          LayerEdge dn1) const;

private:
    const Premorphism& f_;
    long long n_;
    OrderedEdgeSet Fn_, Fn1_;
    long long cfrom_ = 0, cto_ = 0;
    std::vector<std::vector<BigCount>> wf_; // layer-weighted window path counts
};

Premorphism identity_premorphism(const Diagram& d);

// g_0 = 0, g_n = f_n + 1, G_n = F_n composed with one more target level
Premorphism delay_premorphism(const Premorphism& f);

Premorphism compose_premorphisms(const Premorphism& f, const Premorphism& g);

// Locates the rank of the composed C-side path in its fiber and indexes the
// matching B-side composed fiber, level by level. realizing_edge (optional out)
// receives the F_n edge d_n of the correspondence as (codomain idx, fiber pos).
PathPrefix induced_map_prefix(const Premorphism& f, const PathPrefix& c_prefix, long long n,
                              std::pair<int, int>* realizing_edge = nullptr);

std::vector<PathPrefix> preimage_prefixes(const Premorphism& f, const PathPrefix& b_prefix);

// image path of V(f): X_C -> X_B, exact (periodicity from the finite-state
// level recurrence, no truncation guessing)
EventuallyPeriodicPath induced_path(const Premorphism& f, const EventuallyPeriodicPath& x);

struct FiberBound {
    bool unbounded = false;
    long long k = 0;
};

FiberBound fiber_bound(const Premorphism& f, const EventuallyPeriodicPath& y);

bool premorphisms_equivalent(const Premorphism& f, const Premorphism& g, long long depth);

} // namespace bratteli
