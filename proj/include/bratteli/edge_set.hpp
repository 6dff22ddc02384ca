#pragma once

#include <map>
#include <string>
#include <vector>

#include "bratteli/diagram.hpp"

namespace bratteli {

// An ordered bipartite edge layer: a diagram level, a telescoped window of
// levels, or a premorphism layer F_n. Fibers hold source indices in rank order.
struct OrderedEdgeSet {
    std::vector<std::string> domain;
    std::vector<std::string> codomain;
    std::map<std::string, int> dom_index;
    std::map<std::string, int> cod_index;
    std::vector<std::vector<int>> fibers; // [codomain idx][rank] -> domain idx

    static OrderedEdgeSet from_edges(std::vector<std::string> domain,
                                     std::vector<std::string> codomain,
                                     const std::vector<EdgeSpec>& edges);
    std::vector<EdgeSpec> to_edges() const;

    long long edge_count() const;
    int source_fiber_size(int dom_idx) const; // #s^{-1}(v)
    bool source_surjective() const;
    bool range_surjective() const;
};

OrderedEdgeSet identity_edge_set(const std::vector<std::string>& vertices);

// E_n viewed as an ordered edge set from V_{n-1} to V_n
OrderedEdgeSet level_edge_set(const Diagram& d, long long n);

// S_{i,j}: composed window of target levels i+1..j (S_{i,i} = identity)
OrderedEdgeSet telescoped_edge_set(const Diagram& d, long long i, long long j);

// pairs (t, g) with r(t) = s(g), reverse-lexicographic order (g most significant)
OrderedEdgeSet compose_edge_sets(const OrderedEdgeSet& f, const OrderedEdgeSet& g);

// equal fiber lengths and identical source sequences in rank order
bool order_isomorphic(const OrderedEdgeSet& f, const OrderedEdgeSet& g);
bool order_isomorphic_report(const OrderedEdgeSet& f, const OrderedEdgeSet& g,
                             std::string* first_bad_fiber);

} // namespace bratteli
