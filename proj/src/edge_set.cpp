#include "bratteli/edge_set.hpp"

#include <algorithm>

namespace bratteli {

OrderedEdgeSet OrderedEdgeSet::from_edges(std::vector<std::string> domain,
                                          std::vector<std::string> codomain,
                                          const std::vector<EdgeSpec>& edges) {
    OrderedEdgeSet s;
    s.domain = std::move(domain);
    s.codomain = std::move(codomain);
    for (size_t i = 0; i < s.domain.size(); ++i) s.dom_index[s.domain[i]] = static_cast<int>(i);
    for (size_t i = 0; i < s.codomain.size(); ++i) s.cod_index[s.codomain[i]] = static_cast<int>(i);
    std::vector<std::vector<std::pair<int, int>>> staged(s.codomain.size());
    for (const auto& e : edges) {
        auto ci = s.cod_index.find(e.range);
        auto di = s.dom_index.find(e.source);
        if (ci == s.cod_index.end())
            throw DomainMismatch("edge range '" + e.range + "' not in codomain");
        if (di == s.dom_index.end())
            throw DomainMismatch("edge source '" + e.source + "' not in domain");
        staged[static_cast<size_t>(ci->second)].push_back({e.rank, di->second});
    }
    s.fibers.assign(s.codomain.size(), {});
    for (size_t w = 0; w < staged.size(); ++w) {
        auto& fib = staged[w];
        std::sort(fib.begin(), fib.end());
        for (size_t i = 0; i < fib.size(); ++i) {
            if (fib[i].first != static_cast<int>(i))
                throw DomainMismatch("fiber at '" + s.codomain[w] +
                                     "' has non-contiguous ranks");
            s.fibers[w].push_back(fib[i].second);
        }
    }
    return s;
}

std::vector<EdgeSpec> OrderedEdgeSet::to_edges() const {
    std::vector<EdgeSpec> out;
    for (size_t w = 0; w < fibers.size(); ++w)
        for (size_t r = 0; r < fibers[w].size(); ++r)
            out.push_back({domain[static_cast<size_t>(fibers[w][r])], codomain[w],
                           static_cast<int>(r)});
    return out;
}

long long OrderedEdgeSet::edge_count() const {
    long long n = 0;
    for (const auto& f : fibers) n += static_cast<long long>(f.size());
    return n;
}

int OrderedEdgeSet::source_fiber_size(int dom_idx) const {
    int n = 0;
    for (const auto& f : fibers)
        for (int s : f)
            if (s == dom_idx) ++n;
    return n;
}

bool OrderedEdgeSet::source_surjective() const {
    std::vector<char> hit(domain.size(), 0);
    for (const auto& f : fibers)
        for (int s : f) hit[static_cast<size_t>(s)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool OrderedEdgeSet::range_surjective() const {
    return std::all_of(fibers.begin(), fibers.end(),
                       [](const std::vector<int>& f) { return !f.empty(); });
}

OrderedEdgeSet identity_edge_set(const std::vector<std::string>& vertices) {
    OrderedEdgeSet s;
    s.domain = vertices;
    s.codomain = vertices;
    for (size_t i = 0; i < vertices.size(); ++i) {
        s.dom_index[vertices[i]] = static_cast<int>(i);
        s.cod_index[vertices[i]] = static_cast<int>(i);
        s.fibers.push_back({static_cast<int>(i)});
    }
    return s;
}

OrderedEdgeSet level_edge_set(const Diagram& d, long long n) {
    const CompiledLevel& cl = d.level(n);
    OrderedEdgeSet s;
    s.domain = cl.prev;
    s.codomain = cl.verts;
    s.dom_index = cl.prev_index;
    s.cod_index = cl.vert_index;
    s.fibers = cl.fiber;
    return s;
}

OrderedEdgeSet telescoped_edge_set(const Diagram& d, long long i, long long j) {
    if (i > j) throw DomainMismatch("telescoped window needs i <= j");
    OrderedEdgeSet s = identity_edge_set(d.vertices_at(i));
    for (long long lvl = i + 1; lvl <= j; ++lvl) s = compose_edge_sets(s, level_edge_set(d, lvl));
    return s;
}

OrderedEdgeSet compose_edge_sets(const OrderedEdgeSet& f, const OrderedEdgeSet& g) {
    if (f.codomain != g.domain)
        throw DomainMismatch("composition needs matching middle vertex lists");
    OrderedEdgeSet s;
    s.domain = f.domain;
    s.codomain = g.codomain;
    s.dom_index = f.dom_index;
    s.cod_index = g.cod_index;
    s.fibers.assign(s.codomain.size(), {});
    for (size_t w = 0; w < g.fibers.size(); ++w)
        for (int mid : g.fibers[w])
            for (int src : f.fibers[static_cast<size_t>(mid)]) s.fibers[w].push_back(src);
    return s;
}

bool order_isomorphic(const OrderedEdgeSet& f, const OrderedEdgeSet& g) {
    return order_isomorphic_report(f, g, nullptr);
}

bool order_isomorphic_report(const OrderedEdgeSet& f, const OrderedEdgeSet& g,
                             std::string* first_bad_fiber) {
    if (f.domain != g.domain || f.codomain != g.codomain)
        throw DomainMismatch("order isomorphism needs identical domain and codomain lists");
    for (size_t w = 0; w < f.fibers.size(); ++w) {
        if (f.fibers[w] != g.fibers[w]) {
            if (first_bad_fiber) *first_bad_fiber = f.codomain[w];
            return false;
        }
    }
    return true;
}

} // namespace bratteli
