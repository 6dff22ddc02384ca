#include "bratteli/premorphism.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace bratteli {

long long Premorphism::f(long long n) const {
    if (n < 0) throw PrefixLengthMismatch("negative level");
    long long k = static_cast<long long>(fmap_preamble.size());
    if (n < k) return fmap_preamble[static_cast<size_t>(n)];
    return fmap_preamble.back() + (n - k + 1) * fmap_step;
}

const std::vector<EdgeSpec>& Premorphism::layer_spec(long long n) const {
    long long m = static_cast<long long>(layers_preamble.size());
    if (n < 1) throw PrefixLengthMismatch("layer index must be >= 1");
    if (n <= m) return layers_preamble[static_cast<size_t>(n - 1)];
    if (layers_cycle.empty())
        throw FiniteDiagramExhausted("layer " + std::to_string(n) +
                                     " exceeds the finite presentation");
    return layers_cycle[static_cast<size_t>((n - 1 - m) % layer_period())];
}

OrderedEdgeSet Premorphism::layer(long long n) const {
    if (n == 0) {
        OrderedEdgeSet s;
        s.domain = {source.root()};
        s.codomain = {target.root()};
        s.dom_index[source.root()] = 0;
        s.cod_index[target.root()] = 0;
        s.fibers = {{0}};
        return s;
    }
    return OrderedEdgeSet::from_edges(source.vertices_at(n), target.vertices_at(f(n)),
                                      layer_spec(n));
}

long long Premorphism::periodic_start() const {
    long long n1 = std::max<long long>(static_cast<long long>(layers_preamble.size()),
                                       static_cast<long long>(fmap_preamble.size()) - 1);
    n1 = std::max(n1, source.preamble_length());
    long long pc = target.preamble_length();
    long long n = 0;
    while (f(n) < pc) ++n;
    return std::max(n1, n);
}

long long aligned_period(const Premorphism& f) {
    if (f.source.finite() || f.target.finite()) return 0;
    long long lam = std::max<long long>(f.layer_period(), 1);
    long long cb = f.source.cycle_length();
    long long cc = f.target.cycle_length();
    long long a = lam;
    while (a % cb != 0 || (a * f.fmap_step) % cc != 0) a += lam;
    return a;
}

long long Premorphism::certify_depth() const {
    if (source.finite()) return source.preamble_length();
    return periodic_start() + aligned_period(*this);
}

ValidationReport validate_premorphism(const Premorphism& f, long long depth) {
    ValidationReport rep;
    auto issue = [&](long long level, std::string subject, std::string detail) {
        rep.issues.push_back({level, std::move(subject), std::move(detail)});
    };

    if (f.fmap_preamble.empty() || f.fmap_preamble.front() != 0)
        issue(0, "level map", "the level map must start at 0");
    for (size_t i = 1; i < f.fmap_preamble.size(); ++i)
        if (f.fmap_preamble[i] < f.fmap_preamble[i - 1])
            issue(static_cast<long long>(i), "level map", "level map must be non-decreasing");
    if (f.fmap_step < 1) issue(0, "level map", "periodic step must be >= 1");

    if (!f.source.finite()) {
        long long lam = f.layer_period();
        if (lam < 1) {
            issue(0, "layers", "infinite source needs a periodic layer block");
            return rep;
        }
        if (lam % f.source.cycle_length() != 0)
            issue(0, "layers", "layer block is not aligned with the source cycle");
        if ((lam * f.fmap_step) % f.target.cycle_length() != 0)
            issue(0, "layers", "layer block is not aligned with the target cycle");
    }

    long long d = std::max(depth, f.certify_depth());
    if (f.source.finite()) d = std::min(d, f.source.preamble_length());

    for (long long n = 0; n <= d; ++n) {
        if (f.target.finite() && f.f(n) > f.target.preamble_length()) {
            issue(n, "level map", "level map exceeds the finite target");
            return rep;
        }
    }

    std::vector<OrderedEdgeSet> layers;
    for (long long n = 0; n <= d; ++n) {
        try {
            layers.push_back(f.layer(n));
        } catch (const std::exception& e) {
            issue(n, "layer", e.what());
            return rep;
        }
        const OrderedEdgeSet& fn = layers.back();
        if (!fn.source_surjective())
            issue(n, "layer", "some source vertex carries no layer edge");
        if (!fn.range_surjective())
            issue(n, "layer", "some target vertex carries no layer edge");
    }

    for (long long n = 0; n + 1 <= d; ++n) {
        OrderedEdgeSet lhs, rhs;
        try {
            lhs = compose_edge_sets(level_edge_set(f.source, n + 1), layers[static_cast<size_t>(n + 1)]);
            rhs = compose_edge_sets(layers[static_cast<size_t>(n)],
                                    telescoped_edge_set(f.target, f.f(n), f.f(n + 1)));
        } catch (const std::exception& e) {
            issue(n + 1, "composition", e.what());
            continue;
        }
        std::string bad;
        bool ok = false;
        try {
            ok = order_isomorphic_report(lhs, rhs, &bad);
        } catch (const std::exception& e) {
            issue(n + 1, "composition", e.what());
            continue;
        }
        if (!ok) issue(n + 1, bad, "ordered commutativity fails at this fiber");
    }
    return rep;
}

bool premorphism_valid(const Premorphism& f) { return validate_premorphism(f, 0).ok(); }

void require_valid(const Premorphism& f) {
    auto rep = validate_premorphism(f, 0);
    if (!rep.ok()) throw ValidationError(rep);
}

Premorphism identity_premorphism(const Diagram& d) {
    Premorphism f;
    f.source = d;
    f.target = d;
    f.fmap_preamble = {0};
    f.fmap_step = 1;
    auto identity_layer = [&](long long n) {
        std::vector<EdgeSpec> es;
        for (const auto& v : d.vertices_at(n)) es.push_back({v, v, 0});
        return es;
    };
    for (long long n = 1; n <= d.preamble_length(); ++n)
        f.layers_preamble.push_back(identity_layer(n));
    for (long long n = d.preamble_length() + 1; n <= d.preamble_length() + d.cycle_length(); ++n)
        f.layers_cycle.push_back(identity_layer(n));
    return f;
}

Premorphism delay_premorphism(const Premorphism& f) {
    Premorphism g;
    g.source = f.source;
    g.target = f.target;
    g.fmap_step = f.fmap_step;
    long long start = f.periodic_start() + 1;
    for (long long n = 0; n < start; ++n)
        g.fmap_preamble.push_back(n == 0 ? 0 : f.f(n) + 1);
    auto delayed_layer = [&](long long n) {
        OrderedEdgeSet gn = compose_edge_sets(
            f.layer(n), telescoped_edge_set(f.target, f.f(n), f.f(n) + 1));
        return gn.to_edges();
    };
    long long lam = aligned_period(f);
    for (long long n = 1; n < start; ++n) g.layers_preamble.push_back(delayed_layer(n));
    for (long long n = start; n < start + lam; ++n) g.layers_cycle.push_back(delayed_layer(n));
    return g;
}

Premorphism compose_premorphisms(const Premorphism& f, const Premorphism& g) {
    if (!(f.target == g.source))
        throw DiagramMismatch("composition needs f's target to equal g's source");
    Premorphism h;
    h.source = f.source;
    h.target = g.target;
    h.fmap_step = f.fmap_step * g.fmap_step;

    long long start = f.periodic_start();
    {
        long long n = 0;
        while (f.f(n) < g.periodic_start()) ++n;
        start = std::max(start, n);
    }
    start += 1;
    for (long long n = 0; n < start; ++n) h.fmap_preamble.push_back(g.f(f.f(n)));

    auto composed_layer = [&](long long n) {
        return compose_edge_sets(f.layer(n), g.layer(f.f(n))).to_edges();
    };
    long long lam_f = aligned_period(f);
    long long lam_g = std::max<long long>(g.layer_period(), 1);
    long long lam = lam_f;
    while ((lam * f.fmap_step) % lam_g != 0) lam += lam_f;
    // keep the composite aligned with both end cycles
    while (lam % f.source.cycle_length() != 0 ||
           (lam * h.fmap_step) % g.target.cycle_length() != 0)
        lam += lam_f;

    for (long long n = 1; n < start; ++n) h.layers_preamble.push_back(composed_layer(n));
    for (long long n = start; n < start + lam; ++n) h.layers_cycle.push_back(composed_layer(n));
    return h;
}

// ---------------------------------------------------------------------------
// Induced map: level-local correspondence through the ordered isomorphisms

LevelCorrespondence::LevelCorrespondence(const Premorphism& f, long long n) : f_(f), n_(n) {
    Fn_ = f.layer(n);
    Fn1_ = f.layer(n + 1);
    cfrom_ = f.f(n);
    cto_ = f.f(n + 1);
    std::vector<BigCount> cur(Fn_.codomain.size());
    for (size_t v = 0; v < Fn_.codomain.size(); ++v)
        cur[v] = static_cast<BigCount>(Fn_.fibers[v].size());
    wf_.push_back(cur);
    for (long long lvl = cfrom_ + 1; lvl <= cto_; ++lvl) {
        const CompiledLevel& cl = f.target.level(lvl);
        std::vector<BigCount> next(cl.verts.size(), 0);
        for (size_t v = 0; v < cl.fiber.size(); ++v)
            for (int src : cl.fiber[v])
                next[v] = checked_add(next[v], wf_.back()[static_cast<size_t>(src)]);
        wf_.push_back(std::move(next));
    }
}

std::pair<PrefixEdge, LayerEdge> LevelCorrespondence::forward(
    LayerEdge dn, const std::vector<PrefixEdge>& window) const {
    // position of (d_n, window) in the F_n∘S fiber at the window's end
    BigCount pos = static_cast<BigCount>(dn.pos);
    int cur = dn.w;
    for (size_t t = 0; t < window.size(); ++t) {
        const CompiledLevel& cl = f_.target.level(cfrom_ + static_cast<long long>(t) + 1);
        int w = cl.vert_index.at(window[t].range);
        const auto& fib = cl.fiber[static_cast<size_t>(w)];
        if (fib[static_cast<size_t>(window[t].rank)] != cur)
            throw InvalidPrefix("window does not chain through the layer correspondence");
        for (int r = 0; r < window[t].rank; ++r)
            pos = checked_add(pos, wf_[t][static_cast<size_t>(fib[static_cast<size_t>(r)])]);
        cur = w;
    }
    // index the E_{n+1}∘F_{n+1} fiber at the same end vertex
    const CompiledLevel& bl = f_.source.level(n_ + 1);
    const auto& fib1 = Fn1_.fibers[static_cast<size_t>(cur)];
    for (size_t p1 = 0; p1 < fib1.size(); ++p1) {
        int bv = fib1[p1]; // source vertex in V_{n+1}
        BigCount block = static_cast<BigCount>(bl.fiber[static_cast<size_t>(bv)].size());
        if (pos < block) {
            PrefixEdge e{bl.verts[static_cast<size_t>(bv)], static_cast<int>(pos)};
            return {e, LayerEdge{cur, static_cast<int>(p1)}};
        }
        pos -= block;
    }
    throw InvalidPrefix("composite fiber positions disagree; premorphism is not valid");
}

std::pair<LayerEdge, std::vector<PrefixEdge>> LevelCorrespondence::inverse(
    const PrefixEdge& source_edge, LayerEdge dn1) const {
    const CompiledLevel& bl = f_.source.level(n_ + 1);
    int bv = bl.vert_index.at(source_edge.range);
    const auto& fib1 = Fn1_.fibers[static_cast<size_t>(dn1.w)];
    if (fib1[static_cast<size_t>(dn1.pos)] != bv)
        throw InvalidPrefix("layer edge does not sit over the source edge");
    BigCount pos = 0;
    for (int p1 = 0; p1 < dn1.pos; ++p1) {
        int v = fib1[static_cast<size_t>(p1)];
        pos = checked_add(pos, static_cast<BigCount>(bl.fiber[static_cast<size_t>(v)].size()));
    }
    pos = checked_add(pos, static_cast<BigCount>(source_edge.rank));

    std::vector<PrefixEdge> window(static_cast<size_t>(cto_ - cfrom_));
    int cur = dn1.w;
    for (long long t = cto_ - cfrom_; t >= 1; --t) {
        const CompiledLevel& cl = f_.target.level(cfrom_ + t);
        const auto& fib = cl.fiber[static_cast<size_t>(cur)];
        bool placed = false;
        for (size_t r = 0; r < fib.size(); ++r) {
            BigCount block = wf_[static_cast<size_t>(t - 1)][static_cast<size_t>(fib[r])];
            if (pos < block) {
                window[static_cast<size_t>(t - 1)] = {cl.verts[static_cast<size_t>(cur)],
                                                      static_cast<int>(r)};
                cur = fib[r];
                placed = true;
                break;
            }
            pos -= block;
        }
        if (!placed) throw InvalidPrefix("composite fiber positions disagree");
    }
    return {LayerEdge{cur, static_cast<int>(pos)}, std::move(window)};
}

PathPrefix induced_map_prefix(const Premorphism& f, const PathPrefix& c_prefix, long long n,
                              std::pair<int, int>* realizing_edge) {
    if (c_prefix.length() != f.f(n))
        throw PrefixLengthMismatch("expected a prefix of length " + std::to_string(f.f(n)));
    validate_prefix(f.target, c_prefix);
    LayerEdge d{0, 0};
    PathPrefix out;
    for (long long m = 0; m < n; ++m) {
        LevelCorrespondence sd(f, m);
        std::vector<PrefixEdge> window(c_prefix.edges.begin() + sd.window_from(),
                                       c_prefix.edges.begin() + sd.window_to());
        auto [e, d1] = sd.forward(d, window);
        out.edges.push_back(e);
        d = d1;
    }
    if (realizing_edge) *realizing_edge = {d.w, d.pos};
    return out;
}

std::vector<PathPrefix> preimage_prefixes(const Premorphism& f, const PathPrefix& b_prefix) {
    validate_prefix(f.source, b_prefix);
    long long n = b_prefix.length();
    long long fn = f.f(n);
    OrderedEdgeSet Fn = f.layer(n);
    const std::string term = terminal_vertex(f.source, b_prefix);
    int term_idx = n == 0 ? 0 : Fn.dom_index.at(term);
    BigCount brank = prefix_rank(f.source, b_prefix);
    auto bcounts = f.source.path_counts(n);

    std::vector<PathPrefix> out;
    for (size_t w = 0; w < Fn.fibers.size(); ++w) {
        BigCount before = 0;
        for (size_t pos = 0; pos < Fn.fibers[w].size(); ++pos) {
            int src = Fn.fibers[w][pos];
            if (src == term_idx) {
                BigCount cpos = checked_add(before, brank);
                out.push_back(prefix_unrank(f.target, fn, Fn.codomain[w], cpos));
            }
            before = checked_add(before, bcounts[static_cast<size_t>(src)]);
        }
    }
    return out;
}

EventuallyPeriodicPath induced_path(const Premorphism& f, const EventuallyPeriodicPath& x) {
    if (f.source.finite() || f.target.finite())
        throw FiniteDiagramExhausted("image paths need infinite diagrams");
    long long a = aligned_period(f);
    long long tx = std::max<long long>(x.tail_period(), 1);
    long long A = a;
    while ((A * f.fmap_step) % tx != 0) A += a;

    long long m_start = f.periodic_start();
    while (f.f(m_start) < x.prefix_length()) ++m_start;
    m_start = f.source.align_up(std::max(m_start, f.source.preamble_length()));

    LayerEdge d{0, 0};
    std::vector<PrefixEdge> edges; // B edges, level 1..
    std::map<LayerEdge, long long> seen;
    long long m = 0;
    while (true) {
        if (m >= m_start && (m - m_start) % A == 0) {
            auto it = seen.find(d);
            if (it != seen.end()) {
                long long first = it->second;
                PathPrefix prefix;
                prefix.edges.assign(edges.begin(), edges.begin() + first);
                std::vector<TailEdge> tail;
                for (long long i = first; i < m; ++i)
                    tail.push_back({edges[static_cast<size_t>(i)].range,
                                    edges[static_cast<size_t>(i)].rank});
                return EventuallyPeriodicPath::raw(std::move(prefix), std::move(tail));
            }
            seen[d] = m;
        }
        LevelCorrespondence sd(f, m);
        std::vector<PrefixEdge> window;
        for (long long lvl = sd.window_from() + 1; lvl <= sd.window_to(); ++lvl)
            window.push_back(x.edge_at(lvl));
        auto [e, d1] = sd.forward(d, window);
        edges.push_back(e);
        d = d1;
        ++m;
    }
}

FiberBound fiber_bound(const Premorphism& f, const EventuallyPeriodicPath& y) {
    FiberBound out;
    long long a = aligned_period(f);
    long long ty = std::max<long long>(y.tail_period(), 1);
    long long span = std::lcm(std::max<long long>(a, 1), ty);
    long long start = std::max(f.periodic_start(), y.prefix_length());
    long long k = 1;
    for (long long n = 1; n <= start + span; ++n) {
        OrderedEdgeSet Fn = f.layer(n);
        int v = Fn.dom_index.at(y.edge_at(n).range);
        k = std::max<long long>(k, Fn.source_fiber_size(v));
    }
    out.k = k;
    return out;
}

bool premorphisms_equivalent(const Premorphism& f, const Premorphism& g, long long depth) {
    if (!(f.source == g.source) || !(f.target == g.target))
        throw DiagramMismatch("equivalence needs identical source and target diagrams");
    long long d = std::max({depth, f.certify_depth(), g.certify_depth()});
    if (!f.source.finite()) {
        long long af = aligned_period(f), ag = aligned_period(g);
        long long combined = std::lcm(af, ag);
        d = std::max(d, std::max(f.periodic_start(), g.periodic_start()) + combined);
    }
    for (long long n = 0; n <= d; ++n) {
        long long m = std::max(f.f(n), g.f(n));
        OrderedEdgeSet lhs =
            compose_edge_sets(f.layer(n), telescoped_edge_set(f.target, f.f(n), m));
        OrderedEdgeSet rhs =
            compose_edge_sets(g.layer(n), telescoped_edge_set(g.target, g.f(n), m));
        if (!order_isomorphic(lhs, rhs)) return false;
    }
    return true;
}

} // namespace bratteli
