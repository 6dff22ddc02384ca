#include "bratteli/constructor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace bratteli {

namespace {

// re-express a path over a diagram with different preamble/cycle bookkeeping
EventuallyPeriodicPath renormalize(const Diagram& d, const EventuallyPeriodicPath& x) {
    long long a = d.align_up(std::max(x.prefix_length(), d.preamble_length()));
    PathPrefix prefix = x.prefix_to(a);
    long long t = std::lcm(std::max<long long>(x.tail_period(), 1), d.cycle_length());
    std::vector<TailEdge> tail;
    for (long long i = 0; i < t; ++i) {
        PrefixEdge e = x.edge_at(a + 1 + i);
        tail.push_back({e.range, e.rank});
    }
    return EventuallyPeriodicPath::raw(std::move(prefix), std::move(tail));
}

std::string fresh_vertex_name(const Diagram& d) {
    std::set<std::string> used;
    auto collect = [&](const std::vector<LevelSpec>& ls) {
        for (const auto& l : ls)
            for (const auto& v : l.vertices) used.insert(v);
    };
    collect(d.preamble());
    collect(d.cycle());
    used.insert(d.root());
    std::string name = "nv";
    int i = 0;
    while (used.count(name)) name = "nv" + std::to_string(++i);
    return name;
}

} // namespace

ConstructionResult build_counterexample(const Diagram& b, const EventuallyPeriodicPath& z,
                                        const EventuallyPeriodicPath& y,
                                        const NaturalExtensionRule* ext_b) {
    require_valid(b);
    if (b.finite()) throw FiniteDiagramExhausted("the construction needs an infinite diagram");
    if (!path_all_extreme(b, z, Extreme::Min))
        throw NotExtreme("z must be an infinite min path");
    if (!path_all_extreme(b, y, Extreme::Max))
        throw NotExtreme("y must be an infinite max path");

    ConstructionResult res;
    if (ext_b) {
        const EventuallyPeriodicPath* ty = ext_b->lookup(b, y);
        if (ty && path_equal(b, *ty, z))
            res.warning = "z equals the extended image of y; the induced map factors anyway";
    } else {
        ExtremeSet mins = count_extreme_paths(b, Extreme::Min);
        if (mins.count == 1)
            res.warning = "source has a unique min path, so z is forced to be the image of y";
    }

    long long p = b.preamble_length(), c = b.cycle_length();
    long long P = b.align_up(std::max({p, z.prefix_length(), y.prefix_length(), 1LL}));
    long long L = std::lcm(std::max<long long>(z.tail_period(), 1),
                           std::max<long long>(y.tail_period(), 1));
    L = std::lcm(L, c);

    const std::string nv = fresh_vertex_name(b);

    auto build_level = [&](long long n) {
        const CompiledLevel& cl = b.level(n);
        LevelSpec ls = b.level_spec(n);
        ls.vertices.push_back(nv);
        const std::string y_range = y.edge_at(n).range;
        const std::string z_range = z.edge_at(n).range;
        const auto& h_fiber = cl.fiber[static_cast<size_t>(cl.vert_index.at(y_range))];
        const auto& g_fiber = cl.fiber[static_cast<size_t>(cl.vert_index.at(z_range))];
        long long m = static_cast<long long>(h_fiber.size());
        long long l = static_cast<long long>(g_fiber.size());
        int rank = 0;
        if (n == 1) {
            for (long long i = 0; i < m; ++i)
                ls.edges.push_back({cl.prev[static_cast<size_t>(h_fiber[static_cast<size_t>(i)])],
                                    nv, rank++});
            for (long long j = 0; j < l; ++j)
                ls.edges.push_back({cl.prev[static_cast<size_t>(g_fiber[static_cast<size_t>(j)])],
                                    nv, rank++});
        } else {
            for (long long i = 0; i + 1 < m; ++i)
                ls.edges.push_back({cl.prev[static_cast<size_t>(h_fiber[static_cast<size_t>(i)])],
                                    nv, rank++});
            ls.edges.push_back({nv, nv, rank++}); // merged top/bottom copy
            for (long long j = 1; j < l; ++j)
                ls.edges.push_back({cl.prev[static_cast<size_t>(g_fiber[static_cast<size_t>(j)])],
                                    nv, rank++});
        }
        ConstructionLevelRecord rec{n, nv, m, l, n >= 2};
        return std::make_pair(std::move(ls), rec);
    };

    std::vector<LevelSpec> pre_levels, cyc_levels;
    for (long long n = 1; n <= P; ++n) {
        auto [ls, rec] = build_level(n);
        pre_levels.push_back(std::move(ls));
        res.bookkeeping.push_back(rec);
    }
    for (long long n = P + 1; n <= P + L; ++n) {
        auto [ls, rec] = build_level(n);
        cyc_levels.push_back(std::move(ls));
        res.bookkeeping.push_back(rec);
    }
    {
        auto [wrap, rec] = build_level(P + L + 1);
        (void)rec;
        if (!(wrap == cyc_levels.front()))
            throw PatternMismatch("construction did not close up periodically");
    }
    res.b_prime = Diagram(pre_levels, cyc_levels);
    require_valid(res.b_prime);

    auto x_rank_at = [&](long long n) {
        const CompiledLevel& cl = b.level(n);
        long long m = static_cast<long long>(
            cl.fiber[static_cast<size_t>(cl.vert_index.at(y.edge_at(n).range))].size());
        return static_cast<int>(m - 1);
    };
    PathPrefix x_prefix;
    for (long long n = 1; n <= P; ++n) x_prefix.edges.push_back({nv, x_rank_at(n)});
    std::vector<TailEdge> x_tail;
    for (long long n = P + 1; n <= P + L; ++n) x_tail.push_back({nv, x_rank_at(n)});
    res.x = EventuallyPeriodicPath::raw(x_prefix, x_tail);

    PathPrefix tx_prefix = x_prefix;
    tx_prefix.edges[0].rank += 1; // the next edge of the merged fiber at level 1
    res.tx = EventuallyPeriodicPath::raw(tx_prefix, x_tail);

    Premorphism f;
    f.source = b;
    f.target = res.b_prime;
    f.fmap_preamble = {0};
    f.fmap_step = 1;
    auto layer_at = [&](long long n) {
        std::vector<EdgeSpec> es;
        for (const auto& v : b.vertices_at(n)) es.push_back({v, v, 0});
        es.push_back({y.edge_at(n).range, nv, 0});
        es.push_back({z.edge_at(n).range, nv, 1});
        return es;
    };
    for (long long n = 1; n <= P; ++n) f.layers_preamble.push_back(layer_at(n));
    for (long long n = P + 1; n <= P + L; ++n) f.layers_cycle.push_back(layer_at(n));
    res.premorphism = std::move(f);

    // derived natural extension of the new diagram, per the construction:
    // the original max paths keep their images; the possible extra max path
    // (present when z is eventually maximal) goes to the image of its own
    // induced image under the original extension
    const NaturalExtensionRule* base = ext_b;
    NaturalExtensionRule default_rule;
    if (!base) {
        ExtremeSet mins = count_extreme_paths(b, Extreme::Min);
        if (mins.count == 1) {
            default_rule = unique_min_rule(b);
            base = &default_rule;
        }
    }
    if (base) {
        NaturalExtensionRule derived;
        ExtremeSet maxes = count_extreme_paths(res.b_prime, Extreme::Max);
        bool ok = true;
        for (const auto& w : maxes.witnesses) {
            bool through_new = false;
            for (const auto& t : w.tail())
                if (t.range == nv) through_new = true;
            EventuallyPeriodicPath image_b;
            if (through_new) {
                EventuallyPeriodicPath alpha_w = induced_path(res.premorphism, w);
                const EventuallyPeriodicPath* img = base->lookup(b, alpha_w);
                if (!img) {
                    ok = false;
                    break;
                }
                image_b = *img;
            } else {
                const EventuallyPeriodicPath* img = base->lookup(b, w);
                if (!img) {
                    ok = false;
                    break;
                }
                image_b = *img;
            }
            derived.pairs.push_back({w, renormalize(res.b_prime, image_b)});
        }
        if (ok) res.b_prime_extension = std::move(derived);
    }
    return res;
}

DecisivenessClassification classify_decisiveness(const Diagram& b,
                                                 const EventuallyPeriodicPath& z,
                                                 const EventuallyPeriodicPath& y,
                                                 const ConstructionResult& result,
                                                 const NaturalExtensionRule* ext_b) {
    (void)result;
    DecisivenessClassification out;
    out.z_eventually_maximal = is_eventually_extreme(b, z, Extreme::Max);
    out.y_eventually_minimal = is_eventually_extreme(b, y, Extreme::Min);
    out.max_set_interior_empty = extreme_set_interior_empty(b, Extreme::Max);
    out.source_simple = is_simple(b);
    long long p = b.preamble_length(), c = b.cycle_length();
    out.source_space_infinite = b.total_paths(p + 2 * c) > b.total_paths(p + c);

    ExtremeSet maxes = count_extreme_paths(b, Extreme::Max);
    ExtremeSet mins = count_extreme_paths(b, Extreme::Min);
    if (ext_b) {
        bool covered = validate_extension_rule(b, *ext_b).ok();
        bool injective = true;
        for (size_t i = 0; i < ext_b->pairs.size() && injective; ++i)
            for (size_t j = i + 1; j < ext_b->pairs.size(); ++j)
                if (path_equal(b, ext_b->pairs[i].second, ext_b->pairs[j].second)) {
                    injective = false;
                    break;
                }
        out.extension_bijective = covered && injective && maxes.count == mins.count;
    } else {
        out.extension_bijective = maxes.count == 1 && mins.count == 1;
    }

    if (!out.z_eventually_maximal && !out.y_eventually_minimal) {
        out.matched_case = 1;
        out.verdict = DecisiveVerdict::Decisive;
    } else if (out.z_eventually_maximal && out.y_eventually_minimal &&
               out.max_set_interior_empty) {
        out.matched_case = 2;
        out.verdict = DecisiveVerdict::Decisive;
    } else {
        out.matched_case = 0;
        out.verdict = out.extension_bijective ? DecisiveVerdict::SemiDecisiveOnly
                                              : DecisiveVerdict::NotDecisive;
    }
    return out;
}

UniqueMin unique_min_witness(const Diagram& b) {
    UniqueMin out;
    out.min_set = count_extreme_paths(b, Extreme::Min);
    out.unique = out.min_set.count == 1;
    return out;
}

// ---------------------------------------------------------------------------
// Rank-2 reduction

namespace {

LevelSpec composed_level_spec(const Diagram& d, long long from, long long to) {
    const std::vector<std::string>& sources = d.vertices_at(from);
    LevelSpec ls;
    ls.vertices = d.vertices_at(to);
    for (size_t v = 0; v < ls.vertices.size(); ++v) {
        // reverse-lex paths from `from` into v, recorded by their start vertex
        struct Rec {
            const Diagram& d;
            long long from;
            std::vector<int> starts;
            void go(long long lvl, int vi) {
                if (lvl == from) {
                    starts.push_back(vi);
                    return;
                }
                const CompiledLevel& cl = d.level(lvl);
                for (int src : cl.fiber[static_cast<size_t>(vi)]) go(lvl - 1, src);
            }
        } rec{d, from, {}};
        rec.go(to, static_cast<int>(v));
        for (size_t r = 0; r < rec.starts.size(); ++r)
            ls.edges.push_back({sources[static_cast<size_t>(rec.starts[r])], ls.vertices[v],
                                static_cast<int>(r)});
    }
    return ls;
}

struct PatternLabels {
    // label[level][vertex id] in {0,1}, computed up to preamble + two cycles
    std::vector<std::map<std::string, int>> by_level;
    long long cycle_label_period = 1; // cycle passes until the labels repeat
};

// Alternating-fiber pattern: at every two-vertex level fed by two vertices,
// each fiber has odd size and strictly alternates between the two sources,
// starting at the source that carries the range's own label. Levels fed by a
// single vertex impose nothing and restart the labeling.
bool check_alternating(const Diagram& t, int first_choice, PatternLabels& labels) {
    long long p = t.preamble_length(), c = t.cycle_length();
    long long depth = p + 2 * c; // two passes to settle the label period
    labels.by_level.assign(static_cast<size_t>(depth + 1), {});
    labels.by_level[0][t.root()] = 0;
    for (long long n = 1; n <= depth; ++n) {
        const CompiledLevel& cl = t.level(n);
        auto& lab = labels.by_level[static_cast<size_t>(n)];
        const auto& prev_lab = labels.by_level[static_cast<size_t>(n - 1)];
        if (cl.verts.size() > 2) return false;
        if (cl.prev.size() == 1) {
            if (cl.verts.size() == 1) {
                lab[cl.verts[0]] = 0;
            } else {
                lab[cl.verts[0]] = first_choice;
                lab[cl.verts[1]] = 1 - first_choice;
            }
            continue;
        }
        if (cl.prev.size() != 2 || cl.verts.size() != 2) return false;
        for (size_t v = 0; v < cl.verts.size(); ++v) {
            const auto& fib = cl.fiber[v];
            if (fib.empty() || fib.size() % 2 == 0) return false;
            int start_label = prev_lab.at(cl.prev[static_cast<size_t>(fib[0])]);
            for (size_t r = 0; r < fib.size(); ++r) {
                int want = (start_label + static_cast<int>(r)) % 2;
                if (prev_lab.at(cl.prev[static_cast<size_t>(fib[r])]) != want) return false;
            }
            lab[cl.verts[v]] = start_label;
        }
        if (lab[cl.verts[0]] == lab[cl.verts[1]]) return false;
    }
    labels.cycle_label_period =
        labels.by_level[static_cast<size_t>(p + c)] == labels.by_level[static_cast<size_t>(p)]
            ? 1
            : 2;
    if (labels.cycle_label_period == 2 &&
        !(labels.by_level[static_cast<size_t>(p + 2 * c)] ==
          labels.by_level[static_cast<size_t>(p)]))
        return false;
    return true;
}

} // namespace

Rank2Outcome rank2_reduce(const Diagram& b, const NaturalExtensionRule& pairing,
                          int window_periods) {
    require_valid(b);
    if (b.finite()) throw FiniteDiagramExhausted("rank-2 reduction needs an infinite diagram");
    for (long long i = 0; i < b.cycle_length(); ++i)
        if (b.cycle()[static_cast<size_t>(i)].vertices.size() != 2)
            throw NotRank2("every level past the preamble must have exactly two vertices");

    ExtremeSet maxes = count_extreme_paths(b, Extreme::Max);
    ExtremeSet mins = count_extreme_paths(b, Extreme::Min);
    if (maxes.count != 2 || mins.count != 2)
        throw PatternMismatch("expected exactly two max and two min paths");
    if (!validate_extension_rule(b, pairing).ok())
        throw PatternMismatch("extension pairing does not cover the extreme paths");

    // diagonal vs crossed pairing, read off the eventual vertex trajectories
    long long p = b.preamble_length(), c = b.cycle_length();
    auto traj_equal = [&](const EventuallyPeriodicPath& s, const EventuallyPeriodicPath& t) {
        long long start = std::max({s.prefix_length(), t.prefix_length(), p});
        long long span = std::lcm(std::max<long long>(s.tail_period(), 1),
                                  std::max<long long>(t.tail_period(), 1));
        for (long long n = start + 1; n <= start + span; ++n)
            if (s.edge_at(n).range != t.edge_at(n).range) return false;
        return true;
    };
    int diagonal_votes = 0;
    for (const auto& w : maxes.witnesses) {
        const EventuallyPeriodicPath* img = pairing.lookup(b, w);
        if (!img) throw PatternMismatch("pairing misses a max path");
        if (traj_equal(w, *img)) ++diagonal_votes;
    }
    if (diagonal_votes != 0 && diagonal_votes != 2)
        throw PatternMismatch("pairing mixes same-chain and cross-chain assignments");

    Rank2Outcome out;
    if (diagonal_votes == 2) {
        // split case: the cycle must already be free of cross edges between the
        // two trajectory chains
        const EventuallyPeriodicPath& w0 = maxes.witnesses[0];
        const EventuallyPeriodicPath& w1 = maxes.witnesses[1];
        auto chain_at = [&](const EventuallyPeriodicPath& w, long long n) {
            return w.edge_at(n).range;
        };
        long long span = std::lcm(std::lcm(std::max<long long>(w0.tail_period(), 1),
                                           std::max<long long>(w1.tail_period(), 1)),
                                  c);
        long long start = std::max({w0.prefix_length(), w1.prefix_length(), p});
        for (long long n = start + 1; n <= start + span; ++n) {
            if (chain_at(w0, n) == chain_at(w1, n))
                throw PatternMismatch("the two max paths share a vertex inside the cycle");
            const CompiledLevel& cl = b.level(n);
            for (size_t v = 0; v < cl.verts.size(); ++v) {
                bool v_on_0 = cl.verts[v] == chain_at(w0, n);
                const std::string& want = v_on_0 ? chain_at(w0, n - 1) : chain_at(w1, n - 1);
                for (int src : cl.fiber[v])
                    if (cl.prev[static_cast<size_t>(src)] != want)
                        throw PatternMismatch("cross edges persist inside the cycle");
            }
        }
        // two rank-1 sub-diagrams, entered at the aligned split level
        long long split = start;
        out.split_level = split;
        auto counts = b.path_counts(split);
        auto sub_diagram = [&](const EventuallyPeriodicPath& w) {
            const std::string entry = split == 0 ? b.root() : chain_at(w, split);
            int idx = 0;
            const auto& vs = b.vertices_at(split);
            for (size_t i = 0; i < vs.size(); ++i)
                if (vs[i] == entry) idx = static_cast<int>(i);
            BigCount n_entry = counts[static_cast<size_t>(idx)];
            if (n_entry > 100000) throw CountOverflow("split level too deep to materialize");
            LevelSpec first;
            first.vertices = {entry};
            for (long long r = 0; r < static_cast<long long>(n_entry); ++r)
                first.edges.push_back({entry, entry, static_cast<int>(r)});
            std::vector<LevelSpec> cyc;
            for (long long n = split + 1; n <= split + span; ++n) {
                const CompiledLevel& cl = b.level(n);
                const std::string v = chain_at(w, n);
                const std::string u = chain_at(w, n - 1);
                LevelSpec ls;
                ls.vertices = {v};
                int sz = cl.fiber_size(cl.vert_index.at(v));
                for (int r = 0; r < sz; ++r) ls.edges.push_back({u, v, r});
                cyc.push_back(std::move(ls));
            }
            // the first cycle level consumes the entry vertex and the last one
            // produces it, so the chain closes up
            return Diagram({first}, cyc);
        };
        out.kind = Rank2Kind::TwoOdometers;
        out.first = sub_diagram(w0);
        out.second = sub_diagram(w1);
        require_valid(out.first);
        require_valid(out.second);
        return out;
    }

    // crossed case: look for the alternating-fiber pattern, telescoping up to
    // the window bound when the raw presentation does not show it
    std::vector<Diagram> candidates;
    candidates.push_back(b);
    long long pre_end = p == 0 ? c : p;
    for (int j = 1; j <= window_periods; ++j) {
        try {
            LevelSpec pre = composed_level_spec(b, 0, pre_end);
            LevelSpec cyc = composed_level_spec(b, pre_end, pre_end + j * c);
            candidates.push_back(Diagram({pre}, {cyc}));
        } catch (const std::exception&) {
            continue;
        }
    }

    for (const Diagram& t : candidates) {
        for (int first_choice = 0; first_choice < 2; ++first_choice) {
            PatternLabels labels;
            if (!check_alternating(t, first_choice, labels)) continue;

            long long tp = t.preamble_length();
            long long tc = t.cycle_length() * labels.cycle_label_period;
            const std::string w = "w";
            auto c_fiber_size = [&](long long n) {
                const CompiledLevel& cl = t.level(n);
                long long total = 0;
                for (const auto& fib : cl.fiber) total += static_cast<long long>(fib.size());
                if (cl.prev.size() == 1) return total;
                return total / 2;
            };
            auto c_level = [&](long long n) {
                LevelSpec ls;
                ls.vertices = {w};
                long long sz = c_fiber_size(n);
                for (long long r = 0; r < sz; ++r)
                    ls.edges.push_back({w, w, static_cast<int>(r)});
                return ls;
            };
            std::vector<LevelSpec> cpre, ccyc;
            for (long long n = 1; n <= tp; ++n) cpre.push_back(c_level(n));
            for (long long n = tp + 1; n <= tp + tc; ++n) ccyc.push_back(c_level(n));
            Diagram cdiag(cpre, ccyc);
            require_valid(cdiag);

            Premorphism f;
            f.source = t;
            f.target = cdiag;
            f.fmap_preamble = {0};
            f.fmap_step = 1;
            auto layer_at = [&](long long n) {
                const auto& lab = labels.by_level[static_cast<size_t>(n)];
                std::vector<EdgeSpec> es;
                const auto& vs = t.vertices_at(n);
                if (vs.size() == 1) {
                    es.push_back({vs[0], w, 0});
                    return es;
                }
                std::string v0 = lab.at(vs[0]) == 0 ? vs[0] : vs[1];
                std::string v1 = lab.at(vs[0]) == 0 ? vs[1] : vs[0];
                es.push_back({v0, w, 0});
                es.push_back({v1, w, 1});
                return es;
            };
            for (long long n = 1; n <= tp; ++n) f.layers_preamble.push_back(layer_at(n));
            for (long long n = tp + 1; n <= tp + tc; ++n) f.layers_cycle.push_back(layer_at(n));

            if (!premorphism_valid(f)) continue;

            out.kind = Rank2Kind::OdometerConjugacy;
            out.c = cdiag;
            out.conjugacy = std::move(f);
            out.source_presentation = t;
            return out;
        }
    }
    throw PatternMismatch("no split or alternating structure found within the window");
}

// ---------------------------------------------------------------------------
// Factoring checker

std::vector<EventuallyPeriodicPath> max_path_preimages(const Premorphism& f) {
    std::vector<EventuallyPeriodicPath> out;
    ExtremeSet maxes = count_extreme_paths(f.source, Extreme::Max);
    long long a = aligned_period(f);

    for (const auto& y : maxes.witnesses) {
        long long ty = std::max<long long>(y.tail_period(), 1);
        long long A = a;
        while (A % ty != 0) A += a;
        long long n0 = std::max(f.periodic_start(), y.prefix_length());
        n0 = f.source.align_up(n0);

        // candidate layer edges over the path's range vertex, per level
        auto dset = [&](long long n) {
            std::vector<LayerEdge> ds;
            OrderedEdgeSet Fn = f.layer(n);
            int want = Fn.dom_index.at(y.edge_at(n).range);
            for (size_t w = 0; w < Fn.fibers.size(); ++w)
                for (size_t pos = 0; pos < Fn.fibers[w].size(); ++pos)
                    if (Fn.fibers[w][pos] == want)
                        ds.push_back({static_cast<int>(w), static_cast<int>(pos)});
            return ds;
        };
        // one backward step of the correspondence along y
        auto step_down = [&](long long n, LayerEdge d) {
            LevelCorrespondence sd(f, n);
            auto [dn, window] = sd.inverse(y.edge_at(n + 1), d);
            (void)window;
            return dn;
        };
        // composite transition over one period
        auto transition = [&](long long top, LayerEdge d) {
            for (long long n = top - 1; n >= top - A; --n) d = step_down(n, d);
            return d;
        };

        // the one-period transition as an abstract self-map of the labeled
        // candidate set (dset carries the same labels at every aligned level)
        std::map<LayerEdge, LayerEdge> tau;
        for (LayerEdge d : dset(n0 + A)) tau[d] = transition(n0 + A, d);

        std::set<LayerEdge> image;
        for (const auto& [d, _] : tau) image.insert(d);
        while (true) {
            std::set<LayerEdge> next;
            for (LayerEdge d : image) next.insert(tau.at(d));
            if (next == image) break;
            image = std::move(next);
        }

        // tau restricted to its eventual image is a permutation; invert it to
        // follow each backward-coherent chain upward
        std::map<LayerEdge, LayerEdge> up;
        for (LayerEdge d : image) up[tau.at(d)] = d;
        for (LayerEdge u : image) {
            // chain period: smallest q with the q-fold upward lift returning to u
            long long q = 1;
            for (LayerEdge cur = up.at(u); !(cur == u); cur = up.at(cur)) ++q;
            long long top_level = n0 + 2 * q * A;
            // lift u to the top level through 2q periods
            LayerEdge d_top = u;
            for (long long j = 0; j < 2 * q; ++j) d_top = up.at(d_top);
            // walk down collecting the full window decomposition
            std::vector<PrefixEdge> cedges(static_cast<size_t>(f.f(top_level)));
            LayerEdge d = d_top;
            for (long long n = top_level - 1; n >= 0; --n) {
                LevelCorrespondence sd(f, n);
                auto [dn, window] = sd.inverse(y.edge_at(n + 1), d);
                for (size_t t = 0; t < window.size(); ++t)
                    cedges[static_cast<size_t>(sd.window_from()) + t] = window[t];
                d = dn;
            }
            long long split = f.f(n0 + q * A);
            PathPrefix prefix;
            prefix.edges.assign(cedges.begin(), cedges.begin() + split);
            std::vector<TailEdge> tail;
            for (long long i = split; i < f.f(top_level); ++i)
                tail.push_back({cedges[static_cast<size_t>(i)].range,
                                cedges[static_cast<size_t>(i)].rank});
            out.push_back(EventuallyPeriodicPath::raw(std::move(prefix), std::move(tail)));
        }
    }
    std::vector<EventuallyPeriodicPath> dedup;
    for (const auto& x : out) {
        bool seen = false;
        for (const auto& s : dedup)
            if (path_equal(f.target, s, x)) seen = true;
        if (!seen) dedup.push_back(x);
    }
    return dedup;
}

namespace {

long long first_prefix_mismatch(const PathPrefix& a, const PathPrefix& b) {
    long long n = std::min(a.length(), b.length());
    for (long long i = 0; i < n; ++i)
        if (!(a.edges[static_cast<size_t>(i)] == b.edges[static_cast<size_t>(i)])) return i + 1;
    return 0;
}

} // namespace

FactoringReport check_factoring(const Premorphism& f, long long depth,
                                const NaturalExtensionRule& ext_b,
                                const NaturalExtensionRule& ext_c) {
    require_valid(f);
    FactoringReport rep;

    // (a) prefix equivariance sweep over every fiber at the check depth
    {
        long long fd = f.f(depth);
        auto ccounts = f.target.path_counts(fd);
        const auto& verts = f.target.vertices_at(fd);
        for (size_t w = 0; w < verts.size(); ++w) {
            BigCount n_paths = ccounts[w];
            PathPrefix cp = prefix_unrank(f.target, fd, verts[w], 0);
            PathPrefix bp = induced_map_prefix(f, cp, depth);
            for (BigCount r = 1; r < n_paths; ++r) {
                StepResult cs = vershik_step(f.target, cp);
                PathPrefix cnext = *cs.next;
                PathPrefix bnext = induced_map_prefix(f, cnext, depth);
                StepResult bs = vershik_step(f.source, bp);
                if (bs.determined() && !(bnext == *bs.next)) {
                    rep.witnesses.push_back({extend_periodically(f.target, cnext),
                                             first_prefix_mismatch(*bs.next, bnext), *bs.next,
                                             bnext});
                }
                cp = std::move(cnext);
                bp = std::move(bnext);
            }
        }
    }

    // (b) exact sweep of the preimages of the max-path witnesses
    ExtremeSet maxes = count_extreme_paths(f.source, Extreme::Max);
    std::vector<EventuallyPeriodicPath> preimages = max_path_preimages(f);
    for (const auto& x : preimages) {
        EventuallyPeriodicPath alpha_x = induced_path(f, x);
        const EventuallyPeriodicPath* y = nullptr;
        for (const auto& wit : maxes.witnesses)
            if (path_equal(f.source, wit, alpha_x)) y = &wit;
        if (!y) throw InvalidPath("preimage chain does not project to a max path");

        EventuallyPeriodicPath tx = vershik_step_infinite(f.target, x, &ext_c);
        const EventuallyPeriodicPath* ty = ext_b.lookup(f.source, *y);
        if (!ty) throw MaxPathNoExtension("source extension rule misses a max path");

        PathPrefix actual = induced_map_prefix(f, tx.prefix_to(f.f(depth)), depth);
        PathPrefix expected = ty->prefix_to(depth);
        long long bad = first_prefix_mismatch(expected, actual);
        if (bad > 0) rep.witnesses.push_back({x, bad, expected, actual});

        // (c) structural conditions: minimal layer edges from the extended
        // image of y into the extended image of x, and successor edges past
        // the agreement level otherwise
        EquivConditionRecord rec;
        bool x_is_max = path_all_extreme(f.target, x, Extreme::Max);
        rec.case_matched = x_is_max ? 1 : 2;
        rec.holds = true;
        auto minimal_edge_ok = [&](long long n) {
            OrderedEdgeSet Fn = f.layer(n);
            const std::string wr =
                f.f(n) == 0 ? f.target.root() : tx.edge_at(f.f(n)).range;
            const std::string er = ty->edge_at(n).range;
            int wi = Fn.cod_index.at(wr);
            if (Fn.fibers[static_cast<size_t>(wi)].empty()) return false;
            return Fn.domain[static_cast<size_t>(
                       Fn.fibers[static_cast<size_t>(wi)].front())] == er;
        };
        if (x_is_max) {
            for (long long n = 1; n <= depth && rec.holds; ++n)
                if (!minimal_edge_ok(n)) {
                    rec.holds = false;
                    rec.fail_level = n;
                    rec.detail = "no minimal layer edge matches the extended images";
                }
        } else {
            long long k = 0;
            for (long long n = 1; n <= depth; ++n) {
                if (f.f(n) == 0) continue;
                if (x.edge_at(f.f(n)).range == tx.edge_at(f.f(n)).range) {
                    k = n;
                    break;
                }
            }
            if (k == 0) {
                rec.holds = false;
                rec.detail = "the step image never rejoins the path's vertex trace";
            }
            for (long long n = 1; n < k && rec.holds; ++n)
                if (!minimal_edge_ok(n)) {
                    rec.holds = false;
                    rec.fail_level = n;
                    rec.detail = "no minimal layer edge matches the extended images";
                }
            for (long long n = k; n <= depth && rec.holds && k > 0; ++n) {
                std::pair<int, int> d_n;
                induced_map_prefix(f, x.prefix_to(f.f(n)), n, &d_n);
                OrderedEdgeSet Fn = f.layer(n);
                const auto& fib = Fn.fibers[static_cast<size_t>(d_n.first)];
                if (d_n.second + 1 >= static_cast<int>(fib.size())) {
                    rec.holds = false;
                    rec.fail_level = n;
                    rec.detail = "the realizing layer edge has no successor";
                    break;
                }
                const std::string succ_src =
                    Fn.domain[static_cast<size_t>(fib[static_cast<size_t>(d_n.second + 1)])];
                if (succ_src != ty->edge_at(n).range) {
                    rec.holds = false;
                    rec.fail_level = n;
                    rec.detail = "successor layer edge does not match the extended image";
                    break;
                }
            }
        }
        rep.equiv_conditions.push_back(rec);
    }

    rep.pass = rep.witnesses.empty();
    return rep;
}

} // namespace bratteli
