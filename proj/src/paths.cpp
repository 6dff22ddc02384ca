#include "bratteli/paths.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace bratteli {

namespace {

std::vector<std::vector<BigCount>> count_table(const Diagram& d, long long n) {
    std::vector<std::vector<BigCount>> t;
    t.push_back({1});
    for (long long lvl = 1; lvl <= n; ++lvl) {
        const CompiledLevel& cl = d.level(lvl);
        std::vector<BigCount> cur(cl.verts.size(), 0);
        for (size_t v = 0; v < cl.fiber.size(); ++v)
            for (int src : cl.fiber[v])
                cur[v] = checked_add(cur[v], t.back()[static_cast<size_t>(src)]);
        t.push_back(std::move(cur));
    }
    return t;
}

} // namespace

void validate_prefix(const Diagram& d, const PathPrefix& p) {
    std::string prev = d.root();
    for (long long i = 0; i < p.length(); ++i) {
        long long lvl = i + 1;
        if (!d.level_exists(lvl)) throw InvalidPrefix("prefix deeper than the diagram");
        const CompiledLevel& cl = d.level(lvl);
        const PrefixEdge& e = p.edges[static_cast<size_t>(i)];
        auto wi = cl.vert_index.find(e.range);
        if (wi == cl.vert_index.end())
            throw InvalidPrefix("level " + std::to_string(lvl) + ": unknown vertex '" +
                                e.range + "'");
        int w = wi->second;
        if (e.rank < 0 || e.rank >= cl.fiber_size(w))
            throw InvalidPrefix("level " + std::to_string(lvl) + ": rank " +
                                std::to_string(e.rank) + " out of range at '" + e.range + "'");
        const std::string& src = cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(w)]
                                                                     [static_cast<size_t>(e.rank)])];
        if (src != prev)
            throw InvalidPrefix("level " + std::to_string(lvl) +
                                ": edge does not chain (source '" + src + "', expected '" +
                                prev + "')");
        prev = e.range;
    }
}

std::string terminal_vertex(const Diagram& d, const PathPrefix& p) {
    if (p.empty()) return d.root();
    return p.edges.back().range;
}

std::string prefix_to_string(const PathPrefix& p) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < p.edges.size(); ++i) {
        if (i) os << " ";
        os << p.edges[i].range << ":" << p.edges[i].rank;
    }
    os << "]";
    return os.str();
}

BigCount prefix_rank(const Diagram& d, const PathPrefix& p) {
    auto t = count_table(d, p.length() - 1);
    BigCount rank = 0;
    for (long long i = 0; i < p.length(); ++i) {
        const CompiledLevel& cl = d.level(i + 1);
        const PrefixEdge& e = p.edges[static_cast<size_t>(i)];
        int w = cl.vert_index.at(e.range);
        for (int r = 0; r < e.rank; ++r)
            rank = checked_add(
                rank, t[static_cast<size_t>(i)]
                       [static_cast<size_t>(cl.fiber[static_cast<size_t>(w)][static_cast<size_t>(r)])]);
    }
    return rank;
}

PathPrefix prefix_unrank(const Diagram& d, long long n, const std::string& vertex,
                         BigCount rank) {
    auto t = count_table(d, n - 1);
    PathPrefix p;
    p.edges.resize(static_cast<size_t>(n));
    std::string v = vertex;
    for (long long lvl = n; lvl >= 1; --lvl) {
        const CompiledLevel& cl = d.level(lvl);
        int w = cl.vert_index.at(v);
        const auto& fib = cl.fiber[static_cast<size_t>(w)];
        bool placed = false;
        for (size_t r = 0; r < fib.size(); ++r) {
            BigCount block = t[static_cast<size_t>(lvl - 1)][static_cast<size_t>(fib[r])];
            if (rank < block) {
                p.edges[static_cast<size_t>(lvl - 1)] = {v, static_cast<int>(r)};
                v = cl.prev[static_cast<size_t>(fib[r])];
                placed = true;
                break;
            }
            rank -= block;
        }
        if (!placed) throw InvalidPrefix("rank exceeds the fiber at '" + v + "'");
    }
    return p;
}

PathPrefix all_extreme_prefix(const Diagram& d, long long n, const std::string& vertex,
                              Extreme kind) {
    PathPrefix p;
    p.edges.resize(static_cast<size_t>(n));
    std::string v = vertex;
    for (long long lvl = n; lvl >= 1; --lvl) {
        const CompiledLevel& cl = d.level(lvl);
        int w = cl.vert_index.at(v);
        int r = cl.extreme_rank(w, kind);
        p.edges[static_cast<size_t>(lvl - 1)] = {v, r};
        v = cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(w)][static_cast<size_t>(r)])];
    }
    return p;
}

bool prefix_all_extreme(const Diagram& d, const PathPrefix& p, Extreme kind) {
    for (long long i = 0; i < p.length(); ++i) {
        const CompiledLevel& cl = d.level(i + 1);
        int w = cl.vert_index.at(p.edges[static_cast<size_t>(i)].range);
        if (p.edges[static_cast<size_t>(i)].rank != cl.extreme_rank(w, kind)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// EventuallyPeriodicPath

EventuallyPeriodicPath EventuallyPeriodicPath::raw(PathPrefix prefix, std::vector<TailEdge> tail) {
    EventuallyPeriodicPath x;
    x.prefix_ = std::move(prefix);
    x.tail_ = std::move(tail);
    return x;
}

PrefixEdge EventuallyPeriodicPath::edge_at(long long n) const {
    if (n <= prefix_length()) return prefix_.edges[static_cast<size_t>(n - 1)];
    if (tail_.empty()) throw InvalidPath("finite path has no edge at level " + std::to_string(n));
    const TailEdge& t =
        tail_[static_cast<size_t>((n - prefix_length() - 1) % tail_period())];
    return {t.range, t.rank};
}

PathPrefix EventuallyPeriodicPath::prefix_to(long long n) const {
    PathPrefix p;
    p.edges.reserve(static_cast<size_t>(n));
    for (long long i = 1; i <= n; ++i) p.edges.push_back(edge_at(i));
    return p;
}

namespace {

void validate_tail_block(const Diagram& d, const PathPrefix& prefix,
                         const std::vector<TailEdge>& tail) {
    long long P = prefix.length();
    long long T = static_cast<long long>(tail.size());
    if (T <= 0) throw InvalidPath("periodic tail must be non-empty");
    if (d.finite()) throw FiniteDiagramExhausted("infinite path over a finite diagram");
    long long c = d.cycle_length();
    if (P < d.preamble_length()) throw InvalidPath("prefix must cover the preamble");
    if (T % c != 0) throw InvalidPath("tail period is not a multiple of the cycle");
    std::string prev = terminal_vertex(d, prefix);
    for (long long i = 0; i < T; ++i) {
        long long lvl = P + 1 + i;
        const CompiledLevel& cl = d.level(lvl);
        auto wi = cl.vert_index.find(tail[static_cast<size_t>(i)].range);
        if (wi == cl.vert_index.end())
            throw InvalidPath("tail level " + std::to_string(lvl) + ": unknown vertex '" +
                              tail[static_cast<size_t>(i)].range + "'");
        int rank = tail[static_cast<size_t>(i)].rank;
        if (rank < 0 || rank >= cl.fiber_size(wi->second))
            throw InvalidPath("tail level " + std::to_string(lvl) + ": rank out of range");
        const std::string& src =
            cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(wi->second)]
                                                [static_cast<size_t>(rank)])];
        if (src != prev)
            throw InvalidPath("tail level " + std::to_string(lvl) + ": edge does not chain");
        prev = tail[static_cast<size_t>(i)].range;
    }
    if (prev != terminal_vertex(d, prefix))
        throw InvalidPath("tail does not return to its starting vertex over one period");
}

// continuation of a witness beyond from_level, re-aligned so the tail starts there
std::pair<std::vector<PrefixEdge>, std::vector<TailEdge>> witness_continuation(
    const Diagram& d, const EventuallyPeriodicPath& w, long long from_level) {
    long long a = d.align_up(std::max(from_level, w.prefix_length()));
    std::vector<PrefixEdge> head;
    for (long long lvl = from_level + 1; lvl <= a; ++lvl) head.push_back(w.edge_at(lvl));
    std::vector<TailEdge> tail;
    for (long long i = 0; i < w.tail_period(); ++i) {
        PrefixEdge e = w.edge_at(a + 1 + i);
        tail.push_back({e.range, e.rank});
    }
    return {std::move(head), std::move(tail)};
}

} // namespace

EventuallyPeriodicPath EventuallyPeriodicPath::make(const Diagram& d, PathPrefix prefix,
                                                    TailKind kind,
                                                    std::vector<TailEdge> periodic) {
    validate_prefix(d, prefix);
    if (d.finite()) throw FiniteDiagramExhausted("infinite path over a finite diagram");
    long long c = d.cycle_length();

    if (kind == TailKind::Periodic) {
        if (periodic.empty()) throw InvalidPath("periodic tail must be non-empty");
        // extend the prefix to the aligned depth by materializing tail choices
        long long P0 = prefix.length();
        long long target = d.align_up(std::max(P0, d.preamble_length()));
        std::string prev = terminal_vertex(d, prefix);
        for (long long lvl = P0 + 1; lvl <= target; ++lvl) {
            const TailEdge& t = periodic[static_cast<size_t>((lvl - P0 - 1) % periodic.size())];
            prefix.edges.push_back({t.range, t.rank});
        }
        validate_prefix(d, prefix);
        long long shift = (target - P0) % static_cast<long long>(periodic.size());
        std::vector<TailEdge> rotated;
        long long T0 = static_cast<long long>(periodic.size());
        long long T = std::lcm(T0, c);
        for (long long i = 0; i < T; ++i)
            rotated.push_back(periodic[static_cast<size_t>((shift + i) % T0)]);
        validate_tail_block(d, prefix, rotated);
        return raw(std::move(prefix), std::move(rotated));
    }

    Extreme ek = kind == TailKind::AllMax ? Extreme::Max : Extreme::Min;
    ExtremeSet ext = count_extreme_paths(d, ek);
    long long P0 = prefix.length();
    std::string term = terminal_vertex(d, prefix);
    std::vector<EventuallyPeriodicPath> candidates;
    for (const auto& w : ext.witnesses) {
        std::string wv = P0 == 0 ? d.root() : w.edge_at(P0).range;
        if (wv != term) continue;
        auto [head, tail] = witness_continuation(d, w, P0);
        PathPrefix full = prefix;
        for (auto& e : head) full.edges.push_back(e);
        EventuallyPeriodicPath cand = raw(std::move(full), std::move(tail));
        bool dup = false;
        for (const auto& seen : candidates)
            if (path_equal(d, seen, cand)) dup = true;
        if (!dup) candidates.push_back(std::move(cand));
    }
    if (candidates.empty())
        throw InvalidPath("no all-extreme continuation from vertex '" + term + "'");
    if (candidates.size() > 1)
        throw InvalidPath("all-extreme continuation from vertex '" + term +
                          "' is ambiguous; give an explicit periodic tail");
    return candidates.front();
}

bool path_equal(const Diagram& d, const EventuallyPeriodicPath& a,
                const EventuallyPeriodicPath& b) {
    (void)d;
    long long head = std::max(a.prefix_length(), b.prefix_length());
    long long span = head + std::lcm(std::max<long long>(a.tail_period(), 1),
                                     std::max<long long>(b.tail_period(), 1));
    for (long long n = 1; n <= span; ++n)
        if (!(a.edge_at(n) == b.edge_at(n))) return false;
    return true;
}

bool path_all_extreme(const Diagram& d, const EventuallyPeriodicPath& x, Extreme kind) {
    if (!prefix_all_extreme(d, x.prefix(), kind)) return false;
    return is_eventually_extreme(d, x, kind);
}

bool is_eventually_extreme(const Diagram& d, const EventuallyPeriodicPath& x, Extreme kind) {
    long long P = x.prefix_length();
    for (long long i = 0; i < x.tail_period(); ++i) {
        long long lvl = P + 1 + i;
        const CompiledLevel& cl = d.level(lvl);
        int w = cl.vert_index.at(x.tail()[static_cast<size_t>(i)].range);
        if (x.tail()[static_cast<size_t>(i)].rank != cl.extreme_rank(w, kind)) return false;
    }
    return true;
}

EventuallyPeriodicPath extend_periodically(const Diagram& d, const PathPrefix& p) {
    validate_prefix(d, p);
    if (d.finite()) throw FiniteDiagramExhausted("cannot extend over a finite diagram");
    long long pre = d.preamble_length(), c = d.cycle_length();
    PathPrefix prefix = p;
    std::string v = terminal_vertex(d, p);
    std::map<std::pair<long long, std::string>, long long> seen;
    long long lvl = prefix.length();
    std::vector<PrefixEdge> edges; // levels prefix.length()+1 ..
    while (true) {
        if (lvl >= pre && (lvl - pre) % c == 0) {
            auto key = std::make_pair((lvl - pre) % c, v);
            auto it = seen.find(key);
            if (it != seen.end()) {
                long long first = it->second;
                PathPrefix full = p;
                for (long long i = 0; i < first - p.length(); ++i)
                    full.edges.push_back(edges[static_cast<size_t>(i)]);
                std::vector<TailEdge> tail;
                for (long long i = first - p.length(); i < lvl - p.length(); ++i)
                    tail.push_back({edges[static_cast<size_t>(i)].range,
                                    edges[static_cast<size_t>(i)].rank});
                return EventuallyPeriodicPath::raw(std::move(full), std::move(tail));
            }
            seen[key] = lvl;
        }
        const CompiledLevel& cl = d.level(lvl + 1);
        int src = cl.prev_index.at(v);
        if (cl.out[static_cast<size_t>(src)].empty())
            throw InvalidPath("vertex '" + v + "' has no outgoing edge");
        auto [w, rank] = cl.out[static_cast<size_t>(src)].front();
        edges.push_back({cl.verts[static_cast<size_t>(w)], rank});
        v = cl.verts[static_cast<size_t>(w)];
        ++lvl;
    }
}

// ---------------------------------------------------------------------------
// Vershik successor / predecessor on prefixes

namespace {

StepResult step_impl(const Diagram& d, const PathPrefix& p, Extreme toward) {
    validate_prefix(d, p);
    // toward == Max: successor (increment); toward == Min: predecessor
    for (long long i = 0; i < p.length(); ++i) {
        const CompiledLevel& cl = d.level(i + 1);
        const PrefixEdge& e = p.edges[static_cast<size_t>(i)];
        int w = cl.vert_index.at(e.range);
        int last = cl.extreme_rank(w, toward);
        if (e.rank == last) continue;
        PathPrefix out = p;
        int next_rank = toward == Extreme::Max ? e.rank + 1 : e.rank - 1;
        out.edges[static_cast<size_t>(i)] = {e.range, next_rank};
        std::string v = cl.prev[static_cast<size_t>(
            cl.fiber[static_cast<size_t>(w)][static_cast<size_t>(next_rank)])];
        Extreme reset = toward == Extreme::Max ? Extreme::Min : Extreme::Max;
        for (long long j = i - 1; j >= 0; --j) {
            const CompiledLevel& cj = d.level(j + 1);
            int vj = cj.vert_index.at(v);
            int r = cj.extreme_rank(vj, reset);
            out.edges[static_cast<size_t>(j)] = {v, r};
            v = cj.prev[static_cast<size_t>(cj.fiber[static_cast<size_t>(vj)]
                                                    [static_cast<size_t>(r)])];
        }
        return {out};
    }
    return {std::nullopt};
}

} // namespace

StepResult vershik_step(const Diagram& d, const PathPrefix& p) {
    return step_impl(d, p, Extreme::Max);
}

StepResult vershik_predecessor(const Diagram& d, const PathPrefix& p) {
    return step_impl(d, p, Extreme::Min);
}

// ---------------------------------------------------------------------------
// Extreme path sets

ExtremeSet count_extreme_paths(const Diagram& d, Extreme kind) {
    if (d.finite()) throw FiniteDiagramExhausted("extreme paths need an infinite diagram");
    long long p = d.preamble_length(), c = d.cycle_length();
    const auto& base = d.vertices_at(p);
    int nb = static_cast<int>(base.size());

    // composed extreme map over one cycle pass, as indices of the base list
    auto step_down = [&](long long top_level, int v_idx) {
        std::string v = d.vertices_at(top_level)[static_cast<size_t>(v_idx)];
        for (long long lvl = top_level; lvl > top_level - c; --lvl) {
            const CompiledLevel& cl = d.level(lvl);
            int w = cl.vert_index.at(v);
            int r = cl.extreme_rank(w, kind);
            v = cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(w)]
                                                    [static_cast<size_t>(r)])];
        }
        for (int i = 0; i < nb; ++i)
            if (base[static_cast<size_t>(i)] == v) return i;
        throw InvalidPath("cycle boundary mismatch");
    };
    std::vector<int> phi(static_cast<size_t>(nb));
    for (int v = 0; v < nb; ++v) phi[static_cast<size_t>(v)] = step_down(p + c, v);

    // eventual image
    std::set<int> image;
    for (int v = 0; v < nb; ++v) image.insert(v);
    while (true) {
        std::set<int> next;
        for (int v : image) next.insert(phi[static_cast<size_t>(v)]);
        if (next == image) break;
        image = std::move(next);
    }

    // phi restricted to the eventual image is a permutation
    std::map<int, int> inv;
    for (int v : image) inv[phi[static_cast<size_t>(v)]] = v;

    ExtremeSet out;
    out.count = static_cast<long long>(image.size());
    for (int u : image) {
        // cycle length of u
        long long q = 1;
        for (int v = inv.at(u); v != u; v = inv.at(v)) ++q;

        PathPrefix prefix;
        prefix.edges.resize(static_cast<size_t>(p));
        std::string v = base[static_cast<size_t>(u)];
        for (long long lvl = p; lvl >= 1; --lvl) {
            const CompiledLevel& cl = d.level(lvl);
            int w = cl.vert_index.at(v);
            int r = cl.extreme_rank(w, kind);
            prefix.edges[static_cast<size_t>(lvl - 1)] = {v, r};
            v = cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(w)]
                                                    [static_cast<size_t>(r)])];
        }

        std::vector<TailEdge> tail(static_cast<size_t>(q * c));
        int top = u;
        for (long long j = 1; j <= q; ++j) {
            top = inv.at(top); // vertex index at level p + j*c
            std::string tv = base[static_cast<size_t>(top)];
            for (long long lvl = p + j * c; lvl > p + (j - 1) * c; --lvl) {
                const CompiledLevel& cl = d.level(lvl);
                int w = cl.vert_index.at(tv);
                int r = cl.extreme_rank(w, kind);
                tail[static_cast<size_t>(lvl - p - 1)] = {tv, r};
                tv = cl.prev[static_cast<size_t>(cl.fiber[static_cast<size_t>(w)]
                                                         [static_cast<size_t>(r)])];
            }
        }
        out.witnesses.push_back(EventuallyPeriodicPath::raw(std::move(prefix), std::move(tail)));
    }
    return out;
}

bool cylinder_in_extreme(const Diagram& d, const PathPrefix& p, Extreme kind) {
    validate_prefix(d, p);
    if (d.finite()) throw FiniteDiagramExhausted("cylinder test needs an infinite diagram");
    if (!prefix_all_extreme(d, p, kind)) return false;
    long long pre = d.preamble_length(), c = d.cycle_length();
    std::set<std::string> reach{terminal_vertex(d, p)};
    std::set<std::pair<long long, std::set<std::string>>> seen;
    long long lvl = p.length();
    while (true) {
        if (lvl >= pre) {
            auto key = std::make_pair((lvl - pre) % c, reach);
            if (!seen.insert(key).second) return true;
        }
        const CompiledLevel& cl = d.level(lvl + 1);
        std::set<std::string> next;
        for (const auto& v : reach) {
            int src = cl.prev_index.at(v);
            for (auto [w, rank] : cl.out[static_cast<size_t>(src)]) {
                if (rank != cl.extreme_rank(w, kind)) return false;
                next.insert(cl.verts[static_cast<size_t>(w)]);
            }
        }
        reach = std::move(next);
        ++lvl;
    }
}

bool extreme_set_interior_empty(const Diagram& d, Extreme kind) {
    ExtremeSet ext = count_extreme_paths(d, kind);
    long long pre = d.preamble_length(), c = d.cycle_length();
    for (const auto& w : ext.witnesses) {
        long long start = w.prefix_length();
        long long span = std::lcm(std::max<long long>(w.tail_period(), 1), c);
        for (long long depth = start; depth < start + span; ++depth)
            if (cylinder_in_extreme(d, w.prefix_to(depth), kind)) return false;
    }
    (void)pre;
    return true;
}

// ---------------------------------------------------------------------------
// Natural extensions and the infinite step

const EventuallyPeriodicPath* NaturalExtensionRule::lookup(
    const Diagram& d, const EventuallyPeriodicPath& max_path) const {
    for (const auto& [from, to] : pairs)
        if (path_equal(d, from, max_path)) return &to;
    return nullptr;
}

ValidationReport validate_extension_rule(const Diagram& d, const NaturalExtensionRule& rule) {
    ValidationReport rep;
    ExtremeSet maxes = count_extreme_paths(d, Extreme::Max);
    for (const auto& w : maxes.witnesses) {
        if (!rule.lookup(d, w))
            rep.issues.push_back({0, "domain", "a max path is not covered by the rule"});
    }
    for (const auto& [from, to] : rule.pairs) {
        if (!path_all_extreme(d, from, Extreme::Max))
            rep.issues.push_back({0, "domain", "rule domain element is not an infinite max path"});
        if (!path_all_extreme(d, to, Extreme::Min))
            rep.issues.push_back({0, "codomain", "rule image is not an infinite min path"});
    }
    return rep;
}

NaturalExtensionRule unique_min_rule(const Diagram& d) {
    ExtremeSet mins = count_extreme_paths(d, Extreme::Min);
    if (mins.count != 1)
        throw MaxPathNoExtension("diagram does not have a unique min path");
    ExtremeSet maxes = count_extreme_paths(d, Extreme::Max);
    NaturalExtensionRule rule;
    for (const auto& w : maxes.witnesses) rule.pairs.push_back({w, mins.witnesses.front()});
    return rule;
}

EventuallyPeriodicPath vershik_step_infinite(const Diagram& d, const EventuallyPeriodicPath& x,
                                             const NaturalExtensionRule* ext) {
    long long P = x.prefix_length();
    long long T = x.tail_period();
    long long first_nonmax = -1;
    for (long long n = 1; n <= P + T; ++n) {
        PrefixEdge e = x.edge_at(n);
        const CompiledLevel& cl = d.level(n);
        int w = cl.vert_index.at(e.range);
        if (e.rank != cl.extreme_rank(w, Extreme::Max)) {
            first_nonmax = n;
            break;
        }
    }
    if (first_nonmax < 0) {
        if (ext) {
            const EventuallyPeriodicPath* img = ext->lookup(d, x);
            if (!img) throw MaxPathNoExtension("extension rule does not cover this max path");
            return *img;
        }
        ExtremeSet mins = count_extreme_paths(d, Extreme::Min);
        if (mins.count == 1) return mins.witnesses.front();
        throw MaxPathNoExtension("all-max path and no extension rule given");
    }

    if (first_nonmax <= P) {
        PathPrefix head = x.prefix();
        StepResult r = vershik_step(d, head);
        return EventuallyPeriodicPath::raw(std::move(*r.next), x.tail());
    }
    // the change sits in the tail: materialize up to an aligned level past it
    long long A = d.align_up(first_nonmax);
    while (A < first_nonmax) A += d.cycle_length();
    PathPrefix head = x.prefix_to(A);
    std::vector<TailEdge> rotated;
    for (long long i = 0; i < T; ++i) {
        PrefixEdge e = x.edge_at(A + 1 + i);
        rotated.push_back({e.range, e.rank});
    }
    StepResult r = vershik_step(d, head);
    return EventuallyPeriodicPath::raw(std::move(*r.next), std::move(rotated));
}

std::vector<EventuallyPeriodicPath> orbit_segment(const Diagram& d,
                                                  const EventuallyPeriodicPath& x, long long len,
                                                  const NaturalExtensionRule* ext) {
    std::vector<EventuallyPeriodicPath> out;
    out.reserve(static_cast<size_t>(len));
    EventuallyPeriodicPath cur = x;
    for (long long i = 0; i < len; ++i) {
        out.push_back(cur);
        if (i + 1 < len) cur = vershik_step_infinite(d, cur, ext);
    }
    return out;
}

std::vector<PathPrefix> truncation_itinerary(const Diagram& d, const EventuallyPeriodicPath& x,
                                             long long k, long long len,
                                             const NaturalExtensionRule* ext) {
    std::vector<PathPrefix> out;
    out.reserve(static_cast<size_t>(len));
    EventuallyPeriodicPath cur = x;
    for (long long i = 0; i < len; ++i) {
        out.push_back(cur.prefix_to(k));
        if (i + 1 < len) cur = vershik_step_infinite(d, cur, ext);
    }
    return out;
}

} // namespace bratteli
