#include "bratteli/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace bratteli {

BigCount checked_add(BigCount a, BigCount b) {
    BigCount r = a + b;
    if (r < a) throw CountOverflow("path count overflow in addition");
    return r;
}

BigCount checked_mul(BigCount a, BigCount b) {
    if (a == 0 || b == 0) return 0;
    BigCount r = a * b;
    if (r / a != b) throw CountOverflow("path count overflow in multiplication");
    return r;
}

std::string count_to_string(BigCount v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    if (issues.empty()) return "valid";
    for (const auto& i : issues)
        os << "level " << i.level << " [" << i.subject << "]: " << i.detail << "\n";
    return os.str();
}

namespace {

CompiledLevel compile_level(const std::vector<std::string>& prev, const LevelSpec& spec) {
    CompiledLevel cl;
    cl.prev = prev;
    cl.verts = spec.vertices;
    for (size_t i = 0; i < cl.prev.size(); ++i) cl.prev_index[cl.prev[i]] = static_cast<int>(i);
    for (size_t i = 0; i < cl.verts.size(); ++i) cl.vert_index[cl.verts[i]] = static_cast<int>(i);
    cl.fiber.assign(cl.verts.size(), {});
    cl.out.assign(cl.prev.size(), {});

    // collect fibers; rank contiguity is checked by validate_diagram, here we
    // place edges best-effort so a partially broken spec can still be reported
    std::vector<std::vector<std::pair<int, int>>> staged(cl.verts.size());
    for (const auto& e : spec.edges) {
        auto ri = cl.vert_index.find(e.range);
        auto si = cl.prev_index.find(e.source);
        if (ri == cl.vert_index.end() || si == cl.prev_index.end()) continue;
        staged[ri->second].push_back({e.rank, si->second});
    }
    for (size_t v = 0; v < staged.size(); ++v) {
        auto& fib = staged[v];
        std::sort(fib.begin(), fib.end());
        for (auto& [rank, src] : fib) {
            cl.fiber[v].push_back(src);
            cl.out[src].push_back({static_cast<int>(v), rank});
        }
    }
    for (auto& o : cl.out) std::sort(o.begin(), o.end());
    return cl;
}

} // namespace

Diagram::Diagram(std::vector<LevelSpec> preamble, std::vector<LevelSpec> cycle)
    : preamble_(std::move(preamble)), cycle_(std::move(cycle)) {
    compile();
}

void Diagram::compile() {
    // the root name is the (unique) source used by the first level
    const LevelSpec* first = nullptr;
    if (!preamble_.empty())
        first = &preamble_.front();
    else if (!cycle_.empty())
        first = &cycle_.front();
    root_ = "v0";
    if (first && !first->edges.empty()) root_ = first->edges.front().source;
    root_vec_ = {root_};

    std::vector<std::string> prev{root_};
    for (const auto& ls : preamble_) {
        compiled_preamble_.push_back(compile_level(prev, ls));
        prev = ls.vertices;
    }
    for (const auto& ls : cycle_) {
        compiled_cycle_.push_back(compile_level(prev, ls));
        prev = ls.vertices;
    }
}

bool Diagram::level_exists(long long n) const {
    if (n < 1) return false;
    if (!cycle_.empty()) return true;
    return n <= preamble_length();
}

void Diagram::require_level(long long n) const {
    if (!level_exists(n))
        throw FiniteDiagramExhausted("level " + std::to_string(n) +
                                     " exceeds the finite presentation");
}

const LevelSpec& Diagram::level_spec(long long n) const {
    require_level(n);
    if (n <= preamble_length()) return preamble_[static_cast<size_t>(n - 1)];
    return cycle_[static_cast<size_t>((n - 1 - preamble_length()) % cycle_length())];
}

const CompiledLevel& Diagram::level(long long n) const {
    require_level(n);
    if (n <= preamble_length()) return compiled_preamble_[static_cast<size_t>(n - 1)];
    return compiled_cycle_[static_cast<size_t>((n - 1 - preamble_length()) % cycle_length())];
}

const std::vector<std::string>& Diagram::vertices_at(long long n) const {
    if (n == 0) return root_vec_;
    return level(n).verts;
}

const std::string& Diagram::root() const { return root_; }

long long Diagram::align_up(long long n) const {
    long long p = preamble_length();
    if (finite()) return std::min(n, p);
    if (n <= p) return p;
    long long c = cycle_length();
    long long k = (n - p + c - 1) / c;
    return p + k * c;
}

std::vector<BigCount> Diagram::path_counts(long long n) const {
    std::vector<BigCount> cur{1}; // level 0: the root
    for (long long lvl = 1; lvl <= n; ++lvl) {
        const CompiledLevel& cl = level(lvl);
        std::vector<BigCount> next(cl.verts.size(), 0);
        for (size_t v = 0; v < cl.fiber.size(); ++v)
            for (int src : cl.fiber[v]) next[v] = checked_add(next[v], cur[static_cast<size_t>(src)]);
        cur = std::move(next);
    }
    return cur;
}

BigCount Diagram::total_paths(long long n) const {
    auto counts = path_counts(n);
    BigCount t = 0;
    for (auto c : counts) t = checked_add(t, c);
    return t;
}

ValidationReport validate_diagram(const Diagram& d) {
    ValidationReport rep;
    auto issue = [&](long long level, std::string subject, std::string detail) {
        rep.issues.push_back({level, std::move(subject), std::move(detail)});
    };

    auto check_levels = [&](const std::vector<LevelSpec>& levels, long long base,
                            std::vector<std::string> prev) {
        for (size_t li = 0; li < levels.size(); ++li) {
            long long lvl = base + static_cast<long long>(li) + 1;
            const LevelSpec& ls = levels[li];
            std::set<std::string> vset(ls.vertices.begin(), ls.vertices.end());
            if (vset.size() != ls.vertices.size())
                issue(lvl, "vertices", "duplicate vertex names");
            if (ls.vertices.empty()) issue(lvl, "vertices", "level has no vertices");
            std::set<std::string> pset(prev.begin(), prev.end());

            std::map<std::string, std::vector<int>> fibers;
            std::set<std::string> sources_used;
            for (const auto& e : ls.edges) {
                if (!vset.count(e.range))
                    issue(lvl, e.range, "edge range is not a vertex of this level");
                else
                    fibers[e.range].push_back(e.rank);
                if (!pset.count(e.source))
                    issue(lvl, e.source, "edge source is not a vertex of the previous level");
                else
                    sources_used.insert(e.source);
                if (e.rank < 0) issue(lvl, e.range, "negative rank");
            }
            for (const auto& v : ls.vertices) {
                auto it = fibers.find(v);
                if (it == fibers.end()) {
                    issue(lvl, v, "vertex has no incoming edge");
                    continue;
                }
                auto ranks = it->second;
                std::sort(ranks.begin(), ranks.end());
                for (size_t i = 0; i < ranks.size(); ++i) {
                    if (ranks[i] != static_cast<int>(i)) {
                        issue(lvl, v, "fiber ranks are not exactly 0.." +
                                          std::to_string(ranks.size() - 1));
                        break;
                    }
                }
            }
            for (const auto& u : prev)
                if (!sources_used.count(u)) issue(lvl, u, "vertex has no outgoing edge");
            prev = ls.vertices;
        }
        return prev;
    };

    // level 0: single root, implied by a unique source name at level 1
    const std::vector<LevelSpec>* first_levels =
        !d.preamble().empty() ? &d.preamble() : &d.cycle();
    if (!first_levels->empty()) {
        std::set<std::string> roots;
        for (const auto& e : first_levels->front().edges) roots.insert(e.source);
        if (roots.size() > 1) issue(1, "level 0", "more than one source vertex at level 1");
    }

    auto end_preamble = check_levels(d.preamble(), 0, {d.root()});
    if (!d.cycle().empty()) {
        check_levels(d.cycle(), d.preamble_length(), end_preamble);
        // cycle must wrap: its last vertex list feeds its first level
        const auto& wrap_prev = d.cycle().back().vertices;
        std::set<std::string> wset(wrap_prev.begin(), wrap_prev.end());
        std::set<std::string> entry(end_preamble.begin(), end_preamble.end());
        if (wset != entry)
            issue(d.preamble_length() + d.cycle_length(), "cycle",
                  "last cycle vertex list differs from the vertex list entering the cycle");
    }
    return rep;
}

void require_valid(const Diagram& d) {
    auto rep = validate_diagram(d);
    if (!rep.ok()) throw ValidationError(rep);
}

std::vector<LevelSpec> unroll(const Diagram& d, long long n) {
    if (n < 1) throw FiniteDiagramExhausted("unroll needs at least one level");
    std::vector<LevelSpec> out;
    out.reserve(static_cast<size_t>(n));
    for (long long i = 1; i <= n; ++i) out.push_back(d.level_spec(i));
    return out;
}

namespace {

// enumerate root paths is exponential; telescoping materializes composed fibers
// so it is kept for finite windows only
void enumerate_paths_into(const Diagram& d, long long from_level, long long to_level,
                          int vertex_idx, std::vector<std::vector<int>>& paths_out) {
    // returns, in reverse-lex order, the source index at from_level of each path
    // plus nothing else; recursion materializes the ordering
    struct Walk {
        const Diagram& d;
        long long from;
        std::vector<std::vector<int>>& out; // each entry: source idx at `from`
        void rec(long long lvl, int v, std::vector<int>& stack) {
            if (lvl == from) {
                out.push_back({v});
                return;
            }
            const CompiledLevel& cl = d.level(lvl);
            for (int src : cl.fiber[static_cast<size_t>(v)]) rec(lvl - 1, src, stack);
        }
    };
    std::vector<int> stack;
    Walk w{d, from_level, paths_out};
    w.rec(to_level, vertex_idx, stack);
}

} // namespace

Diagram telescope(const Diagram& d, const std::vector<long long>& cuts, long long depth) {
    if (cuts.empty()) throw InvalidPrefix("telescope needs at least one cut");
    for (size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] < 1 || cuts[i] > depth || (i > 0 && cuts[i] <= cuts[i - 1]))
            throw InvalidPrefix("cuts must be strictly increasing within [1, depth]");
    }
    d.require_level(cuts.back());

    std::vector<LevelSpec> levels;
    long long prev_cut = 0;
    for (long long cut : cuts) {
        const CompiledLevel& top = d.level(cut);
        LevelSpec ls;
        ls.vertices = top.verts;
        const std::vector<std::string>& sources =
            prev_cut == 0 ? d.vertices_at(0) : d.level(prev_cut).verts;
        for (size_t v = 0; v < top.verts.size(); ++v) {
            std::vector<std::vector<int>> paths;
            enumerate_paths_into(d, prev_cut, cut, static_cast<int>(v), paths);
            for (size_t r = 0; r < paths.size(); ++r)
                ls.edges.push_back({sources[static_cast<size_t>(paths[r][0])], top.verts[v],
                                    static_cast<int>(r)});
        }
        levels.push_back(std::move(ls));
        prev_cut = cut;
    }
    return Diagram(std::move(levels), {});
}

AdjacencyMatrix adjacency_matrix(const Diagram& d, long long n) {
    const CompiledLevel& cl = d.level(n);
    AdjacencyMatrix m;
    m.rows = cl.verts;
    m.cols = cl.prev;
    m.entries.assign(m.rows.size(), std::vector<long long>(m.cols.size(), 0));
    for (size_t v = 0; v < cl.fiber.size(); ++v)
        for (int src : cl.fiber[v]) m.entries[v][static_cast<size_t>(src)] += 1;
    return m;
}

bool is_simple_window(const Diagram& d, long long i, long long j) {
    if (i >= j) throw InvalidPrefix("window needs i < j");
    d.require_level(j);
    // reach[v] = set of level-i vertices reaching v, as a bitmask
    size_t base = d.vertices_at(i).size();
    if (base > 63) throw CountOverflow("too many vertices for the reachability mask");
    std::vector<uint64_t> reach(base);
    for (size_t v = 0; v < base; ++v) reach[v] = uint64_t{1} << v;
    for (long long lvl = i + 1; lvl <= j; ++lvl) {
        const CompiledLevel& cl = d.level(lvl);
        std::vector<uint64_t> next(cl.verts.size(), 0);
        for (size_t v = 0; v < cl.fiber.size(); ++v)
            for (int src : cl.fiber[v]) next[v] |= reach[static_cast<size_t>(src)];
        reach = std::move(next);
    }
    uint64_t full = base == 64 ? ~uint64_t{0} : ((uint64_t{1} << base) - 1);
    for (uint64_t r : reach)
        if (r != full) return false;
    return true;
}

bool is_simple(const Diagram& d) {
    if (d.finite()) return false;
    long long p = d.preamble_length(), c = d.cycle_length();
    // for each cycle phase start, march reachability until either every vertex
    // of every start is reached (positivity extends rightward) or the state
    // cycles without becoming full
    for (long long start = p; start < p + c; ++start) {
        size_t base = d.vertices_at(start).size();
        if (base > 63) throw CountOverflow("too many vertices for the reachability mask");
        std::vector<uint64_t> reach(base);
        for (size_t v = 0; v < base; ++v) reach[v] = uint64_t{1} << v;
        uint64_t full = (uint64_t{1} << base) - 1;
        std::set<std::pair<long long, std::vector<uint64_t>>> seen;
        long long lvl = start;
        bool positive = false;
        while (true) {
            bool all_full = true;
            for (uint64_t r : reach)
                if (r != full) all_full = false;
            if (all_full) {
                positive = true;
                break;
            }
            long long phase = (lvl - p) % c;
            if (!seen.insert({phase, reach}).second) break;
            const CompiledLevel& cl = d.level(lvl + 1);
            std::vector<uint64_t> next(cl.verts.size(), 0);
            for (size_t v = 0; v < cl.fiber.size(); ++v)
                for (int src : cl.fiber[v]) next[v] |= reach[static_cast<size_t>(src)];
            reach = std::move(next);
            ++lvl;
        }
        if (!positive) return false;
    }
    return true;
}

std::map<std::string, std::string> extreme_successor_map(const Diagram& d, long long n,
                                                         Extreme kind) {
    const CompiledLevel& cl = d.level(n);
    std::map<std::string, std::string> m;
    for (size_t v = 0; v < cl.verts.size(); ++v) {
        if (cl.fiber[v].empty()) continue;
        int src = kind == Extreme::Min ? cl.fiber[v].front() : cl.fiber[v].back();
        m[cl.verts[v]] = cl.prev[static_cast<size_t>(src)];
    }
    return m;
}

} // namespace bratteli
