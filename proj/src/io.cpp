#include "bratteli/io.hpp"

#include <fstream>
#include <sstream>

namespace bratteli {

namespace {

json level_to_json(const LevelSpec& l) {
    json edges = json::array();
    for (const auto& e : l.edges)
        edges.push_back({{"source", e.source}, {"range", e.range}, {"rank", e.rank}});
    return {{"vertices", l.vertices}, {"edges", edges}};
}

LevelSpec level_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("level needs 'vertices' and 'edges'");
    LevelSpec l;
    for (const auto& v : j.at("vertices")) l.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges")) {
        if (!e.contains("source") || !e.contains("range") || !e.contains("rank"))
            throw ParseError("edge needs 'source', 'range' and 'rank'");
        l.edges.push_back({e.at("source").get<std::string>(), e.at("range").get<std::string>(),
                           e.at("rank").get<int>()});
    }
    return l;
}

} // namespace

json diagram_to_json(const Diagram& d) {
    json pre = json::array(), cyc = json::array();
    for (const auto& l : d.preamble()) pre.push_back(level_to_json(l));
    for (const auto& l : d.cycle()) cyc.push_back(level_to_json(l));
    return {{"preamble", pre}, {"cycle", cyc}};
}

Diagram diagram_from_json(const json& j) {
    if (!j.is_object() || !j.contains("preamble") || !j.contains("cycle"))
        throw ParseError("diagram needs 'preamble' and 'cycle' arrays");
    std::vector<LevelSpec> pre, cyc;
    for (const auto& l : j.at("preamble")) pre.push_back(level_from_json(l));
    for (const auto& l : j.at("cycle")) cyc.push_back(level_from_json(l));
    Diagram d(std::move(pre), std::move(cyc));
    auto rep = validate_diagram(d);
    if (!rep.ok()) throw ValidationError(rep);
    return d;
}

json prefix_to_json(const PathPrefix& p) {
    json arr = json::array();
    for (long long i = 0; i < p.length(); ++i)
        arr.push_back({{"level", i + 1},
                       {"range", p.edges[static_cast<size_t>(i)].range},
                       {"rank", p.edges[static_cast<size_t>(i)].rank}});
    return arr;
}

PathPrefix prefix_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("path prefix must be an array");
    PathPrefix p;
    long long expect = 1;
    for (const auto& e : j) {
        if (e.contains("level") && e.at("level").get<long long>() != expect)
            throw ParseError("prefix levels must be consecutive from 1");
        p.edges.push_back({e.at("range").get<std::string>(), e.at("rank").get<int>()});
        ++expect;
    }
    return p;
}

json path_to_json(const EventuallyPeriodicPath& x) {
    json tail = json::array();
    for (const auto& t : x.tail()) tail.push_back({{"range", t.range}, {"rank", t.rank}});
    return {{"prefix", prefix_to_json(x.prefix())}, {"tail", {{"periodic", tail}}}};
}

EventuallyPeriodicPath path_from_json(const Diagram& d, const json& j) {
    if (!j.is_object() || !j.contains("prefix") || !j.contains("tail"))
        throw ParseError("path needs 'prefix' and 'tail'");
    PathPrefix p = prefix_from_json(j.at("prefix"));
    const json& t = j.at("tail");
    if (t.is_string()) {
        std::string kind = t.get<std::string>();
        if (kind == "all_max") return EventuallyPeriodicPath::make(d, p, TailKind::AllMax);
        if (kind == "all_min") return EventuallyPeriodicPath::make(d, p, TailKind::AllMin);
        throw ParseError("unknown tail kind '" + kind + "'");
    }
    if (t.is_object() && t.contains("periodic")) {
        std::vector<TailEdge> tail;
        for (const auto& e : t.at("periodic"))
            tail.push_back({e.at("range").get<std::string>(), e.at("rank").get<int>()});
        return EventuallyPeriodicPath::make(d, p, TailKind::Periodic, tail);
    }
    throw ParseError("tail must be 'all_max', 'all_min' or {\"periodic\": [...]}");
}

namespace {

json edge_set_to_json(const std::vector<EdgeSpec>& es) {
    json arr = json::array();
    for (const auto& e : es)
        arr.push_back({{"source", e.source}, {"range", e.range}, {"rank", e.rank}});
    return arr;
}

std::vector<EdgeSpec> edge_set_from_json(const json& j) {
    std::vector<EdgeSpec> es;
    for (const auto& e : j)
        es.push_back({e.at("source").get<std::string>(), e.at("range").get<std::string>(),
                      e.at("rank").get<int>()});
    return es;
}

Diagram diagram_ref_from_json(const json& j, const std::string& base_dir) {
    if (j.is_string()) {
        std::string path = j.get<std::string>();
        if (!base_dir.empty() && !path.empty() && path.front() != '/')
            path = base_dir + "/" + path;
        return diagram_from_json(load_json_file(path));
    }
    if (j.is_object() && j.contains("fixture"))
        return get_fixture(j.at("fixture").get<std::string>()).diagram;
    return diagram_from_json(j);
}

} // namespace

json premorphism_to_json(const Premorphism& f) {
    json lp = json::array(), lc = json::array();
    for (const auto& l : f.layers_preamble) lp.push_back(edge_set_to_json(l));
    for (const auto& l : f.layers_cycle) lc.push_back(edge_set_to_json(l));
    return {{"source", diagram_to_json(f.source)},
            {"target", diagram_to_json(f.target)},
            {"level_map", {{"preamble", f.fmap_preamble}, {"step", f.fmap_step}}},
            {"layers", {{"preamble", lp}, {"cycle", lc}}}};
}

Premorphism premorphism_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
        !j.contains("level_map") || !j.contains("layers"))
        throw ParseError("premorphism needs 'source', 'target', 'level_map' and 'layers'");
    Premorphism f;
    f.source = diagram_ref_from_json(j.at("source"), base_dir);
    f.target = diagram_ref_from_json(j.at("target"), base_dir);
    const json& lm = j.at("level_map");
    f.fmap_preamble.clear();
    for (const auto& v : lm.at("preamble")) f.fmap_preamble.push_back(v.get<long long>());
    f.fmap_step = lm.at("step").get<long long>();
    const json& ls = j.at("layers");
    for (const auto& l : ls.at("preamble")) f.layers_preamble.push_back(edge_set_from_json(l));
    for (const auto& l : ls.at("cycle")) f.layers_cycle.push_back(edge_set_from_json(l));
    return f;
}

json extension_rule_to_json(const NaturalExtensionRule& rule) {
    json arr = json::array();
    for (const auto& [from, to] : rule.pairs)
        arr.push_back({{"max", path_to_json(from)}, {"min", path_to_json(to)}});
    return {{"pairs", arr}};
}

NaturalExtensionRule extension_rule_from_json(const Diagram& d, const json& j) {
    if (!j.is_object() || !j.contains("pairs"))
        throw ParseError("extension rule needs 'pairs'");
    NaturalExtensionRule rule;
    for (const auto& p : j.at("pairs"))
        rule.pairs.push_back(
            {path_from_json(d, p.at("max")), path_from_json(d, p.at("min"))});
    return rule;
}

json validation_report_to_json(const ValidationReport& r) {
    json issues = json::array();
    for (const auto& i : r.issues)
        issues.push_back({{"level", i.level}, {"subject", i.subject}, {"detail", i.detail}});
    return {{"valid", r.ok()}, {"issues", issues}};
}

json factoring_report_to_json(const Diagram& domain, const FactoringReport& r) {
    (void)domain;
    json wit = json::array();
    for (const auto& w : r.witnesses)
        wit.push_back({{"path", path_to_json(w.path)},
                       {"level", w.level},
                       {"expected_prefix", prefix_to_json(w.expected)},
                       {"actual_prefix", prefix_to_json(w.actual)}});
    json conds = json::array();
    for (const auto& c : r.equiv_conditions)
        conds.push_back({{"case", c.case_matched},
                         {"holds", c.holds},
                         {"fail_level", c.fail_level},
                         {"detail", c.detail}});
    return {{"verdict", r.pass ? "pass" : "fail"},
            {"witnesses", wit},
            {"equiv_conditions", conds}};
}

json morphisms_to_json(const std::vector<SadicMorphism>& seq) {
    json levels = json::array();
    for (const auto& m : seq) {
        json images = json::object();
        for (const auto& a : m.domain_alphabet) images[a] = m.image(a);
        levels.push_back({{"alphabet", m.domain_alphabet}, {"images", images}});
    }
    return {{"levels", levels}};
}

json word_to_json(const std::vector<CylinderLabel>& word) {
    json arr = json::array();
    for (const auto& l : word) arr.push_back({{"ranks", l.ranks}, {"vertex", l.vertex}});
    return arr;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("parse failure in '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// DOT rendering

namespace {

void dot_levels(std::ostream& os, const Diagram& d, long long depth, const std::string& tag) {
    os << "  subgraph cluster_" << tag << "0 {\n    label=\"" << tag << " level 0\";\n    \""
       << tag << "0_" << d.root() << "\";\n  }\n";
    for (long long n = 1; n <= depth; ++n) {
        os << "  subgraph cluster_" << tag << n << " {\n    label=\"" << tag << " level " << n
           << "\";\n";
        for (const auto& v : d.vertices_at(n)) os << "    \"" << tag << n << "_" << v << "\";\n";
        os << "  }\n";
    }
    for (long long n = 1; n <= depth; ++n) {
        const CompiledLevel& cl = d.level(n);
        for (size_t w = 0; w < cl.fiber.size(); ++w)
            for (size_t r = 0; r < cl.fiber[w].size(); ++r)
                os << "  \"" << tag << n - 1 << "_"
                   << cl.prev[static_cast<size_t>(cl.fiber[w][r])] << "\" -> \"" << tag << n
                   << "_" << cl.verts[w] << "\" [label=\"" << r << "\"];\n";
    }
}

} // namespace

std::string render_dot(const Diagram& d, long long depth) {
    if (depth < 1) throw FiniteDiagramExhausted("depth must be >= 1");
    d.require_level(depth);
    std::ostringstream os;
    os << "digraph bratteli {\n  rankdir=TB;\n";
    dot_levels(os, d, depth, "L");
    os << "}\n";
    return os.str();
}

std::string render_dot(const Premorphism& f, long long depth) {
    if (depth < 1) throw FiniteDiagramExhausted("depth must be >= 1");
    f.source.require_level(depth);
    f.target.require_level(f.f(depth));
    std::ostringstream os;
    os << "digraph premorphism {\n  rankdir=TB;\n";
    dot_levels(os, f.source, depth, "B");
    dot_levels(os, f.target, f.f(depth), "C");
    for (long long n = 0; n <= depth; ++n) {
        OrderedEdgeSet Fn = f.layer(n);
        for (size_t w = 0; w < Fn.fibers.size(); ++w)
            for (size_t r = 0; r < Fn.fibers[w].size(); ++r)
                os << "  \"B" << n << "_" << Fn.domain[static_cast<size_t>(Fn.fibers[w][r])]
                   << "\" -> \"C" << f.f(n) << "_" << Fn.codomain[w]
                   << "\" [style=dashed, label=\"" << r << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

Diagram make_two_odometer() {
    LevelSpec l;
    l.vertices = {"v"};
    l.edges = {{"v", "v", 0}, {"v", "v", 1}};
    return Diagram({}, {l});
}

// two disjoint odometer wings meeting only at the root
Diagram make_odometer_pair() {
    LevelSpec l1;
    l1.vertices = {"a", "b"};
    l1.edges = {{"r", "a", 0}, {"r", "a", 1}, {"r", "b", 0}, {"r", "b", 1}};
    LevelSpec lc;
    lc.vertices = {"a", "b"};
    lc.edges = {{"a", "a", 0}, {"a", "a", 1}, {"b", "b", 0}, {"b", "b", 1}};
    return Diagram({l1}, {lc});
}

// four-vertex stationary diagram whose distinguished min path avoids maximal
// tails and whose distinguished max path avoids minimal tails
Diagram make_decisive_case1() {
    LevelSpec l1;
    l1.vertices = {"a", "b", "c", "d"};
    l1.edges = {{"r", "a", 0}, {"r", "b", 0}, {"r", "c", 0}, {"r", "d", 0}};
    LevelSpec lc;
    lc.vertices = {"a", "b", "c", "d"};
    lc.edges = {{"a", "a", 0}, {"d", "a", 1}, {"b", "a", 2},
                {"c", "b", 0}, {"b", "b", 1}, {"d", "b", 2}, {"b", "b", 3},
                {"c", "c", 0}, {"b", "c", 1}, {"d", "c", 2},
                {"a", "d", 0}, {"d", "d", 1}, {"b", "d", 2}, {"d", "d", 3}};
    return Diagram({l1}, {lc});
}

// three-vertex stationary diagram whose distinguished paths ride singleton
// fibers, so both are simultaneously maximal and minimal
Diagram make_decisive_case2() {
    LevelSpec l1;
    l1.vertices = {"a", "b", "c"};
    l1.edges = {{"r", "a", 0}, {"r", "b", 0}, {"r", "c", 0}};
    LevelSpec lc;
    lc.vertices = {"a", "b", "c"};
    lc.edges = {{"a", "a", 0}, {"a", "b", 0}, {"b", "b", 1}, {"c", "b", 2}, {"c", "c", 0}};
    return Diagram({l1}, {lc});
}

// rank-2 diagram with alternating odd fibers at every level
Diagram make_rank2_alternating() {
    LevelSpec l1;
    l1.vertices = {"u", "v"};
    l1.edges = {{"r", "u", 0}, {"r", "v", 0}};
    LevelSpec l2;
    l2.vertices = {"u", "v"};
    l2.edges = {{"u", "u", 0}, {"v", "u", 1}, {"u", "u", 2},
                {"v", "v", 0}, {"u", "v", 1}, {"v", "v", 2}, {"u", "v", 3},
                {"v", "v", 4}, {"u", "v", 5}, {"v", "v", 6}};
    LevelSpec lc;
    lc.vertices = {"u", "v"};
    lc.edges = {{"u", "u", 0}, {"v", "u", 1}, {"u", "u", 2},
                {"v", "v", 0}, {"u", "v", 1}, {"v", "v", 2}, {"u", "v", 3}, {"v", "v", 4}};
    return Diagram({l1, l2}, {lc});
}

Diagram make_rank2_alternating_target() {
    LevelSpec l1;
    l1.vertices = {"w"};
    l1.edges = {{"w", "w", 0}, {"w", "w", 1}};
    LevelSpec l2;
    l2.vertices = {"w"};
    l2.edges = {{"w", "w", 0}, {"w", "w", 1}, {"w", "w", 2}, {"w", "w", 3}, {"w", "w", 4}};
    LevelSpec lc;
    lc.vertices = {"w"};
    lc.edges = {{"w", "w", 0}, {"w", "w", 1}, {"w", "w", 2}, {"w", "w", 3}};
    return Diagram({l1, l2}, {lc});
}

// rank-2 diagram with crossed extreme paths: the left fiber alternates, the
// right is a single straight edge
Diagram make_rank2_crossed() {
    LevelSpec l1;
    l1.vertices = {"u", "v"};
    l1.edges = {{"r", "u", 0}, {"r", "v", 0}};
    LevelSpec lc;
    lc.vertices = {"u", "v"};
    lc.edges = {{"u", "u", 0}, {"v", "u", 1}, {"u", "u", 2}, {"v", "v", 0}};
    return Diagram({l1}, {lc});
}

// rank-2 diagram splitting into two straight wings past level one
Diagram make_rank2_split() {
    LevelSpec l1;
    l1.vertices = {"u", "v"};
    l1.edges = {{"r", "u", 0}, {"r", "v", 0}, {"r", "v", 1}};
    LevelSpec lc;
    lc.vertices = {"u", "v"};
    lc.edges = {{"u", "u", 0}, {"u", "u", 1}, {"v", "v", 0}, {"v", "v", 1}};
    return Diagram({l1}, {lc});
}

// the extreme witness whose tail trajectory rides the given vertex
EventuallyPeriodicPath extreme_witness_through(const Diagram& d, Extreme kind,
                                               const std::string& vertex) {
    ExtremeSet s = count_extreme_paths(d, kind);
    for (const auto& w : s.witnesses) {
        long long lvl = w.prefix_length() + w.tail_period();
        if (w.edge_at(lvl).range == vertex) return w;
    }
    throw ParseError("no extreme witness through '" + vertex + "'");
}

NaturalExtensionRule pairing(const Diagram& d,
                             std::vector<std::pair<EventuallyPeriodicPath,
                                                   EventuallyPeriodicPath>> pairs) {
    NaturalExtensionRule r;
    r.pairs = std::move(pairs);
    auto rep = validate_extension_rule(d, r);
    if (!rep.ok()) throw ValidationError(rep);
    return r;
}

} // namespace

std::vector<std::string> fixture_names() {
    return {"two-odometer",    "odometer-pair", "decisive-case1", "decisive-case2",
            "rank2-alternating", "rank2-crossed", "rank2-split"};
}

Fixture get_fixture(const std::string& name) {
    Fixture fx;
    fx.name = name;
    if (name == "two-odometer") {
        fx.description = "one vertex per level, two edges; the dyadic odometer";
        fx.diagram = make_two_odometer();
        return fx;
    }
    if (name == "odometer-pair") {
        fx.description = "two disjoint dyadic wings; construction input with z on the left "
                         "wing and y on the right";
        fx.diagram = make_odometer_pair();
        fx.z = extreme_witness_through(fx.diagram, Extreme::Min, "a");
        fx.y = extreme_witness_through(fx.diagram, Extreme::Max, "b");
        auto max_a = extreme_witness_through(fx.diagram, Extreme::Max, "a");
        auto min_b = extreme_witness_through(fx.diagram, Extreme::Min, "b");
        fx.extension = pairing(fx.diagram, {{max_a, *fx.z}, {*fx.y, min_b}});
        return fx;
    }
    if (name == "decisive-case1") {
        fx.description = "four-vertex stationary diagram; z is never maximal and y is never "
                         "minimal";
        fx.diagram = make_decisive_case1();
        fx.z = extreme_witness_through(fx.diagram, Extreme::Min, "a");
        fx.y = extreme_witness_through(fx.diagram, Extreme::Max, "d");
        auto max_b = extreme_witness_through(fx.diagram, Extreme::Max, "b");
        auto min_c = extreme_witness_through(fx.diagram, Extreme::Min, "c");
        fx.extension = pairing(fx.diagram, {{max_b, *fx.z}, {*fx.y, min_c}});
        return fx;
    }
    if (name == "decisive-case2") {
        fx.description = "three-vertex stationary diagram; z and y ride singleton fibers and "
                         "map to themselves";
        fx.diagram = make_decisive_case2();
        fx.z = extreme_witness_through(fx.diagram, Extreme::Min, "a");
        fx.y = extreme_witness_through(fx.diagram, Extreme::Max, "c");
        fx.extension = pairing(fx.diagram, {{*fx.z, *fx.z}, {*fx.y, *fx.y}});
        return fx;
    }
    if (name == "rank2-alternating") {
        fx.description = "rank-2 diagram with alternating odd fibers; reduces to the rank-1 "
                         "companion by the bundled premorphism";
        fx.diagram = make_rank2_alternating();
        fx.companion = make_rank2_alternating_target();
        Premorphism f;
        f.source = fx.diagram;
        f.target = *fx.companion;
        f.fmap_preamble = {0};
        f.fmap_step = 1;
        std::vector<EdgeSpec> layer = {{"u", "w", 0}, {"v", "w", 1}};
        f.layers_preamble = {layer, layer};
        f.layers_cycle = {layer};
        fx.premorphism = std::move(f);
        auto max_u = extreme_witness_through(fx.diagram, Extreme::Max, "u");
        auto max_v = extreme_witness_through(fx.diagram, Extreme::Max, "v");
        auto min_u = extreme_witness_through(fx.diagram, Extreme::Min, "u");
        auto min_v = extreme_witness_through(fx.diagram, Extreme::Min, "v");
        fx.extension = pairing(fx.diagram, {{max_u, min_v}, {max_v, min_u}});
        return fx;
    }
    if (name == "rank2-crossed") {
        fx.description = "rank-2 diagram with a three-edge alternating fiber and a straight "
                         "wing; crossed pairing";
        fx.diagram = make_rank2_crossed();
        auto max_u = extreme_witness_through(fx.diagram, Extreme::Max, "u");
        auto max_v = extreme_witness_through(fx.diagram, Extreme::Max, "v");
        auto min_u = extreme_witness_through(fx.diagram, Extreme::Min, "u");
        auto min_v = extreme_witness_through(fx.diagram, Extreme::Min, "v");
        fx.extension = pairing(fx.diagram, {{max_u, min_v}, {max_v, min_u}});
        return fx;
    }
    if (name == "rank2-split") {
        fx.description = "rank-2 diagram splitting into two straight wings; diagonal pairing";
        fx.diagram = make_rank2_split();
        auto max_u = extreme_witness_through(fx.diagram, Extreme::Max, "u");
        auto max_v = extreme_witness_through(fx.diagram, Extreme::Max, "v");
        auto min_u = extreme_witness_through(fx.diagram, Extreme::Min, "u");
        auto min_v = extreme_witness_through(fx.diagram, Extreme::Min, "v");
        fx.extension = pairing(fx.diagram, {{max_u, min_u}, {max_v, min_v}});
        return fx;
    }
    throw ParseError("unknown fixture '" + name + "'");
}

} // namespace bratteli
