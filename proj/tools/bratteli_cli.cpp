// Command-line surface for the library: validation, dynamics, premorphisms,
// the counterexample constructor, factoring checks, the symbolic layer, DOT
// rendering and the bundled fixtures.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bratteli/io.hpp"

namespace br = bratteli;
using br::json;

namespace {

struct CommonArgs {
    std::string diagram_file;
    std::string fixture;
    std::string out;
    long long depth = 6;
    bool as_json = false;
    long long seed = 0; // reserved for randomized subcommands
};

br::Diagram load_diagram(const CommonArgs& a) {
    if (!a.fixture.empty()) return br::get_fixture(a.fixture).diagram;
    if (a.diagram_file.empty()) throw br::ParseError("need --diagram or --fixture");
    return br::diagram_from_json(br::load_json_file(a.diagram_file));
}

br::Fixture load_fixture(const CommonArgs& a) {
    if (a.fixture.empty()) throw br::ParseError("this input needs --fixture");
    return br::get_fixture(a.fixture);
}

br::Premorphism load_premorphism(const std::string& file, const std::string& fixture) {
    if (!fixture.empty()) {
        br::Fixture fx = br::get_fixture(fixture);
        if (!fx.premorphism) throw br::ParseError("fixture has no premorphism");
        return *fx.premorphism;
    }
    if (file.empty()) throw br::ParseError("need --premorphism or --fixture");
    std::string dir = std::filesystem::path(file).parent_path().string();
    return br::premorphism_from_json(br::load_json_file(file), dir);
}

br::NaturalExtensionRule load_extension(const br::Diagram& d, const std::string& file) {
    if (file.empty()) return br::unique_min_rule(d);
    return br::extension_rule_from_json(d, br::load_json_file(file));
}

void emit(const CommonArgs& a, const json& j, const std::string& human) {
    if (a.as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human;
    if (!a.out.empty()) br::save_json_file(a.out, j);
}

std::string verdict_name(br::DecisiveVerdict v) {
    switch (v) {
        case br::DecisiveVerdict::Decisive: return "decisive";
        case br::DecisiveVerdict::NotDecisive: return "not-decisive";
        case br::DecisiveVerdict::SemiDecisiveOnly: return "semi-decisive-only";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finitely presented ordered Bratteli diagrams: dynamics, premorphisms, "
                 "factoring checks and symbolic translation"};
    app.require_subcommand(1);

    CommonArgs a;
    app.add_flag("--json", a.as_json, "machine-readable output");
    app.add_option("--seed", a.seed, "seed for randomized subcommands");

    std::string premorphism_file, premorphism2_file, path_file, prefix_file;
    std::string ext_source_file, ext_target_file, min_file, max_file, cuts_arg;
    long long len = 8, index = 1, word_len = 100, level_k = 1;

    auto add_common = [&](CLI::App* c, bool with_diagram = true) {
        if (with_diagram) c->add_option("--diagram", a.diagram_file, "diagram JSON file");
        c->add_option("--fixture", a.fixture, "bundled fixture name");
        c->add_option("--depth", a.depth, "check/print depth");
        c->add_option("--out", a.out, "write JSON output to this file");
    };

    auto* c_validate = app.add_subcommand("validate", "validate a diagram");
    add_common(c_validate);

    auto* c_tel = app.add_subcommand("telescope", "compose levels between cuts");
    add_common(c_tel);
    c_tel->add_option("--cuts", cuts_arg, "comma-separated strictly increasing cut levels")
        ->required();

    auto* c_step = app.add_subcommand("step", "Vershik successor of a prefix or path");
    add_common(c_step);
    c_step->add_option("--prefix", prefix_file, "prefix JSON file");
    c_step->add_option("--path", path_file, "path JSON file");
    c_step->add_option("--extension", ext_source_file, "extension rule JSON");

    auto* c_orbit = app.add_subcommand("orbit", "orbit segment of a path");
    add_common(c_orbit);
    c_orbit->add_option("--path", path_file, "path JSON file")->required();
    c_orbit->add_option("--len", len, "segment length");
    c_orbit->add_option("--extension", ext_source_file, "extension rule JSON");

    auto* c_max = app.add_subcommand("maxpaths", "count extreme paths with witnesses");
    add_common(c_max);
    std::string kind = "max";
    c_max->add_option("--kind", kind, "max or min");

    auto* c_pv = app.add_subcommand("premorph-validate", "validate an ordered premorphism");
    add_common(c_pv, false);
    c_pv->add_option("--premorphism", premorphism_file, "premorphism JSON file");

    auto* c_apply = app.add_subcommand("apply", "induced image of a target-side prefix");
    add_common(c_apply, false);
    c_apply->add_option("--premorphism", premorphism_file, "premorphism JSON file");
    c_apply->add_option("--prefix", prefix_file, "prefix JSON file")->required();

    auto* c_pre = app.add_subcommand("preimages", "preimage prefixes of a source-side prefix");
    add_common(c_pre, false);
    c_pre->add_option("--premorphism", premorphism_file, "premorphism JSON file");
    c_pre->add_option("--prefix", prefix_file, "prefix JSON file")->required();

    auto* c_fb = app.add_subcommand("fiber-bound", "preimage cardinality bound along a path");
    add_common(c_fb, false);
    c_fb->add_option("--premorphism", premorphism_file, "premorphism JSON file");
    c_fb->add_option("--path", path_file, "path JSON file")->required();

    auto* c_eq = app.add_subcommand("equivalent", "test two premorphisms for equivalence");
    add_common(c_eq, false);
    c_eq->add_option("--premorphism", premorphism_file, "first premorphism")->required();
    c_eq->add_option("--premorphism2", premorphism2_file, "second premorphism")->required();

    auto* c_con = app.add_subcommand("construct", "build the added-vertex diagram from (B,z,y)");
    add_common(c_con);
    c_con->add_option("--min", min_file, "all-min path JSON (defaults to the fixture's)");
    c_con->add_option("--max", max_file, "all-max path JSON (defaults to the fixture's)");
    c_con->add_option("--extension", ext_source_file, "extension rule JSON for the source");

    auto* c_cd = app.add_subcommand("classify-decisive", "classify the constructed diagram");
    add_common(c_cd);
    c_cd->add_option("--min", min_file, "all-min path JSON");
    c_cd->add_option("--max", max_file, "all-max path JSON");
    c_cd->add_option("--extension", ext_source_file, "extension rule JSON for the source");

    auto* c_r2 = app.add_subcommand("rank2-reduce", "split or odometer reduction of a rank-2 "
                                                    "diagram");
    add_common(c_r2);
    c_r2->add_option("--extension", ext_source_file, "extension pairing JSON");

    auto* c_cf = app.add_subcommand("check-factoring", "equivariance check of the induced map");
    add_common(c_cf, false);
    c_cf->add_option("--premorphism", premorphism_file, "premorphism JSON file");
    c_cf->add_option("--ext-source", ext_source_file, "source extension rule JSON");
    c_cf->add_option("--ext-target", ext_target_file, "target extension rule JSON");

    auto* c_se = app.add_subcommand("sadic-export", "level morphisms of a diagram or the layer "
                                                    "morphisms of a premorphism");
    add_common(c_se);
    c_se->add_option("--premorphism", premorphism_file, "premorphism JSON file");

    auto* c_rect = app.add_subcommand("rectangles", "word-level commutation of the layer "
                                                    "morphisms");
    add_common(c_rect, false);
    c_rect->add_option("--premorphism", premorphism_file, "premorphism JSON file");

    auto* c_pipe = app.add_subcommand("pipeline", "block-code rectangles along induced orbits");
    add_common(c_pipe, false);
    c_pipe->add_option("--premorphism", premorphism_file, "premorphism JSON file");
    c_pipe->add_option("--index", index, "pipeline index");
    c_pipe->add_option("--word-len", word_len, "itinerary length");
    c_pipe->add_option("--ext-source", ext_source_file, "source extension rule JSON");
    c_pipe->add_option("--ext-target", ext_target_file, "target extension rule JSON");

    auto* c_dot = app.add_subcommand("dot", "DOT rendering of a diagram or premorphism");
    add_common(c_dot);
    c_dot->add_option("--premorphism", premorphism_file, "premorphism JSON file");

    auto* c_fx = app.add_subcommand("fixtures", "list or export bundled fixtures");
    std::string fx_action = "list";
    c_fx->add_option("action", fx_action, "list or export");
    c_fx->add_option("--fixture", a.fixture, "fixture name (for export)");
    c_fx->add_option("--out", a.out, "output directory (for export)");

    auto* c_itin = app.add_subcommand("itinerary", "truncation itinerary of a path");
    add_common(c_itin);
    c_itin->add_option("--path", path_file, "path JSON file")->required();
    c_itin->add_option("--level", level_k, "truncation depth");
    c_itin->add_option("--len", len, "itinerary length");
    c_itin->add_option("--extension", ext_source_file, "extension rule JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_validate->parsed()) {
            br::Diagram d = load_diagram(a);
            auto rep = br::validate_diagram(d);
            emit(a, br::validation_report_to_json(rep), rep.to_string() + "\n");
            return rep.ok() ? 0 : 1;
        }
        if (c_tel->parsed()) {
            br::Diagram d = load_diagram(a);
            std::vector<long long> cuts;
            std::stringstream ss(cuts_arg);
            for (std::string tok; std::getline(ss, tok, ',');) cuts.push_back(std::stoll(tok));
            br::Diagram t = br::telescope(d, cuts, a.depth);
            emit(a, br::diagram_to_json(t), br::diagram_to_json(t).dump(2) + "\n");
            return 0;
        }
        if (c_step->parsed()) {
            br::Diagram d = load_diagram(a);
            if (!prefix_file.empty()) {
                br::PathPrefix p = br::prefix_from_json(br::load_json_file(prefix_file));
                br::StepResult r = br::vershik_step(d, p);
                json j = r.determined() ? json{{"determined", true},
                                               {"prefix", br::prefix_to_json(*r.next)}}
                                        : json{{"determined", false}};
                emit(a, j,
                     r.determined() ? br::prefix_to_string(*r.next) + "\n"
                                    : "needs extension\n");
                return 0;
            }
            br::EventuallyPeriodicPath x =
                br::path_from_json(d, br::load_json_file(path_file));
            br::NaturalExtensionRule ext = load_extension(d, ext_source_file);
            br::EventuallyPeriodicPath nx = br::vershik_step_infinite(d, x, &ext);
            emit(a, br::path_to_json(nx), br::path_to_json(nx).dump(2) + "\n");
            return 0;
        }
        if (c_orbit->parsed()) {
            br::Diagram d = load_diagram(a);
            br::EventuallyPeriodicPath x =
                br::path_from_json(d, br::load_json_file(path_file));
            br::NaturalExtensionRule ext = load_extension(d, ext_source_file);
            json arr = json::array();
            for (const auto& p : br::orbit_segment(d, x, len, &ext))
                arr.push_back(br::path_to_json(p));
            emit(a, arr, arr.dump(2) + "\n");
            return 0;
        }
        if (c_max->parsed()) {
            br::Diagram d = load_diagram(a);
            br::Extreme k = kind == "min" ? br::Extreme::Min : br::Extreme::Max;
            br::ExtremeSet s = br::count_extreme_paths(d, k);
            json arr = json::array();
            for (const auto& w : s.witnesses) arr.push_back(br::path_to_json(w));
            json j = {{"count", s.count}, {"witnesses", arr}};
            emit(a, j, "count " + std::to_string(s.count) + "\n");
            return 0;
        }
        if (c_pv->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            auto rep = br::validate_premorphism(f, a.depth);
            emit(a, br::validation_report_to_json(rep), rep.to_string() + "\n");
            return rep.ok() ? 0 : 1;
        }
        if (c_apply->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::PathPrefix p = br::prefix_from_json(br::load_json_file(prefix_file));
            long long n = 0;
            while (f.f(n) < p.length()) ++n;
            br::PathPrefix out = br::induced_map_prefix(f, p, n);
            emit(a, br::prefix_to_json(out), br::prefix_to_string(out) + "\n");
            return 0;
        }
        if (c_pre->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::PathPrefix p = br::prefix_from_json(br::load_json_file(prefix_file));
            json arr = json::array();
            for (const auto& q : br::preimage_prefixes(f, p))
                arr.push_back(br::prefix_to_json(q));
            emit(a, arr, arr.dump(2) + "\n");
            return 0;
        }
        if (c_fb->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::EventuallyPeriodicPath y =
                br::path_from_json(f.source, br::load_json_file(path_file));
            br::FiberBound b = br::fiber_bound(f, y);
            json j = {{"unbounded", b.unbounded}, {"k", b.k}};
            emit(a, j, "bound " + std::to_string(b.k) + "\n");
            return 0;
        }
        if (c_eq->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, "");
            br::Premorphism g = load_premorphism(premorphism2_file, "");
            bool eq = br::premorphisms_equivalent(f, g, a.depth);
            emit(a, json{{"equivalent", eq}}, eq ? "equivalent\n" : "not equivalent\n");
            return eq ? 0 : 1;
        }
        if (c_con->parsed() || c_cd->parsed()) {
            br::Diagram d;
            std::optional<br::EventuallyPeriodicPath> z, y;
            std::optional<br::NaturalExtensionRule> ext;
            if (!a.fixture.empty()) {
                br::Fixture fx = load_fixture(a);
                d = fx.diagram;
                z = fx.z;
                y = fx.y;
                ext = fx.extension;
            } else {
                d = load_diagram(a);
            }
            if (!min_file.empty()) z = br::path_from_json(d, br::load_json_file(min_file));
            if (!max_file.empty()) y = br::path_from_json(d, br::load_json_file(max_file));
            if (!ext_source_file.empty())
                ext = br::extension_rule_from_json(d, br::load_json_file(ext_source_file));
            if (!z || !y) throw br::ParseError("need --min and --max (or a fixture with them)");
            br::ConstructionResult res =
                br::build_counterexample(d, *z, *y, ext ? &*ext : nullptr);
            if (c_cd->parsed()) {
                auto cls = br::classify_decisiveness(d, *z, *y, res, ext ? &*ext : nullptr);
                json j = {{"z_eventually_maximal", cls.z_eventually_maximal},
                          {"y_eventually_minimal", cls.y_eventually_minimal},
                          {"max_set_interior_empty", cls.max_set_interior_empty},
                          {"case", cls.matched_case},
                          {"verdict", verdict_name(cls.verdict)}};
                emit(a, j, verdict_name(cls.verdict) + " (case " +
                               std::to_string(cls.matched_case) + ")\n");
                return 0;
            }
            json j = {{"diagram", br::diagram_to_json(res.b_prime)},
                      {"premorphism", br::premorphism_to_json(res.premorphism)},
                      {"x", br::path_to_json(res.x)},
                      {"tx", br::path_to_json(res.tx)},
                      {"warning", res.warning}};
            if (res.b_prime_extension)
                j["extension"] = br::extension_rule_to_json(*res.b_prime_extension);
            emit(a, j, "constructed diagram with " +
                           std::to_string(res.b_prime.preamble_length()) + "+" +
                           std::to_string(res.b_prime.cycle_length()) + " levels\n");
            return 0;
        }
        if (c_r2->parsed()) {
            br::Diagram d;
            std::optional<br::NaturalExtensionRule> ext;
            if (!a.fixture.empty()) {
                br::Fixture fx = load_fixture(a);
                d = fx.diagram;
                ext = fx.extension;
            } else {
                d = load_diagram(a);
            }
            if (!ext_source_file.empty())
                ext = br::extension_rule_from_json(d, br::load_json_file(ext_source_file));
            if (!ext) throw br::ParseError("need an extension pairing");
            br::Rank2Outcome out = br::rank2_reduce(d, *ext);
            if (out.kind == br::Rank2Kind::TwoOdometers) {
                json j = {{"kind", "two-odometers"},
                          {"split_level", out.split_level},
                          {"first", br::diagram_to_json(out.first)},
                          {"second", br::diagram_to_json(out.second)}};
                emit(a, j, "two odometers (split at level " +
                               std::to_string(out.split_level) + ")\n");
            } else {
                json j = {{"kind", "odometer-conjugacy"},
                          {"source", br::diagram_to_json(out.source_presentation)},
                          {"c", br::diagram_to_json(out.c)},
                          {"premorphism", br::premorphism_to_json(*out.conjugacy)}};
                emit(a, j, "odometer conjugacy\n");
            }
            return 0;
        }
        if (c_cf->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::NaturalExtensionRule eb = load_extension(f.source, ext_source_file);
            br::NaturalExtensionRule ec = load_extension(f.target, ext_target_file);
            br::FactoringReport rep = br::check_factoring(f, a.depth, eb, ec);
            emit(a, br::factoring_report_to_json(f.target, rep),
                 std::string(rep.pass ? "pass" : "fail") + "\n");
            return rep.pass ? 0 : 1;
        }
        if (c_se->parsed()) {
            if (!premorphism_file.empty() ||
                (!a.fixture.empty() && br::get_fixture(a.fixture).premorphism)) {
                br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
                auto seq = br::premorphism_to_eta_sequence(f, a.depth);
                emit(a, br::morphisms_to_json(seq), br::morphisms_to_json(seq).dump(2) + "\n");
                return 0;
            }
            br::Diagram d = load_diagram(a);
            std::vector<br::SadicMorphism> seq;
            for (long long i = 1; i <= a.depth; ++i) seq.push_back(br::extract_morphism(d, i));
            emit(a, br::morphisms_to_json(seq), br::morphisms_to_json(seq).dump(2) + "\n");
            return 0;
        }
        if (c_rect->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::RectangleReport rep = br::check_commuting_rectangles(f, a.depth);
            json fails = json::array();
            for (const auto& [lvl, w] : rep.failures)
                fails.push_back({{"level", lvl}, {"letter", w}});
            emit(a, json{{"commutes", rep.commutes}, {"failures", fails}},
                 rep.commutes ? "commutes\n" : "fails\n");
            return rep.commutes ? 0 : 1;
        }
        if (c_pipe->parsed()) {
            br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
            br::NaturalExtensionRule eb = load_extension(f.source, ext_source_file);
            br::NaturalExtensionRule ec = load_extension(f.target, ext_target_file);
            br::PipelineReport rep = br::sliding_block_pipeline(f, index, word_len, eb, ec);
            json wit = json::array();
            for (const auto& w : rep.witnesses)
                wit.push_back({{"position", w.position},
                               {"mapped", w.mapped.to_string()},
                               {"expected", w.expected.to_string()}});
            emit(a, json{{"commutes", rep.commutes}, {"witnesses", wit}},
                 rep.commutes ? "commutes\n" : "fails\n");
            return rep.commutes ? 0 : 1;
        }
        if (c_dot->parsed()) {
            if (!premorphism_file.empty() ||
                (!a.fixture.empty() && br::get_fixture(a.fixture).premorphism)) {
                br::Premorphism f = load_premorphism(premorphism_file, a.fixture);
                std::cout << br::render_dot(f, a.depth);
                return 0;
            }
            br::Diagram d = load_diagram(a);
            std::cout << br::render_dot(d, a.depth);
            return 0;
        }
        if (c_itin->parsed()) {
            br::Diagram d = load_diagram(a);
            br::EventuallyPeriodicPath x =
                br::path_from_json(d, br::load_json_file(path_file));
            br::NaturalExtensionRule ext = load_extension(d, ext_source_file);
            json arr = json::array();
            for (const auto& p : br::truncation_itinerary(d, x, level_k, len, &ext))
                arr.push_back(br::prefix_to_json(p));
            emit(a, arr, arr.dump(2) + "\n");
            return 0;
        }
        if (c_fx->parsed()) {
            if (fx_action == "list") {
                for (const auto& n : br::fixture_names()) {
                    br::Fixture fx = br::get_fixture(n);
                    std::cout << n << ": " << fx.description << "\n";
                }
                return 0;
            }
            if (fx_action == "export") {
                br::Fixture fx = load_fixture(a);
                std::string dir = a.out.empty() ? "." : a.out;
                std::filesystem::create_directories(dir);
                br::save_json_file(dir + "/" + fx.name + ".diagram.json",
                                   br::diagram_to_json(fx.diagram));
                if (fx.companion)
                    br::save_json_file(dir + "/" + fx.name + ".companion.json",
                                       br::diagram_to_json(*fx.companion));
                if (fx.premorphism)
                    br::save_json_file(dir + "/" + fx.name + ".premorphism.json",
                                       br::premorphism_to_json(*fx.premorphism));
                if (fx.z)
                    br::save_json_file(dir + "/" + fx.name + ".min.json",
                                       br::path_to_json(*fx.z));
                if (fx.y)
                    br::save_json_file(dir + "/" + fx.name + ".max.json",
                                       br::path_to_json(*fx.y));
                if (fx.extension)
                    br::save_json_file(dir + "/" + fx.name + ".extension.json",
                                       br::extension_rule_to_json(*fx.extension));
                std::cout << "exported " << fx.name << " to " << dir << "\n";
                return 0;
            }
            throw br::ParseError("fixtures action must be list or export");
        }
    } catch (const br::ValidationError& e) {
        std::cerr << "validation error:\n" << e.what();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
