#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bratteli/constructor.hpp"
#include "bratteli/sadic.hpp"

namespace bratteli {

using json = nlohmann::ordered_json;

json diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const json& j); // throws ParseError / ValidationError

json path_to_json(const EventuallyPeriodicPath& x);
EventuallyPeriodicPath path_from_json(const Diagram& d, const json& j);

json prefix_to_json(const PathPrefix& p);
PathPrefix prefix_from_json(const json& j);

json premorphism_to_json(const Premorphism& f);
// diagram refs: inline object, "path/to/file.json", or {"fixture": name}
Premorphism premorphism_from_json(const json& j, const std::string& base_dir = "");

json extension_rule_to_json(const NaturalExtensionRule& rule);
NaturalExtensionRule extension_rule_from_json(const Diagram& d, const json& j);

json validation_report_to_json(const ValidationReport& r);
json factoring_report_to_json(const Diagram& domain, const FactoringReport& r);
json morphisms_to_json(const std::vector<SadicMorphism>& seq);
json word_to_json(const std::vector<CylinderLabel>& word);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

std::string render_dot(const Diagram& d, long long depth);
std::string render_dot(const Premorphism& f, long long depth);

// bundled fixtures (hand-encoded small diagrams, their distinguished paths,
// premorphisms and extension pairings)
struct Fixture {
    std::string name;
    std::string description;
    Diagram diagram;
    std::optional<Diagram> companion;     // second diagram, when the fixture is a pair
    std::optional<Premorphism> premorphism;
    std::optional<EventuallyPeriodicPath> z; // distinguished all-min path
    std::optional<EventuallyPeriodicPath> y; // distinguished all-max path
    std::optional<NaturalExtensionRule> extension;
};

std::vector<std::string> fixture_names();
Fixture get_fixture(const std::string& name); // throws ParseError on unknown name

} // namespace bratteli
