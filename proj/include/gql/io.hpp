#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gql/approximation.hpp"
#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"
#include "gql/quasilocality.hpp"

namespace gql {

using json = nlohmann::json;

/// Reads and parses a JSON file. Syntax errors become Error(ParseError) with file:line:column.
json load_json_file(const std::filesystem::path& path);
/// Parses text; `source` names it in messages.
json parse_json_text(const std::string& text, const std::string& source);

struct ParsedGroupoid {
  GroupoidPtr groupoid;
  std::optional<Filtration> filtration;  // present for kind "metric_pair"
  std::vector<std::string> points;       // point order for "pair" and "metric_pair"
};

/// Kinds: explicit, pair, group, transformation, metric_pair. Field problems raise
/// Error(ParseError) naming the field path; axiom failures keep their own kind.
ParsedGroupoid groupoid_from_json(const json& doc);
/// Canonical explicit-kind document.
json groupoid_to_json(const Groupoid& g);

/// {"levels": [[ids], ...]} or {"generators": [ids], "depth": N}.
Filtration filtration_from_json(const GroupoidPtr& g, const json& doc);
json filtration_to_json(const Filtration& f);

/// {"values": {id: [re, im]}}; absent ids are zero.
ModuleVector vector_from_json(const GroupoidPtr& g, const json& doc);
json vector_to_json(const ModuleVector& v);

/// {"fibres": [{"unit": id, "order": [ids], "matrix": [[[re, im], ...], ...]}]}.
FibreOperatorFamily family_from_json(const GroupoidPtr& g, const json& doc);
json family_to_json(const FibreOperatorFamily& t);

/// CSV writers; each starts with a '#' line naming the column set version.
void write_profile_csv(std::ostream& os, const PropagationProfile& p);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace gql
