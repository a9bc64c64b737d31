#pragma once

#include <json.hpp>
#include <string>

#include "bfh/floer.hpp"
#include "bfh/homalg.hpp"
#include "bfh/repvar.hpp"

namespace bfh::json_io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json matrix_to_json(const linalg::IntMat& m);          // dense row lists
linalg::IntMat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols);

json vector_to_json(const std::vector<exact::Int>& v);
std::vector<exact::Int> vector_from_json(const json& j);

/// Knot data document: {schema_version, knot:{name,braid}, floer:{...}, provenance}.
json knot_data_to_json(const floer::KnotFloerData& k, const json& provenance = json::object());
floer::KnotFloerData knot_data_from_json(const json& doc);

floer::KnotFloerData load_knot_data_file(const std::string& path);
void save_knot_data_file(const floer::KnotFloerData& k, const std::string& path);

json group_to_json(const homalg::Group& g);
json page_to_json(const homalg::Page& p);
json run_to_json(const floer::SpectralRun& run);
json identities_to_json(const std::vector<floer::IdentityCheck>& checks);

json stratum_to_json(const repvar::RepStratum& s);
json strata_to_json(const std::vector<repvar::RepStratum>& strata);

}  // namespace bfh::json_io
