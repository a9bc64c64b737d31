#include "bfh/json_io.hpp"

#include <fstream>

namespace bfh::json_io {

using exact::Int;
using exact::Rat;
using linalg::IntMat;

json matrix_to_json(const IntMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_int64());
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw SchemaError("matrix: expected " + std::to_string(rows) + " rows");
  IntMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw SchemaError("matrix: expected " + std::to_string(cols) + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_number_integer()) throw SchemaError("matrix: entries must be integers");
      m(i, c) = Int(cell.get<long long>());
    }
  }
  return m;
}

json vector_to_json(const std::vector<Int>& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(x.to_int64());
  return out;
}

std::vector<Int> vector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("vector: expected an array");
  std::vector<Int> out;
  for (const json& cell : j) {
    if (!cell.is_number_integer()) throw SchemaError("vector: entries must be integers");
    out.push_back(Int(cell.get<long long>()));
  }
  return out;
}

json knot_data_to_json(const floer::KnotFloerData& k, const json& provenance) {
  json gens = json::array();
  for (const auto& g : k.generators)
    gens.push_back({{"id", g.id}, {"action", g.action.str()}, {"maslov_lift", g.maslov}});
  json fl{
      {"chern_N", k.chern_n},
      {"alpha", k.alpha.str()},
      {"generators", std::move(gens)},
      {"boundary_Z", matrix_to_json(k.boundary)},
      {"special_d", vector_to_json(k.special_d)},
      {"special_delta", vector_to_json(k.special_delta)},
  };
  if (k.cross_boundary.size() != 0) fl["cross_boundary"] = matrix_to_json(k.cross_boundary);
  json knot{{"name", k.name}};
  if (k.braid) knot["braid"] = braid::print(*k.braid);
  json doc{{"schema_version", kSchemaVersion}, {"knot", std::move(knot)}, {"floer", std::move(fl)}};
  if (!provenance.empty()) doc["provenance"] = provenance;
  return doc;
}

namespace {

const json& require(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

floer::KnotFloerData knot_data_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("document: expected an object");
  const json& ver = require(doc, "schema_version", "document");
  if (!ver.is_string() || ver.get<std::string>() != kSchemaVersion)
    throw SchemaError("document: unrecognized schema_version");
  const json& knot = require(doc, "knot", "document");
  const json& fl = require(doc, "floer", "document");
  floer::KnotFloerData k;
  k.name = require(knot, "name", "knot").get<std::string>();
  if (knot.contains("braid")) k.braid = braid::parse(knot["braid"].get<std::string>());
  k.chern_n = require(fl, "chern_N", "floer").get<long>();
  k.alpha = Rat::from_string(require(fl, "alpha", "floer").get<std::string>());
  const json& gens = require(fl, "generators", "floer");
  if (!gens.is_array()) throw SchemaError("floer: generators must be an array");
  for (const json& g : gens) {
    floer::FloerGenerator fg;
    fg.id = require(g, "id", "generator").get<std::string>();
    fg.action = Rat::from_string(require(g, "action", "generator").get<std::string>());
    fg.maslov = require(g, "maslov_lift", "generator").get<long>();
    k.generators.push_back(std::move(fg));
  }
  const Eigen::Index n = k.size();
  k.boundary = matrix_from_json(require(fl, "boundary_Z", "floer"), n, n);
  k.special_d = vector_from_json(require(fl, "special_d", "floer"));
  k.special_delta = vector_from_json(require(fl, "special_delta", "floer"));
  if (fl.contains("cross_boundary"))
    k.cross_boundary = matrix_from_json(fl["cross_boundary"], n, n);
  floer::validate(k);
  return k;
}

floer::KnotFloerData load_knot_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json doc = json::parse(in, nullptr, true, true);
  return knot_data_from_json(doc);
}

void save_knot_data_file(const floer::KnotFloerData& k, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << knot_data_to_json(k).dump(2) << "\n";
}

json group_to_json(const homalg::Group& g) {
  json torsion = json::array();
  for (const Int& t : g.torsion) torsion.push_back(t.to_int64());
  return json{{"free_rank", g.free_rank}, {"torsion", std::move(torsion)}};
}

json page_to_json(const homalg::Page& p) {
  json table = json::array();
  for (const auto& [b, grp] : p.table) {
    json cell = group_to_json(grp);
    cell["p"] = b.first;
    cell["q"] = b.second;
    table.push_back(std::move(cell));
  }
  json diffs = json::array();
  for (const auto& d : p.differentials) {
    if (d.is_zero) continue;
    diffs.push_back({{"source", {d.source.first, d.source.second}},
                     {"target", {d.target.first, d.target.second}},
                     {"matrix", matrix_to_json(d.matrix)}});
  }
  return json{{"r", p.r}, {"table", std::move(table)}, {"differentials", std::move(diffs)}};
}

json run_to_json(const floer::SpectralRun& run) {
  json pages = json::array();
  for (const auto& p : run.pages) pages.push_back(page_to_json(p));
  return json{{"pages", std::move(pages)},
              {"E_infinity", page_to_json(run.e_infinity)},
              {"converged_at", run.converged_at}};
}

json identities_to_json(const std::vector<floer::IdentityCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"label", c.label}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

json stratum_to_json(const repvar::RepStratum& s) {
  json samples = json::array();
  for (const auto& p : s.samples) {
    json vecs = json::array();
    for (const auto& v : p.vectors) vecs.push_back({v.x(), v.y(), v.z()});
    samples.push_back({{"vectors", std::move(vecs)},
                       {"residual", p.residual},
                       {"fingerprint", p.fingerprint}});
  }
  return json{{"kind", repvar::kind_name(s.kind)},
              {"tangent_dim", s.tangent_dim},
              {"sample_count", s.samples.size()},
              {"samples", std::move(samples)}};
}

json strata_to_json(const std::vector<repvar::RepStratum>& strata) {
  json out = json::array();
  for (const auto& s : strata) out.push_back(stratum_to_json(s));
  return out;
}

}  // namespace bfh::json_io
