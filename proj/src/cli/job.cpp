#include "cli/job.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace hbi::cli {

namespace {

using nlohmann::json;

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw JobError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw JobError(field, "expected a finite number");
  return v;
}

Vec3<double> point(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw JobError(field, "expected [x, y, z]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

oracle::Quantity parse_quantity(const json& j, const std::string& field) {
  if (!j.is_string()) throw JobError(field, "expected a quantity name");
  const auto s = j.get<std::string>();
  if (s == "L") return oracle::Quantity::L;
  if (s == "M") return oracle::Quantity::M;
  if (s == "Lgrad") return oracle::Quantity::Lgrad;
  if (s == "Mgrad") return oracle::Quantity::Mgrad;
  throw JobError(field, "unknown quantity '" + s + "'");
}

TruncationPolicy parse_truncation(const json& j) {
  if (!j.is_object()) throw JobError("truncation", "expected an object");
  TruncationPolicy policy;
  const std::string mode = j.value("mode", std::string("tolerance"));
  if (j.contains("p_max")) {
    if (!j["p_max"].is_number_integer() || j["p_max"].get<int>() < 1) {
      throw JobError("truncation.p_max", "expected a positive integer");
    }
    policy.p_max = j["p_max"].get<int>();
  }
  if (mode == "tolerance") {
    policy.mode = TruncationPolicy::Mode::Tolerance;
    if (j.contains("epsilon")) policy.epsilon = number(j["epsilon"], "truncation.epsilon");
    if (!(policy.epsilon > 0 && policy.epsilon < 1)) {
      throw JobError("truncation.epsilon", "expected 0 < epsilon < 1");
    }
  } else if (mode == "fixed") {
    policy.mode = TruncationPolicy::Mode::FixedOrder;
    if (!j.contains("p") || !j["p"].is_number_integer() || j["p"].get<int>() < 1) {
      throw JobError("truncation.p", "fixed mode needs an integer p >= 1");
    }
    policy.order = j["p"].get<int>();
    policy.p_max = std::max(policy.p_max, policy.order);
  } else {
    throw JobError("truncation.mode", "expected 'tolerance' or 'fixed'");
  }
  return policy;
}

oracle::OracleConfig parse_oracle(const json& j) {
  if (!j.is_object()) throw JobError("oracle", "expected an object");
  oracle::OracleConfig cfg;
  if (j.contains("abs_tol")) cfg.abs_tol = number(j["abs_tol"], "oracle.abs_tol");
  if (j.contains("rel_tol")) cfg.rel_tol = number(j["rel_tol"], "oracle.rel_tol");
  if (!(cfg.abs_tol > 0)) throw JobError("oracle.abs_tol", "must be positive");
  if (!(cfg.rel_tol > 0)) throw JobError("oracle.rel_tol", "must be positive");
  if (j.contains("max_subdivisions")) {
    if (!j["max_subdivisions"].is_number_integer() || j["max_subdivisions"].get<int>() < 1) {
      throw JobError("oracle.max_subdivisions", "expected an integer >= 1");
    }
    cfg.max_subdivisions = j["max_subdivisions"].get<int>();
  }
  if (j.contains("singular_scheme")) {
    const auto& s = j["singular_scheme"];
    if (s == "none") {
      cfg.singular_scheme = oracle::SingularScheme::None;
    } else if (s == "polar") {
      cfg.singular_scheme = oracle::SingularScheme::PolarAboutProjection;
    } else {
      throw JobError("oracle.singular_scheme", "expected 'none' or 'polar'");
    }
  }
  return cfg;
}

std::vector<Vec3<double>> random_points(const Panel<double>& panel, const RandomPoints& opts,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(opts.distance_min, opts.distance_max);
  std::vector<Vec3<double>> pts;
  pts.reserve(opts.count);
  for (int i = 0; i < opts.count; ++i) {
    Vec3<double> dir(gauss(rng), gauss(rng), gauss(rng));
    dir.normalize();
    pts.push_back(panel.centroid + radius(rng) * panel.diameter * dir);
  }
  return pts;
}

}  // namespace

const char* quantity_name(oracle::Quantity q) {
  switch (q) {
    case oracle::Quantity::L: return "L";
    case oracle::Quantity::M: return "M";
    case oracle::Quantity::Lgrad: return "Lgrad";
    case oracle::Quantity::Mgrad: return "Mgrad";
  }
  return "?";
}

Job parse_job(const std::string& text, std::uint64_t seed) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw JobError("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw JobError("<document>", "expected a JSON object");

  Job job;
  if (!j.contains("wavenumber")) throw JobError("wavenumber", "missing");
  job.wavenumber = number(j["wavenumber"], "wavenumber");
  if (job.wavenumber < 0) throw JobError("wavenumber", "must be >= 0");

  if (!j.contains("panels") || !j["panels"].is_array() || j["panels"].empty()) {
    throw JobError("panels", "expected a non-empty array of vertex lists");
  }
  for (std::size_t i = 0; i < j["panels"].size(); ++i) {
    const std::string field = "panels[" + std::to_string(i) + "]";
    const auto& pj = j["panels"][i];
    if (!pj.is_array()) throw JobError(field, "expected a vertex list");
    std::vector<Vec3<double>> verts;
    for (std::size_t v = 0; v < pj.size(); ++v) {
      verts.push_back(point(pj[v], field + "[" + std::to_string(v) + "]"));
    }
    try {
      job.panels.push_back(build_panel(std::move(verts)));
    } catch (const GeometryError& e) {
      throw JobError(field, e.what());
    }
  }

  if (j.contains("points")) {
    if (!j["points"].is_array()) throw JobError("points", "expected an array of points");
    for (std::size_t i = 0; i < j["points"].size(); ++i) {
      job.points.push_back(point(j["points"][i], "points[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("random_points")) {
    const auto& rp = j["random_points"];
    if (!rp.is_object() || !rp.contains("count") || !rp["count"].is_number_integer() ||
        rp["count"].get<int>() < 1) {
      throw JobError("random_points.count", "expected an integer >= 1");
    }
    RandomPoints opts;
    opts.count = rp["count"].get<int>();
    if (rp.contains("distance_min")) opts.distance_min = number(rp["distance_min"], "random_points.distance_min");
    if (rp.contains("distance_max")) opts.distance_max = number(rp["distance_max"], "random_points.distance_max");
    if (!(opts.distance_min > 0 && opts.distance_max >= opts.distance_min)) {
      throw JobError("random_points", "expected 0 < distance_min <= distance_max");
    }
    job.random_points = opts;
    const auto extra = random_points(job.panels.front(), opts, seed);
    job.points.insert(job.points.end(), extra.begin(), extra.end());
  }
  if (job.points.empty()) throw JobError("points", "at least one evaluation point is required");

  if (j.contains("quantities")) {
    const auto& qj = j["quantities"];
    if (!qj.is_array() || qj.empty()) throw JobError("quantities", "expected a non-empty array");
    for (std::size_t i = 0; i < qj.size(); ++i) {
      const auto q = parse_quantity(qj[i], "quantities[" + std::to_string(i) + "]");
      if (std::find(job.quantities.begin(), job.quantities.end(), q) == job.quantities.end()) {
        job.quantities.push_back(q);
      }
    }
  } else {
    job.quantities = {oracle::Quantity::L, oracle::Quantity::M, oracle::Quantity::Lgrad,
                      oracle::Quantity::Mgrad};
  }

  if (j.contains("truncation")) job.truncation = parse_truncation(j["truncation"]);
  if (j.contains("compare_oracle")) {
    if (!j["compare_oracle"].is_boolean()) throw JobError("compare_oracle", "expected a boolean");
    job.compare_oracle = j["compare_oracle"].get<bool>();
  }
  if (j.contains("oracle")) job.oracle = parse_oracle(j["oracle"]);
  if (j.contains("tolerance")) {
    job.tolerance = number(j["tolerance"], "tolerance");
    if (!(job.tolerance > 0)) throw JobError("tolerance", "must be positive");
  }
  return job;
}

Job load_job(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw JobError("<file>", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_job(ss.str(), seed);
}

}  // namespace hbi::cli
