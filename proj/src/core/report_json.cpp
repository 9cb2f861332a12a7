#include "core/report_json.hpp"

#include <json.hpp>

namespace ovl {

namespace {

using nlohmann::json;

json ci_json(const ConfidenceInterval& ci) {
  return json{{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}, {"z", ci.z}};
}

json measure_json(const MeasureResult& m) {
  return json{{"point", m.point},
              {"variance", m.variance},
              {"se", m.se},
              {"ci", ci_json(m.ci)},
              {"variance_negative", m.variance_negative}};
}

json diag_json(const AssumptionDiagnostics& d) {
  return json{{"min_density", d.min_value},
              {"max_density", d.max_value},
              {"low_density_warning", d.low_density_warning},
              {"threshold", d.threshold}};
}

std::string moment_key(int two_r, int two_s) {
  auto part = [](int tv) {
    if (tv % 2 == 0) return std::to_string(tv / 2);
    return std::to_string(tv) + "/2";
  };
  return part(two_r) + "," + part(two_s);
}

}  // namespace

std::string report_to_json(const OverlapReport& rep, int indent) {
  json moments = json::object();
  for (const auto& [k, v] : rep.table.entries()) {
    moments[moment_key(k.first, k.second)] = v;
  }

  json ml_fg = measure_json(rep.ml_fg);
  ml_fg["variance_mode"] = "rederived";
  ml_fg["variance_as_printed"] = rep.ml_fg_variance_as_printed;
  json ml_gf = measure_json(rep.ml_gf);
  ml_gf["variance_mode"] = "rederived";
  ml_gf["variance_as_printed"] = rep.ml_gf_variance_as_printed;

  json j{
      {"schema", 1},
      {"config",
       {{"kernel", rep.kernel},
        {"bandwidth", rep.bandwidth_desc},
        {"support_policy", rep.support_policy},
        {"grid", rep.grid},
        {"level", rep.level}}},
      {"n", {{"x", rep.n_x}, {"y", rep.n_y}, {"common", rep.n_common}}},
      {"h", rep.h},
      {"k02", rep.k02},
      {"support", {{"lo", rep.support.lo}, {"hi", rep.support.hi}}},
      {"moments", moments},
      {"measures",
       {{"pianka", measure_json(rep.pianka)},
        {"macarthur_levins_fg", ml_fg},
        {"macarthur_levins_gf", ml_gf}}},
      {"diagnostics", {{"x", diag_json(rep.diag_x)}, {"y", diag_json(rep.diag_y)}}},
      {"warnings", rep.warnings},
  };
  return j.dump(indent);
}

}  // namespace ovl
