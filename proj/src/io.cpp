#include "geoflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace geoflow {

namespace {

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,x,y,z,pA,pB,pG\n";
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const PhaseState& s = traj.states[k];
    os << full(traj.times[k]) << ',' << full(s.g.x) << ',' << full(s.g.y)
       << ',' << full(s.g.z) << ',' << full(s.p.pa) << ',' << full(s.p.pb)
       << ',' << full(s.p.pg) << '\n';
  }
  return os.str();
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json states = nlohmann::json::array();
  for (const PhaseState& s : traj.states)
    states.push_back({{"g", {s.g.x, s.g.y, s.g.z}},
                      {"p", {s.p.pa, s.p.pb, s.p.pg}}});
  return {{"model", model_name(traj.model)},
          {"scheme", scheme_name(traj.scheme)},
          {"step", traj.step},
          {"stride", traj.stride},
          {"times", traj.times},
          {"states", std::move(states)}};
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory traj;
  traj.model = model_from_name(j.at("model").get<std::string>());
  traj.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  traj.step = j.at("step").get<double>();
  traj.stride = j.at("stride").get<int>();
  traj.times = j.at("times").get<std::vector<double>>();
  for (const auto& js : j.at("states")) {
    const auto g = js.at("g").get<std::array<double, 3>>();
    const auto p = js.at("p").get<std::array<double, 3>>();
    traj.states.push_back({{traj.model, g[0], g[1], g[2]},
                           {traj.model, p[0], p[1], p[2]}});
  }
  if (traj.times.size() != traj.states.size())
    throw UsageError("trajectory_from_json: times/states length mismatch");
  return traj;
}

nlohmann::json drift_report_to_json(const DriftReport& report) {
  nlohmann::json integrals = nlohmann::json::object();
  for (const DriftRecord& r : report.records)
    integrals[r.name] = {{"initial", r.initial},
                         {"maxDrift", r.max_drift},
                         {"class", conservation_class_name(r.cls)},
                         {"circle", r.circle}};
  return {{"model", model_name(report.model)},
          {"scheme", scheme_name(report.scheme)},
          {"T", report.T},
          {"h", report.h},
          {"integrals", std::move(integrals)}};
}

nlohmann::json lattice_spec_to_json(const LatticeSpec& spec) {
  nlohmann::json gens = nlohmann::json::array();
  for (const GroupElement& g : spec.generators)
    gens.push_back({g.x, g.y, g.z});
  nlohmann::json j{{"model", model_name(spec.model)},
                   {"generators", std::move(gens)}};
  if (spec.sol) {
    const SolLatticeData& s = *spec.sol;
    auto unit_json = [](const UnitElement& u) {
      return nlohmann::json{
          {"a", u.a}, {"b", u.b}, {"value", u.value}, {"norm", u.norm}};
    };
    j["sol"] = {{"d", s.field.d},
                {"ring_basis",
                 s.field.half_basis ? "1,(1+sqrt(d))/2" : "1,sqrt(d)"},
                {"fundamental_unit", unit_json(s.fundamental)},
                {"unit_plus", unit_json(s.unit_plus)},
                {"ideal_basis", s.ideal_basis},
                {"monodromy", s.monodromy},
                {"log_unit", s.log_unit},
                {"stretch", monodromy_stretch(spec)}};
  }
  return j;
}

std::string integral_values_csv(const Trajectory& traj,
                                const IntegralSuite& suite) {
  std::ostringstream os;
  os << "t";
  for (const IntegralEntry& e : suite.entries) os << ',' << e.name;
  os << '\n';
  for (size_t k = 0; k < traj.states.size(); ++k) {
    os << full(traj.times[k]);
    for (const IntegralEntry& e : suite.entries)
      os << ',' << full(e.eval(traj.states[k]));
    os << '\n';
  }
  return os.str();
}

std::string section_csv(const std::vector<SectionCrossing>& crossings,
                        Model) {
  std::ostringstream os;
  os << "t,x,y,z,pA,pB,pG\n";
  for (const SectionCrossing& c : crossings) {
    const PhaseState& s = c.state;
    os << full(c.t) << ',' << full(s.g.x) << ',' << full(s.g.y) << ','
       << full(s.g.z) << ',' << full(s.p.pa) << ',' << full(s.p.pb) << ','
       << full(s.p.pg) << '\n';
  }
  return os.str();
}

void atomic_write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace geoflow
