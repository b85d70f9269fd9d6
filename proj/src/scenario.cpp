#include "geophase/scenario.hpp"

#include "geophase/adiabatic.hpp"
#include "geophase/bornopp.hpp"
#include "geophase/connection.hpp"
#include "geophase/errors.hpp"
#include "geophase/holonomy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace geophase {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::ConfigInvalid, msg);
}

const std::set<std::string> kCommonKeys = {"command", "output", "hbar", "seed"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"loop-phase", {"model", "path", "band"}},
    {"adiabatic", {"model", "path", "band", "T", "T_list", "steps_per_segment"}},
    {"aa-phase", {"protocol", "steps", "T", "model", "path", "band"}},
    {"bo-fields", {"model", "grid", "mass", "potential"}},
    {"holonomy", {"model", "path", "cluster"}},
    {"pancharatnam", {"states", "closed"}},
};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, std::optional<double> fallback,
              const std::string& where) {
  if (!obj.contains(key)) {
    if (!fallback) invalid("missing required key '" + key + "' in " + where);
    return *fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) invalid("'" + key + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid("'" + key + "' in " + where + " must be finite");
  return x;
}

long long integer(const json& obj, const std::string& key, std::optional<long long> fallback,
                  const std::string& where) {
  if (!obj.contains(key)) {
    if (!fallback) invalid("missing required key '" + key + "' in " + where);
    return *fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) invalid("'" + key + "' in " + where + " must be an integer");
  return v.get<long long>();
}

std::string string(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    invalid("'" + key + "' in " + where + " must be a string");
  }
  return obj.at(key).get<std::string>();
}

ParameterPoint point_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) invalid(where + " must be a non-empty list of numbers");
  ParameterPoint p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) invalid(where + " must contain numbers only");
    p(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  if (!p.allFinite()) invalid(where + " has non-finite coordinates");
  return p;
}

Complex complex_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    invalid(where + " entries must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json complex_to(Complex z) { return json::array({z.real(), z.imag()}); }

struct ModelSpec {
  ModelPtr model;
  std::shared_ptr<const SampledModel> sampled;  // set for file models
};

ModelSpec build_model(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.contains("model")) invalid("missing 'model'");
  const json& m = doc.at("model");
  if (!m.is_object()) invalid("'model' must be an object");
  const std::string kind = string(m, "kind", "model");
  if (kind == "spin-half") {
    check_keys(m, {"kind", "mu"}, "model");
    return {std::make_shared<SpinHalfModel>(number(m, "mu", 1.0, "model")), nullptr};
  }
  if (kind == "quadrupole") {
    check_keys(m, {"kind"}, "model");
    return {std::make_shared<QuadrupoleModel>(), nullptr};
  }
  if (kind == "file") {
    check_keys(m, {"kind", "path"}, "model");
    std::filesystem::path file = string(m, "path", "model");
    if (file.is_relative()) file = base_dir / file;
    std::shared_ptr<const SampledModel> s;
    try {
      s = std::make_shared<SampledModel>(load_sampled_model(file));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigInvalid) throw;
      invalid("model file " + file.string() + ": " + e.what());
    }
    return {s, s};
  }
  invalid("unknown model kind '" + kind + "'");
}

ParamPath build_path(const json& doc, const ModelSpec& model,
                     const ScenarioOverrides& ov) {
  if (!doc.contains("path")) {
    if (!model.sampled) invalid("missing 'path'");
    std::vector<ParameterPoint> pts;
    for (const auto& s : model.sampled->samples()) pts.push_back(s.r);
    const bool closed = pts.size() > 1 &&
                        (pts.front() - pts.back()).cwiseAbs().maxCoeff() <= 1e-12;
    return ParamPath(std::move(pts), closed);
  }
  const json& p = doc.at("path");
  if (!p.is_object()) invalid("'path' must be an object");
  const std::string kind = string(p, "kind", "path");
  if (kind == "samples") {
    check_keys(p, {"kind", "points", "closed"}, "path");
    if (!p.contains("points") || !p.at("points").is_array()) {
      invalid("'points' in path must be a list");
    }
    std::vector<ParameterPoint> pts;
    for (const auto& v : p.at("points")) pts.push_back(point_from(v, "path point"));
    bool closed = false;
    if (p.contains("closed")) {
      if (!p.at("closed").is_boolean()) invalid("'closed' in path must be a boolean");
      closed = p.at("closed").get<bool>();
    }
    return ParamPath(std::move(pts), closed);
  }

  check_keys(p, {"kind", "M", "theta", "radius", "reverse"}, "path");
  long long m = integer(p, "M", std::nullopt, "path");
  if (ov.segments) m = static_cast<long long>(*ov.segments);
  if (m < 1) invalid("path M must be >= 1, got " + std::to_string(m));
  const double radius = number(p, "radius", 1.0, "path");
  if (!(radius > 0.0)) invalid("path radius must be positive");
  bool reverse = false;
  if (p.contains("reverse")) {
    if (!p.at("reverse").is_boolean()) invalid("'reverse' in path must be a boolean");
    reverse = p.at("reverse").get<bool>();
  }

  LoopKind lk;
  double theta = 0.0;
  if (kind == "cone") {
    lk = LoopKind::Cone;
    theta = number(p, "theta", std::nullopt, "path");
    if (!(theta > 0.0 && theta < kPi)) invalid("cone theta must lie in (0, pi)");
  } else if (kind == "great-circle") {
    lk = LoopKind::GreatCircle;
  } else if (kind == "point") {
    lk = LoopKind::Point;
  } else {
    invalid("unknown path kind '" + kind + "'");
  }
  if (lk != LoopKind::Point && m < 3) invalid("circular loops need M >= 3");
  const ParamPath unit = standard_loop(lk, static_cast<std::size_t>(m), theta);
  std::vector<ParameterPoint> pts;
  for (const auto& s : unit.samples()) pts.push_back(radius * s);
  ParamPath path(std::move(pts), true);
  return reverse ? path.reversed() : path;
}

double hbar_of(const json& doc, const ScenarioOverrides& ov) {
  const double hbar = ov.hbar ? *ov.hbar : number(doc, "hbar", 1.0, "config");
  if (!(hbar > 0.0)) invalid("hbar must be positive");
  return hbar;
}

void check_path_model(const ParamPath& path, const ParametrizedHamiltonian& h) {
  if (path.dim() != h.param_dim()) {
    invalid("path dimension " + std::to_string(path.dim()) +
            " does not match model parameter dimension " + std::to_string(h.param_dim()));
  }
}

int band_of(const json& doc, const ParametrizedHamiltonian& h, const std::string& key,
            long long fallback) {
  const long long b = integer(doc, key, fallback, "config");
  if (b < 0 || b >= h.hilbert_dim()) invalid("'" + key + "' out of range");
  return static_cast<int>(b);
}

std::vector<double> time_list(const json& doc, const ScenarioOverrides& ov) {
  std::vector<double> times;
  if (ov.total_time) {
    times.push_back(*ov.total_time);
  } else if (doc.contains("T_list")) {
    if (doc.contains("T")) invalid("give either 'T' or 'T_list', not both");
    const auto& l = doc.at("T_list");
    if (!l.is_array() || l.empty()) invalid("'T_list' must be a non-empty list");
    for (const auto& v : l) {
      if (!v.is_number()) invalid("'T_list' entries must be numbers");
      times.push_back(v.get<double>());
    }
  } else {
    times.push_back(number(doc, "T", std::nullopt, "config"));
  }
  for (double t : times) {
    if (!(t > 0.0) || !std::isfinite(t)) invalid("total times must be positive");
  }
  return times;
}

std::vector<ParameterPoint> build_grid(const json& doc) {
  if (!doc.contains("grid")) invalid("missing 'grid'");
  const json& g = doc.at("grid");
  std::vector<ParameterPoint> grid;
  if (g.is_array()) {
    for (const auto& v : g) grid.push_back(point_from(v, "grid point"));
  } else if (g.is_object()) {
    check_keys(g, {"kind", "direction", "r_min", "r_max", "count"}, "grid");
    if (string(g, "kind", "grid") != "radial") invalid("grid kind must be 'radial'");
    if (!g.contains("direction")) invalid("radial grid needs 'direction'");
    ParameterPoint dir = point_from(g.at("direction"), "grid direction");
    if (dir.norm() == 0.0) invalid("grid direction must be nonzero");
    dir.normalize();
    const double r0 = number(g, "r_min", std::nullopt, "grid");
    const double r1 = number(g, "r_max", std::nullopt, "grid");
    const long long n = integer(g, "count", std::nullopt, "grid");
    if (n < 1) invalid("grid count must be >= 1");
    if (!(r0 > 0.0) || r1 < r0) invalid("radial grid needs 0 < r_min <= r_max");
    for (long long i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      grid.push_back((r0 + s * (r1 - r0)) * dir);
    }
  } else {
    invalid("'grid' must be a list of points or a radial grid object");
  }
  if (grid.empty()) invalid("'grid' is empty");
  return grid;
}

SlowSector build_slow(const json& doc) {
  SlowSector slow;
  slow.mass = number(doc, "mass", 1.0, "config");
  if (!(slow.mass > 0.0)) invalid("mass must be positive");
  if (doc.contains("potential")) {
    const json& v = doc.at("potential");
    if (!v.is_object()) invalid("'potential' must be an object");
    const std::string kind = string(v, "kind", "potential");
    if (kind == "zero") {
      check_keys(v, {"kind"}, "potential");
    } else if (kind == "harmonic") {
      check_keys(v, {"kind", "k"}, "potential");
      const double k = number(v, "k", std::nullopt, "potential");
      slow.potential = [k](const ParameterPoint& r) { return 0.5 * k * r.squaredNorm(); };
    } else {
      invalid("unknown potential kind '" + kind + "'");
    }
  }
  return slow;
}

std::vector<StateVector> build_states(const json& doc) {
  if (!doc.contains("states") || !doc.at("states").is_array()) {
    invalid("'states' must be a list of state vectors");
  }
  std::vector<StateVector> states;
  for (const auto& s : doc.at("states")) {
    if (!s.is_array() || s.empty()) invalid("each state must be a non-empty list of [re, im]");
    StateVector v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = complex_from(s[i], "state");
    }
    if (!states.empty() && v.size() != states.front().size()) {
      invalid("states have different dimensions");
    }
    if (v.norm() == 0.0) invalid("zero state in chain");
    states.push_back(v.normalized());
  }
  if (states.size() < 2) invalid("a chain needs at least two states");
  return states;
}

bool closed_flag(const json& doc) {
  if (!doc.contains("closed")) return true;
  if (!doc.at("closed").is_boolean()) invalid("'closed' must be a boolean");
  return doc.at("closed").get<bool>();
}

struct AaSetup {
  Protocol protocol;
  double total_time;
  StateVector psi0;
  int steps;
};

AaSetup build_aa(const json& doc, const std::filesystem::path& base_dir,
                 const ScenarioOverrides& ov, double hbar) {
  if (!doc.contains("protocol")) invalid("missing 'protocol'");
  const json& p = doc.at("protocol");
  if (!p.is_object()) invalid("'protocol' must be an object");
  const std::string kind = string(p, "kind", "protocol");
  AaSetup setup;
  if (kind == "precession") {
    check_keys(p, {"kind", "mu", "theta_B", "phi_B", "periods"}, "protocol");
    if (doc.contains("model") || doc.contains("path") || doc.contains("band")) {
      invalid("precession protocol takes no model, path or band");
    }
    const double mu = number(p, "mu", 1.0, "protocol");
    if (mu == 0.0) invalid("precession needs mu != 0");
    const double theta = number(p, "theta_B", std::nullopt, "protocol");
    if (!(theta >= 0.0 && theta <= kPi)) invalid("theta_B must lie in [0, pi]");
    const double phi = number(p, "phi_B", 0.0, "protocol");
    const double periods = number(p, "periods", 1.0, "protocol");
    const double period = 2.0 * kPi * hbar / (2.0 * std::abs(mu));
    setup.total_time = ov.total_time ? *ov.total_time
                                     : number(doc, "T", periods * period, "config");
    const HermitianOperator h = mu * sigma_z();
    setup.protocol = [h](double) { return h; };
    setup.psi0 = spin_half_eigenstate(theta, phi);
    setup.steps = static_cast<int>(integer(doc, "steps", 20000, "config"));
  } else if (kind == "schedule") {
    check_keys(p, {"kind"}, "protocol");
    const ModelSpec model = build_model(doc, base_dir);
    const ParamPath path = build_path(doc, model, ov);
    check_path_model(path, *model.model);
    const int band = band_of(doc, *model.model, "band", model.model->hilbert_dim() - 1);
    setup.total_time = ov.total_time ? *ov.total_time : number(doc, "T", std::nullopt, "config");
    const auto dec = eigh(model.model->eval(path[0]));
    setup.psi0 = dec.eigenvectors.col(band);
    setup.protocol = schedule_protocol(*model.model, path, setup.total_time);
    const long long fallback =
        static_cast<long long>(default_steps_per_segment(*model.model, path, setup.total_time, hbar)) *
        static_cast<long long>(path.segments());
    setup.steps = static_cast<int>(integer(doc, "steps", fallback, "config"));
  } else {
    invalid("unknown protocol kind '" + kind + "'");
  }
  if (!(setup.total_time > 0.0)) invalid("T must be positive");
  if (setup.steps < 1) invalid("steps must be >= 1");
  return setup;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_double(v);
    first = false;
  }
  return line + "\n";
}

json report_json(const PhaseReport& r) {
  return {{"total_phase", r.total_phase},
          {"dynamical_phase", r.dynamical_phase},
          {"geometric_phase", r.geometric_phase},
          {"fidelity", r.fidelity},
          {"cyclicity", r.cyclicity}};
}

const char* kReportHeader = "T,total_phase,dynamical_phase,geometric_phase,fidelity,cyclicity\n";

std::string report_csv(double t, const PhaseReport& r) {
  return std::string(kReportHeader) +
         csv_row({t, r.total_phase, r.dynamical_phase, r.geometric_phase, r.fidelity,
                  r.cyclicity});
}

// Runs the command; validate_only stops after every input has been built.
ScenarioResult dispatch(const std::string& command, const json& doc,
                        const std::filesystem::path& base_dir,
                        const ScenarioOverrides& ov, bool validate_only) {
  const double hbar = hbar_of(doc, ov);
  ScenarioResult res;
  res.json["command"] = command;
  if (ov.seed) res.json["seed"] = *ov.seed;

  if (command == "loop-phase") {
    const ModelSpec model = build_model(doc, base_dir);
    const ParamPath path = build_path(doc, model, ov);
    check_path_model(path, *model.model);
    const int band = band_of(doc, *model.model, "band", model.model->hilbert_dim() - 1);
    if (!path.closed()) invalid("loop-phase needs a closed path");
    if (validate_only) return res;

    const double gamma = loop_phase(band_frame(*model.model, path, band));
    res.json["band"] = band;
    res.json["M"] = path.segments();
    res.json["geometric_phase"] = gamma;
    std::string header = "M,geometric_phase";
    std::string row = std::to_string(path.segments()) + "," + format_double(gamma);
    if (path.dim() == 3) {
      try {
        const double omega = solid_angle(path);
        res.json["solid_angle"] = omega;
        header += ",solid_angle";
        row += "," + format_double(omega);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OriginOnLoop) throw;
      }
    }
    res.csv = header + "\n" + row + "\n";
  } else if (command == "adiabatic") {
    const ModelSpec model = build_model(doc, base_dir);
    const ParamPath path = build_path(doc, model, ov);
    check_path_model(path, *model.model);
    const int band = band_of(doc, *model.model, "band", model.model->hilbert_dim() - 1);
    const std::vector<double> times = time_list(doc, ov);
    const long long steps = integer(doc, "steps_per_segment", 0, "config");
    if (steps < 0) invalid("steps_per_segment must be >= 1");
    const bool sweep = doc.contains("T_list") && !ov.total_time;
    if (sweep && !path.closed()) invalid("a T_list sweep needs a closed path");
    if (validate_only) return res;

    const auto dec = eigh(model.model->eval(path[0]));
    const StateVector psi0 = dec.eigenvectors.col(band);
    res.json["band"] = band;
    res.json["M"] = path.segments();
    if (sweep) {
      const auto rows = adiabatic_sweep(*model.model, path, band, psi0, hbar, times,
                                        static_cast<int>(steps));
      res.csv = "T,fidelity,geometric_phase,geometric_phase_error\n";
      json arr = json::array();
      for (const auto& r : rows) {
        res.csv += csv_row({r.total_time, r.fidelity, r.geometric_phase, r.geometric_phase_error});
        arr.push_back({{"T", r.total_time},
                       {"fidelity", r.fidelity},
                       {"geometric_phase", r.geometric_phase},
                       {"geometric_phase_error", r.geometric_phase_error}});
      }
      res.json["rows"] = arr;
    } else {
      const double t = times.front();
      const int n = steps > 0 ? static_cast<int>(steps)
                              : default_steps_per_segment(*model.model, path, t, hbar);
      const auto rep = phase_decomposition(*model.model, EvolutionSchedule(path, t, n),
                                           band, psi0, hbar);
      res.json["T"] = t;
      res.json["steps_per_segment"] = n;
      res.json["report"] = report_json(rep);
      res.csv = report_csv(t, rep);
    }
  } else if (command == "aa-phase") {
    const AaSetup setup = build_aa(doc, base_dir, ov, hbar);
    if (validate_only) return res;
    const auto rep = aa_phase(setup.protocol, setup.total_time, setup.psi0, hbar, setup.steps);
    res.json["T"] = setup.total_time;
    res.json["steps"] = setup.steps;
    res.json["report"] = report_json(rep);
    res.csv = report_csv(setup.total_time, rep);
  } else if (command == "bo-fields") {
    const ModelSpec model = build_model(doc, base_dir);
    const std::vector<ParameterPoint> grid = build_grid(doc);
    for (const auto& r : grid) {
      if (r.size() != model.model->param_dim()) invalid("grid point dimension mismatch");
    }
    const SlowSector slow = build_slow(doc);
    if (validate_only) return res;

    const auto rows = effective_hamiltonian_report(*model.model, slow, grid, hbar);
    const int n = model.model->param_dim();
    const int d = model.model->hilbert_dim();
    std::ostringstream header;
    for (int i = 0; i < n; ++i) header << "R" << i << ",";
    for (int i = 0; i < d; ++i) header << "E" << i << ",";
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          header << "A" << k << "_" << r << c << "_re,A" << k << "_" << r << c << "_im,";
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) header << "S_" << r << c << "_re,S_" << r << c << "_im,";
    const std::size_t nclusters = rows.front().scalar_per_cluster.size();
    for (std::size_t c = 0; c < nclusters; ++c) header << "scalar_c" << c << ",";
    header << "V\n";
    res.csv = header.str();
    for (const auto& row : rows) {
      std::string line;
      auto add = [&line](double v) { line += format_double(v) + ","; };
      for (int i = 0; i < n; ++i) add(row.r(i));
      for (int i = 0; i < d; ++i) add(row.eigenvalues(i));
      for (const auto& a : row.vector_potential)
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) {
            add(a(r, c).real());
            add(a(r, c).imag());
          }
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          add(row.scalar_potential(r, c).real());
          add(row.scalar_potential(r, c).imag());
        }
      for (double s : row.scalar_per_cluster) add(s);
      line += format_double(row.potential) + "\n";
      res.csv += line;
    }
    res.json["points"] = rows.size();
    res.json["hbar"] = hbar;
    res.json["mass"] = slow.mass;
  } else if (command == "holonomy") {
    const ModelSpec model = build_model(doc, base_dir);
    const ParamPath path = build_path(doc, model, ov);
    check_path_model(path, *model.model);
    const long long cluster = integer(doc, "cluster", 0, "config");
    if (cluster < 0) invalid("'cluster' must be >= 0");
    if (!path.closed()) invalid("holonomy needs a closed path");
    if (validate_only) return res;

    const auto u = wilczek_zee_holonomy(*model.model, path, static_cast<std::size_t>(cluster));
    json mat = json::array();
    for (Eigen::Index r = 0; r < u.u.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < u.u.cols(); ++c) row.push_back(complex_to(u.u(r, c)));
      mat.push_back(row);
    }
    const auto phases = holonomy_phases(u);
    res.json["cluster"] = cluster;
    res.json["M"] = path.segments();
    res.json["rank"] = u.u.rows();
    res.json["U"] = mat;
    res.json["trace"] = complex_to(wilson_loop(u));
    res.json["eigenphases"] = phases;
    res.csv = "eigenphase\n";
    for (double p : phases) res.csv += format_double(p) + "\n";
  } else if (command == "pancharatnam") {
    const auto states = build_states(doc);
    const bool closed = closed_flag(doc);
    if (validate_only) return res;
    const double phase = pancharatnam_chain(states, closed);
    res.json["closed"] = closed;
    res.json["links"] = states.size() - 1;
    res.json["phase"] = phase;
    res.csv = "phase\n" + format_double(phase) + "\n";
  }
  return res;
}

void write_atomically(const std::filesystem::path& file, const std::string& text) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

SampledModel load_sampled_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) invalid("cannot open model file " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    invalid("model file " + file.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_array() || doc.empty()) invalid("model file must be a non-empty JSON list");
  std::vector<SampledModel::Sample> samples;
  for (const auto& entry : doc) {
    check_keys(entry, {"R", "H"}, "model file entry");
    if (!entry.contains("R") || !entry.contains("H")) invalid("model file entries need R and H");
    ParameterPoint r = point_from(entry.at("R"), "model file R");
    const json& hs = entry.at("H");
    if (!hs.is_array()) invalid("model file H must be a list of [re, im]");
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(hs.size()))));
    if (d < 1 || static_cast<std::size_t>(d * d) != hs.size()) {
      invalid("model file H must hold d*d entries");
    }
    HermitianOperator h(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        h(i, j) = complex_from(hs[static_cast<std::size_t>(i * d + j)], "model file H");
    samples.push_back({std::move(r), std::move(h)});
  }
  return SampledModel(std::move(samples));
}

ScenarioConfig ScenarioConfig::from_json(const json& doc,
                                         const std::filesystem::path& base_dir,
                                         const ScenarioOverrides& overrides) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  ScenarioConfig cfg;
  cfg.command_ = string(doc, "command", "config");
  const auto it = kCommandKeys.find(cfg.command_);
  if (it == kCommandKeys.end()) invalid("unknown command '" + cfg.command_ + "'");
  std::set<std::string> allowed = kCommonKeys;
  allowed.insert(it->second.begin(), it->second.end());
  check_keys(doc, allowed, "config");
  if (doc.contains("output")) {
    cfg.output_ = string(doc, "output", "config");
    if (cfg.output_ != "json" && cfg.output_ != "csv" && cfg.output_ != "both") {
      invalid("output must be 'json', 'csv' or 'both'");
    }
  }
  if (doc.contains("seed") && !doc.at("seed").is_number_unsigned()) {
    invalid("'seed' must be a non-negative integer");
  }
  cfg.doc_ = doc;
  cfg.base_dir_ = base_dir;
  cfg.overrides_ = overrides;
  if (!cfg.overrides_.seed && doc.contains("seed")) {
    cfg.overrides_.seed = doc.at("seed").get<std::uint64_t>();
  }

  // Build every input once so invalid values surface before execution.
  try {
    dispatch(cfg.command_, doc, base_dir, cfg.overrides_, true);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    throw Error(ErrorKind::ConfigInvalid, e.what(), e.point());
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& file,
                                         const ScenarioOverrides& overrides) {
  std::ifstream in(file);
  if (!in) invalid("cannot open config " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    invalid("config " + file.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc, file.parent_path(), overrides);
}

ScenarioResult execute(const ScenarioConfig& config) {
  return dispatch(config.command(), config.doc(), config.base_dir(), config.overrides(),
                  false);
}

int run_scenario(const std::filesystem::path& config_file,
                 const std::filesystem::path& out_dir,
                 const ScenarioOverrides& overrides, const std::string& command) {
  auto report_error = [&](const std::string& name, const std::string& message,
                          const std::vector<double>& point, int code) {
    json err = {{"error", name}, {"message", message}, {"exit_code", code}};
    err["point"] = point.empty() ? json(nullptr) : json(point);
    std::fprintf(stderr, "geophase: %s\n", message.c_str());
    try {
      std::filesystem::create_directories(out_dir);
      write_atomically(out_dir / "error.json", err.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::fprintf(stderr, "geophase: could not write error report: %s\n", e.what());
    }
    return code;
  };

  try {
    const ScenarioConfig cfg = ScenarioConfig::from_file(config_file, overrides);
    if (!command.empty() && command != cfg.command()) {
      invalid("command '" + command + "' does not match config command '" + cfg.command() + "'");
    }
    const ScenarioResult res = execute(cfg);
    std::filesystem::create_directories(out_dir);
    if (cfg.wants_json()) {
      write_atomically(out_dir / (cfg.command() + ".json"), res.json.dump(2) + "\n");
    }
    if (cfg.wants_csv()) write_atomically(out_dir / (cfg.command() + ".csv"), res.csv);
    return 0;
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::ConfigInvalid ? 2 : 1;
    return report_error(std::string(e.name()), e.what(), e.point(), code);
  } catch (const std::exception& e) {
    return report_error("ComputationError", e.what(), {}, 1);
  }
}

}  // namespace geophase
