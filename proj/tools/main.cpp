// Command-line front end: cycle reports, sweeps, efficiency-gain maps,
// optimal-angle maps, and circuit-vs-analytic comparisons.

#include "sco/analytic.hpp"
#include "sco/circuit.hpp"
#include "sco/parallel.hpp"
#include "sco/tomography.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using nlohmann::json;
using namespace sco;

namespace {

struct Config {
  std::string command;
  std::string family = "uncorrelated";
  double a = 0.3;
  double a_prime = 0.7;
  bool complement = true;
  int a_grid = 51;
  double beta_eps_inv = 1.65;
  double theta = M_PI / 2;
  double phi = M_PI / 4;
  double phi_prime = 0.0;
  double zeta = 1.0;
  double zeta0 = 1.0;
  double zeta1 = 0.0;
  double xi_fraction = 1.0;
  double varphi = 0.0;
  double beta_d_inv = 0.0;
  std::string mode = "coherent";
  std::string objective = "eta_tilde";
  std::string beta_eps_list = "0.1,1,10";
  std::string beta_eps_grid = "0.1:10:21";
  int map_grid = 101;
  int shots = 8000;
  int reps = 10;
  uint64_t seed = 1;
  bool literal = false;
  std::string dump_circuit;
  std::string out;
  std::string format;  // csv or json; per-command default
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flat key = value file; '#' comments; unknown keys are errors
void load_config_file(const std::string& path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::function<void(const std::string&)>> setters;
  auto dbl = [](double& ref) {
    return [&ref](const std::string& v) { ref = std::stod(v); };
  };
  auto intval = [](int& ref) {
    return [&ref](const std::string& v) { ref = std::stoi(v); };
  };
  auto str = [](std::string& ref) {
    return [&ref](const std::string& v) { ref = v; };
  };
  auto boolean = [](bool& ref) {
    return [&ref](const std::string& v) { ref = (v == "1" || v == "true" || v == "on"); };
  };
  setters["family"] = str(cfg.family);
  setters["a"] = dbl(cfg.a);
  setters["a_prime"] = dbl(cfg.a_prime);
  setters["complement"] = boolean(cfg.complement);
  setters["a_grid"] = intval(cfg.a_grid);
  setters["beta_eps_inv"] = dbl(cfg.beta_eps_inv);
  setters["theta"] = dbl(cfg.theta);
  setters["phi"] = dbl(cfg.phi);
  setters["phi_prime"] = dbl(cfg.phi_prime);
  setters["zeta"] = dbl(cfg.zeta);
  setters["zeta0"] = dbl(cfg.zeta0);
  setters["zeta1"] = dbl(cfg.zeta1);
  setters["xi_fraction"] = dbl(cfg.xi_fraction);
  setters["varphi"] = dbl(cfg.varphi);
  setters["beta_d_inv"] = dbl(cfg.beta_d_inv);
  setters["mode"] = str(cfg.mode);
  setters["objective"] = str(cfg.objective);
  setters["beta_eps_list"] = str(cfg.beta_eps_list);
  setters["beta_eps_grid"] = str(cfg.beta_eps_grid);
  setters["map_grid"] = intval(cfg.map_grid);
  setters["shots"] = intval(cfg.shots);
  setters["reps"] = intval(cfg.reps);
  setters["seed"] = [&cfg](const std::string& v) { cfg.seed = std::stoull(v); };
  setters["literal"] = boolean(cfg.literal);
  setters["dump_circuit"] = str(cfg.dump_circuit);
  setters["out"] = str(cfg.out);
  setters["format"] = str(cfg.format);

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, eq, value;
    std::istringstream ls(line);
    if (!(ls >> key)) continue;
    if (!(ls >> eq) || eq != "=" || !(ls >> value))
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": bad value for '" + key +
                        "'");
    }
  }
}

void validate(const Config& cfg) {
  auto in01 = [](double v, const char* name) {
    if (!(v >= 0 && v <= 1)) throw ConfigError(std::string(name) + " must be in [0,1]");
  };
  in01(cfg.a, "a");
  in01(cfg.a_prime, "a_prime");
  in01(cfg.zeta, "zeta");
  in01(cfg.zeta0, "zeta0");
  in01(cfg.zeta1, "zeta1");
  in01(cfg.xi_fraction, "xi_fraction");
  if (!(cfg.beta_eps_inv > 0)) throw ConfigError("beta_eps_inv must be positive");
  if (cfg.theta < 0 || cfg.theta > M_PI) throw ConfigError("theta must be in [0, pi]");
  if (cfg.beta_d_inv < 0) throw ConfigError("beta_d_inv must be >= 0");
  if (cfg.a_grid < 1) throw ConfigError("a_grid must be >= 1");
  if (cfg.map_grid < 2) throw ConfigError("map_grid must be >= 2");
  if (cfg.command == "circuit-compare") {
    if (cfg.shots < 1) throw ConfigError("shots must be >= 1");
    if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  }
  family_from_name(cfg.family);  // throws on unknown names
  if (cfg.mode != "definite" && cfg.mode != "incoherent" && cfg.mode != "coherent")
    throw ConfigError("mode must be definite, incoherent or coherent");
  if (cfg.objective != "eta_tilde" && cfg.objective != "eta_postselected")
    throw ConfigError("objective must be eta_tilde or eta_postselected");
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");
}

InitialStateSpec spec_from(const Config& cfg) {
  InitialStateSpec s;
  s.family = family_from_name(cfg.family);
  s.angles = {cfg.theta, cfg.phi};
  s.gibbs = {1.0 / cfg.beta_eps_inv};
  s.zeta = cfg.zeta;
  s.zeta0 = cfg.zeta0;
  s.zeta1 = cfg.zeta1;
  s.xi = cfg.xi_fraction * s.xi_max();
  s.varphi = cfg.varphi;
  s.validate();
  return s;
}

AnalyticParams params_from(const Config& cfg, double a, double a_prime) {
  AnalyticParams p;
  p.family = family_from_name(cfg.family);
  p.a = a;
  p.a_prime = a_prime;
  p.beta_eps = 1.0 / cfg.beta_eps_inv;
  p.theta = cfg.theta;
  p.phi = cfg.phi;
  p.phi_prime = cfg.phi_prime;
  p.zeta = cfg.zeta;
  p.zeta0 = cfg.zeta0;
  p.zeta1 = cfg.zeta1;
  p.xi = cfg.xi_fraction * 0.5 / std::cosh(p.beta_eps);
  p.varphi = cfg.varphi;
  return p;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(const Config& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + cfg.out);
  out << payload;
}

// csv by default; --format json converts the same table to an array of rows
void tabular_output(const Config& cfg, const std::string& header,
                    const std::vector<std::string>& rows) {
  if (cfg.format != "json") {
    std::string csv = header + "\n";
    for (const std::string& r : rows) csv += r;
    write_output(cfg, csv);
    return;
  }
  std::vector<std::string> names;
  {
    std::istringstream hs(header);
    std::string tok;
    while (std::getline(hs, tok, ',')) names.push_back(tok);
  }
  json arr = json::array();
  for (const std::string& r : rows) {
    std::string line = r;
    if (!line.empty() && line.back() == '\n') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    json obj;
    for (size_t i = 0; i < names.size() && std::getline(ls, tok, ','); ++i) {
      try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used == tok.size()) {
          obj[names[i]] = v;
          continue;
        }
      } catch (const std::exception&) {
      }
      obj[names[i]] = tok;
    }
    arr.push_back(obj);
  }
  write_output(cfg, arr.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) vals.push_back(std::stod(tok));
  }
  if (vals.empty()) throw ConfigError("empty list: " + text);
  return vals;
}

// "lo:hi:n" log-spaced grid
std::vector<double> parse_log_grid(const std::string& text) {
  double lo, hi;
  int n;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1 || lo <= 0 || hi <= lo)
    throw ConfigError("bad grid spec (want lo:hi:n): " + text);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i)
    vals[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
  return vals;
}

std::vector<double> linspace01(int n) {
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = n == 1 ? 0.0 : double(i) / (n - 1);
  return vals;
}

json branch_json(const BranchResult& br) {
  json strokes = json::array();
  for (const StrokeRecord& st : br.strokes) {
    strokes.push_back({{"index", st.index},
                       {"u_before", st.u_before},
                       {"u_after", st.u_after},
                       {"s_before", st.s_before},
                       {"s_after", st.s_after},
                       {"kind", st.kind == StrokeKind::Heat ? "heat" : "work"},
                       {"value", st.value}});
  }
  return {{"outcome", br.outcome == Outcome::Plus ? "plus" : "minus"},
          {"probability", br.probability},
          {"a_bar", br.a_bar},
          {"coherence_re", br.coherence.real()},
          {"coherence_im", br.coherence.imag()},
          {"b_strength", br.b_strength},
          {"q_hot", br.q_hot},
          {"w_ext", br.w_ext},
          {"q_cold", br.q_cold},
          {"conditions_ok", br.conditions_ok},
          {"efficiency", br.efficiency ? json(*br.efficiency) : json()},
          {"degenerate", br.degenerate},
          {"strokes", strokes}};
}

json report_json(const CycleReport& rep) {
  const char* mode = rep.mode == CycleMode::Definite
                         ? "definite"
                         : rep.mode == CycleMode::Incoherent ? "incoherent" : "coherent";
  json branches = json::array();
  for (const BranchResult& br : rep.branches) branches.push_back(branch_json(br));
  return {{"mode", mode},
          {"beta_eps", rep.beta_eps},
          {"a_bar_inc", rep.a_bar_inc},
          {"lambda_weight", rep.lambda_weight},
          {"avg_w_ext", rep.avg_w_ext},
          {"avg_q_hot", rep.avg_q_hot},
          {"w_cost", rep.w_cost},
          {"eta", rep.eta},
          {"eta_tilde", rep.eta_tilde},
          {"delta_eta", rep.delta_eta},
          {"eta_cost", rep.eta_cost},
          {"t_d_crit", rep.t_d_crit},
          {"conditions_violated", rep.conditions_violated},
          {"branches", branches}};
}

std::string branch_flags(const BranchResult& br, const char* tag) {
  static const char* names[3] = {"lb", "ub", "coh"};
  std::string out;
  if (br.degenerate) return std::string(tag) + ":degenerate";
  for (int i = 0; i < 3; ++i)
    if (!br.conditions_ok[i]) {
      if (!out.empty()) out += ",";
      out += std::string(tag) + ":" + names[i];
    }
  return out;
}

int run_cycle(const Config& cfg) {
  json doc;
  doc["command"] = "cycle";
  doc["family"] = cfg.family;
  doc["a"] = cfg.a;
  const double ap = cfg.complement ? 1 - cfg.a : cfg.a_prime;
  doc["a_prime"] = ap;
  doc["mode"] = cfg.mode;
  doc["beta_eps_inv"] = cfg.beta_eps_inv;
  doc["seed"] = cfg.seed;

  CycleReport rep;
  if (cfg.mode == "definite") {
    rep = definite_cycle(MeasurementStrength(cfg.a), 1.0 / cfg.beta_eps_inv);
  } else {
    const InitialStateSpec spec = spec_from(cfg);
    check_consistency(params_from(cfg, cfg.a, ap));
    if (cfg.mode == "incoherent")
      rep = incoherent_cycle(MeasurementStrength(cfg.a), MeasurementStrength(ap), spec);
    else
      rep = coherent_cycle(MeasurementStrength(cfg.a), MeasurementStrength(ap), cfg.phi_prime,
                           spec, cfg.beta_d_inv);
  }
  doc["report"] = report_json(rep);
  write_output(cfg, doc.dump(2) + "\n");
  return 0;
}

int run_sweep(const Config& cfg) {
  const std::vector<double> grid = linspace01(cfg.a_grid);
  const auto rows = parallel_map<std::string>(grid.size(), [&](size_t i) {
    const double a = grid[i];
    const double ap = cfg.complement ? 1 - a : cfg.a_prime;
    const InitialStateSpec spec = spec_from(cfg);
    check_consistency(params_from(cfg, a, ap));

    const CycleReport inc =
        incoherent_cycle(MeasurementStrength(a), MeasurementStrength(ap), spec);
    const CycleReport coh = coherent_cycle(MeasurementStrength(a), MeasurementStrength(ap),
                                           cfg.phi_prime, spec, cfg.beta_d_inv);
    const BranchResult& plus = coh.branches[0];
    const BranchResult& minus = coh.branches[1];

    std::string flags;
    auto add = [&flags](const std::string& f) {
      if (f.empty()) return;
      if (!flags.empty()) flags += ";";
      flags += f;
    };
    add(branch_flags(inc.branches[0], "inc"));
    add(branch_flags(plus, "plus"));
    add(branch_flags(minus, "minus"));
    if (flags.empty()) flags = "ok";

    auto eta_of = [](const BranchResult& br) {
      return (br.all_conditions_ok() && br.efficiency) ? *br.efficiency : 0.0;
    };
    const double delta_eta =
        (plus.all_conditions_ok() && minus.all_conditions_ok()) ? coh.delta_eta : 0.0;

    std::string row;
    row += std::string(family_name(spec.family));
    for (double v : {a, ap, plus.probability, minus.probability, plus.w_ext, minus.w_ext,
                     coh.avg_w_ext, coh.avg_q_hot, eta_of(plus), eta_of(minus), delta_eta,
                     inc.eta})
      row += "," + fmt(v);
    row += "," + flags + "\n";
    return row;
  });

  tabular_output(cfg,
                 "family,a,a_prime,p_plus,p_minus,w_ext_plus,w_ext_minus,w_ext_avg,q_hot_avg,"
                 "eta_plus,eta_minus,delta_eta_coh,eta_inc,flags",
                 rows);
  return 0;
}

int run_map(const Config& cfg) {
  const std::vector<double> betas = parse_list(cfg.beta_eps_list);
  const std::vector<double> grid = linspace01(cfg.map_grid);
  const size_t cells = betas.size() * grid.size() * grid.size();

  const auto rows = parallel_map<std::string>(cells, [&](size_t idx) {
    const size_t per_beta = grid.size() * grid.size();
    const double beta_eps = betas[idx / per_beta];
    const size_t cell = idx % per_beta;
    const double a = grid[cell / grid.size()];
    const double ap = grid[cell % grid.size()];

    AnalyticParams base = params_from(cfg, a, ap);
    base.beta_eps = beta_eps;
    base.xi = cfg.xi_fraction * 0.5 / std::cosh(beta_eps);

    const OptResult tilde = optimize_theta(base, Objective::EtaTilde, true);
    double delta_eta = 0;
    if (tilde.feasible) {
      const double x = 1 - 2 * abar_inc(tilde.at);
      const double eta_inc = (x + std::abs(x)) / (x + std::tanh(beta_eps));
      delta_eta = tilde.value - eta_inc;
    }
    const OptResult minus_opt =
        optimize_theta(base, Objective::EtaPostselected, true, Outcome::Minus);
    double eta_minus = 0, eta_plus = 0;
    bool plus_ok = false;
    if (minus_opt.feasible) {
      eta_minus = minus_opt.value;
      const EtaResult plus_at = eta_ps_closed(minus_opt.at, Outcome::Plus);
      if (plus_at.feasible) {
        eta_plus = plus_at.value;
        plus_ok = true;
      }
    }
    // infeasible quantities are zeroed; the flag records which ones, bitwise:
    // 1 = delta_eta, 2 = eta_minus_opt, 4 = eta_plus_at_opt
    const int feasible =
        (tilde.feasible ? 1 : 0) | (minus_opt.feasible ? 2 : 0) | (plus_ok ? 4 : 0);

    std::string row = fmt(beta_eps);
    for (double v : {a, ap, delta_eta, eta_minus, eta_plus}) row += "," + fmt(v);
    row += "," + std::to_string(feasible) + "\n";
    return row;
  });

  tabular_output(cfg, "beta_eps,a,a_prime,delta_eta,eta_minus_opt,eta_plus_at_opt,feasible",
                 rows);
  return 0;
}

int run_optimal_theta(const Config& cfg) {
  const std::vector<double> betas = parse_log_grid(cfg.beta_eps_grid);
  const std::vector<double> grid = linspace01(cfg.a_grid);
  const size_t cells = betas.size() * grid.size();
  const Objective obj =
      cfg.objective == "eta_tilde" ? Objective::EtaTilde : Objective::EtaPostselected;

  const auto rows = parallel_map<std::string>(cells, [&](size_t idx) {
    const double beta_eps = betas[idx / grid.size()];
    const double a = grid[idx % grid.size()];
    AnalyticParams base = params_from(cfg, a, 1 - a);  // complementary strengths
    base.beta_eps = beta_eps;
    base.xi = cfg.xi_fraction * 0.5 / std::cosh(beta_eps);
    const OptResult r = optimize_theta(base, obj, true);
    std::string row = std::string(family_name(base.family)) + "," + cfg.objective;
    for (double v : {a, beta_eps, r.feasible ? r.theta_opt : 0.0, r.feasible ? r.value : 0.0})
      row += "," + fmt(v);
    row += std::string(",") + (r.constrained ? "1" : "0");
    row += std::string(",") + (r.feasible ? "1" : "0") + "\n";
    return row;
  });

  tabular_output(cfg, "family,objective,a,beta_eps,theta_opt,value,constrained,feasible", rows);
  return 0;
}

int run_circuit_compare(const Config& cfg) {
  const std::vector<double> grid = linspace01(cfg.a_grid);
  const std::vector<Family> families = {Family::Uncorrelated, Family::Separable,
                                        Family::Entangled};
  struct Point {
    json doc;
    double max_td = 0;
    int within = 0, total = 0;
  };

  const auto points = parallel_map<Point>(families.size() * grid.size(), [&](size_t idx) {
    const Family fam = families[idx / grid.size()];
    const double a = grid[idx % grid.size()];
    const double ap = cfg.complement ? 1 - a : cfg.a_prime;

    Config pcfg = cfg;
    pcfg.family = family_name(fam);
    if (fam == Family::Entangled) {
      pcfg.zeta0 = 1;
      pcfg.zeta1 = 0;
    }
    const InitialStateSpec spec = spec_from(pcfg);
    const MeasurementStrength ma(a), map_s(ap);

    Point pt;
    pt.doc["family"] = family_name(fam);
    pt.doc["a"] = a;
    pt.doc["a_prime"] = ap;

    // exact statevector path vs the channel pipeline
    const CoherentCircuitRun run = run_coherent_engine(spec, ma, map_s, cfg.phi_prime);
    auto [plus, minus] = coherent_branches(ma, map_s, cfg.phi_prime, spec);
    json exact;
    exact["p_plus"] = run.plus.probability;
    exact["p_minus"] = run.minus.probability;
    exact["p_err"] = std::max(std::abs(run.plus.probability - plus.probability),
                              std::abs(run.minus.probability - minus.probability));
    auto td_of = [](const CircuitBranch& cb, const BranchResult& br) {
      ComplexMatrix m(2);
      m(0, 0) = br.a_bar;
      m(1, 1) = 1 - br.a_bar;
      m(0, 1) = br.coherence;
      m(1, 0) = std::conj(br.coherence);
      return trace_distance(cb.medium, DensityOperator(m));
    };
    const double tdp = td_of(run.plus, plus), tdm = td_of(run.minus, minus);
    exact["trace_distance_plus"] = tdp;
    exact["trace_distance_minus"] = tdm;
    exact["isentropy_plus"] = std::abs(run.plus.entropy_after - run.plus.entropy_before);
    exact["isentropy_minus"] = std::abs(run.minus.entropy_after - run.minus.entropy_before);
    pt.doc["exact"] = exact;
    pt.max_td = std::max(tdp, tdm);

    // shot path: tomography of the post-switch joint state
    const Circuit sw = engine_circuit(SwitchRunMode::Incoherent, spec, ma, map_s, cfg.phi_prime);
    const uint64_t point_seed = cfg.seed + 7919 * idx;
    const TomographyEstimate est =
        sample_and_tomograph(sw, cfg.shots, cfg.reps, point_seed, {1, 0});
    const DensityOperator exact_joint = tomography_exact(sw, {1, 0});
    double max_z = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const double err = std::abs(est.rho_hat(r, c) - exact_joint(r, c));
        const double sigma = est.std_errors[static_cast<size_t>(4 * r + c)];
        ++pt.total;
        if (err <= 5 * sigma + 1e-12)
          ++pt.within;
        else if (sigma > 0)
          max_z = std::max(max_z, err / sigma);
      }
    pt.doc["shots"] = {{"seed", point_seed},
                      {"within_5_sigma", pt.within},
                      {"elements", pt.total},
                      {"max_excess_z", max_z}};

    if (cfg.literal && a >= 0.5 && ap >= 0.5) {
      const CoherentCircuitRun lit =
          run_coherent_engine(spec, ma, map_s, cfg.phi_prime, PrepMode::Literal);
      pt.doc["literal"] = {{"joint_trace_distance", trace_distance(lit.joint, run.joint)},
                           {"p_plus", lit.plus.probability}};
    }
    return pt;
  });

  json doc;
  doc["command"] = "circuit-compare";
  doc["beta_eps_inv"] = cfg.beta_eps_inv;
  doc["theta"] = cfg.theta;
  doc["phi"] = cfg.phi;
  doc["phi_prime"] = cfg.phi_prime;
  doc["shots"] = cfg.shots;
  doc["repetitions"] = cfg.reps;
  doc["seed"] = cfg.seed;
  double max_td = 0;
  long within = 0, total = 0;
  json pts = json::array();
  for (const Point& pt : points) {
    pts.push_back(pt.doc);
    max_td = std::max(max_td, pt.max_td);
    within += pt.within;
    total += pt.total;
  }
  doc["points"] = pts;
  const double frac = total ? double(within) / total : 1.0;
  doc["summary"] = {{"max_exact_trace_distance", max_td},
                    {"fraction_within_5_sigma", frac},
                    {"pass_exact", max_td < 1e-9},
                    {"pass_5_sigma", frac >= 0.99}};

  if (!cfg.dump_circuit.empty()) {
    std::string circuits_text;
    for (Family fam : families) {
      Config pcfg = cfg;
      pcfg.family = family_name(fam);
      const InitialStateSpec spec = spec_from(pcfg);
      circuits_text += "# family " + std::string(family_name(fam)) + ", a " + fmt(cfg.a) + "\n";
      circuits_text +=
          engine_circuit(SwitchRunMode::Coherent, spec, MeasurementStrength(cfg.a),
                         MeasurementStrength(cfg.complement ? 1 - cfg.a : cfg.a_prime),
                         cfg.phi_prime)
              .to_text();
    }
    std::ofstream dump(cfg.dump_circuit, std::ios::binary);
    if (!dump) throw ConfigError("cannot open dump file: " + cfg.dump_circuit);
    dump << circuits_text;
  }

  write_output(cfg, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-driven heat engine with a quantum switch: simulators and sweeps"};
  app.require_subcommand(1);

  Config cfg;
  // a config file provides defaults; explicit flags win
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  try {
    if (!config_path.empty()) load_config_file(config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  bool a_grid_set = false;
  bool a_prime_set = false;
  bool complement_set = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--family", cfg.family, "uncorrelated | separable | entangled");
    sub->add_option("--a", cfg.a, "strength of the first measurement");
    sub->add_option("--a-prime", cfg.a_prime, "strength of the second measurement")
        ->each([&](const std::string&) { a_prime_set = true; });
    sub->add_flag("--complement,!--no-complement", cfg.complement, "enforce a' = 1 - a")
        ->each([&](const std::string&) { complement_set = true; });
    sub->add_option("--a-grid", cfg.a_grid, "points in the a sweep grid")
        ->each([&](const std::string&) { a_grid_set = true; });
    sub->add_option("--beta-eps-inv", cfg.beta_eps_inv, "k_B T / eps (default 1.65)");
    sub->add_option("--theta", cfg.theta, "control polar angle (default pi/2)");
    sub->add_option("--phi", cfg.phi, "control azimuthal phase (default pi/4)");
    sub->add_option("--phi-prime", cfg.phi_prime, "control readout phase (default 0)");
    sub->add_option("--zeta", cfg.zeta, "control purity, uncorrelated family");
    sub->add_option("--zeta0", cfg.zeta0, "conditional weight on the ground level");
    sub->add_option("--zeta1", cfg.zeta1, "conditional weight on the excited level");
    sub->add_option("--xi-fraction", cfg.xi_fraction, "fraction of the maximal correlation");
    sub->add_option("--varphi", cfg.varphi, "correlation phase");
    sub->add_option("--beta-d-inv", cfg.beta_d_inv, "detector temperature k_B T_D / eps");
    sub->add_option("--shots", cfg.shots, "shots per tomography setting");
    sub->add_option("--reps", cfg.reps, "tomography repetitions");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv | json");
  };

  CLI::App* cycle = app.add_subcommand("cycle", "single-point cycle report (json)");
  cycle->add_option("--mode", cfg.mode, "definite | incoherent | coherent");
  add_common(cycle);
  CLI::App* sweep = app.add_subcommand("sweep", "strength sweep along a grid (csv)");
  add_common(sweep);
  CLI::App* map_cmd = app.add_subcommand("map", "(a, a') efficiency-gain maps (csv)");
  map_cmd->add_option("--beta-eps-list", cfg.beta_eps_list, "comma list of beta*eps values");
  map_cmd->add_option("--map-grid", cfg.map_grid, "points per strength axis");
  add_common(map_cmd);
  CLI::App* opt = app.add_subcommand("optimal-theta", "optimal control angle maps (csv)");
  opt->add_option("--objective", cfg.objective, "eta_tilde | eta_postselected");
  opt->add_option("--beta-eps-grid", cfg.beta_eps_grid, "lo:hi:n log grid of beta*eps");
  add_common(opt);
  CLI::App* cc = app.add_subcommand("circuit-compare",
                                    "statevector circuits vs the channel pipeline (json)");
  cc->add_flag("--literal", cfg.literal, "also run the fixed-angle literal preparation");
  cc->add_option("--dump-circuit", cfg.dump_circuit, "write the gate lists to this file");
  add_common(cc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (a_prime_set && !complement_set) cfg.complement = false;

  try {
    if (cycle->parsed()) cfg.command = "cycle";
    if (sweep->parsed()) cfg.command = "sweep";
    if (map_cmd->parsed()) cfg.command = "map";
    if (opt->parsed()) cfg.command = "optimal-theta";
    if (cc->parsed()) {
      cfg.command = "circuit-compare";
      if (!a_grid_set) cfg.a_grid = 11;  // the shot path is costly per point
    }
    validate(cfg);
    if (cfg.command == "cycle") return run_cycle(cfg);
    if (cfg.command == "sweep") return run_sweep(cfg);
    if (cfg.command == "map") return run_map(cfg);
    if (cfg.command == "optimal-theta") return run_optimal_theta(cfg);
    if (cfg.command == "circuit-compare") return run_circuit_compare(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
