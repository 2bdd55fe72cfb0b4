#pragma once

// Command layer behind tools/arcwidom. Each command returns its stdout text,
// verdict lines (for stderr) and an exit code; nothing here touches argv.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acceptance.hpp"
#include "conformal.hpp"
#include "error.hpp"
#include "extremal.hpp"
#include "geometry.hpp"
#include "potential.hpp"

namespace arcwidom {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUnsupported = 2, kExitBadInput = 3 };

struct RunConfig {
  std::string command;
  std::string arc;
  std::string weight = "1";
  std::size_t nodes = 1024;
  std::vector<std::size_t> degrees;
  double tol = kDefaultMapTol;
  double spread = 1e-4;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 42;
};

struct CommandOutput {
  int exit_code = kExitPass;
  std::string text;
  std::vector<std::string> verdicts;
};

/// "10,20,40" or ranges such as "1-10", mixed freely.
inline std::vector<std::size_t> parse_degrees(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  auto to_n = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("bad degree list: " + text);
    }
    return static_cast<std::size_t>(std::stoul(s));
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_n(item));
    } else {
      const auto lo = to_n(item.substr(0, dash));
      const auto hi = to_n(item.substr(dash + 1));
      if (hi < lo) throw InputError("bad degree range: " + item);
      for (auto n = lo; n <= hi; ++n) out.push_back(n);
    }
  }
  return out;
}

inline void validate_config(RunConfig& cfg) {
  if (cfg.nodes < 256 || cfg.nodes > 16384 || !is_power_of_two(cfg.nodes)) {
    throw InputError("--nodes must be a power of two in [256, 16384]");
  }
  if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-6)) throw InputError("--tol must lie in [1e-14, 1e-6]");
  if (!(cfg.spread > 0.0 && cfg.spread < 0.1)) throw InputError("--spread must lie in (0, 0.1)");
  if (cfg.format != "json" && cfg.format != "csv") throw InputError("--format must be csv or json");
  if (cfg.degrees.empty()) {
    for (const std::size_t n : {10u, 20u, 40u, 50u, 60u}) {
      if (n <= cfg.nodes / 8) cfg.degrees.push_back(n);
    }
  }
  std::sort(cfg.degrees.begin(), cfg.degrees.end());
  cfg.degrees.erase(std::unique(cfg.degrees.begin(), cfg.degrees.end()), cfg.degrees.end());
  if (cfg.degrees.front() == 0) throw InputError("degrees must be positive");
  if (cfg.degrees.back() > cfg.nodes / 8) {
    throw InputError("degree " + std::to_string(cfg.degrees.back()) + " exceeds N/8 = " + std::to_string(cfg.nodes / 8));
  }
}

/// An arc file, or the name of a built-in arc.
inline NamedArc load_arc(const std::string& where) {
  if (where.empty()) throw InputError("--arc is required");
  for (const auto& a : builtin_family()) {
    if (a.name == where) return a;
  }
  std::ifstream in(where);
  if (!in) throw InputError("cannot open arc file: " + where);
  std::stringstream buf;
  buf << in.rdbuf();
  return {std::filesystem::path(where).stem().string(), parse_arc_spec(buf.str())};
}

namespace detail {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string verdict_line(const std::string& claim, bool ok) { return claim + ": " + (ok ? "PASS" : "FAIL"); }

/// Flat key,value CSV for a JSON object of scalars; nested values are skipped.
inline std::string json_to_csv(const nlohmann::json& j) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_float()) {
      out += k + "," + csv_num(v.get<double>()) + "\n";
    } else if (v.is_number() || v.is_boolean()) {
      out += k + "," + v.dump() + "\n";
    } else if (v.is_string()) {
      out += k + "," + v.get<std::string>() + "\n";
    }
  }
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f << text;
}

inline std::string boundary_csv(const ExteriorMap& map, std::size_t count = 201) {
  std::string out = "t,theta_plus,theta_minus,gprime_plus,gprime_minus\n";
  for (std::size_t k = 0; k < count; ++k) {
    const double t = -std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(count));
    const auto c = map.correspondence_at(t);
    out += csv_num(c.t) + "," + csv_num(c.theta_plus) + "," + csv_num(c.theta_minus) + "," + csv_num(c.gplus) + "," +
           csv_num(c.gminus) + "\n";
  }
  return out;
}

inline std::string equilibrium_csv(const EquilibriumData& eq) {
  std::string out = "z_re,z_im,omega,gprime_plus,gprime_minus,theta,t,side,weight\n";
  for (std::size_t j = 0; j < eq.n; ++j) {
    out += csv_num(eq.nodes[j].real()) + "," + csv_num(eq.nodes[j].imag()) + "," + csv_num(eq.omega[j]) + "," +
           csv_num(eq.gplus[j]) + "," + csv_num(eq.gminus[j]) + "," + csv_num(eq.theta[j]) + "," + csv_num(eq.t[j]) +
           "," + (eq.side[j] == Side::Plus ? "+" : "-") + "," + csv_num(eq.weights[j]) + "\n";
  }
  return out;
}

struct Built {
  NamedArc arc;
  std::shared_ptr<const ExteriorMap> map;
  std::shared_ptr<const EquilibriumData> eq;
};

inline Built build(const RunConfig& cfg) {
  Built b{load_arc(cfg.arc), nullptr, nullptr};
  b.map = std::make_shared<const ExteriorMap>(build_map_for(b.arc.spec, cfg.nodes, cfg.tol));
  b.eq = std::make_shared<const EquilibriumData>(equilibrium_data(b.map, cfg.nodes));
  return b;
}

inline nlohmann::json header(const RunConfig& cfg, const Built& b) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["arc"] = b.arc.name;
  j["nodes"] = cfg.nodes;
  j["map_iterations"] = b.map->iterations();
  j["map_residual"] = b.map->residual();
  j["cap"] = b.eq->cap;
  return j;
}

inline CommandOutput finish(const RunConfig& cfg, const nlohmann::json& report, std::vector<std::string> verdicts,
                            const std::vector<std::pair<std::string, std::string>>& extra) {
  CommandOutput out;
  out.text = cfg.format == "json" ? report.dump(2) + "\n" : json_to_csv(report);
  out.verdicts = std::move(verdicts);
  for (const auto& v : out.verdicts) {
    if (v.size() >= 4 && v.compare(v.size() - 4, 4, "FAIL") == 0) out.exit_code = kExitFail;
  }
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    const std::filesystem::path dir(cfg.out);
    write_file(dir / (cfg.command + "." + cfg.format), out.text);
    for (const auto& [name, body] : extra) write_file(dir / name, body);
  }
  return out;
}

}  // namespace detail

inline CommandOutput cmd_capacity(const RunConfig& cfg) {
  const auto b = detail::build(cfg);
  auto j = detail::header(cfg, b);
  const auto symm = symm_oracle(b.map->arc(), 128);
  const double diff = std::abs(symm.cap - b.eq->cap);
  j["cap_conformal"] = b.eq->cap;
  j["cap_oracle"] = symm.cap;
  j["discrepancy"] = diff;
  j["relative_discrepancy"] = diff / b.eq->cap;
  j["symm_condition"] = symm.condition;
  return detail::finish(cfg, j, {detail::verdict_line("conformal vs Symm capacity within 1e-6 relative", diff < 1e-6 * b.eq->cap)},
                        {{"boundary.csv", detail::boundary_csv(*b.map)}, {"equilibrium.csv", detail::equilibrium_csv(*b.eq)}});
}

inline CommandOutput cmd_nu(const RunConfig& cfg) {
  const auto b = detail::build(cfg);
  auto j = detail::header(cfg, b);
  const auto w = parse_weight_spec(cfg.weight);
  const double ng = nu_gamma(*b.eq);
  j["weight"] = w.to_string();
  j["nu_gamma"] = ng;
  j["nu"] = nu(*b.eq, w);
  j["S"] = szego_integral(*b.eq, w);
  j["R_inf"] = r_infinity(*b.eq, w);
  j["R_inf_gamma"] = r_infinity_gamma(*b.eq);
  j["nu_margin_below_2"] = 2.0 - ng;
  j["symmetry_defect"] = symmetry_defect(*b.eq);
  std::vector<std::string> verdicts{detail::verdict_line("1 < nu <= 2", ng > 1.0 && ng <= 2.0 + 1e-9)};
  if (2 * cfg.nodes <= 16384) {
    RunConfig fine = cfg;
    fine.nodes = 2 * cfg.nodes;
    const auto b2 = detail::build(fine);
    const double d = std::abs(nu_gamma(*b2.eq) - ng);
    j["nu_gamma_2N"] = nu_gamma(*b2.eq);
    j["resolution_discrepancy"] = d;
    j["under_resolved"] = d > 1e-4;
    if (d > 1e-4) verdicts.push_back("WARN: nu changes by " + detail::csv_num(d) + " from N to 2N");
  }
  return detail::finish(cfg, j, verdicts, {{"equilibrium.csv", detail::equilibrium_csv(*b.eq)}});
}

inline CommandOutput cmd_widom(const RunConfig& cfg) {
  const auto b = detail::build(cfg);
  auto j = detail::header(cfg, b);
  const auto rho = parse_weight_spec(cfg.weight);
  const auto rep = widom_report(b.eq, rho, cfg.degrees, cfg.spread);
  j["weight"] = rho.to_string();
  j["upp"] = rep.bounds.upp;
  j["sahi"] = rep.bounds.sahi;
  j["two_S"] = rep.bounds.two_S;
  j["nu_limit"] = rep.bounds.nu_limit;
  j["nu_gamma"] = rep.bounds.nu_gamma;
  j["S"] = rep.bounds.S;
  std::string csv = "n,W2sq,Winf,qn_ratio,tn,spread,converged\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"n", r.n}, {"W2sq", r.w2sq}, {"Winf", r.winf}, {"qn_ratio", r.qn_ratio}, {"tn", r.tn},
                    {"spread", r.spread}, {"converged", r.converged}});
    csv += std::to_string(r.n) + "," + detail::csv_num(r.w2sq) + "," + detail::csv_num(r.winf) + "," +
           detail::csv_num(r.qn_ratio) + "," + detail::csv_num(r.tn) + "," + detail::csv_num(r.spread) + "," +
           (r.converged ? "1" : "0") + "\n";
  }
  j["rows"] = rows;
  j["warnings"] = rep.warnings;
  const auto& last = rep.rows.back();
  // Winf is an upper estimate of t_n / Cap^n; allow the Lawson spread on top of the bound
  std::vector<std::string> verdicts{
      detail::verdict_line("Winf,n <= upp at n=" + std::to_string(last.n),
                           last.winf <= rep.bounds.upp * (1 + std::max(last.spread, 1e-12))),
      detail::verdict_line("Winf,n <= sahi + 0.05 at n=" + std::to_string(last.n), last.winf <= rep.bounds.sahi + 0.05),
      detail::verdict_line("sahi <= upp <= 2 S(rho)",
                           rep.bounds.sahi <= rep.bounds.upp * (1 + 1e-12) && rep.bounds.upp <= rep.bounds.two_S * (1 + 1e-12)),
      detail::verdict_line("|W2,n^2 - nu S(rho)^2| < 0.05 at n=" + std::to_string(last.n),
                           std::abs(last.w2sq - rep.bounds.nu_limit) < 0.05)};
  for (const auto& w : rep.warnings) verdicts.push_back("WARN: " + w);
  CommandOutput out = detail::finish(cfg, j, verdicts, {{"widom_rows.csv", csv}});
  if (cfg.format == "csv") out.text = csv;
  return out;
}

inline CommandOutput cmd_verify(const RunConfig& cfg) {
  AcceptanceConfig ac;
  ac.nodes = cfg.nodes;
  ac.map_tol = cfg.tol;
  ac.spread = cfg.spread;
  ac.seed = cfg.seed;
  const auto results = cfg.arc.empty() ? run_acceptance(ac) : verify_arc(load_arc(cfg.arc), ac);
  CommandOutput out;
  nlohmann::json arr = nlohmann::json::array();
  std::string csv = "id,verdict,name,detail\n";
  bool fail = false;
  bool unsupported = false;
  for (const auto& r : results) {
    out.verdicts.push_back(format_result(r));
    arr.push_back({{"id", r.id}, {"verdict", verdict_name(r.verdict)}, {"name", r.name}, {"detail", r.detail}});
    csv += std::to_string(r.id) + "," + verdict_name(r.verdict) + ",\"" + r.name + "\",\"" + r.detail + "\"\n";
    fail = fail || r.verdict == Verdict::Fail;
    unsupported = unsupported || r.verdict == Verdict::Unsupported;
  }
  out.exit_code = fail ? kExitFail : (unsupported ? kExitUnsupported : kExitPass);
  out.text = cfg.format == "json" ? nlohmann::json{{"command", "verify"}, {"nodes", cfg.nodes}, {"results", arr}}.dump(2) + "\n"
                                  : csv;
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    detail::write_file(std::filesystem::path(cfg.out) / ("verify." + cfg.format), out.text);
  }
  return out;
}

/// Runs a command with the exit-code contract: bad input 3, unsupported
/// geometry 2, numerical failure 1.
inline CommandOutput run_command(RunConfig cfg) {
  CommandOutput out;
  try {
    validate_config(cfg);
    if (cfg.command == "capacity") return cmd_capacity(cfg);
    if (cfg.command == "nu") return cmd_nu(cfg);
    if (cfg.command == "widom") return cmd_widom(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw InputError("unknown command: " + cfg.command);
  } catch (const InputError& e) {
    out.exit_code = kExitBadInput;
    out.verdicts.push_back(std::string("error: ") + e.what());
  } catch (const UnsupportedGeometry& e) {
    out.exit_code = kExitUnsupported;
    out.verdicts.push_back(std::string("UNSUPPORTED: ") + e.what());
  } catch (const std::exception& e) {
    out.exit_code = kExitFail;
    out.verdicts.push_back(std::string("FAIL: ") + e.what());
  }
  return out;
}

}  // namespace arcwidom
