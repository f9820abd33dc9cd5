// qbflow: command-line front end for the backflow library.
//
// Exit status: 0 success, 2 invalid arguments, 3 numerical failure or a
// failed self-check.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbf/csv.hpp"
#include "qbf/efexample.hpp"
#include "qbf/errors.hpp"
#include "qbf/maxflow.hpp"
#include "qbf/selfcheck.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qbf;

enum class Format { csv, json };

struct Output {
  std::string path;
  Format format = Format::csv;
};

// Formula names attached to JSON output.
ordered_json refs_example() {
  return {{"husimi_slice", "hbar f_0(0, alpha eta) = 162/(35 pi^{3/2}) I(eta;s)^2 / s"},
          {"integral_I", "I(eta;s) = int_0^inf d eta' eta' exp(-(eta'-eta)^2/(2 s^2)) (e^{-eta'} - e^{-eta'/2}/6)"},
          {"effective_current", "J_0(0) m hbar / alpha^2 = -(18/(35 pi)) [2 + 9/(sqrt(pi) s) int_{-inf}^0 eta I^2 d eta]"},
          {"standard_current", "j_0(0) = -36 alpha^2 / (35 pi m hbar)"}};
}

ordered_json refs_maxflow() {
  return {{"correction", "U(u,v;s) = ((u+v)/2) e^{-(u-v)^2/s^2} erfc((u+v)/s) - s e^{-2(u^2+v^2)/s^2} / (2 sqrt(pi))"},
          {"eigenproblem", "int_0^inf dv (u+v-U) sin(u^2-v^2) / (pi (v^2-u^2)) phi(v) = lambda phi(u)"},
          {"width", "varsigma = sigma_tilde sqrt(T / (m hbar))"},
          {"transfer", "Delta = -int_0^T dt J_t(0)"},
          {"free_bound", "Delta_max(0) = 0.0384517"}};
}

ordered_json refs_feasibility() {
  return {{"width", "varsigma = sigma_tilde sqrt(T / (m hbar))"},
          {"time_scale", "T <= m hbar / sigma_tilde^2"}};
}

void emit(const Output& out, const std::string& csv, const ordered_json& json, const std::string& summary) {
  const std::string body = out.format == Format::csv ? csv : json.dump(2) + "\n";
  if (out.path.empty()) {
    std::cout << body;
  } else {
    write_text_file(out.path, body);
  }
  std::cout << summary << '\n';
}

std::string fixed(double x, int digits = 7) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

ordered_json sweep_rows_json(const SweepResult& sweep, const std::string& parameter, const std::string& value) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : sweep.rows) {
    ordered_json row{{parameter, r.parameter}, {value, r.value}, {"converged", r.converged}};
    for (std::size_t k = 0; k < sweep.diagnostic_names.size(); ++k) row[sweep.diagnostic_names[k]] = r.diagnostics[k];
    rows.push_back(row);
  }
  return rows;
}

ordered_json metadata_json(const SweepResult& sweep) {
  ordered_json m = ordered_json::object();
  for (const auto& [k, v] : sweep.metadata) m[k] = v;
  return m;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw InvalidArgument("points must be >= 1");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw InvalidArgument("sweep range needs max > min");
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return v;
}

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Write the result table to this file (default: stdout)");
  cmd->add_option("--format", out.format, "Output format: csv or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}},
                                          CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum backflow under finite apparatus precision"};
  app.require_subcommand(1);
  Output out;

  // example-current
  double s_single = 1.0;
  auto* ex_current = app.add_subcommand("example-current", "Scaled effective current of the example state at width s");
  ex_current->add_option("--s", s_single, "Dimensionless precision width s = sigma_tilde / alpha");
  add_output_flags(ex_current, out);

  // example-sweep
  double s_min = 0.1, s_max = 10.0;
  std::size_t s_points = 100;
  auto* ex_sweep = app.add_subcommand("example-sweep", "Scaled effective current over a range of widths");
  ex_sweep->add_option("--s-min", s_min, "Smallest width");
  ex_sweep->add_option("--s-max", s_max, "Largest width");
  ex_sweep->add_option("--points", s_points, "Number of equally spaced widths");
  add_output_flags(ex_sweep, out);

  // critical-width
  double tol = 1e-6;
  auto* crit = app.add_subcommand("critical-width", "Width at which the effective current changes sign");
  crit->add_option("--tol", tol, "Bracket tolerance");
  add_output_flags(crit, out);

  // max-backflow
  double varsigma = 0.0;
  MaxflowOptions mopts;
  bool no_extrapolate = false;
  std::string eigvec_out;
  auto* maxb = app.add_subcommand("max-backflow", "Maximal backflow transfer at one width varsigma");
  maxb->add_option("--varsigma", varsigma, "Dimensionless width varsigma >= 0");
  maxb->add_option("--nodes", mopts.nodes, "Gauss-Legendre nodes on [0, umax]");
  maxb->add_option("--umax", mopts.u_max, "Truncation of the u axis");
  maxb->add_flag("--no-extrapolate", no_extrapolate, "Report the raw truncated eigenvalue");
  maxb->add_flag("--check-resolution", mopts.check_resolution, "Also solve with twice the nodes and report the shift");
  maxb->add_option("--eigvec-out", eigvec_out, "Write the eigenfunction as u,weight,phi CSV");
  add_output_flags(maxb, out);

  // max-sweep
  double v_min = 0.0, v_max = 3.0;
  std::size_t v_points = 25;
  auto* msweep = app.add_subcommand("max-sweep", "Maximal backflow transfer over a range of widths");
  msweep->add_option("--varsigma-min", v_min, "Smallest width");
  msweep->add_option("--varsigma-max", v_max, "Largest width");
  msweep->add_option("--points", v_points, "Number of equally spaced widths");
  msweep->add_option("--nodes", mopts.nodes, "Gauss-Legendre nodes on [0, umax]");
  msweep->add_option("--umax", mopts.u_max, "Truncation of the u axis");
  msweep->add_flag("--no-extrapolate", no_extrapolate, "Report raw truncated eigenvalues");
  add_output_flags(msweep, out);

  // time-check
  auto* tcheck = app.add_subcommand("time-check", "Compare the time-integrated current with the eigenvalue");
  tcheck->add_option("--varsigma", varsigma, "Dimensionless width varsigma >= 0");
  tcheck->add_option("--nodes", mopts.nodes, "Gauss-Legendre nodes on [0, umax]");
  tcheck->add_option("--umax", mopts.u_max, "Truncation of the u axis");
  add_output_flags(tcheck, out);

  // feasibility
  ApparatusSpec apparatus;
  auto* feas = app.add_subcommand("feasibility", "Dimensionless width of an apparatus and whether detection is feasible");
  feas->add_option("--mass", apparatus.mass, "Particle mass");
  feas->add_option("--sigma", apparatus.sigma_tilde, "Momentum precision sigma_tilde");
  feas->add_option("--time", apparatus.duration, "Observation time T");
  feas->add_option("--hbar", apparatus.hbar, "Reduced Planck constant");
  add_output_flags(feas, out);

  // selfcheck
  std::string fault;
  auto* self = app.add_subcommand("selfcheck", "Run all invariant and reproduction checks at reduced resolution");
  self->add_option("--inject-fault", fault, "Deliberately break a component (kernel-sign)")
      ->check(CLI::IsMember({"kernel-sign"}));
  self->add_option("--out", out.path, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  mopts.extrapolate_tail = !no_extrapolate;

  try {
    if (*ex_current) {
      const ExampleWidth w(s_single);
      const double j = scaled_effective_current(w);
      SweepResult one;
      one.rows.push_back({s_single, j, true, {}});
      ordered_json json{{"command", "example-current"},
                        {"s", s_single},
                        {"J_scaled", j},
                        {"converged", true},
                        {"ef_backflow", j < 0.0},
                        {"paper_refs", refs_example()}};
      emit(out, example_sweep_csv(one), json,
           "J_scaled(s=" + fixed(s_single) + ") = " + fixed(j, 10) +
               (j < 0.0 ? " (negative: effective backflow)" : " (non-negative: no effective backflow)"));
    } else if (*ex_sweep) {
      const std::vector<double> grid = linspace(s_min, s_max, s_points);
      const SweepResult sweep = example_sweep(grid, {});
      ordered_json json{{"command", "example-sweep"},
                        {"metadata", metadata_json(sweep)},
                        {"rows", sweep_rows_json(sweep, "s", "J_scaled")},
                        {"paper_refs", refs_example()}};
      std::size_t negative = 0;
      for (const auto& r : sweep.rows) negative += r.value < 0.0 ? 1 : 0;
      emit(out, example_sweep_csv(sweep), json,
           "example sweep: " + std::to_string(sweep.rows.size()) + " widths in [" + fixed(s_min) + ", " +
               fixed(s_max) + "], " + std::to_string(negative) + " with negative J_scaled");
    } else if (*crit) {
      const double s_star = critical_width(tol);
      ordered_json json{{"command", "critical-width"}, {"tol", tol}, {"s_critical", s_star}, {"paper_refs", refs_example()}};
      emit(out, "tol,s_critical\n" + csv_line({format_real(tol), format_real(s_star)}) + "\n", json,
           "critical width s* = " + fixed(s_star, 9) + " (J_scaled changes sign)");
    } else if (*maxb) {
      const EigenResult r = max_backflow(MaxflowWidth(varsigma), mopts);
      ordered_json json{{"command", "max-backflow"},
                        {"varsigma", varsigma},
                        {"delta_max", r.delta_max},
                        {"nodes", mopts.nodes},
                        {"umax", mopts.u_max},
                        {"extrapolated", mopts.extrapolate_tail},
                        {"raw_eigenvalue", r.primary.eigenvalue},
                        {"residual", r.primary.residual}};
      if (r.partner) {
        json["partner_nodes"] = r.partner->grid.size();
        json["partner_umax"] = r.partner->grid.hi();
        json["partner_eigenvalue"] = r.partner->eigenvalue;
      }
      if (r.resolution_shift) {
        json["resolution_shift"] = *r.resolution_shift;
        json["resolution_warning"] = r.resolution_warning;
      }
      json["paper_refs"] = refs_maxflow();
      const double ln = r.delta_max > 0.0 ? std::log(r.delta_max) : std::nan("");
      const std::string csv = "varsigma,delta_max,varsigma_sq,ln_delta_max,nodes,umax,residual\n" +
                              csv_line({format_real(varsigma), format_real(r.delta_max), format_real(varsigma * varsigma),
                                        format_real(ln), std::to_string(mopts.nodes), format_real(mopts.u_max),
                                        format_real(r.primary.residual)}) +
                              "\n";
      if (!eigvec_out.empty()) write_text_file(eigvec_out, eigenvector_csv(r.primary));
      std::string summary = "Delta_max(varsigma=" + fixed(varsigma) + ") = " + fixed(r.delta_max, 8) + " (nodes " +
                            std::to_string(mopts.nodes) + ", umax " + fixed(mopts.u_max) +
                            (mopts.extrapolate_tail ? ", tail-extrapolated; raw " + fixed(r.primary.eigenvalue, 8) : ", raw") +
                            ")";
      if (r.resolution_shift)
        summary += "; node doubling shift " + fixed(*r.resolution_shift, 3) + (r.resolution_warning ? " WARNING > 1e-4" : "");
      emit(out, csv, json, summary);
    } else if (*msweep) {
      const std::vector<double> grid = linspace(v_min, v_max, v_points);
      const SweepResult sweep = varsigma_sweep(grid, mopts);
      ordered_json json{{"command", "max-sweep"},
                        {"metadata", metadata_json(sweep)},
                        {"rows", sweep_rows_json(sweep, "varsigma", "delta_max")},
                        {"paper_refs", refs_maxflow()}};
      emit(out, varsigma_sweep_csv(sweep), json,
           "max sweep: " + std::to_string(sweep.rows.size()) + " widths in [" + fixed(v_min) + ", " + fixed(v_max) +
               "], Delta_max from " + fixed(sweep.rows.front().value) + " to " + fixed(sweep.rows.back().value));
    } else if (*tcheck) {
      const MaxflowWidth w(varsigma);
      const TruncatedSolution sol = solve_truncated(w, mopts.nodes, mopts.u_max);
      const double transfer = TimeResolvedCurrent(sol.grid, sol.phi, w).transfer();
      const double diff = transfer - sol.eigenvalue;
      ordered_json json{{"command", "time-check"}, {"varsigma", varsigma}, {"nodes", mopts.nodes},
                        {"umax", mopts.u_max},     {"eigenvalue", sol.eigenvalue},
                        {"transfer", transfer},    {"difference", diff},
                        {"paper_refs", refs_maxflow()}};
      emit(out,
           "varsigma,eigenvalue,transfer,difference\n" +
               csv_line({format_real(varsigma), format_real(sol.eigenvalue), format_real(transfer), format_real(diff)}) +
               "\n",
           json,
           "time check at varsigma=" + fixed(varsigma) + ": -int j dtau = " + fixed(transfer, 10) + ", lambda = " +
               fixed(sol.eigenvalue, 10) + ", difference " + fixed(diff, 3));
    } else if (*feas) {
      const Feasibility f = feasibility(apparatus);
      ordered_json json{{"command", "feasibility"}, {"mass", apparatus.mass}, {"sigma_tilde", apparatus.sigma_tilde},
                        {"duration", apparatus.duration}, {"hbar", apparatus.hbar}, {"varsigma", f.varsigma},
                        {"feasible", f.feasible}, {"paper_refs", refs_feasibility()}};
      emit(out,
           "mass,sigma_tilde,duration,hbar,varsigma,feasible\n" +
               csv_line({format_real(apparatus.mass), format_real(apparatus.sigma_tilde), format_real(apparatus.duration),
                         format_real(apparatus.hbar), format_real(f.varsigma), f.feasible ? "1" : "0"}) +
               "\n",
           json, "varsigma = " + fixed(f.varsigma) + ": " + (f.feasible ? "feasible" : "not feasible"));
    } else if (*self) {
      SelfcheckOptions so;
      so.inject_kernel_sign_fault = fault == "kernel-sign";
      const std::vector<CheckResult> results = run_selfcheck(so);
      const std::string report = format_report(results);
      if (!out.path.empty()) write_text_file(out.path, report);
      std::cout << report;
      for (const auto& r : results)
        if (!r.pass) return 3;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure in stage " << e.stage() << ": " << e.what() << '\n';
    return 3;
  }
  return 0;
}
