// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// percell: command-line front end for the obstacle-eigenvalue benchmarks and
// the corner/half-plane cell problems. Every run resolves its configuration
// from defaults, an optional key=value config file, and command-line flags
// (flags win), writes the fully resolved configuration next to its outputs,
// and can be replayed byte-identically from that file:
//
//   percell bench table2 --radii 0.07,0.08,0.09 --out results
//   percell --config results/bench_table2/config.txt
//
// The exit status is nonzero only for execution errors (bad usage, invalid
// parameters, I/O failure) — never for a failed scientific check; checks are
// reported in the artifacts.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percell/bench.hpp"
#include "percell/cell.hpp"
#include "percell/fem.hpp"
#include "percell/geometry.hpp"
#include "percell/io.hpp"
#include "percell/mesh.hpp"
#include "percell/series.hpp"
#include "percell/svg.hpp"

namespace {

using namespace percell;

constexpr double kPiLocal = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Run configuration: one flat bag of parameters shared by all subcommands.
// Field defaults equal the benchmark protocol (n_side=8, m_circle=32,
// inset=5e-4, levels=3, tol=1e-10).
// ---------------------------------------------------------------------------

struct RunConfig {
  // Geometry / placement.
  std::string branch = "adjacent";  // adjacent|opposite|cluster|opp_side|
                                    // side|endpoint|contact|empty
  double r = 0.08;
  std::vector<double> radii;  // table2/gap/scaling grids; empty = default
  double xi = 0.0;            // side-family abscissa
  double a = 1.5;             // corner-family horizontal offset / endpoint scale
  double b = 1.0;             // corner-family vertical offset
  double theta = kPiLocal / 4.0;  // contact-family angle

  // Discretization and solver protocol.
  int levels = 3;
  int n_side = 8;
  int m_circle = 32;
  double inset = 5e-4;
  double tol = 1e-10;

  // Cell-problem protocol.
  double R = 32.0;
  double density = 1.0;

  // Scan parameters.
  int theta_grid = 32;
  std::vector<double> b_values;  // half-plane series arguments; empty = default
  int extra_levels = 1;          // gap-scan refinement beyond the protocol

  // Execution.
  std::string out;  // output root; empty = $PERCELL_OUT or "percell-out"
  int jobs = 0;
  bool deterministic = true;  // zero the walltime column in CSV outputs
};

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_full(v[i]);
  }
  return s;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double x = std::stod(item, &pos);
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw std::runtime_error("bad number in list: '" + item + "'");
    v.push_back(x);
  }
  return v;
}

// Applies a parsed key=value file to the configuration. Unknown keys are an
// error so replays fail loudly instead of silently drifting.
void apply_key_values(const KeyValues& kv, RunConfig& cfg, std::string& command) {
  for (const auto& [key, value] : kv) {
    try {
      if (key == "command") command = value;
      else if (key == "branch") cfg.branch = value;
      else if (key == "r") cfg.r = std::stod(value);
      else if (key == "radii") cfg.radii = split_doubles(value);
      else if (key == "xi") cfg.xi = std::stod(value);
      else if (key == "a") cfg.a = std::stod(value);
      else if (key == "b") cfg.b = std::stod(value);
      else if (key == "theta") cfg.theta = std::stod(value);
      else if (key == "levels") cfg.levels = std::stoi(value);
      else if (key == "n_side") cfg.n_side = std::stoi(value);
      else if (key == "m_circle") cfg.m_circle = std::stoi(value);
      else if (key == "inset") cfg.inset = std::stod(value);
      else if (key == "tol") cfg.tol = std::stod(value);
      else if (key == "R") cfg.R = std::stod(value);
      else if (key == "density") cfg.density = std::stod(value);
      else if (key == "theta_grid") cfg.theta_grid = std::stoi(value);
      else if (key == "b_values") cfg.b_values = split_doubles(value);
      else if (key == "extra_levels") cfg.extra_levels = std::stoi(value);
      else if (key == "out") cfg.out = value;
      else if (key == "jobs") cfg.jobs = std::stoi(value);
      else if (key == "deterministic") cfg.deterministic = (value == "1" || value == "true");
      else throw std::runtime_error("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("bad value for config key '" + key + "': '" + value + "'");
    }
  }
}

KeyValues to_key_values(const RunConfig& cfg, const std::string& command) {
  KeyValues kv;
  kv.emplace_back("command", command);
  kv.emplace_back("branch", cfg.branch);
  kv.emplace_back("r", format_full(cfg.r));
  kv.emplace_back("radii", join_doubles(cfg.radii));
  kv.emplace_back("xi", format_full(cfg.xi));
  kv.emplace_back("a", format_full(cfg.a));
  kv.emplace_back("b", format_full(cfg.b));
  kv.emplace_back("theta", format_full(cfg.theta));
  kv.emplace_back("levels", std::to_string(cfg.levels));
  kv.emplace_back("n_side", std::to_string(cfg.n_side));
  kv.emplace_back("m_circle", std::to_string(cfg.m_circle));
  kv.emplace_back("inset", format_full(cfg.inset));
  kv.emplace_back("tol", format_full(cfg.tol));
  kv.emplace_back("R", format_full(cfg.R));
  kv.emplace_back("density", format_full(cfg.density));
  kv.emplace_back("theta_grid", std::to_string(cfg.theta_grid));
  kv.emplace_back("b_values", join_doubles(cfg.b_values));
  kv.emplace_back("extra_levels", std::to_string(cfg.extra_levels));
  kv.emplace_back("out", cfg.out);
  kv.emplace_back("jobs", std::to_string(cfg.jobs));
  kv.emplace_back("deterministic", cfg.deterministic ? "1" : "0");
  return kv;
}

std::string output_root(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("PERCELL_OUT"); env && *env) return env;
  return "percell-out";
}

// Output directory for one command, e.g. "bench.table2" ->
// <root>/bench_table2. Creates the directory.
std::string command_dir(const RunConfig& cfg, const std::string& command) {
  std::string leaf = command;
  for (char& c : leaf)
    if (c == '.') c = '_';
  std::filesystem::path dir = std::filesystem::path(output_root(cfg)) / leaf;
  std::filesystem::create_directories(dir);
  return dir.string();
}

void write_echo(const RunConfig& cfg, const std::string& command,
                const std::string& dir) {
  write_text_file(dir + "/config.txt", config_echo(to_key_values(cfg, command)));
}

BenchProtocol make_protocol(const RunConfig& cfg) {
  BenchProtocol proto;
  proto.n_side = cfg.n_side;
  proto.m_circle = cfg.m_circle;
  proto.inset = cfg.inset;
  proto.levels = cfg.levels;
  proto.eigen.tolerance = cfg.tol;
  proto.jobs = cfg.jobs;
  return proto;
}

Configuration build_configuration(const RunConfig& cfg) {
  if (cfg.branch == "adjacent") return make_branch_config(Branch::adjacent, cfg.r);
  if (cfg.branch == "opposite") return make_branch_config(Branch::opposite, cfg.r);
  if (cfg.branch == "cluster") return make_branch_config(Branch::cluster, cfg.r);
  if (cfg.branch == "opp_side") return make_branch_config(Branch::opp_side, cfg.r);
  if (cfg.branch == "side") return make_side_config(cfg.xi, cfg.r);
  if (cfg.branch == "endpoint") return make_endpoint_config(cfg.a, cfg.r);
  if (cfg.branch == "contact") {
    const auto [c1, c2] = contact_family(cfg.theta);
    return make_same_corner_config(c1, c2, cfg.r);
  }
  throw std::runtime_error("unknown branch '" + cfg.branch +
                           "' (expected adjacent, opposite, cluster, opp_side, "
                           "side, endpoint, contact, or empty)");
}

std::vector<BenchRecord> level_records(const std::string& geometry, double r,
                                       const std::vector<LevelRecord>& levels) {
  std::vector<BenchRecord> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    rows.push_back({geometry, r, static_cast<int>(i), levels[i].mesh.n_vertices,
                    levels[i].mesh.n_triangles, levels[i].lambda1,
                    levels[i].walltime_s});
  }
  return rows;
}

void write_records_csv(const std::vector<BenchRecord>& rows,
                       const std::string& path, bool deterministic) {
  std::ostringstream os;
  write_csv(rows, os, deterministic);
  write_text_file(path, os.str());
}

std::vector<double> uniform_theta_grid(int n) {
  std::vector<double> thetas;
  if (n < 2) n = 2;
  for (int i = 0; i < n; ++i)
    thetas.push_back(kPiLocal / 2.0 * static_cast<double>(i) /
                     static_cast<double>(n - 1));
  return thetas;
}

std::string check_line_text(const CheckLine& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-34s lhs=%.9f rhs=%.9f margin=%+.3e budget=%.3e %s",
                c.name.c_str(), c.lhs, c.rhs, c.margin, c.error_budget,
                check_status_name(c.status));
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommand runners. Each writes its artifacts plus config.txt into its own
// directory under the output root and prints a short summary to stdout.
// ---------------------------------------------------------------------------

int run_mesh(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "mesh");
  write_echo(cfg, "mesh", dir);

  PolygonDomain domain;
  if (cfg.branch == "empty") {
    domain = empty_square_domain(cfg.n_side);
  } else {
    const Configuration config = build_configuration(cfg);
    const ValidityReport validity = validate(config);
    std::printf("configuration: %s  containment margin %.6f  separation margin %.6f  %s\n",
                branch_name(config.label), validity.containment_margin,
                validity.separation_margin, validity.detail.c_str());
    if (!validity.valid) throw std::runtime_error("invalid configuration: " + validity.detail);
    domain = polygonize(config, cfg.n_side, cfg.m_circle, cfg.inset);
  }

  TriMesh mesh = triangulate(domain);
  for (int l = 0; l < cfg.levels; ++l) mesh = refine_red(mesh);
  const MeshStats st = stats(mesh);

  std::ostringstream text;
  export_text(mesh, text);
  write_text_file(dir + "/mesh.txt", text.str());
  write_text_file(dir + "/mesh.svg", svg_mesh(mesh));

  std::printf("mesh: %d vertices, %d triangles, min angle %.2f deg, max h %.4f\n",
              st.n_vertices, st.n_triangles, st.min_angle_deg, st.max_h);
  std::printf("wrote %s/mesh.txt and %s/mesh.svg\n", dir.c_str(), dir.c_str());
  return 0;
}

int run_solve(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "solve");
  write_echo(cfg, "solve", dir);

  EigenSolveSettings settings;
  settings.tolerance = cfg.tol;

  std::vector<LevelRecord> table;
  std::string geometry = cfg.branch;
  double r = cfg.r;
  if (cfg.branch == "empty") {
    table = lambda1_pipeline(empty_square_domain(cfg.n_side), cfg.levels, settings);
    r = 0.0;
  } else {
    const Configuration config = build_configuration(cfg);
    geometry = branch_name(config.label);
    table = lambda1(config, cfg.levels, settings, cfg.n_side, cfg.m_circle, cfg.inset);
  }

  const std::vector<BenchRecord> rows = level_records(geometry, r, table);
  write_records_csv(rows, dir + "/solve.csv", cfg.deterministic);

  std::printf("level  nodes  triangles     lambda1\n");
  for (const BenchRecord& row : rows)
    std::printf("%5d %6d %10d  %.9f\n", row.level, row.nodes, row.triangles, row.lambda1);
  std::printf("wrote %s/solve.csv\n", dir.c_str());
  return 0;
}

int run_bench_table1(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.table1");
  write_echo(cfg, "bench.table1", dir);

  const ConvergenceReport report = empty_square_convergence(cfg.levels, make_protocol(cfg));
  write_records_csv(report.rows, dir + "/table1.csv", cfg.deterministic);

  std::printf("empty-square convergence vs pi^2/2 = %.12f\n", report.reference);
  for (const BenchRecord& row : report.rows)
    std::printf("  level %d  nodes %5d  lambda1 %.9f\n", row.level, row.nodes, row.lambda1);
  std::printf("final relative error %.3e, successive error ratio %.3f, %s\n",
              report.final_rel_error, report.final_error_ratio,
              report.pass ? "pass" : "fail");
  write_text_file(dir + "/summary.txt",
                  "final_rel_error=" + format_sci(report.final_rel_error, 6) +
                      "\nfinal_error_ratio=" + format_fixed(report.final_error_ratio, 6) +
                      "\npass=" + (report.pass ? std::string("1") : std::string("0")) + "\n");
  return 0;
}

int run_bench_table2(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.table2");
  write_echo(cfg, "bench.table2", dir);

  std::vector<double> radii = cfg.radii.empty()
                                  ? std::vector<double>{0.07, 0.08, 0.09}
                                  : cfg.radii;
  const BranchTable table = branch_table(radii, make_protocol(cfg));
  write_records_csv(table.rows, dir + "/table2.csv", cfg.deterministic);

  std::string ordering_text;
  std::printf("branch table at the finest level:\n");
  std::printf("%8s %12s %12s %12s %12s  strict\n", "r", "adjacent", "opposite",
              "cluster", "opp_side");
  for (const OrderingRow& row : table.ordering) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "r=%.6g level=%d adjacent=%.9f opposite=%.9f cluster=%.9f opp_side=%.9f strict=%d\n",
                  row.r, row.level, row.adjacent, row.opposite, row.cluster,
                  row.opp_side, row.strict ? 1 : 0);
    ordering_text += buf;
    if (row.level == cfg.levels)
      std::printf("%8.6g %12.9f %12.9f %12.9f %12.9f  %s\n", row.r, row.adjacent,
                  row.opposite, row.cluster, row.opp_side, row.strict ? "yes" : "NO");
  }
  ordering_text += std::string("all_strict=") + (table.all_strict ? "1" : "0") + "\n";
  write_text_file(dir + "/ordering.txt", ordering_text);

  // Branch-comparison panel: finest-level eigenvalue against the radius.
  std::vector<PlotSeries> series(4);
  const char* names[4] = {"adjacent", "opposite", "cluster", "opp_side"};
  for (int i = 0; i < 4; ++i) series[static_cast<std::size_t>(i)].label = names[i];
  for (const OrderingRow& row : table.ordering) {
    if (row.level != cfg.levels) continue;
    series[0].points.push_back({row.r, row.adjacent});
    series[1].points.push_back({row.r, row.opposite});
    series[2].points.push_back({row.r, row.cluster});
    series[3].points.push_back({row.r, row.opp_side});
  }
  PlotOptions opts;
  opts.title = "first eigenvalue by obstacle placement";
  opts.x_label = "obstacle radius r";
  opts.y_label = "lambda_1";
  write_text_file(dir + "/branch_comparison.svg", svg_line_plot(series, opts));

  std::printf("strict ordering adjacent < opposite < cluster < opp_side: %s\n",
              table.all_strict ? "yes" : "NO");
  std::printf("wrote %s/table2.csv, ordering.txt, branch_comparison.svg\n", dir.c_str());
  return 0;
}

int run_bench_table3(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.table3");
  write_echo(cfg, "bench.table3", dir);

  const std::vector<double> thetas = uniform_theta_grid(cfg.theta_grid);
  const ContactReport report = contact_scan(thetas, cfg.r, make_protocol(cfg));
  write_records_csv(report.records, dir + "/table3.csv", cfg.deterministic);

  CsvTable rows;
  rows.header = {"theta", "a", "b", "lambda1"};
  std::vector<PlotSeries> series(1);
  series[0].label = "contact family";
  for (const ContactRow& row : report.rows) {
    rows.rows.push_back({format_fixed(row.theta, 6), format_fixed(row.a, 6),
                         format_fixed(row.b, 6), format_fixed(row.lambda1, 9)});
    series[0].points.push_back({row.theta, row.lambda1});
  }
  write_text_file(dir + "/contact_rows.csv", to_csv(rows));

  PlotOptions opts;
  opts.title = "same-corner contact family";
  opts.x_label = "theta";
  opts.y_label = "lambda_1";
  write_text_file(dir + "/contact_scan.svg", svg_line_plot(series, opts));

  std::printf("contact scan at r=%.6g over %zu angles\n", cfg.r, thetas.size());
  std::printf("minimum lambda1 %.9f at theta %.6f; adjacent reference %.9f; margin %.6f (%s)\n",
              report.min_lambda, report.min_theta, report.adjacent_reference,
              report.min_lambda - report.adjacent_reference,
              report.min_above_adjacent ? "above" : "NOT above");
  std::printf("wrote %s/table3.csv, contact_rows.csv, contact_scan.svg\n", dir.c_str());
  return 0;
}

int run_bench_gap(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.gap");
  write_echo(cfg, "bench.gap", dir);

  std::vector<double> radii = cfg.radii.empty()
                                  ? std::vector<double>{0.07, 0.08, 0.09}
                                  : cfg.radii;
  const GapReport report = gap_scan(radii, cfg.extra_levels, make_protocol(cfg));
  write_records_csv(report.records, dir + "/records.csv", cfg.deterministic);

  CsvTable rows;
  rows.header = {"r", "lambda_adjacent", "lambda_opposite", "gap", "positive"};
  std::vector<PlotSeries> series(1);
  series[0].label = "lambda_opposite - lambda_adjacent";
  for (const GapRow& row : report.rows) {
    rows.rows.push_back({format_fixed(row.r, 6), format_fixed(row.lambda_adjacent, 12),
                         format_fixed(row.lambda_opposite, 12),
                         format_sci(row.gap, 6), row.positive ? "1" : "0"});
    series[0].points.push_back({row.r, row.gap});
  }
  write_text_file(dir + "/gap.csv", to_csv(rows));

  PlotOptions opts;
  opts.title = "adjacent-vs-opposite eigenvalue gap";
  opts.x_label = "obstacle radius r";
  opts.y_label = "gap";
  write_text_file(dir + "/gap.svg", svg_line_plot(series, opts));

  for (const GapRow& row : report.rows)
    std::printf("r=%.6g  gap=%.6e  %s%s\n", row.r, row.gap,
                row.positive ? "positive" : "NEGATIVE",
                row.above_noise ? "" : " (below noise threshold)");
  std::printf("all positive: %s, increasing: %s\n",
              report.all_positive ? "yes" : "NO", report.increasing ? "yes" : "NO");
  std::printf("wrote %s/gap.csv, records.csv, gap.svg\n", dir.c_str());
  return 0;
}

void append_fit(const ScalingFit& fit, CsvTable& deltas, std::string& summary,
                std::vector<PlotSeries>& series, const std::string& label) {
  PlotSeries s;
  s.label = label;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    deltas.rows.push_back({label, format_fixed(fit.radii[i], 6),
                           format_sci(fit.deltas[i], 9)});
    s.points.push_back({fit.radii[i], fit.deltas[i]});
  }
  series.push_back(std::move(s));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-22s exponent=%.4f coefficient=%.6g rms_log_residual=%.3e\n",
                label.c_str(), fit.exponent, fit.coefficient, fit.rms_log_residual);
  summary += buf;
}

int run_bench_scaling(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.scaling");
  write_echo(cfg, "bench.scaling", dir);

  const BenchProtocol proto = make_protocol(cfg);
  const ScalingFit corner = scaling_fit(ScalingBranch::corner_one_hole, cfg.radii, 0.0, proto);
  const ScalingFit side = scaling_fit(ScalingBranch::side_center, cfg.radii, 0.0, proto);
  const SideRatioReport ratio = side_coefficient_ratio(proto);

  CsvTable deltas;
  deltas.header = {"family", "r", "delta_lambda"};
  std::string summary;
  std::vector<PlotSeries> series;
  append_fit(corner, deltas, summary, series, "corner_one_hole");
  append_fit(side, deltas, summary, series, "side_center");
  append_fit(ratio.at_half, deltas, summary, series, "side_xi=0.5");

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "side coefficient ratio xi=0 vs xi=0.5: %.4f (cos^2 prediction 2.0000)\n",
                ratio.ratio);
  summary += buf;
  write_text_file(dir + "/deltas.csv", to_csv(deltas));
  write_text_file(dir + "/fits.txt", summary);

  PlotOptions opts;
  opts.title = "small-radius eigenvalue shifts";
  opts.x_label = "obstacle radius r";
  opts.y_label = "lambda_1(r) - lambda_1(empty)";
  opts.log_x = true;
  opts.log_y = true;
  write_text_file(dir + "/scaling.svg", svg_line_plot(series, opts));

  std::fputs(summary.c_str(), stdout);
  std::printf("wrote %s/deltas.csv, fits.txt, scaling.svg\n", dir.c_str());
  return 0;
}

int run_bench_additivity(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "bench.additivity");
  write_echo(cfg, "bench.additivity", dir);

  const AdditivityReport report = additivity_check(cfg.radii, make_protocol(cfg));

  CsvTable deltas;
  deltas.header = {"family", "r", "delta_lambda"};
  std::string summary;
  std::vector<PlotSeries> series;
  append_fit(report.one_hole, deltas, summary, series, "corner_one_hole");
  append_fit(report.two_hole, deltas, summary, series, "corner_two_hole");
  append_fit(report.cluster, deltas, summary, series, "corner_cluster");

  char buf[512];
  std::snprintf(buf, sizeof buf,
                "two-hole/one-hole coefficient ratio: %.4f (%s; additive prediction 2)\n"
                "cluster/one-hole coefficient ratio: %.4f (%s exceed 2)\n"
                "asymptotic one-hole coefficient (pi^4/4) E(1): %.4f\n",
                report.ratio, report.ratio_ok ? "within [1.7, 2.3]" : "OUTSIDE [1.7, 2.3]",
                report.cluster_ratio, report.cluster_exceeds_two ? "does" : "does NOT",
                report.asymptotic_one_hole);
  summary += buf;
  write_text_file(dir + "/deltas.csv", to_csv(deltas));
  write_text_file(dir + "/additivity.txt", summary);

  std::fputs(summary.c_str(), stdout);
  std::printf("wrote %s/deltas.csv, additivity.txt\n", dir.c_str());
  return 0;
}

int run_cell_energy(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.energy");
  write_echo(cfg, "cell.energy", dir);

  CellSpec spec;
  spec.centers = {{cfg.a, cfg.b}};
  spec.datum = CellDatum::st;
  spec.truncation_radius = cfg.R;
  spec.mesh_density = cfg.density;
  spec.inset = cfg.inset;
  const CellResult result = solve_cell(spec);
  const double err = result.discretization_estimate + result.truncation_estimate;

  CsvTable table;
  table.header = {"a", "b", "R", "density", "energy", "error",
                  "farfield_coeff", "nodes", "triangles"};
  table.rows.push_back({format_fixed(cfg.a, 6), format_fixed(cfg.b, 6),
                        format_fixed(cfg.R, 3), format_fixed(cfg.density, 3),
                        format_fixed(result.energy, 9), format_sci(err, 3),
                        format_fixed(result.farfield_coeff, 9),
                        std::to_string(result.nodes),
                        std::to_string(result.triangles)});
  write_text_file(dir + "/energy.csv", to_csv(table));

  std::printf("corner-cell energy at (a, b) = (%.6g, %.6g), R = %.6g, density %.3g\n",
              cfg.a, cfg.b, cfg.R, cfg.density);
  std::printf("  energy %.9f +/- %.3e\n", result.energy, err);
  std::printf("  far-field coefficient %.9f (alt fit %.9f)\n", result.farfield_coeff,
              result.farfield_coeff_alt);
  std::printf("wrote %s/energy.csv\n", dir.c_str());
  return 0;
}

void append_identity_rows(const IdentityReport& rep, const std::string& kind,
                          CsvTable& table, std::string& checks) {
  auto row = [&](const char* name, double res, double res_coarse, double err) {
    table.rows.push_back({kind, format_fixed(rep.a, 6), format_fixed(rep.b, 6),
                          name, format_sci(res, 6), format_sci(res_coarse, 6),
                          format_sci(err, 6)});
    char buf[256];
    std::snprintf(buf, sizeof buf, "(%g, %g) %-10s residual %.3e vs estimate %.3e  %s\n",
                  rep.a, rep.b, name, std::fabs(res), err,
                  std::fabs(res) <= err ? "pass" : "fail");
    checks += buf;
  };
  row("energy", rep.res_energy, rep.res_energy_coarse, rep.err_energy);
  row("dy", rep.y.res_d, rep.y.res_d_coarse, rep.y.err_d);
  row("recip_y", rep.y.res_recip, rep.y.res_recip_coarse, rep.y.err_recip);
  if (rep.has_x) {
    row("dx", rep.x.res_d, rep.x.res_d_coarse, rep.x.err_d);
    row("recip_x", rep.x.res_recip, rep.x.res_recip_coarse, rep.x.err_recip);
  }
}

int run_cell_identities(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.identities");
  write_echo(cfg, "cell.identities", dir);

  CsvTable table;
  table.header = {"kind", "a", "b", "identity", "residual", "residual_coarse",
                  "error_estimate"};
  std::string checks;

  for (const double a : {1.0, 1.5, 2.0}) {
    const IdentityReport rep = identity_residuals(a, cfg.density, cfg.R);
    append_identity_rows(rep, "one_hole", table, checks);
  }
  const double pairs[3][2] = {{1.0, 1.0}, {2.0, 1.0}, {1.5, 1.5}};
  for (const auto& ab : pairs) {
    const IdentityReport rep =
        general_identity_residuals(ab[0], ab[1], cfg.density, cfg.R);
    append_identity_rows(rep, "general", table, checks);
  }

  write_text_file(dir + "/identities.csv", to_csv(table));
  write_text_file(dir + "/checks.txt", checks);
  std::fputs(checks.c_str(), stdout);
  std::printf("wrote %s/identities.csv, checks.txt\n", dir.c_str());
  return 0;
}

int run_cell_threshold(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.threshold");
  write_echo(cfg, "cell.threshold", dir);

  const ThresholdReport report = threshold_check(cfg.density);
  std::string text;
  for (const CheckLine& line : report.checks) text += check_line_text(line) + "\n";
  text += std::string("analytic route: ") + (report.analytic_ok ? "pass" : "fail") + "\n";
  text += std::string("numeric route: ") + (report.numeric_ok ? "pass" : "fail") + "\n";
  write_text_file(dir + "/threshold.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/threshold.txt\n", dir.c_str());
  return 0;
}

int run_cell_jinf(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.jinf");
  write_echo(cfg, "cell.jinf", dir);

  const double closed = jinf_closed_form();
  const double series = jinf_series_accurate();
  std::string text;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "tangent half-plane energy (closed form pi*(pi^2/3 - 1)): %.15f\n"
                "series evaluation: %.15f\n"
                "difference: %.3e (%s at 1e-12)\n",
                closed, series, std::fabs(closed - series),
                std::fabs(closed - series) <= 1e-12 ? "agrees" : "DISAGREES");
  text += buf;
  text += "partial sums:\n";
  for (const std::int64_t terms : {10LL, 100LL, 1000LL, 10000LL, 100000LL}) {
    std::snprintf(buf, sizeof buf, "  %8lld terms: %.12f\n",
                  static_cast<long long>(terms), jinf_partial_series(terms));
    text += buf;
  }
  write_text_file(dir + "/jinf.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/jinf.txt\n", dir.c_str());
  return 0;
}

int run_cell_jhp(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.jhp");
  write_echo(cfg, "cell.jhp", dir);

  std::vector<double> bs = cfg.b_values.empty()
                               ? std::vector<double>{1.0001, 1.1, 1.5, 2.0, 4.0}
                               : cfg.b_values;
  CsvTable table;
  table.header = {"b", "J_hp", "lower_bound", "above_2pi"};
  std::string text;
  for (const double b : bs) {
    const double value = jhp_series(b);
    const double lower = jhp_lower_bound(b);
    table.rows.push_back({format_full(b), format_fixed(value, 12),
                          format_fixed(lower, 12),
                          value > 2.0 * kPiLocal ? "1" : "0"});
    char buf[256];
    std::snprintf(buf, sizeof buf, "b=%-8g J_hp=%.12f lower bound %.12f %s\n", b,
                  value, lower, value > 2.0 * kPiLocal ? "(> 2 pi)" : "(NOT > 2 pi)");
    text += buf;
  }
  const double tangent_gap = std::fabs(jhp_series(1.0001) - jinf_closed_form());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "tangent-limit gap |J_hp(1.0001) - J_inf| = %.3e (%s at 1e-3)\n",
                tangent_gap, tangent_gap <= 1e-3 ? "within" : "OUTSIDE");
  text += buf;
  write_text_file(dir + "/jhp.csv", to_csv(table));
  write_text_file(dir + "/jhp.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/jhp.csv, jhp.txt\n", dir.c_str());
  return 0;
}

int run_cell_competitor(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.competitor");
  write_echo(cfg, "cell.competitor", dir);

  const CompetitorEnergy result = competitor_energy();
  const double comparison = kPiLocal * (3.0 + 2.0 * std::sqrt(2.0));
  std::string text;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "explicit competitor energy 55/18 + 275 pi/64\n"
                "  reference:   %.15f\n"
                "  closed form: %.15f (diff %.3e, %s at 1e-12)\n"
                "  quadrature:  %.15f (diff %.3e, %s at 1e-8)\n"
                "  omitted near-origin pocket: %.9f\n"
                "  comparison constant pi (3 + 2 sqrt 2) = %.9f exceeds it by %.6f\n",
                result.reference, result.closed_form,
                std::fabs(result.closed_form - result.reference),
                std::fabs(result.closed_form - result.reference) <= 1e-12 ? "agrees" : "DISAGREES",
                result.quadrature, std::fabs(result.quadrature - result.reference),
                std::fabs(result.quadrature - result.reference) <= 1e-8 ? "agrees" : "DISAGREES",
                result.pocket, comparison, comparison - result.reference);
  text += buf;
  write_text_file(dir + "/competitor.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/competitor.txt\n", dir.c_str());
  return 0;
}

int run_cell_gamma_k(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "cell.gamma_k");
  write_echo(cfg, "cell.gamma-k", dir);

  const GammaKReport report = gamma_K_estimate(cfg.density, cfg.R);
  std::string text;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "wall-coefficient estimate (tangent half-plane solve, doubled)\n"
                "  M_K = %.9f +/- %.3e\n"
                "  closed-form comparison 2 J_inf = %.9f (relative gap %.3e)\n"
                "  Gamma_K = (pi^2/4) M_K = %.9f +/- %.3e (positive: %s)\n",
                report.m_k.value, report.m_k.error, report.two_jinf, report.rel_gap,
                report.gamma_k.value, report.gamma_k.error,
                report.gamma_k.value > 0 ? "yes" : "NO");
  text += buf;
  write_text_file(dir + "/gamma_k.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/gamma_k.txt\n", dir.c_str());
  return 0;
}

int run_report(const RunConfig& cfg) {
  const std::string dir = command_dir(cfg, "report");
  write_echo(cfg, "report", dir);

  std::string text = "aggregate check summary\n=======================\n\n";
  char buf[512];

  // Exact constants (fast, no meshes).
  const double jinf = jinf_closed_form();
  const double series = jinf_series_accurate();
  std::snprintf(buf, sizeof buf, "[%s] tangent energy closed form vs series: %.3e\n",
                std::fabs(jinf - series) <= 1e-12 ? "pass" : "fail",
                std::fabs(jinf - series));
  text += buf;

  const CompetitorEnergy comp = competitor_energy();
  std::snprintf(buf, sizeof buf, "[%s] competitor closed form vs reference: %.3e\n",
                std::fabs(comp.closed_form - comp.reference) <= 1e-12 ? "pass" : "fail",
                std::fabs(comp.closed_form - comp.reference));
  text += buf;
  std::snprintf(buf, sizeof buf, "[%s] competitor quadrature vs reference: %.3e\n",
                std::fabs(comp.quadrature - comp.reference) <= 1e-8 ? "pass" : "fail",
                std::fabs(comp.quadrature - comp.reference));
  text += buf;

  const double a0 = coercive_A0();
  const double b0 = coercive_B0();
  const bool coercive_ok =
      std::fabs(a0 - 2.0 * std::sqrt(2.0) / 3.0) <= 1e-12 &&
      std::fabs(b0 - (std::sqrt(2.0) - 0.5 - kPiLocal / 4.0)) <= 1e-12;
  std::snprintf(buf, sizeof buf, "[%s] coercive constants A0 = %.12f, B0 = %.12f\n",
                coercive_ok ? "pass" : "fail", a0, b0);
  text += buf;

  // Half-plane series inequalities.
  bool jhp_ok = std::fabs(jhp_series(1.0001) - jinf) <= 1e-3;
  for (const double b : {1.1, 1.5, 2.0, 4.0}) jhp_ok = jhp_ok && jhp_series(b) > 2.0 * kPiLocal;
  std::snprintf(buf, sizeof buf, "[%s] half-plane series: > 2 pi and tangent limit\n",
                jhp_ok ? "pass" : "fail");
  text += buf;

  // Cell solves (meshed; minutes at density 1).
  const ThresholdReport threshold = threshold_check(cfg.density);
  for (const CheckLine& line : threshold.checks)
    text += std::string("[") + check_status_name(line.status) + "] " + line.name + "\n";

  const GammaKReport gamma = gamma_K_estimate(cfg.density, cfg.R);
  std::snprintf(buf, sizeof buf, "[%s] wall coefficient vs 2 J_inf: rel gap %.3e\n",
                gamma.rel_gap <= 0.02 ? "pass" : "fail", gamma.rel_gap);
  text += buf;

  // Benchmark artifacts already on disk (produced by earlier bench runs).
  text += "\nbenchmark artifacts under " + output_root(cfg) + ":\n";
  bool any = false;
  for (const char* name :
       {"bench_table1/table1.csv", "bench_table2/table2.csv", "bench_table3/table3.csv",
        "bench_gap/gap.csv", "bench_scaling/fits.txt", "bench_additivity/additivity.txt"}) {
    const std::filesystem::path p = std::filesystem::path(output_root(cfg)) / name;
    if (std::filesystem::exists(p)) {
      text += "  " + p.string() + "\n";
      any = true;
    }
  }
  if (!any) text += "  (none found; run the bench subcommands to produce them)\n";

  write_text_file(dir + "/report.txt", text);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/report.txt\n", dir.c_str());
  return 0;
}

int dispatch(const std::string& command, const RunConfig& cfg) {
  if (command == "mesh") return run_mesh(cfg);
  if (command == "solve") return run_solve(cfg);
  if (command == "bench.table1") return run_bench_table1(cfg);
  if (command == "bench.table2") return run_bench_table2(cfg);
  if (command == "bench.table3") return run_bench_table3(cfg);
  if (command == "bench.gap") return run_bench_gap(cfg);
  if (command == "bench.scaling") return run_bench_scaling(cfg);
  if (command == "bench.additivity") return run_bench_additivity(cfg);
  if (command == "cell.energy") return run_cell_energy(cfg);
  if (command == "cell.identities") return run_cell_identities(cfg);
  if (command == "cell.threshold") return run_cell_threshold(cfg);
  if (command == "cell.jinf") return run_cell_jinf(cfg);
  if (command == "cell.jhp") return run_cell_jhp(cfg);
  if (command == "cell.competitor") return run_cell_competitor(cfg);
  if (command == "cell.gamma-k") return run_cell_gamma_k(cfg);
  if (command == "report") return run_report(cfg);
  throw std::runtime_error("unknown command '" + command + "'");
}

// Registers the shared flag set on one (sub)command. Every leaf accepts the
// full set so `--config` replays and flag overrides behave uniformly.
void add_common_options(CLI::App* app, RunConfig& cfg, std::string& config_path) {
  app->add_option("--config", config_path,
                  "key=value config file; flags override file values");
  app->add_option("--branch", cfg.branch,
                  "geometry family: adjacent|opposite|cluster|opp_side|side|"
                  "endpoint|contact|empty")
      ->capture_default_str();
  app->add_option("--r", cfg.r, "obstacle radius")->capture_default_str();
  app->add_option("--radii", cfg.radii, "comma-separated radius grid")
      ->delimiter(',');
  app->add_option("--xi", cfg.xi, "side-family abscissa")->capture_default_str();
  app->add_option("--a", cfg.a, "corner-family horizontal offset (>= 1)")
      ->capture_default_str();
  app->add_option("--b", cfg.b, "corner-family vertical offset (>= 1)")
      ->capture_default_str();
  app->add_option("--theta", cfg.theta, "contact-family angle in [0, pi/2]")
      ->capture_default_str();
  app->add_option("--levels", cfg.levels, "red-refinement levels")
      ->capture_default_str();
  app->add_option("--n-side", cfg.n_side, "square-side segments")
      ->capture_default_str();
  app->add_option("--m-circle", cfg.m_circle, "circle polygon vertices")
      ->capture_default_str();
  app->add_option("--inset", cfg.inset, "inward geometric inset")
      ->capture_default_str();
  app->add_option("--tol", cfg.tol, "eigensolver tolerance")->capture_default_str();
  app->add_option("--R", cfg.R, "cell-problem truncation radius")
      ->capture_default_str();
  app->add_option("--density", cfg.density, "cell-mesh density multiplier")
      ->capture_default_str();
  app->add_option("--theta-grid", cfg.theta_grid, "contact-scan grid size")
      ->capture_default_str();
  app->add_option("--b-values", cfg.b_values,
                  "comma-separated arguments for the half-plane series")
      ->delimiter(',');
  app->add_option("--extra-levels", cfg.extra_levels,
                  "gap-scan refinement beyond the protocol")
      ->capture_default_str();
  app->add_option("--out", cfg.out,
                  "output root (default $PERCELL_OUT or percell-out)");
  app->add_option("--jobs", cfg.jobs, "work-queue width (0 = all cores)")
      ->capture_default_str();
  app->add_flag("--deterministic,!--no-deterministic", cfg.deterministic,
                "zero the walltime column in CSV outputs")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;
  std::string file_command;

  // First pass: locate --config so file values become the pre-parse state
  // (command-line flags then override them).
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      config_path = arg.substr(9);
  }
  if (!config_path.empty()) {
    try {
      apply_key_values(parse_key_values(read_text_file(config_path)), cfg,
                       file_command);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "percell: %s\n", e.what());
      return 1;
    }
  }

  CLI::App app{
      "percell: obstacle-eigenvalue benchmarks and corner-cell problems"};
  app.require_subcommand(0, 1);
  add_common_options(&app, cfg, config_path);

  std::string selected;
  auto leaf = [&](CLI::App* parent, const std::string& name,
                  const std::string& desc, const std::string& command) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    add_common_options(sub, cfg, config_path);
    sub->callback([&selected, command] { selected = command; });
    return sub;
  };

  leaf(&app, "mesh", "triangulate a configuration; emit mesh.txt and mesh.svg",
       "mesh");
  leaf(&app, "solve", "per-level first-eigenvalue table for one configuration",
       "solve");

  CLI::App* bench = app.add_subcommand("bench", "benchmark table experiments");
  bench->require_subcommand(1);
  leaf(bench, "table1", "empty-square convergence", "bench.table1");
  leaf(bench, "table2", "four-branch placement table and strict ordering",
       "bench.table2");
  leaf(bench, "table3", "same-corner contact-family scan", "bench.table3");
  leaf(bench, "gap", "adjacent-vs-opposite gap scan", "bench.gap");
  leaf(bench, "scaling", "small-radius scaling-law fits", "bench.scaling");
  leaf(bench, "additivity", "two-hole coefficient additivity check",
       "bench.additivity");

  CLI::App* cell = app.add_subcommand("cell", "corner and half-plane cell problems");
  cell->require_subcommand(1);
  leaf(cell, "energy", "one corner-cell energy with error estimates",
       "cell.energy");
  leaf(cell, "identities", "exact-identity residual suite", "cell.identities");
  leaf(cell, "threshold", "threshold inequality report", "cell.threshold");
  leaf(cell, "jinf", "tangent half-plane energy: closed form vs series",
       "cell.jinf");
  leaf(cell, "jhp", "separated half-plane energy series", "cell.jhp");
  leaf(cell, "competitor", "explicit competitor energy: closed form vs quadrature",
       "cell.competitor");
  leaf(cell, "gamma-k", "wall-coefficient estimate", "cell.gamma-k");

  leaf(&app, "report", "aggregate pass/fail summary of the check suite",
       "report");

  CLI11_PARSE(app, argc, argv);

  std::string command = !selected.empty() ? selected : file_command;
  if (command.empty()) {
    std::fprintf(stderr, "percell: no command given (pass a subcommand or a "
                         "--config file with a command= line)\n%s\n",
                 app.help().c_str());
    return 1;
  }

  try {
    return dispatch(command, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "percell: %s\n", e.what());
    return 1;
  }
}
