// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "percell/cell.hpp"
#include "percell/fem.hpp"
#include "percell/mesh.hpp"

namespace percell {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Runs `count` independent jobs over a work-stealing index queue. Results
/// must be written to preallocated slots so assembly order never depends on
/// completion order. The first exception is rethrown after all workers join.
void run_jobs(int jobs, int count, const std::function<void(int)>& work) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        if (failed.load()) return;
        try {
          work(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<BenchRecord> to_records(const std::string& geometry, double r,
                                    const std::vector<LevelRecord>& levels) {
  std::vector<BenchRecord> rows;
  rows.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    BenchRecord rec;
    rec.geometry = geometry;
    rec.r = r;
    rec.level = static_cast<int>(l);
    rec.nodes = levels[l].mesh.n_vertices;
    rec.triangles = levels[l].mesh.n_triangles;
    rec.lambda1 = levels[l].lambda1;
    rec.walltime_s = levels[l].walltime_s;
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<LevelRecord> run_config(const Configuration& config, int levels,
                                    const BenchProtocol& proto) {
  return lambda1(config, levels, proto.eigen, proto.n_side, proto.m_circle,
                 proto.inset);
}

std::vector<LevelRecord> run_empty(int levels, const BenchProtocol& proto) {
  return lambda1_pipeline(empty_square_domain(proto.n_side), levels,
                          proto.eigen);
}

/// lambda at the finest level, optionally Richardson-extrapolated over the
/// last two levels (error ~ C h^2 and red refinement halves h, so
/// lambda_ext = lambda_L + (lambda_L - lambda_{L-1}) / 3).
double headline_lambda(const std::vector<LevelRecord>& levels,
                       bool richardson) {
  const double lam = levels.back().lambda1;
  if (!richardson || levels.size() < 2) return lam;
  const double prev = levels[levels.size() - 2].lambda1;
  return lam + (lam - prev) / 3.0;
}

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LogLogFit fit_log_log(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("scaling fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  LogLogFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e =
        std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
    ss += e * e;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

const char* scaling_branch_name(ScalingBranch b) {
  switch (b) {
    case ScalingBranch::corner_one_hole: return "corner";
    case ScalingBranch::side_center: return "side";
    case ScalingBranch::side_at: return "side_at";
    case ScalingBranch::corner_two_hole: return "adjacent";
    case ScalingBranch::corner_cluster: return "cluster";
  }
  return "?";
}

bool is_side_family(ScalingBranch b) {
  return b == ScalingBranch::side_center || b == ScalingBranch::side_at;
}

Configuration scaling_config(ScalingBranch b, double r, double xi) {
  switch (b) {
    case ScalingBranch::corner_one_hole: return make_endpoint_config(1.0, r);
    case ScalingBranch::side_center: return make_side_config(0.0, r);
    case ScalingBranch::side_at: return make_side_config(xi, r);
    case ScalingBranch::corner_two_hole:
      return make_branch_config(Branch::adjacent, r);
    case ScalingBranch::corner_cluster:
      return make_branch_config(Branch::cluster, r);
  }
  throw std::invalid_argument("unknown scaling branch");
}

}  // namespace

void write_csv(const std::vector<BenchRecord>& rows, std::ostream& os,
               bool zero_walltime) {
  os << "geometry,r,level,nodes,triangles,lambda1,walltime_s\n";
  char line[256];
  for (const auto& rec : rows) {
    std::snprintf(line, sizeof line, "%s,%.6g,%d,%d,%d,%.9f,%.6f\n",
                  rec.geometry.c_str(), rec.r, rec.level, rec.nodes,
                  rec.triangles, rec.lambda1,
                  zero_walltime ? 0.0 : rec.walltime_s);
    os << line;
  }
}

ConvergenceReport empty_square_convergence(int levels,
                                           const BenchProtocol& proto) {
  if (levels < 2) {
    throw std::invalid_argument("empty_square_convergence requires levels >= 2");
  }
  ConvergenceReport report;
  report.reference = 0.5 * kPi * kPi;
  const auto table = run_empty(levels, proto);
  report.rows = to_records("empty", 0.0, table);

  report.monotone_decreasing = true;
  for (std::size_t l = 1; l < table.size(); ++l) {
    if (!(table[l].lambda1 < table[l - 1].lambda1)) {
      report.monotone_decreasing = false;
    }
  }
  const double err_last = table.back().lambda1 - report.reference;
  const double err_prev = table[table.size() - 2].lambda1 - report.reference;
  report.final_rel_error = std::abs(err_last) / report.reference;
  report.final_error_ratio = err_prev / err_last;
  report.pass = report.monotone_decreasing && report.final_rel_error < 0.015;
  return report;
}

BranchTable branch_table(const std::vector<double>& radii,
                         const BenchProtocol& proto) {
  const std::array<Branch, 4> branches{Branch::adjacent, Branch::opposite,
                                       Branch::cluster, Branch::opp_side};
  const int count = static_cast<int>(radii.size() * branches.size());
  std::vector<std::vector<LevelRecord>> results(
      static_cast<std::size_t>(count));
  run_jobs(proto.jobs, count, [&](int i) {
    const std::size_t bi = static_cast<std::size_t>(i) / radii.size();
    const std::size_t ri = static_cast<std::size_t>(i) % radii.size();
    results[static_cast<std::size_t>(i)] =
        run_config(make_branch_config(branches[bi], radii[ri]), proto.levels,
                   proto);
  });

  BranchTable table;
  for (std::size_t bi = 0; bi < branches.size(); ++bi) {
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const auto rows = to_records(branch_name(branches[bi]), radii[ri],
                                   results[bi * radii.size() + ri]);
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  }

  auto lambda_at = [&](std::size_t bi, std::size_t ri, int level) {
    return results[bi * radii.size() + ri][static_cast<std::size_t>(level)]
        .lambda1;
  };
  table.all_strict = true;
  for (const int level : {proto.levels, proto.levels - 1}) {
    if (level < 0) continue;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      OrderingRow row;
      row.r = radii[ri];
      row.level = level;
      row.adjacent = lambda_at(0, ri, level);
      row.opposite = lambda_at(1, ri, level);
      row.cluster = lambda_at(2, ri, level);
      row.opp_side = lambda_at(3, ri, level);
      row.strict = row.adjacent < row.opposite &&
                   row.opposite < row.cluster && row.cluster < row.opp_side;
      if (level == proto.levels && !row.strict) table.all_strict = false;
      table.ordering.push_back(row);
    }
  }
  return table;
}

GapReport gap_scan(const std::vector<double>& radii, int extra_levels,
                   const BenchProtocol& proto) {
  const int levels = proto.levels + std::max(0, extra_levels);
  const int count = static_cast<int>(2 * radii.size());
  std::vector<std::vector<LevelRecord>> results(
      static_cast<std::size_t>(count));
  run_jobs(proto.jobs, count, [&](int i) {
    const Branch b = (i % 2 == 0) ? Branch::adjacent : Branch::opposite;
    const double r = radii[static_cast<std::size_t>(i) / 2];
    results[static_cast<std::size_t>(i)] =
        run_config(make_branch_config(b, r), levels, proto);
  });

  GapReport report;
  report.all_positive = true;
  report.increasing = true;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const auto& adj = results[2 * ri];
    const auto& opp = results[2 * ri + 1];
    GapRow row;
    row.r = radii[ri];
    row.lambda_adjacent = adj.back().lambda1;
    row.lambda_opposite = opp.back().lambda1;
    row.gap = row.lambda_opposite - row.lambda_adjacent;
    row.positive = row.gap > 0.0;
    row.above_noise = row.gap > 10.0 * proto.eigen.tolerance;
    if (!row.positive) report.all_positive = false;
    if (ri > 0 && !(row.gap > report.rows.back().gap)) {
      report.increasing = false;
    }
    report.rows.push_back(row);

    const auto arows = to_records("adjacent", radii[ri], adj);
    const auto orows = to_records("opposite", radii[ri], opp);
    report.records.insert(report.records.end(), arows.begin(), arows.end());
    report.records.insert(report.records.end(), orows.begin(), orows.end());
  }
  return report;
}

std::vector<double> default_theta_grid() {
  std::vector<double> thetas(32);
  for (int i = 0; i < 32; ++i) {
    thetas[static_cast<std::size_t>(i)] = (kPi / 2.0) * i / 31.0;
  }
  return thetas;
}

ContactReport contact_scan(const std::vector<double>& thetas, double r,
                           const BenchProtocol& proto) {
  const int count = static_cast<int>(thetas.size()) + 1;
  std::vector<std::vector<LevelRecord>> results(
      static_cast<std::size_t>(count));
  run_jobs(proto.jobs, count, [&](int i) {
    if (i == count - 1) {
      results[static_cast<std::size_t>(i)] =
          run_config(make_branch_config(Branch::adjacent, r), proto.levels,
                     proto);
      return;
    }
    const auto [c1, c2] = contact_family(thetas[static_cast<std::size_t>(i)]);
    results[static_cast<std::size_t>(i)] =
        run_config(make_same_corner_config(c1, c2, r), proto.levels, proto);
  });

  ContactReport report;
  report.adjacent_reference = results.back().back().lambda1;
  report.min_lambda = std::numeric_limits<double>::infinity();
  char label[64];
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    const auto [c1, c2] = contact_family(thetas[ti]);
    ContactRow row;
    row.theta = thetas[ti];
    row.a = c1.a;
    row.b = c2.b;
    row.lambda1 = results[ti].back().lambda1;
    report.rows.push_back(row);
    if (row.lambda1 < report.min_lambda) {
      report.min_lambda = row.lambda1;
      report.min_theta = row.theta;
    }
    std::snprintf(label, sizeof label, "contact_theta=%.6f", thetas[ti]);
    const auto rows = to_records(label, r, results[ti]);
    report.records.insert(report.records.end(), rows.begin(), rows.end());
  }
  report.min_above_adjacent = report.min_lambda > report.adjacent_reference;
  return report;
}

/// Quality triangulation graded toward `focus` (a tangency point): the raw
/// constrained Delaunay under-resolves the inset-wide tangency gap (sliver
/// angles ~ inset / wall-segment length), which floors the eigensolver
/// residual and biases the small-radius deltas. The same size field is
/// applied to the matching empty reference so the discretization bias of the
/// pair still cancels in the delta.
TriangulateOptions graded_options(Point2 focus, double r) {
  TriangulateOptions options;
  options.quality = true;
  options.min_angle_deg = 28.0;
  options.size_field = [focus, r](Point2 p) {
    return std::min(0.15, std::max(0.35 * dist(p, focus), r / 3.0));
  };
  return options;
}

ScalingFit scaling_fit(ScalingBranch branch, std::vector<double> radii,
                       double xi, const BenchProtocol& proto) {
  const bool side = is_side_family(branch);
  if (radii.empty()) {
    radii = side ? std::vector<double>{0.012, 0.017, 0.024, 0.034}
                 : std::vector<double>{0.05, 0.06, 0.07, 0.085, 0.1};
  }
  if (radii.size() < 4) {
    throw std::invalid_argument("scaling_fit requires at least 4 radii");
  }
  const int levels = 3;
  const bool richardson = side;

  ScalingFit fit;
  fit.branch = scaling_branch_name(branch);
  if (branch == ScalingBranch::side_at) {
    char label[48];
    std::snprintf(label, sizeof label, "side_xi=%.4f", xi);
    fit.branch = label;
  }
  fit.radii = radii;

  const int n = static_cast<int>(radii.size());
  std::vector<std::vector<LevelRecord>> hole_results(radii.size());

  if (side) {
    // Per-radius graded meshes with a matched graded empty reference.
    std::vector<std::vector<LevelRecord>> ref_results(radii.size());
    run_jobs(proto.jobs, 2 * n, [&](int i) {
      const std::size_t ri = static_cast<std::size_t>(i / 2);
      const double r = radii[ri];
      const Configuration config = scaling_config(branch, r, xi);
      const TriangulateOptions options = graded_options(config.hole1.center, r);
      if (i % 2 == 0) {
        hole_results[ri] = lambda1_pipeline(
            polygonize(config, proto.n_side, proto.m_circle, proto.inset),
            levels, proto.eigen, options);
      } else {
        ref_results[ri] = lambda1_pipeline(empty_square_domain(proto.n_side),
                                           levels, proto.eigen, options);
      }
    });
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double delta = headline_lambda(hole_results[ri], richardson) -
                           headline_lambda(ref_results[ri], richardson);
      if (!(delta > 0.0)) {
        throw std::runtime_error(
            "scaling_fit: nonpositive eigenvalue shift against the empty "
            "reference; radii too small for this protocol");
      }
      fit.deltas.push_back(delta);
      const auto rows = to_records(fit.branch, radii[ri], hole_results[ri]);
      fit.records.insert(fit.records.end(), rows.begin(), rows.end());
      const auto refs =
          to_records("empty_graded", radii[ri], ref_results[ri]);
      fit.records.insert(fit.records.end(), refs.begin(), refs.end());
    }
  } else {
    // Raw benchmark protocol with one shared empty reference.
    std::vector<LevelRecord> empty_result;
    run_jobs(proto.jobs, n + 1, [&](int i) {
      if (i == n) {
        empty_result = run_empty(levels, proto);
        return;
      }
      hole_results[static_cast<std::size_t>(i)] = run_config(
          scaling_config(branch, radii[static_cast<std::size_t>(i)], xi),
          levels, proto);
    });
    const double reference = headline_lambda(empty_result, richardson);
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double delta =
          headline_lambda(hole_results[ri], richardson) - reference;
      if (!(delta > 0.0)) {
        throw std::runtime_error(
            "scaling_fit: nonpositive eigenvalue shift against the empty "
            "reference; radii too small for this protocol");
      }
      fit.deltas.push_back(delta);
      const auto rows = to_records(fit.branch, radii[ri], hole_results[ri]);
      fit.records.insert(fit.records.end(), rows.begin(), rows.end());
    }
    const auto empty_rows = to_records("empty", 0.0, empty_result);
    fit.records.insert(fit.records.end(), empty_rows.begin(), empty_rows.end());
  }

  const LogLogFit ls = fit_log_log(radii, fit.deltas);
  fit.exponent = ls.slope;
  fit.coefficient = std::exp(ls.intercept);
  fit.rms_log_residual = ls.rms;
  return fit;
}

SideRatioReport side_coefficient_ratio(const BenchProtocol& proto) {
  SideRatioReport report;
  report.at_center = scaling_fit(ScalingBranch::side_center, {}, 0.0, proto);
  report.at_half = scaling_fit(ScalingBranch::side_at, {}, 0.5, proto);
  report.ratio = report.at_center.coefficient / report.at_half.coefficient;
  report.within_15_percent = std::abs(report.ratio - 2.0) <= 0.15 * 2.0;
  return report;
}

AdditivityReport additivity_check(std::vector<double> radii,
                                  const BenchProtocol& proto) {
  AdditivityReport report;
  report.one_hole =
      scaling_fit(ScalingBranch::corner_one_hole, radii, 0.0, proto);
  report.two_hole =
      scaling_fit(ScalingBranch::corner_two_hole, radii, 0.0, proto);
  report.cluster =
      scaling_fit(ScalingBranch::corner_cluster, radii, 0.0, proto);
  report.ratio = report.two_hole.coefficient / report.one_hole.coefficient;
  report.ratio_ok = report.ratio >= 1.7 && report.ratio <= 2.3;
  report.cluster_ratio =
      report.cluster.coefficient / report.one_hole.coefficient;
  report.cluster_exceeds_two = report.cluster_ratio > 2.0;
  report.asymptotic_one_hole =
      (kPi * kPi * kPi * kPi / 4.0) * energy_E(1.0).value;
  return report;
}

}  // namespace percell
