// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: constrained Delaunay construction,
// red refinement, P1 assembly, the generalized eigensolve, one corner-cell
// solve, and the half-plane series.

#include <benchmark/benchmark.h>

#include "percell/cell.hpp"
#include "percell/fem.hpp"
#include "percell/geometry.hpp"
#include "percell/mesh.hpp"
#include "percell/series.hpp"

namespace {

using namespace percell;

PolygonDomain benchmark_domain() {
  return polygonize(make_branch_config(Branch::adjacent, 0.08));
}

TriMesh benchmark_mesh(int levels) {
  TriMesh mesh = triangulate(benchmark_domain());
  for (int l = 0; l < levels; ++l) mesh = refine_red(mesh);
  return mesh;
}

void BM_triangulate(benchmark::State& state) {
  const PolygonDomain domain = benchmark_domain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(triangulate(domain));
  }
}
BENCHMARK(BM_triangulate);

void BM_refine_red(benchmark::State& state) {
  const TriMesh mesh = benchmark_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(refine_red(mesh));
  }
  state.SetComplexityN(mesh.triangles.size());
}
BENCHMARK(BM_refine_red)->Arg(1)->Arg(2)->Arg(3);

void BM_assemble(benchmark::State& state) {
  const TriMesh mesh = benchmark_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(mesh));
  }
}
BENCHMARK(BM_assemble)->Arg(2)->Arg(3);

void BM_eigensolve(benchmark::State& state) {
  const TriMesh mesh = benchmark_mesh(static_cast<int>(state.range(0)));
  const auto [K, M] = assemble(mesh);
  const ReducedPencil red = apply_dirichlet(K, M, mesh);
  EigenSolveSettings settings;
  settings.tolerance = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallest_eigenpair(red.K, red.M, settings));
  }
}
BENCHMARK(BM_eigensolve)->Arg(2)->Arg(3);

void BM_cell_solve(benchmark::State& state) {
  CellSpec spec;
  spec.centers = {{1.5, 1.0}};
  spec.truncation_radius = 16.0;
  spec.mesh_density = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cell(spec));
  }
}
BENCHMARK(BM_cell_solve);

void BM_jhp_series(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(jhp_series(1.0001));
  }
}
BENCHMARK(BM_jhp_series);

}  // namespace

BENCHMARK_MAIN();
