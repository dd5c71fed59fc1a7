// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// P1 finite elements on triangle meshes: stiffness/mass assembly, Dirichlet
// elimination, the smallest generalized eigenpair of the reduced pencil, and
// inhomogeneous Dirichlet solves for the cell problems.

#ifndef PERCELL_FEM_HPP
#define PERCELL_FEM_HPP

#include <utility>
#include <vector>

#include "percell/geometry.hpp"
#include "percell/mesh.hpp"

namespace percell {

/// Symmetric sparse matrix in row-compressed form. Both triangles of the
/// symmetric pattern are stored so row traversal gives the full row.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_offsets;  ///< size n+1
  std::vector<int> cols;
  std::vector<double> vals;

  std::vector<double> multiply(const std::vector<double>& x) const;
};

/// Builds a SparseSymMatrix from (i, j, value) triplets, summing duplicates.
SparseSymMatrix from_triplets(int n, std::vector<std::pair<std::pair<int, int>, double>> triplets);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  ///< over free DOFs, M-normalized
  double residual = 0.0;       ///< ||K u - lambda M u|| / ||M u||
};

enum class EigenMethod { inverse_iteration, shift_invert_lanczos };

struct EigenSolveSettings {
  double tolerance = 1e-10;  ///< convergence target for EigenPair::residual
  int max_iterations = 500;
  double shift = 0.0;
  EigenMethod method = EigenMethod::inverse_iteration;
};

/// P1 stiffness (gradient inner products times area) and consistent mass
/// (area/12 times [2 1 1; 1 2 1; 1 1 2] per element) over all mesh vertices.
std::pair<SparseSymMatrix, SparseSymMatrix> assemble(const TriMesh& mesh);

/// Row-sum lumped mass matrix (diagonal), for sensitivity studies.
SparseSymMatrix assemble_mass_lumped(const TriMesh& mesh);

/// Reduced pencil after removing every vertex with a nonzero marker.
struct ReducedPencil {
  SparseSymMatrix K;
  SparseSymMatrix M;
  std::vector<int> free_to_full;  ///< reduced index -> mesh vertex index
  int n_full = 0;
};

ReducedPencil apply_dirichlet(const SparseSymMatrix& K, const SparseSymMatrix& M,
                              const TriMesh& mesh);

/// Places a reduced vector back on the full mesh, zero on boundary vertices.
std::vector<double> scatter(const ReducedPencil& pencil, const std::vector<double>& reduced);

/// Smallest generalized eigenpair of the SPD pencil (K, M): sparse direct
/// factorization plus inverse iteration with M-normalization by default, with
/// a shift-invert Lanczos diagnostic alternative. The eigenvector sign is
/// fixed so that its sum is positive. Deterministic (all-ones start).
EigenPair smallest_eigenpair(const SparseSymMatrix& K, const SparseSymMatrix& M,
                             const EigenSolveSettings& settings = {});

/// True if every entry has the same strict sign.
bool componentwise_positive(const std::vector<double>& v);

/// Solves the Laplace problem with inhomogeneous Dirichlet data: K is the
/// full (unreduced) stiffness matrix; `boundary_values` is a full-length
/// nodal vector whose entries at marked vertices are the prescribed data
/// (interior entries are ignored). Returns the full solution vector.
std::vector<double> solve_dirichlet(const SparseSymMatrix& K, const TriMesh& mesh,
                                    const std::vector<double>& boundary_values);

/// u^T K u.
double dirichlet_energy(const SparseSymMatrix& K, const std::vector<double>& u);

struct LevelRecord {
  MeshStats mesh;
  double lambda1 = 0.0;
  double walltime_s = 0.0;
};

/// End-to-end pipeline on an arbitrary polygonal domain: triangulate (raw),
/// refine `levels` times, and report the eigenvalue at every level (level 0 =
/// unrefined). The returned table has `levels + 1` rows.
std::vector<LevelRecord> lambda1_pipeline(const PolygonDomain& domain, int levels,
                                          const EigenSolveSettings& settings = {});

/// Same pipeline with explicit level-0 triangulation options (e.g. a quality
/// pass with a size field); refinement levels stay red.
std::vector<LevelRecord> lambda1_pipeline(const PolygonDomain& domain, int levels,
                                          const EigenSolveSettings& settings,
                                          const TriangulateOptions& mesh_options);

/// The benchmark protocol for a two-obstacle (or one-obstacle) configuration:
/// polygonize with the given discretization parameters, then run the pipeline.
std::vector<LevelRecord> lambda1(const Configuration& config, int levels,
                                 const EigenSolveSettings& settings = {},
                                 int n_side = 8, int m_circle = 32,
                                 double inset = 5e-4);

}  // namespace percell

#endif  // PERCELL_FEM_HPP
