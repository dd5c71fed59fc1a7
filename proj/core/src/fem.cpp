// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace percell {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseSymMatrix& A) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.vals.size());
  for (int i = 0; i < A.n; ++i) {
    for (int k = A.row_offsets[static_cast<size_t>(i)];
         k < A.row_offsets[static_cast<size_t>(i) + 1]; ++k) {
      trips.emplace_back(i, A.cols[static_cast<size_t>(k)], A.vals[static_cast<size_t>(k)]);
    }
  }
  Eigen::SparseMatrix<double> S(A.n, A.n);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot_vec(a, a)); }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<double> SparseSymMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_offsets[static_cast<size_t>(i)];
         k < row_offsets[static_cast<size_t>(i) + 1]; ++k) {
      s += vals[static_cast<size_t>(k)] * x[static_cast<size_t>(cols[static_cast<size_t>(k)])];
    }
    y[static_cast<size_t>(i)] = s;
  }
  return y;
}

SparseSymMatrix from_triplets(int n, std::vector<std::pair<std::pair<int, int>, double>> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseSymMatrix A;
  A.n = n;
  A.row_offsets.assign(static_cast<size_t>(n) + 1, 0);
  for (size_t k = 0; k < triplets.size();) {
    const auto ij = triplets[k].first;
    double v = 0.0;
    while (k < triplets.size() && triplets[k].first == ij) {
      v += triplets[k].second;
      ++k;
    }
    A.cols.push_back(ij.second);
    A.vals.push_back(v);
    A.row_offsets[static_cast<size_t>(ij.first) + 1] += 1;
  }
  for (int i = 0; i < n; ++i) {
    A.row_offsets[static_cast<size_t>(i) + 1] += A.row_offsets[static_cast<size_t>(i)];
  }
  return A;
}

std::pair<SparseSymMatrix, SparseSymMatrix> assemble(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<std::pair<std::pair<int, int>, double>> kt, mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    const Point2 p[3] = {mesh.vertices[static_cast<size_t>(t[0])],
                         mesh.vertices[static_cast<size_t>(t[1])],
                         mesh.vertices[static_cast<size_t>(t[2])]};
    const double area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
    if (!(area > 0.0)) throw std::runtime_error("assemble: degenerate triangle");
    double bg[3], cg[3];  // grad phi_i = (bg_i, cg_i) / (2 area)
    for (int i = 0; i < 3; ++i) {
      const Point2& pj = p[(i + 1) % 3];
      const Point2& pk = p[(i + 2) % 3];
      bg[i] = pj.y - pk.y;
      cg[i] = pk.x - pj.x;
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double kij = (bg[i] * bg[j] + cg[i] * cg[j]) / (4.0 * area);
        const double mij = (i == j) ? area / 6.0 : area / 12.0;
        kt.push_back({{t[static_cast<size_t>(i)], t[static_cast<size_t>(j)]}, kij});
        mt.push_back({{t[static_cast<size_t>(i)], t[static_cast<size_t>(j)]}, mij});
      }
    }
  }
  return {from_triplets(n, std::move(kt)), from_triplets(n, std::move(mt))};
}

SparseSymMatrix assemble_mass_lumped(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<std::pair<std::pair<int, int>, double>> mt;
  for (const auto& t : mesh.triangles) {
    const Point2& a = mesh.vertices[static_cast<size_t>(t[0])];
    const Point2& b = mesh.vertices[static_cast<size_t>(t[1])];
    const Point2& c = mesh.vertices[static_cast<size_t>(t[2])];
    const double area = 0.5 * cross(b - a, c - a);
    if (!(area > 0.0)) throw std::runtime_error("assemble: degenerate triangle");
    for (int i = 0; i < 3; ++i) {
      mt.push_back({{t[static_cast<size_t>(i)], t[static_cast<size_t>(i)]}, area / 3.0});
    }
  }
  return from_triplets(n, std::move(mt));
}

namespace {

SparseSymMatrix reduce_matrix(const SparseSymMatrix& A, const std::vector<int>& full_to_free,
                              int n_free) {
  std::vector<std::pair<std::pair<int, int>, double>> trips;
  for (int i = 0; i < A.n; ++i) {
    const int fi = full_to_free[static_cast<size_t>(i)];
    if (fi < 0) continue;
    for (int k = A.row_offsets[static_cast<size_t>(i)];
         k < A.row_offsets[static_cast<size_t>(i) + 1]; ++k) {
      const int fj = full_to_free[static_cast<size_t>(A.cols[static_cast<size_t>(k)])];
      if (fj < 0) continue;
      trips.push_back({{fi, fj}, A.vals[static_cast<size_t>(k)]});
    }
  }
  return from_triplets(n_free, std::move(trips));
}

}  // namespace

ReducedPencil apply_dirichlet(const SparseSymMatrix& K, const SparseSymMatrix& M,
                              const TriMesh& mesh) {
  if (K.n != static_cast<int>(mesh.vertices.size()) || M.n != K.n) {
    throw std::invalid_argument("apply_dirichlet: size mismatch");
  }
  ReducedPencil red;
  red.n_full = K.n;
  std::vector<int> full_to_free(static_cast<size_t>(K.n), -1);
  for (int i = 0; i < K.n; ++i) {
    if (mesh.vmarker[static_cast<size_t>(i)] == kMarkerInterior) {
      full_to_free[static_cast<size_t>(i)] = static_cast<int>(red.free_to_full.size());
      red.free_to_full.push_back(i);
    }
  }
  if (red.free_to_full.empty()) throw std::runtime_error("apply_dirichlet: no free DOFs");
  const int nf = static_cast<int>(red.free_to_full.size());
  red.K = reduce_matrix(K, full_to_free, nf);
  red.M = reduce_matrix(M, full_to_free, nf);
  return red;
}

std::vector<double> scatter(const ReducedPencil& pencil, const std::vector<double>& reduced) {
  std::vector<double> full(static_cast<size_t>(pencil.n_full), 0.0);
  for (size_t i = 0; i < pencil.free_to_full.size(); ++i) {
    full[static_cast<size_t>(pencil.free_to_full[i])] = reduced[i];
  }
  return full;
}

bool componentwise_positive(const std::vector<double>& v) {
  if (v.empty()) return false;
  bool pos = true, neg = true;
  for (double x : v) {
    if (x <= 0.0) pos = false;
    if (x >= 0.0) neg = false;
  }
  return pos || neg;
}

namespace {

struct PencilOps {
  const SparseSymMatrix& K;
  const SparseSymMatrix& M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;

  PencilOps(const SparseSymMatrix& k, const SparseSymMatrix& m, double shift)
      : K(k), M(m) {
    Eigen::SparseMatrix<double> A = to_eigen(K);
    if (shift != 0.0) {
      A -= (shift * to_eigen(M)).pruned();
    }
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("smallest_eigenpair: factorization failed");
    }
  }

  // y = (K - shift M)^{-1} M x
  std::vector<double> apply(const std::vector<double>& x) const {
    const std::vector<double> mx = M.multiply(x);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(mx.data(), static_cast<long>(mx.size()));
    Eigen::VectorXd y = solver.solve(rhs);
    return std::vector<double>(y.data(), y.data() + y.size());
  }

  double m_dot(const std::vector<double>& a, const std::vector<double>& b) const {
    return dot_vec(a, M.multiply(b));
  }
};

EigenPair finish_with_inverse_iteration(const PencilOps& ops, std::vector<double> x,
                                        const EigenSolveSettings& s) {
  const SparseSymMatrix& K = ops.K;
  const SparseSymMatrix& M = ops.M;
  {
    const double nx = std::sqrt(ops.m_dot(x, x));
    if (!(nx > 0.0)) throw std::runtime_error("smallest_eigenpair: zero start vector");
    for (double& v : x) v /= nx;
  }
  for (int it = 0; it < s.max_iterations; ++it) {
    std::vector<double> y = ops.apply(x);
    const double ny = std::sqrt(ops.m_dot(y, y));
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      throw std::runtime_error("smallest_eigenpair: iteration broke down");
    }
    for (double& v : y) v /= ny;
    const double lambda = dot_vec(y, K.multiply(y));
    std::vector<double> ky = K.multiply(y);
    std::vector<double> my = M.multiply(y);
    std::vector<double> r(ky.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = ky[i] - lambda * my[i];
    const double residual = norm2(r) / norm2(my);
    if (residual <= s.tolerance) {
      double sum = 0.0;
      for (double v : y) sum += v;
      if (sum < 0.0) {
        for (double& v : y) v = -v;
      }
      return {lambda, std::move(y), residual};
    }
    x = std::move(y);
  }
  throw std::runtime_error("smallest_eigenpair: no convergence within max_iterations");
}

std::vector<double> lanczos_start(const PencilOps& ops, int n, int steps) {
  // M-inner-product Lanczos on (K - shift M)^{-1} M with full
  // reorthogonalization; returns the Ritz vector of the largest Ritz value.
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> v(static_cast<size_t>(n), 1.0);
  {
    const double nv = std::sqrt(ops.m_dot(v, v));
    for (double& w : v) w /= nv;
  }
  basis.push_back(v);
  for (int j = 0; j < steps; ++j) {
    std::vector<double> w = ops.apply(basis.back());
    const double aj = ops.m_dot(w, basis.back());
    alpha.push_back(aj);
    for (size_t b = 0; b < basis.size(); ++b) {
      const double c = ops.m_dot(w, basis[b]);
      for (size_t i = 0; i < w.size(); ++i) w[i] -= c * basis[b][i];
    }
    const double bj = std::sqrt(std::max(0.0, ops.m_dot(w, w)));
    if (bj < 1e-14) break;
    beta.push_back(bj);
    for (double& x : w) x /= bj;
    basis.push_back(std::move(w));
  }
  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha[static_cast<size_t>(i)];
    if (i + 1 < k) {
      T(i, i + 1) = beta[static_cast<size_t>(i)];
      T(i + 1, i) = beta[static_cast<size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  int imax = 0;
  for (int i = 1; i < k; ++i) {
    if (es.eigenvalues()(i) > es.eigenvalues()(imax)) imax = i;
  }
  std::vector<double> ritz(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < k; ++i) {
    const double c = es.eigenvectors()(i, imax);
    for (int r = 0; r < n; ++r) {
      ritz[static_cast<size_t>(r)] += c * basis[static_cast<size_t>(i)][static_cast<size_t>(r)];
    }
  }
  return ritz;
}

}  // namespace

EigenPair smallest_eigenpair(const SparseSymMatrix& K, const SparseSymMatrix& M,
                             const EigenSolveSettings& settings) {
  if (K.n != M.n || K.n <= 0) {
    throw std::invalid_argument("smallest_eigenpair: bad pencil dimensions");
  }
  PencilOps ops(K, M, settings.shift);
  if (settings.method == EigenMethod::shift_invert_lanczos) {
    std::vector<double> start = lanczos_start(ops, K.n, std::min(40, K.n));
    return finish_with_inverse_iteration(ops, std::move(start), settings);
  }
  return finish_with_inverse_iteration(ops, std::vector<double>(static_cast<size_t>(K.n), 1.0),
                                       settings);
}

std::vector<double> solve_dirichlet(const SparseSymMatrix& K, const TriMesh& mesh,
                                    const std::vector<double>& boundary_values) {
  const int n = K.n;
  if (n != static_cast<int>(mesh.vertices.size()) ||
      boundary_values.size() != mesh.vertices.size()) {
    throw std::invalid_argument("solve_dirichlet: size mismatch");
  }
  std::vector<int> full_to_free(static_cast<size_t>(n), -1);
  std::vector<int> free_to_full;
  for (int i = 0; i < n; ++i) {
    if (mesh.vmarker[static_cast<size_t>(i)] == kMarkerInterior) {
      full_to_free[static_cast<size_t>(i)] = static_cast<int>(free_to_full.size());
      free_to_full.push_back(i);
    }
  }
  if (free_to_full.empty()) throw std::runtime_error("solve_dirichlet: no free DOFs");
  const int nf = static_cast<int>(free_to_full.size());

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (int i = 0; i < n; ++i) {
    const int fi = full_to_free[static_cast<size_t>(i)];
    if (fi < 0) continue;
    for (int k = K.row_offsets[static_cast<size_t>(i)];
         k < K.row_offsets[static_cast<size_t>(i) + 1]; ++k) {
      const int j = K.cols[static_cast<size_t>(k)];
      const double v = K.vals[static_cast<size_t>(k)];
      const int fj = full_to_free[static_cast<size_t>(j)];
      if (fj >= 0) {
        trips.emplace_back(fi, fj, v);
      } else {
        rhs(fi) -= v * boundary_values[static_cast<size_t>(j)];
      }
    }
  }
  Eigen::SparseMatrix<double> Kff(nf, nf);
  Kff.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Kff);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("solve_dirichlet: factorization failed");
  }
  const Eigen::VectorXd uf = solver.solve(rhs);

  std::vector<double> u(boundary_values);
  for (int i = 0; i < n; ++i) {
    if (full_to_free[static_cast<size_t>(i)] < 0) continue;
    u[static_cast<size_t>(i)] = uf(full_to_free[static_cast<size_t>(i)]);
  }
  return u;
}

double dirichlet_energy(const SparseSymMatrix& K, const std::vector<double>& u) {
  return dot_vec(u, K.multiply(u));
}

std::vector<LevelRecord> lambda1_pipeline(const PolygonDomain& domain, int levels,
                                          const EigenSolveSettings& settings) {
  return lambda1_pipeline(domain, levels, settings, TriangulateOptions{});
}

std::vector<LevelRecord> lambda1_pipeline(const PolygonDomain& domain, int levels,
                                          const EigenSolveSettings& settings,
                                          const TriangulateOptions& mesh_options) {
  std::vector<LevelRecord> out;
  TriMesh mesh;
  for (int lvl = 0; lvl <= levels; ++lvl) {
    const auto t0 = Clock::now();
    mesh = (lvl == 0) ? triangulate(domain, mesh_options) : refine_red(mesh);
    const bool has_free =
        std::any_of(mesh.vmarker.begin(), mesh.vmarker.end(),
                    [](int m) { return m == kMarkerInterior; });
    if (!has_free) {
      // A raw boundary-only triangulation has an empty trial space; the
      // variational minimum over it is +infinity (the benchmark tables
      // start at the first refinement level).
      out.push_back({stats(mesh), std::numeric_limits<double>::infinity(),
                     seconds_since(t0)});
      continue;
    }
    const auto [K, M] = assemble(mesh);
    const ReducedPencil red = apply_dirichlet(K, M, mesh);
    const EigenPair ep = smallest_eigenpair(red.K, red.M, settings);
    out.push_back({stats(mesh), ep.value, seconds_since(t0)});
  }
  return out;
}

std::vector<LevelRecord> lambda1(const Configuration& config, int levels,
                                 const EigenSolveSettings& settings, int n_side,
                                 int m_circle, double inset) {
  return lambda1_pipeline(polygonize(config, n_side, m_circle, inset), levels, settings);
}

}  // namespace percell
