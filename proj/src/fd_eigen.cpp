#include "curvmeasure/fd_eigen.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "curvmeasure/error.hpp"
#include "curvmeasure/parallel.hpp"

namespace curvmeasure {

namespace {

struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<bool> boundary;
  std::vector<std::array<int, 3>> triangles;
};

Mesh make_mesh(const DomainSpec& d, int n) {
  Mesh m;
  const bool rect = d.shape == Shape::Rectangle;
  Eigen::Vector2d e1, e2;
  if (rect) {
    e1 = {d.a / n, 0.0};
    e2 = {0.0, d.b / n};
  } else if (d.shape == Shape::IsoscelesRight) {
    e1 = {d.a / n, 0.0};
    e2 = {0.0, d.a / n};
  } else {
    e1 = {d.a / n, 0.0};
    e2 = {0.5 * d.a / n, std::sqrt(3.0) / 2.0 * d.a / n};
  }
  std::vector<int> id((n + 1) * (n + 1), -1);
  auto inside = [&](int i, int j) { return rect || i + j <= n; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      if (!inside(i, j)) continue;
      id[j * (n + 1) + i] = static_cast<int>(m.nodes.size());
      m.nodes.push_back(i * e1 + j * e2);
      m.boundary.push_back(i == 0 || j == 0 || (rect ? (i == n || j == n) : i + j == n));
    }
  auto at = [&](int i, int j) { return id[j * (n + 1) + i]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (inside(i + 1, j + 1) || (!rect && i + j <= n - 1)) m.triangles.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
      if (inside(i + 1, j + 1)) m.triangles.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  return m;
}

using SpMat = Eigen::SparseMatrix<double>;

// Shift-invert subspace iteration with Rayleigh-Ritz; keeps a guard block
// so clustered and repeated eigenvalues converge together.
FdResult lowest(const SpMat& B, int count, const FdOptions& opt) {
  const Eigen::Index n = B.rows();
  const Eigen::Index k = std::min<Eigen::Index>(n, count + std::max(10, count));
  SpMat shifted = B;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1.0;
  Eigen::SimplicialLDLT<SpMat> solver(shifted);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("sparse factorization failed");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = gauss(rng);

  FdResult r;
  r.unknowns = static_cast<std::size_t>(n);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd Y = solver.solve(X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    const Eigen::MatrixXd BY = B * Y;
    Eigen::MatrixXd H = Y.transpose() * BY;
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    X = Y * es.eigenvectors();
    const Eigen::MatrixXd R = BY * es.eigenvectors() - X * es.eigenvalues().asDiagonal();
    bool done = true;
    for (int j = 0; j < count; ++j)
      if (R.col(j).norm() > opt.tol * std::max(1.0, std::abs(es.eigenvalues()(j)))) done = false;
    if (done) {
      r.iterations = it;
      for (int j = 0; j < count; ++j) r.eigenvalues.push_back(std::max(0.0, es.eigenvalues()(j)));
      return r;
    }
  }
  throw ConvergenceFailure("subspace iteration did not converge in " + std::to_string(opt.max_iterations) +
                           " iterations");
}

FdResult solve_single(const DomainSpec& d, bool dirichlet, int grid_n, int count, const FdOptions& opt) {
  const Mesh m = make_mesh(d, grid_n);
  std::vector<int> dof(m.nodes.size(), -1);
  int ndof = 0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (!(dirichlet && m.boundary[i])) dof[i] = ndof++;
  if (count > ndof) throw ValidationError("count", "more eigenvalues requested than unknowns");

  std::vector<double> mass(ndof, 0.0);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& t : m.triangles) {
    const Eigen::Vector2d& p0 = m.nodes[t[0]];
    const Eigen::Vector2d& p1 = m.nodes[t[1]];
    const Eigen::Vector2d& p2 = m.nodes[t[2]];
    const double area = 0.5 * std::abs((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
    // Gradients of the hat functions are the rotated opposite edges / 2A.
    const Eigen::Vector2d edge[3] = {p2 - p1, p0 - p2, p1 - p0};
    for (int a = 0; a < 3; ++a) {
      const int ia = dof[t[a]];
      if (ia < 0) continue;
      mass[ia] += area / 3.0;
      for (int b = 0; b < 3; ++b) {
        const int ib = dof[t[b]];
        if (ib < 0) continue;
        trip.emplace_back(ia, ib, edge[a].dot(edge[b]) / (4.0 * area));
      }
    }
  }
  SpMat B(ndof, ndof);
  B.setFromTriplets(trip.begin(), trip.end());
  std::vector<double> s(ndof);
  for (int i = 0; i < ndof; ++i) s[i] = 1.0 / std::sqrt(mass[i]);
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) it.valueRef() *= s[it.row()] * s[it.col()];
  return lowest(B, count, opt);
}

}  // namespace

FdResult fd_eigenvalues(const DomainSpec& d, BoundaryCondition bc, int grid_n, int count, const FdOptions& opt) {
  if (d.shape == Shape::Disc) throw ValidationError("domain", "the finite-element oracle supports polygons only");
  if (grid_n < 16) throw ValidationError("grid_n", "grid_n must be at least 16");
  if (count < 1 || count > grid_n * grid_n / 4)
    throw ValidationError("count", "count must be in [1, grid_n^2/4]");
  if (bc != BoundaryCondition::Double) return solve_single(d, bc == BoundaryCondition::Dirichlet, grid_n, count, opt);
  FdResult parts[2];
  parallel_for(2, [&](std::size_t i) { parts[i] = solve_single(d, i == 0, grid_n, count, opt); });
  const FdResult& dr = parts[0];
  const FdResult& nr = parts[1];
  FdResult r;
  r.iterations = std::max(dr.iterations, nr.iterations);
  r.unknowns = dr.unknowns + nr.unknowns;
  std::merge(dr.eigenvalues.begin(), dr.eigenvalues.end(), nr.eigenvalues.begin(), nr.eigenvalues.end(),
             std::back_inserter(r.eigenvalues));
  r.eigenvalues.resize(count);
  return r;
}

}  // namespace curvmeasure
