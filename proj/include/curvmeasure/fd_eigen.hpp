#pragma once

#include <cstdint>
#include <vector>

#include "curvmeasure/spectra.hpp"

namespace curvmeasure {

struct FdOptions {
  int max_iterations = 500;
  double tol = 1e-9;  // relative Ritz residual
  std::uint64_t seed = 0x5eedULL;
};

struct FdResult {
  std::vector<double> eigenvalues;
  int iterations = 0;
  std::size_t unknowns = 0;
};

/// Lowest `count` Laplacian eigenvalues from piecewise-linear finite
/// elements with lumped mass on a uniform triangulation with `grid_n`
/// cells per side. Polygonal domains only. For the double, the Dirichlet and
/// Neumann problems are solved separately and merged.
FdResult fd_eigenvalues(const DomainSpec& d, BoundaryCondition bc, int grid_n, int count,
                        const FdOptions& opt = {});

}  // namespace curvmeasure
