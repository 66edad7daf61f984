#pragma once

#include <vector>

namespace nlb {

// Eigenvalues of a symmetric tridiagonal matrix, ascending. `off` is the
// subdiagonal and must have size diag.size() - 1.
std::vector<double> tridiag_eigenvalues(const std::vector<double>& diag,
                                        const std::vector<double>& off);

struct TridiagEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major n*n, column k pairs values[k]
};

// Full eigensystem. Dense O(n^2) storage; refuses n > 4096 to keep misuse
// from silently allocating gigabytes.
TridiagEigen tridiag_eigensystem(const std::vector<double>& diag,
                                 const std::vector<double>& off);

}  // namespace nlb
