#include "nlb/tridiag_eig.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace nlb {

namespace {

void check_shapes(const std::vector<double>& diag,
                  const std::vector<double>& off) {
  if (diag.empty()) throw std::invalid_argument("tridiag: empty diagonal");
  if (off.size() + 1 != diag.size())
    throw std::invalid_argument("tridiag: off size must be diag size - 1");
}

}  // namespace

std::vector<double> tridiag_eigenvalues(const std::vector<double>& diag,
                                        const std::vector<double>& off) {
  check_shapes(diag, off);
  const Eigen::Index n = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e =
      off.empty() ? Eigen::VectorXd()
                  : Eigen::Map<const Eigen::VectorXd>(off.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiag_eigenvalues: QL iteration failed");
  const auto& vals = solver.eigenvalues();
  return std::vector<double>(vals.data(), vals.data() + n);
}

TridiagEigen tridiag_eigensystem(const std::vector<double>& diag,
                                 const std::vector<double>& off) {
  check_shapes(diag, off);
  if (diag.size() > 4096)
    throw std::invalid_argument("tridiag_eigensystem: n > 4096");
  const Eigen::Index n = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e =
      off.empty() ? Eigen::VectorXd()
                  : Eigen::Map<const Eigen::VectorXd>(off.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiag_eigensystem: QL iteration failed");
  TridiagEigen out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + n);
  out.vectors.assign(solver.eigenvectors().data(),
                     solver.eigenvectors().data() + n * n);
  return out;
}

}  // namespace nlb
