#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace latbound {

using Complex = std::complex<double>;

// Dense Hermitian operator. Hermiticity is checked on construction with a
// relative tolerance on the max-norm.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Eigen::MatrixXcd m, double tol = 1e-10);
  explicit HermitianMatrix(const Eigen::MatrixXd& m, double tol = 1e-10);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  // True when every imaginary part is exactly zero.
  bool is_real() const;

 private:
  Eigen::MatrixXcd m_;
};

// Eigen-decomposition: energies ascending, vectors are the columns.
struct Spectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;

  Eigen::Index dim() const { return energies.size(); }
};

Spectrum eigendecompose(const HermitianMatrix& h);
Eigen::VectorXd eigenvalues(const HermitianMatrix& h);

// Shift to zero mean and scale to unit sum of squares.
Eigen::VectorXd normalize_spectrum(const Eigen::VectorXd& energies);

// Rebuilds V diag(E) V^dagger.
Eigen::MatrixXcd reconstruct(const Spectrum& s);

double max_abs(const Eigen::MatrixXcd& m);

}  // namespace latbound
