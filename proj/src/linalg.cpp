#include "latbound/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latbound {

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  if (m_.rows() == 0) throw std::invalid_argument("HermitianMatrix: empty matrix");
  if (!m_.allFinite()) throw std::invalid_argument("HermitianMatrix: non-finite entry");
  double scale = std::max(1.0, max_abs(m_));
  double dev = max_abs(m_ - m_.adjoint());
  if (dev > tol * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: deviation from Hermiticity " << dev << " exceeds " << tol * scale;
    throw std::invalid_argument(os.str());
  }
  // symmetrize away the residual so the eigensolver sees an exactly Hermitian input
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXd& m, double tol)
    : HermitianMatrix(Eigen::MatrixXcd(m.cast<Complex>()), tol) {}

bool HermitianMatrix::is_real() const {
  return m_.imag().cwiseAbs().maxCoeff() == 0.0;
}

Spectrum eigendecompose(const HermitianMatrix& h) {
  Spectrum s;
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix().real());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver did not converge");
    s.energies = es.eigenvalues();
    s.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver did not converge");
    s.energies = es.eigenvalues();
    s.vectors = es.eigenvectors();
  }
  return s;
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix().real(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
  return es.eigenvalues();
}

Eigen::VectorXd normalize_spectrum(const Eigen::VectorXd& energies) {
  if (energies.size() < 2) throw std::invalid_argument("normalize_spectrum: need at least two levels");
  if (!energies.allFinite()) throw std::invalid_argument("normalize_spectrum: non-finite level");
  Eigen::VectorXd e = energies.array() - energies.mean();
  double norm = e.norm();
  double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
  if (norm <= 1e-13 * scale * std::sqrt(double(energies.size())))
    throw std::invalid_argument("normalize_spectrum: all levels equal, spectrum has zero variance");
  e /= norm;
  // re-center once more so the sum is zero to rounding
  e.array() -= e.mean();
  return e / e.norm();
}

Eigen::MatrixXcd reconstruct(const Spectrum& s) {
  return s.vectors * s.energies.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

}  // namespace latbound
