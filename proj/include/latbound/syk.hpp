#pragma once

#include "latbound/complexity.hpp"
#include "latbound/linalg.hpp"

#include <cstdint>
#include <vector>

namespace latbound {

// Matrix with exactly one nonzero per row: row i holds val[i] in column col[i].
// Products of Majorana operators in the Jordan-Wigner representation stay in
// this form.
struct MonomialMatrix {
  std::vector<std::uint32_t> col;
  std::vector<Complex> val;

  Eigen::Index dim() const { return Eigen::Index(col.size()); }
  static MonomialMatrix identity(Eigen::Index d);
  MonomialMatrix operator*(const MonomialMatrix& rhs) const;
  MonomialMatrix scaled(Complex c) const;
  Eigen::MatrixXcd dense() const;
  void add_to(Eigen::MatrixXcd& h, Complex coeff) const;
};

constexpr int kMaxMajoranas = 28;

// N Majorana operators with {psi_i, psi_j} = delta_ij, acting on 2^(N/2) states.
struct CliffordRep {
  int n_majorana = 0;
  Eigen::Index dim = 0;
  std::vector<MonomialMatrix> psis;

  Eigen::MatrixXcd psi(int i) const { return psis.at(std::size_t(i)).dense(); }
};

CliffordRep build_clifford(int n_majorana);

enum class SykVariant { Free, Integrable, Chaotic4, Chaotic3 };

const char* variant_name(SykVariant v);
SykVariant parse_variant(const std::string& name);

struct SykCouplings {
  SykVariant variant = SykVariant::Free;
  int n_majorana = 0;
  double epsilon = 0.0;
  double coupling_j = 1.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd j2;      // antisymmetric N x N, variance J^2 / N above the diagonal
  Eigen::MatrixXd m;       // (N/2) x (N/2) strictly lower; m(q, p) couples J3_p J3_q for p < q
  std::vector<double> j4;  // i<j<k<l in lexicographic order, variance 3! J^2 / N^3
  std::vector<double> j3;  // i<j<k in lexicographic order, variance 2! J^2 / N^2
};

SykCouplings sample_couplings(SykVariant variant, int n_majorana, double epsilon, std::uint64_t seed,
                              double coupling_j = 1.0);

// J = V D V^T with D block diagonal, blocks [[0, w_p], [-w_p, 0]], w_p >= 0 in
// descending order.
struct CanonicalForm {
  Eigen::VectorXd omegas;
  Eigen::MatrixXd frame;
};

CanonicalForm canonical_form(const Eigen::MatrixXd& j);
Eigen::VectorXd extract_omegas(const Eigen::MatrixXd& j);
Eigen::MatrixXd canonical_blocks(const Eigen::VectorXd& omegas);
// All sign combinations sum_p (+-) w_p, ascending.
Eigen::VectorXd free_spectrum(const Eigen::VectorXd& omegas);

// H0 = i sum_{ij} J_ij psi_i psi_j.
HermitianMatrix free_syk(const CliffordRep& rep, const Eigen::MatrixXd& j2);
// J3_p = 2 i Psi_{2p-1} Psi_{2p} with Psi = psi V.
std::vector<Eigen::MatrixXcd> j3_operators(const CliffordRep& rep, const CanonicalForm& cf);
HermitianMatrix integrable_syk(const CliffordRep& rep, const CanonicalForm& cf, const Eigen::MatrixXd& m,
                               double epsilon);
HermitianMatrix chaotic_syk4(const CliffordRep& rep, const Eigen::MatrixXd& j2, const std::vector<double>& j4,
                             double epsilon);
HermitianMatrix chaotic_syk3(const CliffordRep& rep, const Eigen::MatrixXd& j2, const std::vector<double>& j3,
                             double epsilon);
HermitianMatrix build_syk(const CliffordRep& rep, const SykCouplings& c);

// Normalized Hermitian generator for a Majorana subset given as a bit mask:
// phase * psi_{i1} ... psi_{iw} with Tr T^2 = 1.
MonomialMatrix majorana_generator(const CliffordRep& rep, std::uint32_t mask);

// Local generators are monomials of weight <= k; with exclude_identity the
// identity counts as nonlocal.
class SykClassifier : public LocalityClassifier {
 public:
  SykClassifier(const CliffordRep& rep, int k, bool exclude_identity);

  Eigen::Index dimension() const override { return rep_->dim; }
  int threshold() const override { return k_; }
  std::uint64_t generator_count() const override { return std::uint64_t(1) << rep_->n_majorana; }
  bool is_local(std::uint64_t generator) const override;
  std::uint64_t local_count() const override { return masks_.size(); }
  Eigen::Index diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const override;

 private:
  const CliffordRep* rep_;
  int k_;
  bool exclude_identity_;
  std::vector<std::uint32_t> masks_;
};

}  // namespace latbound
