#pragma once

#include "latbound/lattice.hpp"
#include "latbound/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace latbound {

// Partition of an orthonormal Hermitian operator basis into local and nonlocal
// generators. Implementations stream the diagonal matrix elements <n|T|n> of
// the local generators in a given eigenbasis.
class LocalityClassifier {
 public:
  virtual ~LocalityClassifier() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual int threshold() const = 0;
  virtual std::uint64_t generator_count() const = 0;
  virtual bool is_local(std::uint64_t generator) const = 0;
  virtual std::uint64_t local_count() const = 0;

  // Fills rows(r, n) = <n|T_{first + r}|n> for local generators numbered
  // first .. first + rows.rows() - 1 in local order. Returns the number of rows
  // written; rows that are identically zero may be skipped.
  virtual Eigen::Index diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const = 0;
};

class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(Eigen::MatrixXd m);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXd m_;
};

QMatrix build_q_matrix(const Spectrum& s, const LocalityClassifier& cls, int threads = 1);

struct ComplexityMetricSpec {
  double mu = 1.0;
  bool su_restriction = false;
  std::optional<double> nu;  // defaults to 1e3 * mu when su_restriction is set

  static ComplexityMetricSpec penalized(Eigen::Index dim) { return {double(dim), false, std::nullopt}; }
  double effective_nu() const;
};

// I + (mu - 1) Q (+ nu * ones).
Eigen::MatrixXd metric_matrix(const QMatrix& q, const ComplexityMetricSpec& spec);

// Basis Vt with Vt^T Vt = metric, target Vt E t / (2 pi). The bound is 2 pi times
// the lattice distance.
CvpInstance<double> embed_cvp(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                              double t);

enum class SolverChain { Naive, Babai, LllBabai, LllBabaiGreedy, BiInvariant };

std::string method_tag(SolverChain c);
SolverChain parse_method(const std::string& tag);

// Everything that depends on the spectrum and metric but not on time. Built
// once and shared by all time steps of a sweep.
struct BoundContext {
  Eigen::VectorXd energies;
  ComplexityMetricSpec spec;
  Eigen::MatrixXd metric;
  LatticeBasis<double> basis;
  GramSchmidtData<double> basis_gs;
  bool reduced = false;
  LllResult<double> lll;
  IntegerMatrix transform_inverse;
  GramSchmidtData<double> reduced_gs;
  Eigen::MatrixXd reduced_gram;
  Eigen::VectorXd reduced_energy;  // energies in reduced-basis coordinates
};

BoundContext prepare_bound(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                           bool with_lll = true, const LllOptions& lll = {});

struct BoundPoint {
  double value = 0.0;
  IntegerVector k;  // minimizer in the hypercubic frame
};

// Value of sqrt((Et - 2 pi k)^T G (Et - 2 pi k)).
double bound_value(const BoundContext& ctx, double t, const IntegerVector& k);

// Upper bound at time t. Every chain also considers the component-wise rounded
// point round(E t / 2 pi), so the result never exceeds the bi-invariant value
// scaled by sqrt(mu).
BoundPoint complexity_bound_at(const BoundContext& ctx, double t, SolverChain chain);
BoundPoint complexity_bound_at(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                               double t, SolverChain chain);

double bi_invariant_complexity(const Eigen::VectorXd& energies, double t);

struct ComplexityTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::string method;
  std::vector<IntegerVector> minimizers;  // empty unless requested
};

struct SweepOptions {
  int threads = 1;
  bool keep_minimizers = false;
};

ComplexityTrace sweep(const BoundContext& ctx, const std::vector<double>& times, SolverChain chain,
                      const SweepOptions& opt = {});
ComplexityTrace sweep_bi_invariant(const Eigen::VectorXd& energies, const std::vector<double>& times);

struct PlateauWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double stride = 1.0;
};

std::vector<double> window_times(const PlateauWindow& w);
std::vector<double> linspace_times(double start, double stop, double stride);

struct PlateauStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t samples = 0;
  double min = 0.0;
  double max = 0.0;
};

PlateauStats plateau_stats(const ComplexityTrace& trace, const PlateauWindow& window);

struct ConservationLaw {
  Eigen::VectorXd coefficients;  // v_n in the energy eigenbasis
  double q_value = 0.0;          // v^T Q v for unit v
  Eigen::MatrixXcd op;           // sum_n v_n |n><n|
};

std::vector<ConservationLaw> extract_local_conservation_laws(const QMatrix& q, const Spectrum& s, double tol = 1e-8,
                                                             bool with_operators = true);

}  // namespace latbound
