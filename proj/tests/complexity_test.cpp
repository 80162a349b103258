#include <doctest.h>

#include "latbound/complexity.hpp"
#include "latbound/resonant.hpp"
#include "latbound/syk.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace latbound;
using std::numbers::pi;

namespace {

// Classifier over an explicit list of dense local generators.
class DenseClassifier : public LocalityClassifier {
 public:
  explicit DenseClassifier(std::vector<Eigen::MatrixXcd> local, Eigen::Index dim) : local_(std::move(local)), dim_(dim) {}
  Eigen::Index dimension() const override { return dim_; }
  int threshold() const override { return 0; }
  std::uint64_t generator_count() const override { return local_.size(); }
  bool is_local(std::uint64_t) const override { return true; }
  std::uint64_t local_count() const override { return local_.size(); }
  Eigen::Index diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const override {
    Eigen::Index r = 0;
    for (; r < rows.rows() && first + std::uint64_t(r) < local_.size(); ++r)
      for (Eigen::Index n = 0; n < dim_; ++n)
        rows(r, n) = (s.vectors.col(n).adjoint() * local_[std::size_t(first) + std::size_t(r)] * s.vectors.col(n))(0).real();
    return r;
  }

 private:
  std::vector<Eigen::MatrixXcd> local_;
  Eigen::Index dim_;
};

// Random admissible Q: eigenvalues in [0, 1] with the energies in the kernel.
QMatrix random_q(const Eigen::VectorXd& e, std::mt19937_64& rng) {
  const auto d = e.size();
  Eigen::MatrixXd w = Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::random_gaussian(d, d, rng)).householderQ();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd lam(d);
  for (auto& v : lam) v = u(rng);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) - e * e.transpose() / e.squaredNorm();
  Eigen::MatrixXd q = p * w * lam.asDiagonal() * w.transpose() * p;
  return QMatrix(Eigen::MatrixXd(0.5 * (q + q.transpose())));
}

Eigen::VectorXd random_spectrum(Eigen::Index d, std::mt19937_64& rng) {
  return normalize_spectrum(oracle::random_gaussian(d, 1, rng));
}

}  // namespace

TEST_CASE("build_q_matrix agrees with dense Majorana products") {
  const int n = 6;
  auto rep = build_clifford(n);
  auto psi = oracle::dense_majoranas(n);
  Spectrum s = eigendecompose(build_syk(rep, sample_couplings(SykVariant::Chaotic4, n, 1.0, 4)));
  for (int k : {0, 2, 4}) {
    std::vector<Eigen::MatrixXcd> local;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      int w = std::popcount(mask);
      if (w > k) continue;
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
      for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) t = t * psi[std::size_t(i)];
      // make Hermitian and trace-normalized
      if ((w * (w - 1) / 2) % 2) t *= Complex(0, 1);
      t /= std::sqrt((t * t).trace().real());
      local.push_back(t);
    }
    DenseClassifier dense(local, rep.dim);
    Eigen::MatrixXd expect = build_q_matrix(s, dense).matrix();
    Eigen::MatrixXd got = build_q_matrix(s, SykClassifier(rep, k, true)).matrix();
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("build_q_matrix: threads do not change the result; empty local set gives the identity") {
  Block b(8, 8);
  Spectrum s = eigendecompose(build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 2}));
  ResonantClassifier c(b, 2);
  Eigen::MatrixXd one = build_q_matrix(s, c, 1).matrix();
  Eigen::MatrixXd three = build_q_matrix(s, c, 3).matrix();
  CHECK((one - three).cwiseAbs().maxCoeff() < 1e-13);
  DenseClassifier none({}, b.size());
  CHECK((build_q_matrix(s, none).matrix() - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_q_matrix(s, DenseClassifier({}, 3)), std::invalid_argument);
}

TEST_CASE("QMatrix laws on built models") {
  Block b(8, 8);
  for (auto kind : {CouplingKind::GG, CouplingKind::Truncated, CouplingKind::Random}) {
    Spectrum s = eigendecompose(build_resonant(b, CouplingScheme{kind, 0.0, 1}));
    QMatrix q = build_q_matrix(s, ResonantClassifier(b, 2));
    Eigen::VectorXd ev = q.eigenvalues();
    CHECK(ev.minCoeff() >= -1e-9);
    CHECK(ev.maxCoeff() <= 1 + 1e-9);
    CHECK((q.matrix() * normalize_spectrum(s.energies)).norm() <= 1e-8);
  }
  CHECK_THROWS_AS(QMatrix(Eigen::MatrixXd::Random(3, 3)), std::invalid_argument);
}

TEST_CASE("embed_cvp") {
  std::mt19937_64 rng(31);
  Eigen::VectorXd e = random_spectrum(12, rng);
  QMatrix q = random_q(e, rng);
  // mu = 1: orthonormal basis
  auto unit = embed_cvp(q, e, {1.0, false, std::nullopt}, 3.0);
  Eigen::MatrixXd b1 = unit.basis.columns();
  CHECK((b1.transpose() * b1 - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
  // Gram matrix is the metric; t = 0 maps to the origin
  for (auto spec : {ComplexityMetricSpec{12.0, false, std::nullopt}, ComplexityMetricSpec{5.0, true, std::nullopt},
                    ComplexityMetricSpec{5.0, false, 2.5}}) {
    auto inst = embed_cvp(q, e, spec, 0.0);
    Eigen::MatrixXd bb = inst.basis.columns();
    Eigen::MatrixXd g = metric_matrix(q, spec);
    CHECK((bb.transpose() * bb - g).cwiseAbs().maxCoeff() < 1e-9 * g.cwiseAbs().maxCoeff());
    CHECK(inst.target.norm() == 0.0);
    CHECK(brute_force_cvp(inst, 1).coeffs.isZero());
    // k = 0 distance is t / 2 pi because QE = 0 and the energies sum to zero
    auto at = embed_cvp(q, e, spec, 7.0);
    CHECK(2 * pi * lattice_distance(at, IntegerVector::Zero(12)) == doctest::Approx(7.0).epsilon(1e-10));
  }
  CHECK(ComplexityMetricSpec{4.0, true, std::nullopt}.effective_nu() == 4000.0);
  CHECK(ComplexityMetricSpec{4.0, false, std::nullopt}.effective_nu() == 0.0);
  CHECK_THROWS_AS(metric_matrix(q, {0.5, false, std::nullopt}), std::invalid_argument);
}

TEST_CASE("bi_invariant_complexity") {
  Eigen::VectorXd e(2);
  e << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK(bi_invariant_complexity(e, 0.0) == 0.0);
  CHECK(bi_invariant_complexity(e, 4.0) == doctest::Approx(4.0).epsilon(1e-15));
  // brute force over k in {-2..2}^2
  double best = 1e300;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      best = std::min(best, std::hypot(e(0) * 10 - 2 * pi * a, e(1) * 10 - 2 * pi * b));
  CHECK(bi_invariant_complexity(e, 10.0) == doctest::Approx(best).epsilon(1e-14));
  CHECK(bi_invariant_complexity(e, 10.0) == doctest::Approx(10 - 2 * pi * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("complexity_bound_at: linear growth, ceiling, bi-invariant bound, audit") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index d = 10 + 5 * trial;
    Eigen::VectorXd e = random_spectrum(d, rng);
    QMatrix q = random_q(e, rng);
    for (double mu : {1.0, 3.0, double(d)}) {
      auto ctx = prepare_bound(q, e, {mu, false, std::nullopt});
      for (double t : {0.0, 0.05, 0.2}) {
        auto p = complexity_bound_at(ctx, t, SolverChain::LllBabaiGreedy);
        CHECK(p.k.isZero());
        CHECK(p.value == doctest::Approx(t).epsilon(1e-12));
      }
      for (double t = 1.0; t < 400.0; t += 13.7) {
        for (auto chain : {SolverChain::Naive, SolverChain::Babai, SolverChain::LllBabai, SolverChain::LllBabaiGreedy}) {
          auto p = complexity_bound_at(ctx, t, chain);
          CHECK(p.value <= pi * std::sqrt(mu * double(d)) + 1e-6);
          CHECK(p.value <= std::sqrt(mu) * bi_invariant_complexity(e, t) + 1e-9);
          CHECK(p.value == doctest::Approx(bound_value(ctx, t, p.k)).epsilon(1e-12));
          // never below the bi-invariant value of the same k
          Eigen::VectorXd r = e * t - 2 * pi * p.k.cast<double>();
          CHECK(p.value >= r.norm() - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("complexity_bound_at never beats the exact minimum on small spectra") {
  std::mt19937_64 rng(33);
  std::vector<double> ratios;
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index d = 4 + trial % 5;
    Eigen::VectorXd e = random_spectrum(d, rng);
    QMatrix q = random_q(e, rng);
    ComplexityMetricSpec spec{double(d), false, std::nullopt};
    auto ctx = prepare_bound(q, e, spec);
    for (double t : {3.0, 17.0, 55.0, 240.0}) {
      auto p = complexity_bound_at(ctx, t, SolverChain::LllBabaiGreedy);
      auto inst = embed_cvp(q, e, spec, t);
      int radius = 3;
      auto ex = brute_force_cvp(inst, radius);
      while (ex.boundary_hit) ex = brute_force_cvp(inst, radius *= 2);
      CHECK(p.value >= 2 * pi * ex.distance - 1e-9);
      ratios.push_back(p.value / (2 * pi * ex.distance));
    }
  }
  std::sort(ratios.begin(), ratios.end());
  MESSAGE("median heuristic / exact ratio " << ratios[ratios.size() / 2]);
}

TEST_CASE("SU restriction keeps the minimizer traceless") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Index d = 12;
    Eigen::VectorXd e = random_spectrum(d, rng);
    QMatrix q = random_q(e, rng);
    for (auto spec : {ComplexityMetricSpec{double(d), true, std::nullopt},
                      ComplexityMetricSpec{double(d), true, 1e3 * double(d) * double(d)}}) {
      auto ctx = prepare_bound(q, e, spec);
      SweepOptions opt;
      opt.keep_minimizers = true;
      auto tr = sweep(ctx, linspace_times(0.0, 500.0, 2.5), SolverChain::LllBabaiGreedy, opt);
      for (const auto& k : tr.minimizers) CHECK(k.sum() == 0);
    }
  }
}

TEST_CASE("sweep: mu = 1 equals the bi-invariant value, threads are deterministic, times validated") {
  std::mt19937_64 rng(35);
  Eigen::VectorXd e = random_spectrum(40, rng);
  QMatrix q = random_q(e, rng);
  auto times = linspace_times(0.0, 3000.0, 3.0);
  auto ctx1 = prepare_bound(q, e, {1.0, false, std::nullopt});
  auto tr = sweep(ctx1, times, SolverChain::LllBabaiGreedy);
  auto ref = sweep_bi_invariant(e, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(tr.values[i] - ref.values[i]) < 1e-9);

  auto ctx = prepare_bound(q, e, ComplexityMetricSpec::penalized(40));
  SweepOptions one, four;
  four.threads = 4;
  auto a = sweep(ctx, times, SolverChain::LllBabaiGreedy, one);
  auto b = sweep(ctx, times, SolverChain::LllBabaiGreedy, four);
  CHECK(a.values == b.values);
  CHECK(a.method == "babai+lll+greedy");
  CHECK_THROWS_AS(sweep(ctx, {1.0, 1.0}, SolverChain::Naive), std::invalid_argument);
  CHECK_THROWS_AS(sweep(ctx, {2.0, 1.0}, SolverChain::Naive), std::invalid_argument);
}

TEST_CASE("plateau_stats") {
  ComplexityTrace tr;
  tr.times = linspace_times(0.0, 100.0, 1.0);
  tr.values.assign(tr.times.size(), 4.5);
  auto st = plateau_stats(tr, {50.0, 100.0, 1.0});
  CHECK(st.mean == 4.5);
  CHECK(st.variance == 0.0);
  CHECK(st.samples == 51);
  for (std::size_t i = 0; i < tr.values.size(); ++i) tr.values[i] = double(i % 2);
  st = plateau_stats(tr, {0.0, 99.0, 1.0});
  CHECK(st.mean == doctest::Approx(0.5));
  CHECK(st.variance == doctest::Approx(100.0 / 99.0 * 0.25));
  CHECK_THROWS_AS(plateau_stats(tr, {0.0, 5.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(plateau_stats(tr, {0.5, 50.5, 1.0}), std::invalid_argument);
}

TEST_CASE("bi-invariant plateau of a uniform spectrum") {
  std::mt19937_64 rng(36);
  const int d = 400;
  Eigen::VectorXd e(d);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : e) v = u(rng);
  std::sort(e.data(), e.data() + d);
  PlateauWindow w{5e4, 1.5e5, 2.0};
  auto st = plateau_stats(sweep_bi_invariant(normalize_spectrum(e), window_times(w)), w);
  CHECK(st.mean == doctest::Approx(pi * std::sqrt(d / 3.0)).epsilon(0.03));
  CHECK(st.variance == doctest::Approx(pi * pi / 15).epsilon(0.25));
}

TEST_CASE("extract_local_conservation_laws") {
  Block b(6, 6);
  Spectrum s = eigendecompose(build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 8}));
  Eigen::VectorXd e = normalize_spectrum(s.energies);
  QMatrix q = build_q_matrix(s, ResonantClassifier(b, 2));
  auto laws = extract_local_conservation_laws(q, s);
  REQUIRE(!laws.empty());
  Eigen::MatrixXd null(b.size(), Eigen::Index(laws.size()));
  for (std::size_t i = 0; i < laws.size(); ++i) {
    null.col(Eigen::Index(i)) = laws[i].coefficients;
    CHECK(laws[i].q_value < 1e-8);
    Eigen::MatrixXcd h = build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 8}).matrix();
    CHECK(max_abs(h * laws[i].op - laws[i].op * h) <= 1e-8);
  }
  CHECK((e - null * (null.transpose() * e)).norm() < 1e-8);

  // everything local: the whole space is conserved and local
  CHECK(extract_local_conservation_laws(build_q_matrix(s, ResonantClassifier(b, 6)), s, 1e-8, false).size() ==
        std::size_t(b.size()));
}

TEST_CASE("GG block (6,6): H_min is a local conservation law") {
  Block b(6, 6);
  Eigen::MatrixXcd gg = build_resonant(b, CouplingScheme{CouplingKind::GG, 0.0, 0}).matrix();
  Eigen::MatrixXcd hmin = hmin_operator(b).matrix();
  // GG is degenerate; use the joint eigenbasis with H_min so the basis is fixed
  Spectrum joint = eigendecompose(HermitianMatrix(Eigen::MatrixXcd(gg + (std::sqrt(2.0) / 1000) * hmin)));
  Spectrum s = joint;
  for (Eigen::Index n = 0; n < s.dim(); ++n)
    s.energies(n) = (s.vectors.col(n).adjoint() * gg * s.vectors.col(n))(0).real();
  QMatrix q = build_q_matrix(s, ResonantClassifier(b, 2));
  auto laws = extract_local_conservation_laws(q, s);
  Eigen::MatrixXd null(b.size(), Eigen::Index(laws.size()));
  for (std::size_t i = 0; i < laws.size(); ++i) null.col(Eigen::Index(i)) = laws[i].coefficients;
  Eigen::VectorXd v(s.dim());
  for (Eigen::Index n = 0; n < s.dim(); ++n) v(n) = (s.vectors.col(n).adjoint() * hmin * s.vectors.col(n))(0).real();
  // H_min is diagonal in the joint basis
  CHECK(max_abs(s.vectors.adjoint() * hmin * s.vectors - v.cast<Complex>().asDiagonal().toDenseMatrix()) < 1e-8);
  CHECK((v - null * (null.transpose() * v)).norm() <= 1e-8 * v.norm());
}
