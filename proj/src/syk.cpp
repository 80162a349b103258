#include "latbound/syk.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace latbound {

namespace {

const Complex kI(0.0, 1.0);

void check_n(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("SYK: number of Majoranas must be even and >= 2");
  if (n > kMaxMajoranas)
    throw std::invalid_argument("SYK: N = " + std::to_string(n) + " exceeds the memory guard N <= " +
                                std::to_string(kMaxMajoranas));
}

void check_rep(const CliffordRep& rep, Eigen::Index jdim) {
  if (jdim != rep.n_majorana) throw std::invalid_argument("SYK: coupling size does not match the representation");
}

MonomialMatrix product(const CliffordRep& rep, std::initializer_list<int> idx) {
  MonomialMatrix p = MonomialMatrix::identity(rep.dim);
  for (int i : idx) p = p * rep.psis[std::size_t(i)];
  return p;
}

}  // namespace

MonomialMatrix MonomialMatrix::identity(Eigen::Index d) {
  MonomialMatrix m;
  m.col.resize(std::size_t(d));
  m.val.assign(std::size_t(d), Complex(1.0, 0.0));
  for (std::size_t i = 0; i < m.col.size(); ++i) m.col[i] = std::uint32_t(i);
  return m;
}

MonomialMatrix MonomialMatrix::operator*(const MonomialMatrix& rhs) const {
  MonomialMatrix out;
  out.col.resize(col.size());
  out.val.resize(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    out.col[i] = rhs.col[col[i]];
    out.val[i] = val[i] * rhs.val[col[i]];
  }
  return out;
}

MonomialMatrix MonomialMatrix::scaled(Complex c) const {
  MonomialMatrix out = *this;
  for (auto& v : out.val) v *= c;
  return out;
}

Eigen::MatrixXcd MonomialMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
  add_to(m, 1.0);
  return m;
}

void MonomialMatrix::add_to(Eigen::MatrixXcd& h, Complex coeff) const {
  for (std::size_t i = 0; i < col.size(); ++i) h(Eigen::Index(i), col[i]) += coeff * val[i];
}

CliffordRep build_clifford(int n_majorana) {
  check_n(n_majorana);
  CliffordRep rep;
  rep.n_majorana = n_majorana;
  const int qubits = n_majorana / 2;
  rep.dim = Eigen::Index(1) << qubits;
  const double s = 1.0 / std::sqrt(2.0);
  for (int q = 0; q < qubits; ++q) {
    MonomialMatrix x, y;
    x.col.resize(std::size_t(rep.dim));
    x.val.resize(std::size_t(rep.dim));
    y = x;
    for (std::uint32_t i = 0; i < std::uint32_t(rep.dim); ++i) {
      // Jordan-Wigner string of Z on the qubits below q
      std::uint32_t below = i & ((1u << q) - 1u);
      double zsign = (std::popcount(below) % 2) ? -1.0 : 1.0;
      bool bit = (i >> q) & 1u;
      x.col[i] = y.col[i] = i ^ (1u << q);
      x.val[i] = zsign * s;
      y.val[i] = zsign * s * (bit ? kI : -kI);
    }
    rep.psis.push_back(std::move(x));
    rep.psis.push_back(std::move(y));
  }
  return rep;
}

const char* variant_name(SykVariant v) {
  switch (v) {
    case SykVariant::Free: return "free";
    case SykVariant::Integrable: return "integrable";
    case SykVariant::Chaotic4: return "chaotic4";
    case SykVariant::Chaotic3: return "chaotic3";
  }
  return "unknown";
}

SykVariant parse_variant(const std::string& name) {
  for (auto v : {SykVariant::Free, SykVariant::Integrable, SykVariant::Chaotic4, SykVariant::Chaotic3})
    if (name == variant_name(v)) return v;
  throw std::invalid_argument("unknown SYK variant '" + name + "' (expected free, integrable, chaotic4, chaotic3)");
}

SykCouplings sample_couplings(SykVariant variant, int n, double epsilon, std::uint64_t seed, double coupling_j) {
  check_n(n);
  SykCouplings c;
  c.variant = variant;
  c.n_majorana = n;
  c.epsilon = epsilon;
  c.coupling_j = coupling_j;
  c.seed = seed;
  std::mt19937_64 rng(seed);
  const double dn = double(n);
  std::normal_distribution<double> g2(0.0, coupling_j / std::sqrt(dn));
  c.j2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      c.j2(i, j) = g2(rng);
      c.j2(j, i) = -c.j2(i, j);
    }
  if (variant == SykVariant::Integrable) {
    std::normal_distribution<double> gm(0.0, coupling_j * std::sqrt(6.0 / (dn * dn * dn)));
    const int h = n / 2;
    c.m = Eigen::MatrixXd::Zero(h, h);
    for (int q = 1; q < h; ++q)
      for (int p = 0; p < q; ++p) c.m(q, p) = gm(rng);
  }
  if (variant == SykVariant::Chaotic4) {
    std::normal_distribution<double> g4(0.0, coupling_j * std::sqrt(6.0 / (dn * dn * dn)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          for (int l = k + 1; l < n; ++l) c.j4.push_back(g4(rng));
  }
  if (variant == SykVariant::Chaotic3) {
    std::normal_distribution<double> g3(0.0, coupling_j * std::sqrt(2.0 / (dn * dn)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) c.j3.push_back(g3(rng));
  }
  return c;
}

CanonicalForm canonical_form(const Eigen::MatrixXd& j) {
  const auto n = j.rows();
  if (j.cols() != n || n % 2 != 0 || n == 0) throw std::invalid_argument("canonical_form: need an even square matrix");
  double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
  if ((j + j.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("canonical_form: matrix is not antisymmetric");
  Eigen::RealSchur<Eigen::MatrixXd> rs(j);
  if (rs.info() != Eigen::Success) throw std::runtime_error("canonical_form: real Schur decomposition failed");
  const Eigen::MatrixXd& t = rs.matrixT();
  Eigen::MatrixXd u = rs.matrixU();

  struct Block {
    double omega;
    Eigen::Index a, b;
  };
  std::vector<Block> blocks;
  std::vector<Eigen::Index> singles;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      blocks.push_back({0.5 * (t(i, i + 1) - t(i + 1, i)), i, i + 1});
      i += 2;
    } else {
      singles.push_back(i++);
    }
  }
  if (singles.size() % 2 != 0) throw std::runtime_error("canonical_form: odd number of real Schur 1x1 blocks");
  for (std::size_t s = 0; s < singles.size(); s += 2) {
    Eigen::Index a = singles[s], b = singles[s + 1];
    blocks.push_back({u.col(a).dot(j * u.col(b)), a, b});
  }
  for (auto& bl : blocks)
    if (bl.omega < 0.0) {
      std::swap(bl.a, bl.b);
      bl.omega = -bl.omega;
    }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) { return x.omega > y.omega; });
  CanonicalForm cf;
  cf.omegas.resize(n / 2);
  cf.frame.resize(n, n);
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    cf.omegas(Eigen::Index(p)) = blocks[p].omega;
    cf.frame.col(2 * Eigen::Index(p)) = u.col(blocks[p].a);
    cf.frame.col(2 * Eigen::Index(p) + 1) = u.col(blocks[p].b);
  }
  return cf;
}

Eigen::VectorXd extract_omegas(const Eigen::MatrixXd& j) { return canonical_form(j).omegas; }

Eigen::MatrixXd canonical_blocks(const Eigen::VectorXd& omegas) {
  const auto h = omegas.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * h, 2 * h);
  for (Eigen::Index p = 0; p < h; ++p) {
    d(2 * p, 2 * p + 1) = omegas(p);
    d(2 * p + 1, 2 * p) = -omegas(p);
  }
  return d;
}

Eigen::VectorXd free_spectrum(const Eigen::VectorXd& omegas) {
  const auto h = omegas.size();
  Eigen::VectorXd e(Eigen::Index(1) << h);
  for (Eigen::Index s = 0; s < e.size(); ++s) {
    double v = 0.0;
    for (Eigen::Index p = 0; p < h; ++p) v += ((s >> p) & 1) ? -omegas(p) : omegas(p);
    e(s) = v;
  }
  std::sort(e.data(), e.data() + e.size());
  return e;
}

namespace {

Eigen::MatrixXcd free_dense(const CliffordRep& rep, const Eigen::MatrixXd& j2) {
  check_rep(rep, j2.rows());
  const int n = rep.n_majorana;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  // i sum_{i,j} J_ij psi_i psi_j = 2 i sum_{i<j} J_ij psi_i psi_j for antisymmetric J
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double a = j2(i, j) - j2(j, i);
      if (a != 0.0) product(rep, {i, j}).add_to(h, kI * a);
    }
  return h;
}

}  // namespace

HermitianMatrix free_syk(const CliffordRep& rep, const Eigen::MatrixXd& j2) {
  return HermitianMatrix(free_dense(rep, j2));
}

std::vector<Eigen::MatrixXcd> j3_operators(const CliffordRep& rep, const CanonicalForm& cf) {
  check_rep(rep, cf.frame.rows());
  const int n = rep.n_majorana;
  std::vector<Eigen::MatrixXcd> ops;
  for (int p = 0; p < n / 2; ++p) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    const auto a = cf.frame.col(2 * p), b = cf.frame.col(2 * p + 1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double c = a(i) * b(j) - a(j) * b(i);
        if (c != 0.0) product(rep, {i, j}).add_to(op, 2.0 * kI * c);
      }
    ops.push_back(std::move(op));
  }
  return ops;
}

HermitianMatrix integrable_syk(const CliffordRep& rep, const CanonicalForm& cf, const Eigen::MatrixXd& m,
                               double epsilon) {
  const int h = rep.n_majorana / 2;
  if (cf.omegas.size() != h) throw std::invalid_argument("integrable_syk: omega count does not match N/2");
  if (m.rows() != h || m.cols() != h) throw std::invalid_argument("integrable_syk: M must be (N/2) x (N/2)");
  auto j3 = j3_operators(rep, cf);
  Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (int p = 0; p < h; ++p) hm += cf.omegas(p) * j3[std::size_t(p)];
  if (epsilon != 0.0)
    for (int q = 1; q < h; ++q)
      for (int p = 0; p < q; ++p)
        if (m(q, p) != 0.0) hm += (epsilon * m(q, p)) * (j3[std::size_t(p)] * j3[std::size_t(q)]);
  return HermitianMatrix(std::move(hm));
}

HermitianMatrix chaotic_syk4(const CliffordRep& rep, const Eigen::MatrixXd& j2, const std::vector<double>& j4,
                             double epsilon) {
  Eigen::MatrixXcd h = free_dense(rep, j2);
  const int n = rep.n_majorana;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l, ++idx) {
          if (idx >= j4.size()) throw std::invalid_argument("chaotic_syk4: too few quartic couplings");
          product(rep, {i, j, k, l}).add_to(h, epsilon * j4[idx]);
        }
  if (idx != j4.size()) throw std::invalid_argument("chaotic_syk4: too many quartic couplings");
  return HermitianMatrix(std::move(h));
}

HermitianMatrix chaotic_syk3(const CliffordRep& rep, const Eigen::MatrixXd& j2, const std::vector<double>& j3,
                             double epsilon) {
  Eigen::MatrixXcd h = free_dense(rep, j2);
  const int n = rep.n_majorana;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k, ++idx) {
        if (idx >= j3.size()) throw std::invalid_argument("chaotic_syk3: too few cubic couplings");
        product(rep, {i, j, k}).add_to(h, kI * epsilon * j3[idx]);
      }
  if (idx != j3.size()) throw std::invalid_argument("chaotic_syk3: too many cubic couplings");
  return HermitianMatrix(std::move(h));
}

HermitianMatrix build_syk(const CliffordRep& rep, const SykCouplings& c) {
  switch (c.variant) {
    case SykVariant::Free: return free_syk(rep, c.j2);
    case SykVariant::Integrable: return integrable_syk(rep, canonical_form(c.j2), c.m, c.epsilon);
    case SykVariant::Chaotic4: return chaotic_syk4(rep, c.j2, c.j4, c.epsilon);
    case SykVariant::Chaotic3: return chaotic_syk3(rep, c.j2, c.j3, c.epsilon);
  }
  throw std::invalid_argument("build_syk: unknown variant");
}

MonomialMatrix majorana_generator(const CliffordRep& rep, std::uint32_t mask) {
  MonomialMatrix p = MonomialMatrix::identity(rep.dim);
  int w = 0;
  for (int i = 0; i < rep.n_majorana; ++i)
    if ((mask >> i) & 1u) {
      p = p * rep.psis[std::size_t(i)];
      ++w;
    }
  // (psi_{i1} ... psi_{iw})^dagger = (-1)^{w(w-1)/2} psi_{i1} ... psi_{iw}
  Complex phase = ((w * (w - 1) / 2) % 2) ? kI : Complex(1.0, 0.0);
  return p.scaled(phase * std::sqrt(std::ldexp(1.0, w) / double(rep.dim)));
}

SykClassifier::SykClassifier(const CliffordRep& rep, int k, bool exclude_identity)
    : rep_(&rep), k_(k), exclude_identity_(exclude_identity) {
  if (k < 0) throw std::invalid_argument("SykClassifier: negative locality threshold");
  const int n = rep.n_majorana;
  for (int w = exclude_identity ? 1 : 0; w <= std::min(k, n); ++w) {
    if (w == 0) {
      masks_.push_back(0);
      continue;
    }
    // all w-subsets in increasing numeric order (Gosper)
    std::uint64_t m = (std::uint64_t(1) << w) - 1;
    const std::uint64_t limit = std::uint64_t(1) << n;
    while (m < limit) {
      masks_.push_back(std::uint32_t(m));
      std::uint64_t c = m & (~m + 1), r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
}

bool SykClassifier::is_local(std::uint64_t generator) const {
  if (generator >= generator_count()) throw std::out_of_range("SykClassifier: generator index out of range");
  if (generator == 0) return !exclude_identity_;
  return std::popcount(generator) <= k_;
}

Eigen::Index SykClassifier::diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const {
  const Eigen::Index d = rep_->dim;
  Eigen::MatrixXcd pv(d, d);
  const Eigen::MatrixXcd vc = s.vectors.conjugate();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    MonomialMatrix t = majorana_generator(*rep_, masks_.at(std::size_t(first) + std::size_t(r)));
    for (Eigen::Index i = 0; i < d; ++i) pv.row(i) = t.val[std::size_t(i)] * s.vectors.row(t.col[std::size_t(i)]);
    rows.row(r) = vc.cwiseProduct(pv).colwise().sum().real();
  }
  return rows.rows();
}

}  // namespace latbound
