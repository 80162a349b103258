#include "latbound/complexity.hpp"

#include "latbound/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace latbound {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IntegerVector round_vector(const Eigen::VectorXd& x) {
  IntegerVector k(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) k(i) = round_int(x(i));
  return k;
}

IntegerVector mul(const IntegerMatrix& u, const IntegerVector& k) {
  IntegerVector out = IntegerVector::Zero(u.rows());
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (k(j) == 0) continue;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      std::int64_t p, s;
      if (__builtin_mul_overflow(u(i, j), k(j), &p) || __builtin_add_overflow(out(i), p, &s))
        throw std::overflow_error("integer coordinate transform overflowed int64");
      out(i) = s;
    }
  }
  return out;
}

}  // namespace

QMatrix::QMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("QMatrix: must be square and non-empty");
  if (!m_.allFinite()) throw std::invalid_argument("QMatrix: non-finite entry");
  double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw std::invalid_argument("QMatrix: not symmetric (deviation " + std::to_string(asym) + ")");
  m_ = (0.5 * (m_ + m_.transpose())).eval();
}

Eigen::VectorXd QMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

QMatrix build_q_matrix(const Spectrum& s, const LocalityClassifier& cls, int threads) {
  const Eigen::Index d = s.dim();
  if (cls.dimension() != d) {
    std::ostringstream os;
    os << "build_q_matrix: classifier dimension " << cls.dimension() << " does not match spectrum dimension " << d;
    throw std::invalid_argument(os.str());
  }
  if (s.vectors.rows() != d || s.vectors.cols() != d) throw std::invalid_argument("build_q_matrix: spectrum has no eigenvectors");
  const std::uint64_t total = cls.local_count();
  const std::uint64_t chunk = 512;
  const std::uint64_t nchunks = (total + chunk - 1) / chunk;
  const int workers = std::max(1, std::min<int>(resolve_threads(threads), int(std::max<std::uint64_t>(nchunks, 1))));
  std::vector<Eigen::MatrixXd> partial(std::size_t(workers), Eigen::MatrixXd::Zero(d, d));
  parallel_for(std::size_t(workers), workers, [&](std::size_t w) {
    Eigen::MatrixXd rows(Eigen::Index(chunk), d);
    for (std::uint64_t c = w; c < nchunks; c += std::uint64_t(workers)) {
      std::uint64_t first = c * chunk;
      std::uint64_t n = std::min(chunk, total - first);
      rows.resize(Eigen::Index(n), d);
      Eigen::Index written = cls.diagonal_rows(s, first, rows);
      if (written > 0)
        partial[w].selfadjointView<Eigen::Lower>().rankUpdate(rows.topRows(written).transpose());
    }
  });
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (auto& p : partial) acc += p;
  Eigen::MatrixXd sfull = acc.selfadjointView<Eigen::Lower>();
  return QMatrix(Eigen::MatrixXd::Identity(d, d) - sfull);
}

double ComplexityMetricSpec::effective_nu() const {
  if (!su_restriction) return nu.value_or(0.0);
  return nu.value_or(1e3 * mu);
}

Eigen::MatrixXd metric_matrix(const QMatrix& q, const ComplexityMetricSpec& spec) {
  if (!(spec.mu >= 1.0)) throw std::invalid_argument("metric: penalty factor mu must be >= 1");
  const auto d = q.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d) + (spec.mu - 1.0) * q.matrix();
  double nu = spec.effective_nu();
  if (nu < 0.0) throw std::invalid_argument("metric: nu must be non-negative");
  if (nu > 0.0) g.array() += nu;
  return g;
}

namespace {

Eigen::MatrixXd embedded_basis(const Eigen::MatrixXd& metric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric);
  if (es.info() != Eigen::Success) throw std::runtime_error("embed: metric eigensolver failed");
  const auto& lam = es.eigenvalues();
  if (!(lam(0) > 1e-20 * lam(lam.size() - 1)) || !(lam(0) > 0.0))
    throw std::invalid_argument("embed: metric is not positive definite");
  return lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CvpInstance<double> embed_cvp(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                              double t) {
  if (energies.size() != q.dim()) throw std::invalid_argument("embed_cvp: energies and Q dimensions differ");
  Eigen::MatrixXd b = embedded_basis(metric_matrix(q, spec));
  Eigen::VectorXd target = b * (energies * (t / kTwoPi));
  return CvpInstance<double>(LatticeBasis<double>::unchecked(std::move(b)), std::move(target));
}

std::string method_tag(SolverChain c) {
  switch (c) {
    case SolverChain::Naive: return "naive";
    case SolverChain::Babai: return "babai";
    case SolverChain::LllBabai: return "babai+lll";
    case SolverChain::LllBabaiGreedy: return "babai+lll+greedy";
    case SolverChain::BiInvariant: return "biinvariant";
  }
  return "unknown";
}

SolverChain parse_method(const std::string& tag) {
  for (auto c : {SolverChain::Naive, SolverChain::Babai, SolverChain::LllBabai, SolverChain::LllBabaiGreedy,
                 SolverChain::BiInvariant})
    if (method_tag(c) == tag) return c;
  throw std::invalid_argument("unknown method '" + tag +
                              "' (expected naive, babai, babai+lll, babai+lll+greedy or biinvariant)");
}

BoundContext prepare_bound(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                           bool with_lll, const LllOptions& lll) {
  if (energies.size() != q.dim()) throw std::invalid_argument("prepare_bound: energies and Q dimensions differ");
  BoundContext ctx;
  ctx.energies = energies;
  ctx.spec = spec;
  ctx.metric = metric_matrix(q, spec);
  ctx.basis = LatticeBasis<double>::unchecked(embedded_basis(ctx.metric));
  ctx.basis_gs = gram_schmidt(ctx.basis);
  if (with_lll) {
    ctx.reduced = true;
    ctx.lll = lll_reduce(ctx.basis, lll);
    const auto d = q.dim();
    Eigen::MatrixXd inv = ctx.lll.transform.cast<double>().partialPivLu().inverse();
    ctx.transform_inverse = inv.unaryExpr([](double v) { return double(std::llround(v)); }).cast<std::int64_t>();
    for (Eigen::Index j = 0; j < d; ++j) {
      IntegerVector e = IntegerVector::Zero(d);
      e(j) = 1;
      if (mul(ctx.lll.transform, mul(ctx.transform_inverse, e)) != e)
        throw std::runtime_error("prepare_bound: could not invert the unimodular transform exactly");
    }
    ctx.reduced_gs = gram_schmidt(ctx.lll.basis);
    ctx.reduced_gram = ctx.lll.basis.columns().transpose() * ctx.lll.basis.columns();
    ctx.reduced_energy = ctx.transform_inverse.cast<double>() * energies;
  }
  return ctx;
}

double bound_value(const BoundContext& ctx, double t, const IntegerVector& k) {
  Eigen::VectorXd x = ctx.energies * t - kTwoPi * k.cast<double>();
  return std::sqrt(std::max(0.0, x.dot(ctx.metric * x)));
}

BoundPoint complexity_bound_at(const BoundContext& ctx, double t, SolverChain chain) {
  if (!std::isfinite(t)) throw std::invalid_argument("complexity_bound_at: non-finite time");
  const Eigen::VectorXd coords = ctx.energies * (t / kTwoPi);
  const IntegerVector naive = round_vector(coords);
  if (chain == SolverChain::BiInvariant) return {bi_invariant_complexity(ctx.energies, t), naive};

  auto better = [&](const IntegerVector& a, const IntegerVector& b) {
    return bound_value(ctx, t, b) < bound_value(ctx, t, a) ? b : a;
  };

  IntegerVector k;
  switch (chain) {
    case SolverChain::Naive:
      k = naive;
      break;
    case SolverChain::Babai:
      k = better(nearest_plane<double>(ctx.basis_gs.mu, coords), naive);
      break;
    case SolverChain::LllBabai:
    case SolverChain::LllBabaiGreedy: {
      if (!ctx.reduced) throw std::logic_error("complexity_bound_at: context was prepared without LLL");
      Eigen::VectorXd rc = ctx.reduced_energy * (t / kTwoPi);
      IntegerVector kr = nearest_plane<double>(ctx.reduced_gs.mu, rc);
      IntegerVector nr = mul(ctx.transform_inverse, naive);
      auto dist = [&](const IntegerVector& v) {
        Eigen::VectorXd d = v.cast<double>() - rc;
        return d.dot(ctx.reduced_gram * d);
      };
      if (dist(nr) < dist(kr)) kr = nr;
      if (chain == SolverChain::LllBabaiGreedy) kr = greedy_descent_gram<double>(ctx.reduced_gram, rc, kr);
      k = mul(ctx.lll.transform, kr);
      break;
    }
    case SolverChain::BiInvariant:
      break;
  }

  BoundPoint out{bound_value(ctx, t, k), k};
  // cross-check the quadratic form against the embedded lattice distance
  double lat = kTwoPi * (ctx.basis.columns() * (coords - k.cast<double>())).norm();
  if (std::abs(lat - out.value) > 1e-8 * std::max(1.0, out.value)) {
    std::ostringstream os;
    os << "complexity_bound_at: audit mismatch at t=" << t << " (quadratic form " << out.value << ", lattice "
       << lat << ")";
    throw std::runtime_error(os.str());
  }
  return out;
}

BoundPoint complexity_bound_at(const QMatrix& q, const Eigen::VectorXd& energies, const ComplexityMetricSpec& spec,
                               double t, SolverChain chain) {
  bool lll = chain == SolverChain::LllBabai || chain == SolverChain::LllBabaiGreedy;
  return complexity_bound_at(prepare_bound(q, energies, spec, lll), t, chain);
}

double bi_invariant_complexity(const Eigen::VectorXd& energies, double t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    double x = energies(i) * t;
    double r = x - kTwoPi * std::round(x / kTwoPi);
    acc += r * r;
  }
  return std::sqrt(acc);
}

namespace {

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::invalid_argument("sweep: non-finite time");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("sweep: times must be strictly increasing");
  }
}

}  // namespace

ComplexityTrace sweep(const BoundContext& ctx, const std::vector<double>& times, SolverChain chain,
                      const SweepOptions& opt) {
  check_times(times);
  ComplexityTrace tr;
  tr.times = times;
  tr.method = method_tag(chain);
  tr.values.assign(times.size(), 0.0);
  if (opt.keep_minimizers) tr.minimizers.assign(times.size(), IntegerVector());
  parallel_for(times.size(), opt.threads, [&](std::size_t i) {
    BoundPoint p = complexity_bound_at(ctx, times[i], chain);
    tr.values[i] = p.value;
    if (opt.keep_minimizers) tr.minimizers[i] = std::move(p.k);
  });
  return tr;
}

ComplexityTrace sweep_bi_invariant(const Eigen::VectorXd& energies, const std::vector<double>& times) {
  check_times(times);
  ComplexityTrace tr;
  tr.times = times;
  tr.method = method_tag(SolverChain::BiInvariant);
  tr.values.reserve(times.size());
  for (double t : times) tr.values.push_back(bi_invariant_complexity(energies, t));
  return tr;
}

std::vector<double> linspace_times(double start, double stop, double stride) {
  if (!(stride > 0.0) || !(stop >= start)) throw std::invalid_argument("time grid: need stride > 0 and stop >= start");
  auto n = std::size_t(std::floor((stop - start) / stride + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = start + double(i) * stride;
  return t;
}

std::vector<double> window_times(const PlateauWindow& w) { return linspace_times(w.t_start, w.t_end, w.stride); }

PlateauStats plateau_stats(const ComplexityTrace& trace, const PlateauWindow& window) {
  auto grid = window_times(window);
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double g : grid) {
    auto it = std::lower_bound(trace.times.begin(), trace.times.end(), g - 1e-9 * std::max(1.0, std::abs(g)));
    if (it == trace.times.end() || std::abs(*it - g) > 1e-9 * std::max(1.0, std::abs(g))) {
      std::ostringstream os;
      os << "plateau_stats: trace has no sample at t=" << g;
      throw std::invalid_argument(os.str());
    }
    vals.push_back(trace.values[std::size_t(it - trace.times.begin())]);
  }
  if (vals.size() < 10) throw std::invalid_argument("plateau_stats: window holds fewer than 10 samples");
  PlateauStats st;
  st.samples = vals.size();
  double sum = 0.0;
  st.min = st.max = vals[0];
  for (double v : vals) {
    sum += v;
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
  }
  st.mean = sum / double(vals.size());
  double ss = 0.0;
  for (double v : vals) ss += (v - st.mean) * (v - st.mean);
  st.variance = ss / double(vals.size() - 1);
  return st;
}

std::vector<ConservationLaw> extract_local_conservation_laws(const QMatrix& q, const Spectrum& s, double tol,
                                                             bool with_operators) {
  if (s.dim() != q.dim()) throw std::invalid_argument("extract_local_conservation_laws: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.matrix());
  std::vector<ConservationLaw> out;
  for (Eigen::Index i = 0; i < q.dim(); ++i) {
    if (es.eigenvalues()(i) >= tol) break;
    ConservationLaw law;
    law.coefficients = es.eigenvectors().col(i);
    law.q_value = es.eigenvalues()(i);
    if (with_operators)
      law.op = s.vectors * law.coefficients.cast<Complex>().asDiagonal() * s.vectors.adjoint();
    out.push_back(std::move(law));
  }
  return out;
}

}  // namespace latbound
