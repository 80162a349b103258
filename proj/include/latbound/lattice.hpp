#pragma once

// Lattice reduction and closest-vector heuristics. Basis vectors are matrix
// columns. Everything is templated on the scalar type (double, long double).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace latbound {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using IntegerVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntegerMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class IterationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Round half away from zero, the tie-break used by every solver here.
template <typename Scalar>
std::int64_t round_int(Scalar x) {
  using std::round;
  Scalar r = round(x);
  if (!(std::abs(r) < Scalar(9.0e18))) throw std::overflow_error("round_int: value out of int64 range");
  return static_cast<std::int64_t>(r);
}

namespace detail {

inline std::int64_t checked_sub_mul(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t p, r;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r))
    throw std::overflow_error("lll_reduce: unimodular transform overflowed int64");
  return r;
}

template <typename Scalar>
Mat<Scalar> r_factor(const Mat<Scalar>& b) {
  Eigen::HouseholderQR<Mat<Scalar>> qr(b);
  return qr.matrixQR().template triangularView<Eigen::Upper>();
}

}  // namespace detail

template <typename Scalar>
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(Mat<Scalar> columns) : columns_(std::move(columns)) {
    const auto d = columns_.cols();
    if (d == 0 || columns_.rows() != d) throw std::invalid_argument("LatticeBasis: basis must be square and non-empty");
    if (!columns_.allFinite()) throw std::invalid_argument("LatticeBasis: non-finite entry");
    Eigen::BDCSVD<Mat<Scalar>> svd(columns_);
    const auto& sv = svd.singularValues();
    if (!(sv(d - 1) > Scalar(1e-10) * sv(0))) {
      std::ostringstream os;
      os << "LatticeBasis: basis is numerically rank deficient (singular value ratio " << double(sv(d - 1) / sv(0))
         << ")";
      throw std::invalid_argument(os.str());
    }
  }

  Eigen::Index dim() const { return columns_.cols(); }
  const Mat<Scalar>& columns() const { return columns_; }
  auto column(Eigen::Index i) const { return columns_.col(i); }

  // Skips the rank check; for callers that obtained the columns by unimodular
  // operations on an already validated basis.
  static LatticeBasis unchecked(Mat<Scalar> columns) {
    LatticeBasis b;
    b.columns_ = std::move(columns);
    return b;
  }

 private:
  Mat<Scalar> columns_;
};

// star_sq(i) = |b*_i|^2, mu(i, j) for j < i. mu is zero on and above the diagonal.
template <typename Scalar>
struct GramSchmidtData {
  Vec<Scalar> star_sq;
  Mat<Scalar> mu;
};

template <typename Scalar>
struct CvpInstance {
  LatticeBasis<Scalar> basis;
  Vec<Scalar> target;

  CvpInstance(LatticeBasis<Scalar> b, Vec<Scalar> t) : basis(std::move(b)), target(std::move(t)) {
    if (target.size() != basis.dim()) throw std::invalid_argument("CvpInstance: target dimension does not match basis");
    if (!target.allFinite()) throw std::invalid_argument("CvpInstance: non-finite target");
  }

  // Real coordinates of the target in the basis.
  Vec<Scalar> coordinates() const { return basis.columns().colPivHouseholderQr().solve(target); }
};

template <typename Scalar>
Scalar lattice_distance(const CvpInstance<Scalar>& inst, const IntegerVector& coeffs) {
  return (inst.target - inst.basis.columns() * coeffs.template cast<Scalar>()).norm();
}

// Gram-Schmidt data from the R factor of a QR decomposition; |R_ii| = |b*_i| and
// mu_ij = R_ji / R_jj regardless of the sign convention of the factorization.
template <typename Scalar>
GramSchmidtData<Scalar> gram_schmidt_from_r(const Mat<Scalar>& r) {
  const auto d = r.cols();
  GramSchmidtData<Scalar> gs;
  gs.star_sq.resize(d);
  gs.mu = Mat<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    gs.star_sq(i) = r(i, i) * r(i, i);
    if (!(gs.star_sq(i) > Scalar(0))) throw std::invalid_argument("gram_schmidt: dependent basis vectors");
    for (Eigen::Index j = 0; j < i; ++j) gs.mu(i, j) = r(j, i) / r(j, j);
  }
  return gs;
}

template <typename Scalar>
GramSchmidtData<Scalar> gram_schmidt(const LatticeBasis<Scalar>& basis) {
  return gram_schmidt_from_r<Scalar>(detail::r_factor<Scalar>(basis.columns()));
}

template <typename Scalar>
struct LllResult {
  LatticeBasis<Scalar> basis;
  IntegerMatrix transform;  // reduced = input * transform
  std::size_t swaps = 0;
};

// Size-reduction tolerance above 1/2 for Gram-Schmidt coefficients.
inline constexpr double kSizeReduceSlack = 1e-10;

struct LllOptions {
  double delta = 0.99;
  std::size_t reorthogonalize_every = 64;
  // Cap on swaps as a multiple of D^2.
  std::size_t swap_cap_factor = 10;
};

template <typename Scalar>
LllResult<Scalar> lll_reduce(const LatticeBasis<Scalar>& input, const LllOptions& opt = {}) {
  using std::abs;
  if (!(opt.delta > 0.25 && opt.delta <= 1.0)) throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1]");
  const auto d = input.dim();
  const Scalar delta = Scalar(opt.delta);
  const std::size_t cap = opt.swap_cap_factor * std::size_t(d) * std::size_t(d);

  Mat<Scalar> b = input.columns();
  IntegerMatrix u = IntegerMatrix::Identity(d, d);
  Mat<Scalar> r = detail::r_factor<Scalar>(b);
  std::size_t swaps = 0, since_refresh = 0;

  auto refresh = [&] {
    b = input.columns() * u.template cast<Scalar>();
    r = detail::r_factor<Scalar>(b);
    since_refresh = 0;
  };

  // Size-reduces column k; returns true when anything changed. Coefficients at
  // +-1/2 up to rounding noise are left alone, otherwise ties flip forever.
  const Scalar tie = Scalar(0.5) + Scalar(kSizeReduceSlack);
  auto size_reduce = [&](Eigen::Index k) {
    bool changed = false;
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      Scalar m = r(j, k) / r(j, j);
      if (abs(m) <= tie) continue;
      std::int64_t q = round_int<Scalar>(m);
      changed = true;
      r.col(k).head(j + 1) -= Scalar(q) * r.col(j).head(j + 1);
      b.col(k) -= Scalar(q) * b.col(j);
      for (Eigen::Index i = 0; i < d; ++i) u(i, k) = detail::checked_sub_mul(u(i, k), q, u(i, j));
    }
    return changed;
  };

  auto lovasz_ok = [&](Eigen::Index k) {
    Scalar lhs = delta * r(k - 1, k - 1) * r(k - 1, k - 1);
    Scalar rhs = r(k, k) * r(k, k) + r(k - 1, k) * r(k - 1, k);
    return lhs <= rhs;
  };

  Eigen::Index k = 1;
  for (std::size_t pass = 0;; ++pass) {
    if (pass > cap) throw IterationCapExceeded("lll_reduce: verification passes did not converge");
    while (k < d) {
      size_reduce(k);
      if (lovasz_ok(k)) {
        ++k;
        continue;
      }
      b.col(k - 1).swap(b.col(k));
      u.col(k - 1).swap(u.col(k));
      r.col(k - 1).swap(r.col(k));
      if (++swaps > cap) {
        std::ostringstream os;
        os << "lll_reduce: swap cap " << cap << " exceeded (D=" << d << ", delta=" << opt.delta << ")";
        throw IterationCapExceeded(os.str());
      }
      // restore triangularity of R with a Givens rotation on rows k-1, k
      Scalar x = r(k - 1, k - 1), y = r(k, k - 1);
      Scalar h = std::hypot(x, y);
      Scalar c = x / h, s = y / h;
      for (Eigen::Index j = k - 1; j < d; ++j) {
        Scalar a = r(k - 1, j), bb = r(k, j);
        r(k - 1, j) = c * a + s * bb;
        r(k, j) = -s * a + c * bb;
      }
      r(k, k - 1) = Scalar(0);
      if (++since_refresh >= opt.reorthogonalize_every) refresh();
      k = std::max<Eigen::Index>(k - 1, 1);
    }
    // final pass on freshly orthogonalized data; resume at the first violation
    refresh();
    Eigen::Index bad = 0;
    for (Eigen::Index i = 1; i < d && bad == 0; ++i) {
      if (size_reduce(i) || !lovasz_ok(i)) bad = i;
    }
    if (bad == 0) break;
    k = bad;
  }
  refresh();
  return LllResult<Scalar>{LatticeBasis<Scalar>::unchecked(b), u, swaps};
}

// Babai nearest plane in coefficient space. `coords` are the real coordinates of
// the target in the basis whose Gram-Schmidt coefficients are `mu`.
template <typename Scalar>
IntegerVector nearest_plane(const Mat<Scalar>& mu, const Vec<Scalar>& coords) {
  const auto d = coords.size();
  IntegerVector k(d);
  Vec<Scalar> resid = coords;  // coords minus the already chosen integer parts
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    Scalar l = coords(i);
    for (Eigen::Index m = i + 1; m < d; ++m) l += resid(m) * mu(m, i);
    k(i) = round_int<Scalar>(l);
    resid(i) = coords(i) - Scalar(k(i));
  }
  return k;
}

template <typename Scalar>
IntegerVector babai_nearest_plane(const CvpInstance<Scalar>& inst, const GramSchmidtData<Scalar>& gs) {
  if (gs.mu.rows() != inst.basis.dim()) throw std::invalid_argument("babai_nearest_plane: Gram-Schmidt data dimension mismatch");
  return nearest_plane<Scalar>(gs.mu, inst.coordinates());
}

template <typename Scalar>
IntegerVector naive_round(const CvpInstance<Scalar>& inst) {
  Vec<Scalar> c = inst.coordinates();
  IntegerVector k(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) k(i) = round_int<Scalar>(c(i));
  return k;
}

// Called after each accepted greedy move with (direction, step, squared distance).
template <typename Scalar>
using GreedyObserver = std::function<void(Eigen::Index, std::int64_t, Scalar)>;

constexpr std::size_t kGreedyMoveCap = 10000;

// Greedy coordinate descent on |B(k - c)|^2 given the Gram matrix G = B^T B and
// the target coordinates c. At every step the single-direction integer move with
// the largest decrease is taken; stops when no move decreases the distance.
template <typename Scalar>
IntegerVector greedy_descent_gram(const Mat<Scalar>& gram, const Vec<Scalar>& coords, IntegerVector seed,
                                  const GreedyObserver<Scalar>& observer = {}, std::size_t cap = kGreedyMoveCap) {
  const auto d = coords.size();
  if (seed.size() != d || gram.rows() != d) throw std::invalid_argument("greedy_descent: dimension mismatch");
  Vec<Scalar> diff = seed.template cast<Scalar>() - coords;
  Vec<Scalar> gd = gram * diff;
  Scalar dist2 = diff.dot(gd);
  for (std::size_t moves = 0;; ++moves) {
    Eigen::Index best = -1;
    std::int64_t best_step = 0;
    Scalar best_gain = Scalar(0);
    // treat changes at rounding level as no gain
    const Scalar floor_gain = -Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (dist2 + gram.diagonal().maxCoeff());
    for (Eigen::Index i = 0; i < d; ++i) {
      Scalar g = Scalar(2) * gd(i);
      std::int64_t step = round_int<Scalar>(-g / (Scalar(2) * gram(i, i)));
      if (step == 0) continue;
      Scalar gain = Scalar(step) * g + gram(i, i) * Scalar(step) * Scalar(step);
      if (gain < best_gain && gain < floor_gain) {
        best_gain = gain;
        best = i;
        best_step = step;
      }
    }
    if (best < 0) break;
    if (moves >= cap) throw IterationCapExceeded("greedy_descent: move cap exceeded");
    seed(best) += best_step;
    diff(best) += Scalar(best_step);
    gd += Scalar(best_step) * gram.col(best);
    if ((moves + 1) % 256 == 0) gd = gram * diff;
    dist2 = diff.dot(gd);
    if (observer) observer(best, best_step, dist2);
  }
  return seed;
}

template <typename Scalar>
IntegerVector greedy_descent(const CvpInstance<Scalar>& inst, const IntegerVector& seed,
                             const GreedyObserver<Scalar>& observer = {}) {
  const auto& b = inst.basis.columns();
  Mat<Scalar> gram = b.transpose() * b;
  return greedy_descent_gram<Scalar>(gram, inst.coordinates(), seed, observer);
}

template <typename Scalar>
struct ExactCvp {
  IntegerVector coeffs;
  Scalar distance;
  bool boundary_hit = false;  // minimizer touches the search box; widen the radius
};

constexpr Eigen::Index kMaxBruteForceDim = 12;

// Exact minimizer over the box naive +- radius by depth-first enumeration with
// distance pruning in the QR frame of the basis.
template <typename Scalar>
ExactCvp<Scalar> brute_force_cvp(const CvpInstance<Scalar>& inst, int radius = 4) {
  const auto d = inst.basis.dim();
  if (d > kMaxBruteForceDim) {
    std::ostringstream os;
    os << "brute_force_cvp: dimension " << d << " exceeds " << kMaxBruteForceDim
       << "; use lll_reduce + babai_nearest_plane + greedy_descent instead";
    throw std::invalid_argument(os.str());
  }
  if (radius < 0) throw std::invalid_argument("brute_force_cvp: negative radius");
  Eigen::HouseholderQR<Mat<Scalar>> qr(inst.basis.columns());
  Mat<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  Vec<Scalar> y = (qr.householderQ().transpose() * inst.target).eval();
  IntegerVector center = naive_round(inst);
  IntegerVector lo = center.array() - radius, hi = center.array() + radius;

  IntegerVector best = center;
  Scalar best_d2 = (y - r * center.template cast<Scalar>()).squaredNorm();
  IntegerVector k = center;

  std::function<void(Eigen::Index, Scalar)> descend = [&](Eigen::Index i, Scalar partial) {
    Scalar s = y(i);
    for (Eigen::Index j = i + 1; j < d; ++j) s -= r(i, j) * Scalar(k(j));
    Scalar c = s / r(i, i);
    Scalar rii2 = r(i, i) * r(i, i);
    std::int64_t c0 = std::clamp<std::int64_t>(round_int<Scalar>(c), lo(i), hi(i));
    // visit candidates in order of increasing |k_i - c|
    auto visit = [&](std::int64_t v) {
      Scalar diff = Scalar(v) - c;
      Scalar p = partial + rii2 * diff * diff;
      if (p >= best_d2) return false;
      k(i) = v;
      if (i == 0) {
        best_d2 = p;
        best = k;
      } else {
        descend(i - 1, p);
      }
      return true;
    };
    visit(c0);
    bool up_open = true, down_open = true;
    for (std::int64_t off = 1; up_open || down_open; ++off) {
      if (up_open) up_open = (c0 + off <= hi(i)) && visit(c0 + off);
      if (down_open) down_open = (c0 - off >= lo(i)) && visit(c0 - off);
    }
  };
  descend(d - 1, Scalar(0));

  ExactCvp<Scalar> out{best, lattice_distance(inst, best), false};
  for (Eigen::Index i = 0; i < d; ++i)
    if (best(i) == lo(i) || best(i) == hi(i)) out.boundary_hit = true;
  return out;
}

template <typename Scalar>
Scalar covering_radius_bound(const GramSchmidtData<Scalar>& gs) {
  using std::sqrt;
  return Scalar(0.5) * sqrt(gs.star_sq.sum());
}

// Typical distance of a random target from the lattice, scaled by 2 pi: the
// plateau prediction for a basis built without the 2 pi factor.
template <typename Scalar>
Scalar plateau_estimate(const GramSchmidtData<Scalar>& gs) {
  using std::sqrt;
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  return pi / sqrt(Scalar(3)) * sqrt(gs.star_sq.sum());
}

}  // namespace latbound
