#include "latbound/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace latbound {

SpacingSample unfold(const Eigen::VectorXd& levels, std::optional<int> delta) {
  const auto l = int(levels.size());
  if (l < 4) throw std::invalid_argument("unfold: need at least four levels");
  for (int i = 1; i < l; ++i)
    if (!(levels(i) >= levels(i - 1))) throw std::invalid_argument("unfold: levels must be sorted ascending");
  int dl = delta.value_or(int(std::lround(std::sqrt(double(l)))));
  if (dl < 1) throw std::invalid_argument("unfold: delta must be >= 1");
  if (l < 2 * dl + 2) throw std::invalid_argument("unfold: too few levels for the requested delta");
  SpacingSample out;
  out.delta = dl;
  // 1-based I in [dl + 1, l - dl] maps to 0-based i = I - 1
  for (int i = dl; i <= l - dl - 1; ++i) {
    double den = levels(i + dl) - levels(i - dl);
    if (!(den > 0.0)) {
      std::ostringstream os;
      os << "unfold: zero local window E[" << i + dl << "] - E[" << i - dl << "] (0-based)";
      throw std::invalid_argument(os.str());
    }
    out.s.push_back((levels(i + 1) - levels(i)) / den);
  }
  double mean = 0.0;
  for (double v : out.s) mean += v;
  mean /= double(out.s.size());
  if (!(mean > 0.0)) throw std::invalid_argument("unfold: all spacings vanish");
  for (double& v : out.s) v /= mean;
  return out;
}

double wigner_density(double s) {
  const double pi = std::numbers::pi;
  return s < 0.0 ? 0.0 : 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

double wigner_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-0.25 * std::numbers::pi * s * s); }

double poisson_density(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }

double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); }

double ks_distance(const SpacingSample& sample, Reference ref) {
  if (sample.s.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> v = sample.s;
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double f = ref == Reference::Wigner ? wigner_cdf(v[i]) : poisson_cdf(v[i]);
    d = std::max({d, std::abs(f - double(i) / n), std::abs(double(i + 1) / n - f)});
  }
  return d;
}

SpacingHistogram spacing_histogram(const SpacingSample& sample, int bins, double s_max) {
  if (bins < 1 || !(s_max > 0.0)) throw std::invalid_argument("spacing_histogram: bad binning");
  SpacingHistogram h;
  const double w = s_max / bins;
  const double n = double(sample.s.size());
  h.counts.assign(std::size_t(bins), 0.0);
  for (double v : sample.s) {
    if (v < 0.0 || v >= s_max) continue;
    ++h.counts[std::min(std::size_t(bins) - 1, std::size_t(v / w))];
  }
  for (int b = 0; b < bins; ++b) {
    double lo = b * w, hi = (b + 1) * w;
    h.centers.push_back(0.5 * (lo + hi));
    h.wigner_ref.push_back(n * (wigner_cdf(hi) - wigner_cdf(lo)));
    h.poisson_ref.push_back(n * (poisson_cdf(hi) - poisson_cdf(lo)));
  }
  return h;
}

std::string histogram_csv(const SpacingHistogram& h) {
  std::ostringstream os;
  os.precision(12);
  os << "s,count,wigner_ref,poisson_ref\n";
  for (std::size_t i = 0; i < h.centers.size(); ++i)
    os << h.centers[i] << "," << h.counts[i] << "," << h.wigner_ref[i] << "," << h.poisson_ref[i] << "\n";
  return os.str();
}

}  // namespace latbound
