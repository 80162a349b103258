#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace latbound {

struct SpacingSample {
  std::vector<double> s;  // unfolded spacings, mean 1
  int delta = 0;
};

// Local unfolding: s_I = (E_{I+1} - E_I) / (E_{I+delta} - E_{I-delta}) for the
// levels delta+1 .. L-delta (1-based), rescaled to unit mean. Default delta is
// round(sqrt(L)). Levels must be sorted ascending.
SpacingSample unfold(const Eigen::VectorXd& levels, std::optional<int> delta = std::nullopt);

double wigner_density(double s);
double wigner_cdf(double s);
double poisson_density(double s);
double poisson_cdf(double s);

enum class Reference { Wigner, Poisson };
double ks_distance(const SpacingSample& sample, Reference ref);

struct SpacingHistogram {
  std::vector<double> centers;
  std::vector<double> counts;
  std::vector<double> wigner_ref;   // expected counts per bin
  std::vector<double> poisson_ref;  // expected counts per bin
};

SpacingHistogram spacing_histogram(const SpacingSample& sample, int bins = 50, double s_max = 4.0);
std::string histogram_csv(const SpacingHistogram& h);

}  // namespace latbound
