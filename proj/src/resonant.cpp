#include "latbound/resonant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace latbound {

namespace {

std::string key_of(const FockState& s) {
  std::string k(s.size(), '\0');
  for (std::size_t i = 0; i < s.size(); ++i) k[i] = char(s[i]);
  return k;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Adds sum_{n+m=k+l} coeff(n,m,k,l) a+_n a+_m a_k a_l over modes >= min_mode.
template <class F>
void add_quartic(const Block& block, Eigen::MatrixXd& h, F coeff, int min_mode) {
  const int mmax = block.energy();
  for (Eigen::Index col = 0; col < block.size(); ++col) {
    const FockState& eta = block.state(col);
    for (int k = min_mode; k <= mmax; ++k) {
      if (eta[std::size_t(k)] == 0) continue;
      for (int l = min_mode; l <= mmax; ++l) {
        int avail = eta[std::size_t(l)] - (k == l ? 1 : 0);
        if (avail <= 0) continue;
        // a_l acts first, then a_k
        double amp1 = std::sqrt(double(eta[std::size_t(l)])) * std::sqrt(double(eta[std::size_t(k)] - (k == l ? 1 : 0)));
        FockState mid = eta;
        --mid[std::size_t(l)];
        --mid[std::size_t(k)];
        const int s = k + l;
        for (int n = std::max(min_mode, s - mmax); n <= std::min(mmax, s - min_mode); ++n) {
          const int m = s - n;
          double c = coeff(n, m, k, l);
          if (c == 0.0) continue;
          double amp2 = std::sqrt(double(mid[std::size_t(m)] + 1)) *
                        std::sqrt(double(mid[std::size_t(n)] + 1 + (n == m ? 1 : 0)));
          FockState out = mid;
          ++out[std::size_t(m)];
          ++out[std::size_t(n)];
          Eigen::Index row = block.index_of(out);
          if (row < 0) throw std::logic_error("resonant builder: state left the block");
          h(row, col) += c * amp1 * amp2;
        }
      }
    }
  }
}

}  // namespace

std::uint64_t partition_count(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("partition_count: negative argument");
  // partitions of m into at most n parts == partitions of m with parts <= n
  std::vector<std::uint64_t> p(std::size_t(m) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int v = part; v <= m; ++v) p[std::size_t(v)] += p[std::size_t(v - part)];
  return p[std::size_t(m)];
}

Block::Block(int n_particles, int total_energy) : n_(n_particles), m_(total_energy) {
  if (n_particles < 1 || total_energy < 0) throw std::invalid_argument("Block: need N >= 1 and M >= 0");
  if (n_particles > 255) throw std::invalid_argument("Block: N > 255 is not supported");
  std::uint64_t count = partition_count(n_particles, total_energy);
  if (count > kMaxBlockStates) {
    std::ostringstream os;
    os << "Block: (N, M) = (" << n_particles << ", " << total_energy << ") has " << count
       << " states, above the guard of " << kMaxBlockStates;
    throw std::invalid_argument(os.str());
  }
  states_.reserve(std::size_t(count));
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      FockState s(std::size_t(m_) + 1, 0);
      s[0] = n_ - int(parts.size());
      for (int p : parts) ++s[std::size_t(p)];
      states_.push_back(std::move(s));
      return;
    }
    if (int(parts.size()) == n_) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(m_, m_);
  if (states_.size() != count) throw std::logic_error("Block: enumeration disagrees with the partition count");
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(key_of(states_[i]), Eigen::Index(i));
}

Eigen::Index Block::index_of(const FockState& s) const {
  if (s.size() != std::size_t(m_) + 1) return -1;
  auto it = index_.find(key_of(s));
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Block::partition(Eigen::Index i) const {
  std::vector<int> parts;
  const FockState& s = state(i);
  for (int n = m_; n >= 1; --n)
    for (int c = 0; c < s[std::size_t(n)]; ++c) parts.push_back(n);
  return parts;
}

int resonant_locality(const FockState& a, const FockState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("resonant_locality: states from different blocks");
  int moved = 0;
  for (std::size_t n = 0; n < a.size(); ++n) moved += std::max(b[n] - a[n], 0);
  return moved;
}

const char* coupling_name(CouplingKind k) {
  switch (k) {
    case CouplingKind::GG: return "gg";
    case CouplingKind::Truncated: return "truncated";
    case CouplingKind::Alpha: return "alpha";
    case CouplingKind::Delta: return "delta";
    case CouplingKind::Random: return "random";
  }
  return "unknown";
}

CouplingKind parse_coupling(const std::string& name) {
  for (auto k : {CouplingKind::GG, CouplingKind::Truncated, CouplingKind::Alpha, CouplingKind::Delta,
                 CouplingKind::Random})
    if (name == coupling_name(k)) return k;
  throw std::invalid_argument("unknown coupling scheme '" + name + "' (expected gg, truncated, alpha, delta, random)");
}

double CouplingScheme::coupling(int n, int m, int k, int l) const {
  switch (kind) {
    case CouplingKind::GG:
    case CouplingKind::Alpha:
    case CouplingKind::Delta:
      return 1.0;
    case CouplingKind::Truncated:
      return (n == 0 || m == 0 || k == 0 || l == 0) ? 1.0 : 0.0;
    case CouplingKind::Random: {
      std::array<std::array<int, 4>, 8> orbit = {{{n, m, k, l}, {m, n, k, l}, {n, m, l, k}, {m, n, l, k},
                                                  {k, l, n, m}, {l, k, n, m}, {k, l, m, n}, {l, k, m, n}}};
      const auto& rep = *std::min_element(orbit.begin(), orbit.end());
      std::uint64_t h = splitmix64(seed);
      for (int v : rep) h = splitmix64(h ^ std::uint64_t(v));
      return (double(h >> 11) + 0.5) * 0x1.0p-53;
    }
  }
  return 0.0;
}

double CouplingScheme::diagonal(const FockState& s, int total_energy) const {
  if (kind == CouplingKind::Alpha) return param * s[0];
  if (kind == CouplingKind::Delta) return param * total_energy * s[0];
  return 0.0;
}

HermitianMatrix build_resonant(const Block& block, const CouplingScheme& scheme) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(block.size(), block.size());
  add_quartic(block, h, [&](int n, int m, int k, int l) { return 0.5 * scheme.coupling(n, m, k, l); }, 0);
  for (Eigen::Index i = 0; i < block.size(); ++i) h(i, i) += scheme.diagonal(block.state(i), block.energy());
  return HermitianMatrix(h);
}

HermitianMatrix hmin_operator(const Block& block) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(block.size(), block.size());
  add_quartic(block, h, [](int n, int m, int k, int l) { return double(std::min(std::min(n, m), std::min(k, l))); }, 1);
  for (Eigen::Index i = 0; i < block.size(); ++i) {
    const FockState& s = block.state(i);
    for (int k = 1; k <= block.energy(); ++k) h(i, i) += double(k) * k * s[std::size_t(k)];
  }
  return HermitianMatrix(h);
}

ResonantClassifier::ResonantClassifier(const Block& block, int k) : block_(&block), k_(k) {
  if (k < 0) throw std::invalid_argument("ResonantClassifier: negative locality threshold");
  const auto d = block.size();
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b)
      if (resonant_locality(block.state(a), block.state(b)) <= k) {
        if (a != b) offdiag_.push_back(std::uint32_t(pairs_.size()));
        pairs_.emplace_back(std::uint32_t(a), std::uint32_t(b));
      }
}

std::uint64_t ResonantClassifier::generator_count() const {
  return std::uint64_t(block_->size()) * std::uint64_t(block_->size());
}

bool ResonantClassifier::is_local(std::uint64_t generator) const {
  if (generator >= generator_count()) throw std::out_of_range("ResonantClassifier: generator index out of range");
  auto d = std::uint64_t(block_->size());
  return resonant_locality(block_->state(Eigen::Index(generator / d)), block_->state(Eigen::Index(generator % d))) <= k_;
}

std::uint64_t ResonantClassifier::local_count() const { return pairs_.size() + offdiag_.size(); }

Eigen::Index ResonantClassifier::diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const {
  const Eigen::MatrixXd vr = s.vectors.real().transpose();
  const Eigen::MatrixXd vi = s.vectors.imag().transpose();
  const bool real = vi.cwiseAbs().maxCoeff() == 0.0;
  const double r2 = std::sqrt(2.0);
  Eigen::Index written = 0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    std::uint64_t idx = first + std::uint64_t(r);
    if (idx < pairs_.size()) {
      auto [a, b] = pairs_[idx];
      if (a == b)
        rows.row(written++) = vr.col(a).array().square() + vi.col(a).array().square();
      else
        rows.row(written++) = r2 * (vr.col(a).cwiseProduct(vr.col(b)) + vi.col(a).cwiseProduct(vi.col(b)));
    } else {
      if (real) continue;
      auto [a, b] = pairs_[offdiag_.at(idx - pairs_.size())];
      rows.row(written++) = -r2 * (vr.col(a).cwiseProduct(vi.col(b)) - vi.col(a).cwiseProduct(vr.col(b)));
    }
  }
  return written;
}

std::string partitions_csv(const Block& block) {
  std::ostringstream os;
  os << "index,partition,occupations\n";
  for (Eigen::Index i = 0; i < block.size(); ++i) {
    os << i << ",";
    auto parts = block.partition(i);
    for (std::size_t p = 0; p < parts.size(); ++p) os << (p ? " " : "") << parts[p];
    os << ",";
    const auto& st = block.state(i);
    for (std::size_t n = 0; n < st.size(); ++n) os << (n ? " " : "") << st[n];
    os << "\n";
  }
  return os.str();
}

}  // namespace latbound
