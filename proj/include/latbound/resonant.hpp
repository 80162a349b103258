#pragma once

#include "latbound/complexity.hpp"
#include "latbound/linalg.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace latbound {

// Occupation numbers eta_0 .. eta_M of a bosonic Fock state.
using FockState = std::vector<int>;

constexpr std::uint64_t kMaxBlockStates = 20000;

// Fixed particle number N and total energy M = sum_n n eta_n. States are
// ordered by their partition of M (nonzero modes, largest first) in
// lexicographically decreasing order.
class Block {
 public:
  Block(int n_particles, int total_energy);

  int particles() const { return n_; }
  int energy() const { return m_; }
  Eigen::Index size() const { return Eigen::Index(states_.size()); }
  const FockState& state(Eigen::Index i) const { return states_[std::size_t(i)]; }
  const std::vector<FockState>& states() const { return states_; }
  // -1 when the occupation is not in the block.
  Eigen::Index index_of(const FockState& s) const;
  std::vector<int> partition(Eigen::Index i) const;

 private:
  int n_, m_;
  std::vector<FockState> states_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

// Number of partitions of m into at most n parts, by a counting recurrence.
std::uint64_t partition_count(int n, int m);

// Particles that change mode under |a><b|.
int resonant_locality(const FockState& a, const FockState& b);

enum class CouplingKind { GG, Truncated, Alpha, Delta, Random };

const char* coupling_name(CouplingKind k);
CouplingKind parse_coupling(const std::string& name);

struct CouplingScheme {
  CouplingKind kind = CouplingKind::GG;
  double param = 0.0;  // alpha or delta
  std::uint64_t seed = 0;

  // C_nmkl for n + m = k + l. Random couplings are uniform on (0, 1), one draw
  // per symmetry orbit {nmkl, mnkl, nmlk, klnm, ...}, keyed by the seed.
  double coupling(int n, int m, int k, int l) const;
  // Extra diagonal term for a state of the block.
  double diagonal(const FockState& s, int total_energy) const;
};

// H = 1/2 sum_{n+m=k+l} C_nmkl a+_n a+_m a_k a_l (+ diagonal term).
HermitianMatrix build_resonant(const Block& block, const CouplingScheme& scheme);

// sum_{n,m,k,l >= 1} min(n,m,k,l) a+_n a+_m a_k a_l + sum_{k >= 1} k^2 a+_k a_k.
HermitianMatrix hmin_operator(const Block& block);

// |a><b| is local when resonant_locality(a, b) <= k. Generator index a * D + b
// stands for the Hermitian combination: |a><a| for a == b, the symmetric
// combination for a < b and the antisymmetric one for a > b.
class ResonantClassifier : public LocalityClassifier {
 public:
  ResonantClassifier(const Block& block, int k);

  Eigen::Index dimension() const override { return block_->size(); }
  int threshold() const override { return k_; }
  std::uint64_t generator_count() const override;
  bool is_local(std::uint64_t generator) const override;
  std::uint64_t local_count() const override;
  Eigen::Index diagonal_rows(const Spectrum& s, std::uint64_t first, Eigen::MatrixXd& rows) const override;

 private:
  const Block* block_;
  int k_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;  // a <= b, local
  std::vector<std::uint32_t> offdiag_;                          // indices into pairs_ with a < b
};

std::string partitions_csv(const Block& block);

}  // namespace latbound
