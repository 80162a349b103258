#include <doctest.h>

#include "latbound/complexity.hpp"
#include "latbound/resonant.hpp"
#include "oracles.hpp"

#include <set>

using namespace latbound;

namespace {

// Unrestricted partition numbers, built up one allowed part size at a time.
std::uint64_t partitions_oracle(int n) {
  std::vector<std::uint64_t> p(std::size_t(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int s = part; s <= n; ++s) p[std::size_t(s)] += p[std::size_t(s - part)];
  return p[std::size_t(n)];
}

double coupling_times_half(const CouplingScheme& s, int n, int m, int k, int l) { return 0.5 * s.coupling(n, m, k, l); }

}  // namespace

TEST_CASE("Block: (3,3) ordering and occupations") {
  Block b(3, 3);
  REQUIRE(b.size() == 3);
  CHECK(b.partition(0) == std::vector<int>{3});
  CHECK(b.partition(1) == std::vector<int>{2, 1});
  CHECK(b.partition(2) == std::vector<int>{1, 1, 1});
  CHECK(b.state(0) == FockState{2, 0, 0, 1});
  CHECK(b.state(1) == FockState{1, 1, 1, 0});
  CHECK(b.state(2) == FockState{0, 3, 0, 0});
  for (Eigen::Index i = 0; i < b.size(); ++i) CHECK(b.index_of(b.state(i)) == i);
  CHECK(b.index_of(FockState{3, 0, 0, 0}) == -1);
  CHECK(partitions_csv(b) == "index,partition,occupations\n0,3,2 0 0 1\n1,2 1,1 1 1 0\n2,1 1 1,0 3 0 0\n");
}

TEST_CASE("Block: sizes and partition counts") {
  CHECK(Block(30, 30).size() == 5604);
  CHECK(Block(25, 25).size() == 1958);
  for (int n = 0; n <= 40; ++n) CHECK(partition_count(n, n) == partitions_oracle(n));
  for (int n = 1; n <= 12; ++n)
    for (int m = 0; m <= 14; ++m) {
      Block b(n, m);
      CHECK(std::uint64_t(b.size()) == partition_count(n, m));
      std::set<FockState> seen(b.states().begin(), b.states().end());
      CHECK(seen.size() == b.states().size());
      for (const auto& s : b.states()) {
        int particles = 0, energy = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
          particles += s[k];
          energy += int(k) * s[k];
        }
        CHECK(particles == n);
        CHECK(energy == m);
      }
    }
  CHECK_THROWS_AS(Block(40, 40), std::invalid_argument);
}

TEST_CASE("build_resonant: GG on the (2,2) block by hand") {
  Block b(2, 2);
  Eigen::MatrixXd h = build_resonant(b, CouplingScheme{CouplingKind::GG, 0.0, 0}).matrix().real();
  Eigen::MatrixXd expect(2, 2);
  expect << 2, std::sqrt(2.0), std::sqrt(2.0), 1;
  CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::VectorXd ev = eigenvalues(HermitianMatrix(h));
  CHECK(std::abs(ev(0)) < 1e-14);
  CHECK(ev(1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("build_resonant agrees with the ladder-operator oracle") {
  for (auto [n, m] : {std::pair{4, 5}, std::pair{6, 6}, std::pair{5, 7}}) {
    Block b(n, m);
    for (auto scheme : {CouplingScheme{CouplingKind::GG, 0.0, 0}, CouplingScheme{CouplingKind::Truncated, 0.0, 0},
                        CouplingScheme{CouplingKind::Random, 0.0, 17}}) {
      Eigen::MatrixXd h = build_resonant(b, scheme).matrix().real();
      Eigen::MatrixXd o = oracle::quartic_by_ladders(
          b, [&](int a, int bb, int c, int d) { return coupling_times_half(scheme, a, bb, c, d); }, 0);
      CHECK((h - o).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("coupling schemes") {
  CouplingScheme tr{CouplingKind::Truncated, 0.0, 0};
  CHECK(tr.coupling(1, 1, 1, 1) == 0.0);
  CHECK(tr.coupling(0, 0, 1, 1) == 1.0);
  CHECK(CouplingScheme{CouplingKind::GG, 0.0, 0}.coupling(3, 1, 2, 2) == 1.0);

  CouplingScheme r{CouplingKind::Random, 0.0, 99};
  double c = r.coupling(0, 3, 1, 2);
  CHECK(c > 0.0);
  CHECK(c < 1.0);
  CHECK(r.coupling(3, 0, 1, 2) == c);
  CHECK(r.coupling(0, 3, 2, 1) == c);
  CHECK(r.coupling(1, 2, 0, 3) == c);
  CHECK(r.coupling(0, 3, 0, 3) != c);
  CHECK(CouplingScheme{CouplingKind::Random, 0.0, 100}.coupling(0, 3, 1, 2) != c);

  Block b(6, 6);
  auto h1 = build_resonant(b, r).matrix();
  auto h2 = build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 99}).matrix();
  CHECK(max_abs(h1 - h2) == 0.0);

  for (int m : {5, 8}) {
    Block bm(m, m);
    const double alpha = 1.3;
    auto ha = build_resonant(bm, CouplingScheme{CouplingKind::Alpha, alpha, 0}).matrix();
    auto hd = build_resonant(bm, CouplingScheme{CouplingKind::Delta, alpha / m, 0}).matrix();
    CHECK(max_abs(ha - hd) < 1e-12);
  }
  CHECK(parse_coupling("truncated") == CouplingKind::Truncated);
  CHECK_THROWS_AS(parse_coupling("szego"), std::invalid_argument);
}

TEST_CASE("resonant_locality") {
  Block b(3, 3);
  CHECK(resonant_locality(b.state(1), b.state(1)) == 0);
  CHECK(resonant_locality(b.state(0), b.state(2)) == 3);
  CHECK(resonant_locality(b.state(2), b.state(0)) == 3);
  // every pair connected by a quartic term is at most 2-local
  Block b6(6, 6);
  Eigen::MatrixXd h = build_resonant(b6, CouplingScheme{CouplingKind::GG, 0.0, 0}).matrix().real();
  int connected = 0;
  for (Eigen::Index i = 0; i < b6.size(); ++i)
    for (Eigen::Index j = 0; j < b6.size(); ++j)
      if (i != j && h(i, j) != 0.0) {
        ++connected;
        CHECK(resonant_locality(b6.state(i), b6.state(j)) <= 2);
      }
  CHECK(connected > 0);
}

TEST_CASE("ResonantClassifier: counts and the Q extremes") {
  Block b(3, 3);
  Spectrum s = eigendecompose(build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 5}));
  const auto d = b.size();
  std::uint64_t prev = 0;
  for (int k = 0; k <= 3; ++k) {
    ResonantClassifier c(b, k);
    CHECK(c.local_count() >= prev);
    prev = c.local_count();
    std::uint64_t enumerated = 0;
    for (std::uint64_t g = 0; g < c.generator_count(); ++g) enumerated += c.is_local(g);
    CHECK(enumerated == c.local_count());
  }
  CHECK(prev == std::uint64_t(d * d));
  CHECK(build_q_matrix(s, ResonantClassifier(b, 3)).matrix().cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd q0 = build_q_matrix(s, ResonantClassifier(b, 0)).matrix();
  Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd w = s.vectors.cwiseAbs2();  // w(a, n) = |<a|n>|^2
  expect -= w.transpose() * w;
  CHECK((q0 - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hmin_operator: oracle, integer spectrum, conservation") {
  for (int n : {4, 6, 8}) {
    Block b(n, n);
    Eigen::MatrixXd h = hmin_operator(b).matrix().real();
    Eigen::MatrixXd o = oracle::quartic_by_ladders(
        b, [](int a, int bb, int c, int d) { return double(std::min(std::min(a, bb), std::min(c, d))); }, 1);
    for (Eigen::Index i = 0; i < b.size(); ++i)
      for (int k = 1; k <= n; ++k) o(i, i) += double(k * k) * b.state(i)[std::size_t(k)];
    CHECK((h - o).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd ev = eigenvalues(HermitianMatrix(h));
    for (double x : ev) CHECK(std::abs(x - std::round(x)) < 1e-8);
  }
  Block b(6, 6);
  Eigen::MatrixXcd hmin = hmin_operator(b).matrix();
  Eigen::MatrixXcd gg = build_resonant(b, CouplingScheme{CouplingKind::GG, 0.0, 0}).matrix();
  CHECK(max_abs(gg * hmin - hmin * gg) <= 1e-8);
  Eigen::MatrixXcd rnd = build_resonant(b, CouplingScheme{CouplingKind::Random, 0.0, 3}).matrix();
  CHECK(max_abs(rnd * hmin - hmin * rnd) > 0.1);
}
