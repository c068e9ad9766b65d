#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "krylovlab/info_measures.hpp"
#include "krylovlab/models.hpp"
#include "oracles.hpp"

using namespace krylovlab;

namespace {

const double kLn2 = std::numbers::ln2;

HermitianOperator diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return HermitianOperator(HilbertStructure::single(static_cast<int>(d.size())), m);
}

StateVector ghz3() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0 / std::numbers::sqrt2;
  return StateVector(HilbertStructure::qubits(3), v);
}

StateVector w3() {
  Vector v = Vector::Zero(8);
  v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  return StateVector(HilbertStructure::qubits(3), v);
}

Matrix random_unitary(int d, std::uint64_t seed) {
  const auto h = random_gue(d, seed);
  return h.eigensystem().vectors;
}

}  // namespace

TEST(Shannon, Elementary) {
  EXPECT_EQ(shannon_entropy(ProbabilityDistribution({1.0, 0.0})), 0.0);
  EXPECT_NEAR(shannon_entropy(ProbabilityDistribution({0.5, 0.5})), kLn2, 1e-15);
}

TEST(Shannon, GeometricAtKEqualsOne) {
  std::vector<double> p;
  for (int n = 0; n < 200; ++n) p.push_back(std::pow(0.5, n + 1));
  EXPECT_NEAR(shannon_entropy(ProbabilityDistribution::from_weights(p)), 2.0 * kLn2, 1e-12);
}

TEST(Shannon, RejectsNegative) {
  EXPECT_THROW(ProbabilityDistribution({1.2, -0.2}), ValidationError);
  EXPECT_THROW(ProbabilityDistribution({0.5, 0.4}), ValidationError);
}

TEST(VonNeumann, Elementary) {
  const auto psi = random_haar_state(HilbertStructure::single(3), 1);
  EXPECT_NEAR(von_neumann_entropy(HermitianOperator::projector(psi)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag({0.5, 0.5})), kLn2, 1e-15);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const std::vector<int> a{0};
  EXPECT_NEAR(von_neumann_entropy(reduced_density(StateVector(HilbertStructure::qubits(2), bell), a)), kLn2, 1e-14);
}

TEST(VonNeumann, RejectsNonUnitTrace) { EXPECT_THROW(von_neumann_entropy(diag({0.5, 0.6})), ValidationError); }

TEST(VonNeumann, BelowMeasurementEntropy) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_haar_state(HilbertStructure({3, 2}), seed);
    const std::vector<int> a{0};
    const auto rho = reduced_density(psi, a);
    const Matrix u = random_unitary(3, seed + 500);
    const Matrix rotated = u.adjoint() * rho.matrix() * u;
    std::vector<double> diag_p;
    for (int i = 0; i < 3; ++i) diag_p.push_back(std::max(0.0, rotated(i, i).real()));
    const double s = von_neumann_entropy(rho);
    EXPECT_LE(s, shannon_entropy(ProbabilityDistribution::from_weights(diag_p)) + 1e-10);
    std::vector<double> comp;
    for (int i = 0; i < 3; ++i) comp.push_back(std::max(0.0, rho.matrix()(i, i).real()));
    EXPECT_LE(s, shannon_entropy(ProbabilityDistribution::from_weights(comp)) + 1e-10);
  }
}

TEST(RelativeEntropy, Cases) {
  const auto rho = diag({0.5, 0.5});
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-14);
  EXPECT_EQ(relative_entropy(diag({1.0, 0.0}), diag({0.0, 1.0})), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(relative_entropy(rho, diag({0.75, 0.25})), 0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0), 1e-14);
  EXPECT_THROW(relative_entropy(rho, diag({0.2, 0.3, 0.5})), StructuralError);
}

TEST(RelativeEntropy, KleinInequality) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::vector<int> a{0};
    const auto r = reduced_density(random_haar_state(HilbertStructure({3, 3}), seed), a);
    const auto s = reduced_density(random_haar_state(HilbertStructure({3, 3}), seed + 99), a);
    EXPECT_GT(relative_entropy(r, s), 1e-10);
    EXPECT_NEAR(relative_entropy(r, r), 0.0, 1e-10);
  }
}

TEST(Coherence, L1) {
  const auto s = HilbertStructure::single(2);
  EXPECT_EQ(l1_coherence(StateVector::basis(s, 1)), 0.0);
  Vector plus(2);
  plus << 1.0, 1.0;
  EXPECT_NEAR(l1_coherence(StateVector::normalized(s, plus)), 1.0, 1e-15);
  Vector u(3);
  u << 1.0, 1.0, 1.0;
  EXPECT_NEAR(l1_coherence(StateVector::normalized(HilbertStructure::single(3), u)), 2.0, 1e-14);
}

TEST(Coherence, BasisDependenceAndValidation) {
  const auto s = HilbertStructure::single(2);
  Vector plus(2);
  plus << 1.0, 1.0;
  const auto p = StateVector::normalized(s, plus);
  Matrix hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::numbers::sqrt2;
  EXPECT_NEAR(l1_coherence(p, hadamard), 0.0, 1e-15);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.3;
  EXPECT_THROW(l1_coherence(p, bad), ValidationError);
}

TEST(Coherence, Pairwise) {
  const auto s = HilbertStructure::single(2);
  Vector plus(2);
  plus << 1.0, 1.0;
  EXPECT_NEAR(pairwise_coherence(StateVector::normalized(s, plus), 0, 1), 0.5, 1e-15);
  EXPECT_EQ(pairwise_coherence(StateVector::basis(s, 0), 0, 1), 0.0);
  Vector u(3);
  u << 1.0, 1.0, 1.0;
  const auto uq = StateVector::normalized(HilbertStructure::single(3), u);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) EXPECT_NEAR(pairwise_coherence(uq, i, j), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(pairwise_coherence(uq, 1, 1), StructuralError);
  EXPECT_THROW(pairwise_coherence(uq, 0, 3), StructuralError);
}

TEST(Coherence, L1IsSumOfPairs) {
  const auto psi = random_haar_state(HilbertStructure::single(5), 3);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) sum += 2.0 * pairwise_coherence(psi, i, j);
  EXPECT_NEAR(l1_coherence(psi), sum, 1e-14);
}

TEST(GeometricMeasure, ProductStateIsZero) {
  const auto psi = random_product_state(HilbertStructure::qubits(3), 5);
  EXPECT_NEAR(geometric_measure_product(psi).value, 0.0, 1e-12);
  EXPECT_NEAR(ggm(psi).value, 0.0, 1e-12);
}

TEST(GeometricMeasure, GhzAgainstTwoSphereGrid) {
  const double grid = 1.0 - oracle::max_product_overlap_two_sphere(ghz3().amplitudes());
  EXPECT_NEAR(grid, 0.5, 1e-6);
  const auto r = geometric_measure_product(ghz3());
  EXPECT_NEAR(r.value, grid, 1e-4);
  EXPECT_NEAR(r.value, 0.5, 1e-10);
  EXPECT_TRUE(r.monotone);
}

TEST(GeometricMeasure, WAgainstSymmetricGrid) {
  const double grid = 1.0 - oracle::max_symmetric_product_overlap(w3().amplitudes());
  EXPECT_NEAR(grid, 1.0 - 4.0 / 9.0, 1e-8);
  const auto r = geometric_measure_product(w3());
  EXPECT_NEAR(r.value, grid, 1e-4);
  EXPECT_NEAR(r.value, 1.0 - 4.0 / 9.0, 1e-9);
}

TEST(GeometricMeasure, RandomStatesAgainstTwoSphereGrid) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto psi = random_haar_state(HilbertStructure::qubits(3), 400 + seed);
    const double grid = 1.0 - oracle::max_product_overlap_two_sphere(psi.amplitudes(), 19, 36);
    const double opt = geometric_measure_product(psi).value;
    // the optimizer must do at least as well as the grid, and the grid is fine
    // enough after refinement to get close
    EXPECT_LE(opt, grid + 1e-9);
    EXPECT_NEAR(opt, grid, 1e-4);
  }
}

TEST(GeometricMeasure, MaximizerAchievesValue) {
  const auto psi = random_haar_state(HilbertStructure({2, 3, 2}), 17);
  const auto r = geometric_measure_product(psi);
  EXPECT_NEAR(r.maximizer.norm(), 1.0, 1e-12);
  EXPECT_NEAR(1.0 - std::norm(r.maximizer.dot(psi.amplitudes())), r.value, 1e-10);
  EXPECT_EQ(r.restarts_used, 32);
}

TEST(GeometricMeasure, LocalUnitaryInvariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = random_haar_state(HilbertStructure::qubits(3), 700 + seed);
    Matrix u = random_unitary(2, seed);
    for (int p = 1; p < 3; ++p) u = kron(u, random_unitary(2, seed * 10 + p));
    const StateVector rotated(psi.structure(), u * psi.amplitudes());
    EXPECT_NEAR(geometric_measure_product(psi).value, geometric_measure_product(rotated).value, 1e-6);
  }
}

TEST(GeometricMeasure, Monotone) {
  const auto psi = random_haar_state(HilbertStructure::qubits(4), 3);
  const BlockLayout layout(psi.structure(), {{0}, {1}, {2}, {3}});
  CounterRng rng(5);
  std::vector<Vector> factors;
  for (int b = 0; b < 4; ++b) {
    Vector f(2);
    f << rng.complex_normal(), rng.complex_normal();
    factors.push_back(f.normalized());
  }
  const auto out = alternating_overlap(psi.amplitudes(), layout, factors, 1e-14, 500);
  ASSERT_GE(out.history.size(), 2u);
  for (std::size_t i = 1; i < out.history.size(); ++i) EXPECT_GE(out.history[i], out.history[i - 1] - 1e-14);
  EXPECT_TRUE(out.monotone);
}

TEST(GeometricMeasure, TwoPartyFallbackIsSchmidt) {
  const auto psi = random_haar_state(HilbertStructure({2, 3}), 8);
  const std::vector<int> cut{0};
  const auto sd = schmidt(psi, cut);
  EXPECT_NEAR(geometric_measure_product(psi).value, 1.0 - sd.coefficients(0) * sd.coefficients(0), 1e-12);
}

TEST(Ggm, GhzViaSchmidtScan) { EXPECT_NEAR(ggm(ghz3()).value, 0.5, 1e-10); }

TEST(Ggm, WAgainstPartialTraceOracle) {
  double best = 0.0;
  for (int p = 0; p < 3; ++p) {
    const std::vector<int> keep{p};
    const auto ev = eigendecompose(partial_trace(HermitianOperator::projector(w3()), keep)).values;
    best = std::max(best, ev(ev.size() - 1));
  }
  EXPECT_NEAR(best, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(ggm(w3()).value, 1.0 - best, 1e-12);
}

TEST(Ggm, NeedsThreeParties) {
  EXPECT_THROW(ggm(random_haar_state(HilbertStructure::qubits(2), 1)), StructuralError);
}

TEST(Ggm, BelowProductMeasure) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_haar_state(HilbertStructure::qubits(3), 900 + seed);
    EXPECT_LE(ggm(psi).value, geometric_measure_product(psi).value + 1e-8);
  }
}

TEST(MProducible, ReducesToEndpoints) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = random_haar_state(HilbertStructure::qubits(3), 50 + seed);
    EXPECT_NEAR(m_producible_geometric_measure(psi, 2).value, geometric_measure_product(psi).value, 1e-8);
    EXPECT_NEAR(m_producible_geometric_measure(psi, 3).value, ggm(psi).value, 1e-8);
  }
  EXPECT_NEAR(m_producible_geometric_measure(ghz3(), 3).value, 0.5, 1e-10);
}

TEST(MProducible, RangeAndPartitions) {
  EXPECT_THROW(m_producible_geometric_measure(ghz3(), 1), StructuralError);
  EXPECT_THROW(m_producible_geometric_measure(ghz3(), 4), StructuralError);
  EXPECT_EQ(maximal_partitions(3, 1).size(), 1u);
  EXPECT_EQ(maximal_partitions(3, 2).size(), 3u);
  EXPECT_EQ(maximal_partitions(4, 2).size(), 3u);  // pairings only
  EXPECT_EQ(maximal_partitions(4, 3).size(), 4u + 3u);
}

TEST(MProducible, FourQubitsIntermediate) {
  // two Bell pairs on (0,1) and (2,3): biproducible with m = 3, so G = 0;
  // fully product measure is 1 - 1/4
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const StateVector b(HilbertStructure::qubits(2), bell);
  const auto psi = tensor_product(b, b);
  EXPECT_NEAR(m_producible_geometric_measure(psi, 3).value, 0.0, 1e-10);
  EXPECT_NEAR(m_producible_geometric_measure(psi, 2).value, 0.75, 1e-10);
}
