#include "qdis/linalg.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "qdis/errors.hpp"

using namespace qdis;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector plus() { return {{2}, Vector{{kInvSqrt2, kInvSqrt2}}}; }
StateVector bell() { return {{2, 2}, Vector{{kInvSqrt2, 0.0, 0.0, kInvSqrt2}}}; }

void expect_vector_near(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a(i) - b(i)), 0.0, tol) << "i=" << i;
}

// Random mixed state as a weighted sum of random pure-state projectors.
DensityMatrix random_density(const Dims& dims, Rng& rng, int terms) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const auto dim = static_cast<Eigen::Index>(total_dimension(dims));
  Matrix m = Matrix::Zero(dim, dim);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  for (double x : w) {
    const StateVector s = random_state(dims, rng);
    m += (x / total) * s.amplitudes() * s.amplitudes().adjoint();
  }
  return {dims, m};
}

Dims random_dims(Rng& rng, std::size_t max_total) {
  std::uniform_int_distribution<std::size_t> pick(2, 4);
  Dims dims;
  std::size_t total = 1;
  while (true) {
    const std::size_t d = pick(rng);
    if (total * d > max_total) break;
    dims.push_back(d);
    total *= d;
  }
  if (dims.size() < 2) dims = {2, 2};
  return dims;
}

}  // namespace

// ---------- construction ----------

TEST(StateVector, RejectsUnnormalizedAmplitudes) {
  EXPECT_THROW(StateVector({2}, Vector{{1.0, 1.0}}), InvariantViolation);
}

TEST(StateVector, RejectsLengthMismatchAndTinySubsystems) {
  EXPECT_THROW(StateVector({2, 2}, Vector{{1.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(StateVector({1}, Vector{{1.0}}), InvalidArgument);
}

TEST(StateVector, BinaryLabelMatchesBigEndianIndex) {
  const StateVector s = StateVector::qubits("01001");
  EXPECT_EQ(s.dimension(), 32u);
  EXPECT_EQ(s[9], Complex(1.0));
}

TEST(DensityMatrix, ValidationCatchesEachInvariant) {
  Matrix non_hermitian{{0.5, 0.1}, {0.0, 0.5}};
  EXPECT_THROW(DensityMatrix({2}, non_hermitian), InvariantViolation);
  Matrix bad_trace{{0.5, 0.0}, {0.0, 0.6}};
  EXPECT_THROW(DensityMatrix({2}, bad_trace), InvariantViolation);
  Matrix negative{{1.5, 0.0}, {0.0, -0.5}};
  EXPECT_THROW(DensityMatrix({2}, negative), InvariantViolation);
  EXPECT_NO_THROW(DensityMatrix({2}, Matrix{{0.5, 0.5}, {0.5, 0.5}}));
}

TEST(UnitaryMatrix, RejectsNonUnitary) {
  EXPECT_THROW(UnitaryMatrix(Matrix{{1.0, 1.0}, {0.0, 1.0}}), InvariantViolation);
}

// ---------- tensor_product ----------

TEST(TensorProduct, ZeroOneIsIndexOne) {
  const StateVector s = tensor_product(StateVector::qubits("0"), StateVector::qubits("1"));
  EXPECT_EQ(s.dims(), (Dims{2, 2}));
  expect_vector_near(s.amplitudes(), Vector{{0.0, 1.0, 0.0, 0.0}}, 0.0);
}

TEST(TensorProduct, FiveFactorsGiveNine) {
  StateVector s = StateVector::qubits("0");
  for (char c : std::string("1001")) s = tensor_product(s, StateVector::qubits(std::string(1, c)));
  ASSERT_EQ(s.dimension(), 32u);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(s[i], Complex(i == 9 ? 1.0 : 0.0));
}

TEST(TensorProduct, Linearity) {
  const StateVector s = tensor_product(plus(), StateVector::qubits("0"));
  expect_vector_near(s.amplitudes(), Vector{{kInvSqrt2, 0.0, kInvSqrt2, 0.0}}, 1e-15);
}

TEST(TensorProduct, Associative) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = random_state({2}, rng), b = random_state({3}, rng), c = random_state({2, 2}, rng);
    const StateVector left = tensor_product(tensor_product(a, b), c);
    const StateVector right = tensor_product(a, tensor_product(b, c));
    EXPECT_EQ(left.dims(), right.dims());
    EXPECT_LT(max_abs_deviation(left.amplitudes(), right.amplitudes()), 1e-15);
  }
}

// ---------- apply_unitary ----------

TEST(ApplyUnitary, IdentityLeavesStateUnchanged) {
  Rng rng(3);
  const StateVector s = random_state({2, 3, 2}, rng);
  const StateVector out = apply_unitary(UnitaryMatrix::identity(6), s, {1, 2});
  expect_vector_near(out.amplitudes(), s.amplitudes(), 0.0);
}

TEST(ApplyUnitary, BitFlipOnQubitZero) {
  const UnitaryMatrix x(Matrix{{0.0, 1.0}, {1.0, 0.0}});
  const StateVector out = apply_unitary(x, StateVector::qubits("00"), {0});
  expect_vector_near(out.amplitudes(), StateVector::qubits("10").amplitudes(), 0.0);
}

TEST(ApplyUnitary, TwoPointDftMakesPlus) {
  // Entries exp(2 pi i x r / 2) / sqrt 2
  const UnitaryMatrix dft(Matrix{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}});
  const StateVector out = apply_unitary(dft, StateVector::qubits("0"), {0});
  expect_vector_near(out.amplitudes(), plus().amplitudes(), 1e-15);
}

TEST(ApplyUnitary, TargetOrderDefinesOperatorIndexing) {
  // CNOT with control = first listed target.
  const UnitaryMatrix cnot(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  const StateVector s = StateVector::qubits("100");  // qubit 0 set
  expect_vector_near(apply_unitary(cnot, s, {0, 2}).amplitudes(), StateVector::qubits("101").amplitudes(), 0.0);
  expect_vector_near(apply_unitary(cnot, s, {2, 0}).amplitudes(), s.amplitudes(), 0.0);
}

TEST(ApplyUnitary, ErrorPaths) {
  const StateVector s = StateVector::qubits("00");
  EXPECT_THROW(apply_unitary(UnitaryMatrix::identity(2), s, {0, 1}), InvalidArgument);
  EXPECT_THROW(apply_unitary(UnitaryMatrix::identity(4), s, {0, 0}), InvalidArgument);
  EXPECT_THROW(apply_unitary(UnitaryMatrix::identity(2), s, {2}), InvalidArgument);
}

TEST(ApplyUnitary, PreservesNormForRandomInputs) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Dims dims = random_dims(rng, 64);
    const StateVector s = random_state(dims, rng);
    const Subsystems targets{trial % dims.size()};
    const UnitaryMatrix u = haar_random_unitary(dims[targets[0]], rng);
    EXPECT_NEAR(apply_unitary(u, s, targets).norm(), 1.0, 1e-12);
  }
}

TEST(ApplyUnitary, DensityMatrixConjugationMatchesEmbeddedMatrix) {
  Rng rng(5);
  const DensityMatrix rho = random_density({2, 2, 2}, rng, 3);
  const UnitaryMatrix u = haar_random_unitary(4, rng);
  // Targets {2, 0}: embed by permuting to (2, 0, 1), applying U (x) 1, permuting back.
  const Matrix full = kron(u.matrix(), Matrix::Identity(2, 2));
  const DensityMatrix permuted = permute(rho, {2, 0, 1});
  const DensityMatrix conj(permuted.dims(), full * permuted.matrix() * full.adjoint(), unchecked);
  const DensityMatrix expected = permute(conj, {1, 2, 0});
  const DensityMatrix got = apply_unitary(u, rho, {2, 0});
  EXPECT_LT(max_abs_deviation(got.matrix(), expected.matrix()), 1e-13);
}

// ---------- partial_trace ----------

TEST(PartialTrace, ProductStateKeepsFirstFactor) {
  const DensityMatrix rho = DensityMatrix::pure(StateVector::qubits("01"));
  const DensityMatrix reduced = partial_trace(rho, {0});
  EXPECT_LT(max_abs_deviation(reduced.matrix(), Matrix{{1.0, 0.0}, {0.0, 0.0}}), 1e-15);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  const DensityMatrix reduced = partial_trace(DensityMatrix::pure(bell()), {0});
  EXPECT_LT(max_abs_deviation(reduced.matrix(), Matrix::Identity(2, 2) / 2.0), 1e-15);
  const DensityMatrix from_vector = partial_trace(bell(), {1});
  EXPECT_LT(max_abs_deviation(from_vector.matrix(), Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, EmptyKeepIsAnError) {
  EXPECT_THROW(partial_trace(DensityMatrix::pure(bell()), {}), InvalidArgument);
  EXPECT_THROW(partial_trace(bell(), {}), InvalidArgument);
}

TEST(PartialTrace, PreservesTraceForRandomMixedStates) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Dims dims = random_dims(rng, 64);
    const DensityMatrix rho = random_density(dims, rng, 4);
    Subsystems keep;
    for (std::size_t i = 0; i < dims.size(); ++i)
      if ((trial >> i) & 1 || i == 0) keep.push_back(i);
    const DensityMatrix reduced = partial_trace(rho, keep);
    EXPECT_NEAR(std::abs(reduced.trace() - Complex(1.0)), 0.0, 1e-12);
    EXPECT_NO_THROW(reduced.validate());
  }
}

TEST(PartialTrace, PureProductGivesFactorProjector) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = random_state({3}, rng), b = random_state({2, 2}, rng);
    const StateVector ab = tensor_product(a, b);
    EXPECT_LT(max_abs_deviation(partial_trace(ab, {0}).matrix(), DensityMatrix::pure(a).matrix()), 1e-12);
    EXPECT_LT(max_abs_deviation(partial_trace(DensityMatrix::pure(ab), {1, 2}).matrix(),
                                DensityMatrix::pure(b).matrix()),
              1e-12);
  }
}

TEST(PartialTrace, VectorAndDensityRoutesAgree) {
  Rng rng(31);
  const StateVector s = random_state({2, 3, 2}, rng);
  for (const Subsystems& keep : {Subsystems{0}, Subsystems{2, 0}, Subsystems{1, 2}}) {
    EXPECT_LT(max_abs_deviation(partial_trace(s, keep).matrix(),
                                partial_trace(DensityMatrix::pure(s), keep).matrix()),
              1e-14);
  }
}

// ---------- haar_random_unitary ----------

TEST(HaarRandomUnitary, DimensionOneIsAPhase) {
  const UnitaryMatrix u = haar_random_unitary(1, 99);
  EXPECT_NEAR(std::abs(u.matrix()(0, 0)), 1.0, 1e-15);
}

TEST(HaarRandomUnitary, DeterministicForFixedSeed) {
  const UnitaryMatrix a = haar_random_unitary(4, 1234);
  const UnitaryMatrix b = haar_random_unitary(4, 1234);
  EXPECT_EQ(max_abs_deviation(a.matrix(), b.matrix()), 0.0);
  EXPECT_GT(max_abs_deviation(a.matrix(), haar_random_unitary(4, 1235).matrix()), 0.0);
}

TEST(HaarRandomUnitary, SecondMomentMatchesHaar) {
  // E |u_00|^2 = 1/d for Haar measure.
  Rng rng(2024);
  double sum = 0.0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) sum += std::norm(haar_random_unitary(4, rng).matrix()(0, 0));
  EXPECT_NEAR(sum / samples, 0.25, 0.05);
}

TEST(HaarRandomUnitary, AlwaysUnitary) {
  Rng rng(7);
  for (std::size_t d : {1u, 2u, 3u, 8u, 16u, 33u, 64u}) EXPECT_LE(haar_random_unitary(d, rng).unitarity_deviation(), 1e-10);
}

TEST(HaarRandomUnitary, ZeroDimensionIsAnError) { EXPECT_THROW(haar_random_unitary(0, 1), InvalidArgument); }

// ---------- fidelity ----------

TEST(Fidelity, BasicValues) {
  Rng rng(41);
  const StateVector s = random_state({2, 2}, rng);
  EXPECT_NEAR(fidelity(s, s), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(StateVector::qubits("0"), StateVector::qubits("1")), 0.0, 0.0);
  EXPECT_NEAR(fidelity(StateVector::qubits("0"), plus()), 0.5, 1e-15);
}

TEST(Fidelity, PureMixedAndSymmetric) {
  Rng rng(43);
  const StateVector a = random_state({3}, rng), b = random_state({3}, rng);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
  EXPECT_NEAR(fidelity(a, DensityMatrix::pure(b)), fidelity(a, b), 1e-14);
  EXPECT_NEAR(fidelity(DensityMatrix::pure(b), a), fidelity(a, b), 1e-14);
  EXPECT_NEAR(fidelity(StateVector::qubits("0"), partial_trace(bell(), {0})), 0.5, 1e-15);
}

TEST(Fidelity, DimensionMismatch) {
  EXPECT_THROW(fidelity(StateVector::qubits("0"), StateVector::qubits("00")), InvalidArgument);
}

// ---------- is_product_across ----------

TEST(IsProductAcross, ExplicitProduct) {
  const StateVector s = StateVector::qubits("01");
  EXPECT_TRUE(is_product_across(s, {0}, 1e-10));
  EXPECT_TRUE(is_product_across(s, {1}, 1e-10));
}

TEST(IsProductAcross, BellStateIsEntangled) {
  EXPECT_FALSE(is_product_across(bell(), {0}, 1e-10));
  EXPECT_NEAR(product_deficit(bell(), {0}), 0.5, 1e-15);
}

TEST(IsProductAcross, RandomProductsAcrossNonContiguousCuts) {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = random_state({2, 3}, rng), b = random_state({2}, rng);
    // Order (a0, b, a1) so the cut {0, 2} is non-contiguous.
    const StateVector s = permute(tensor_product(a, b), {0, 2, 1});
    EXPECT_TRUE(is_product_across(s, {0, 2}, 1e-10));
  }
}

TEST(IsProductAcross, CutMustBeProperNonempty) {
  EXPECT_THROW(is_product_across(bell(), {}, 1e-10), InvalidArgument);
  EXPECT_THROW(is_product_across(bell(), {0, 1}, 1e-10), InvalidArgument);
}

TEST(ProductDeviation, DetectsCorrelationsInMixedStates) {
  const DensityMatrix product = tensor_product(DensityMatrix::pure(plus()), partial_trace(bell(), {0}));
  EXPECT_LT(product_deviation(product, {0}), 1e-15);
  EXPECT_LT(product_deviation(product, {1}), 1e-15);
  // Classically correlated mixture (|00><00| + |11><11|)/2.
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  EXPECT_NEAR(product_deviation(DensityMatrix({2, 2}, m), {0}), 0.25, 1e-15);
}

TEST(DeriveSeed, StableAndDistinct) {
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
  EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
}
