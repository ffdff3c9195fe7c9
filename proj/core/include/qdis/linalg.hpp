#pragma once

// Dense complex linear algebra for small composite quantum systems.
//
// Composite indices are big-endian: the first listed subsystem is the most
// significant digit, so |0>|1>|0>|0>|1> on five qubits is basis index 9.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qdis {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Subsystem dimensions of a composite space, most significant first.
using Dims = std::vector<std::size_t>;
/// A list of subsystem positions into a `Dims`.
using Subsystems = std::vector<std::size_t>;

using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxDimension = std::size_t{1} << 16;

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kFactorization = 1e-10;
inline constexpr double kNegativeEigenvalue = 1e-10;
}  // namespace tol

/// Skip validation in constructors. Only for values that are valid by
/// construction (products of unitaries, partial traces of valid states).
struct Unchecked {};
inline constexpr Unchecked unchecked{};

/// Product of `dims`; throws if any entry is < 2 or the product exceeds
/// kMaxDimension.
std::size_t total_dimension(const Dims& dims);

class StateVector {
 public:
  StateVector(Dims dims, Vector amplitudes);
  StateVector(Dims dims, Vector amplitudes, Unchecked);

  static StateVector basis(Dims dims, std::size_t index);
  /// Product of qubit basis states from a bit string, e.g. "01001".
  static StateVector qubits(std::string_view bits);

  const Dims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  std::size_t subsystem_count() const { return dims_.size(); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  double norm() const { return amplitudes_.norm(); }

 private:
  Dims dims_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  DensityMatrix(Dims dims, Matrix matrix);
  DensityMatrix(Dims dims, Matrix matrix, Unchecked);

  static DensityMatrix pure(const StateVector& s);

  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t subsystem_count() const { return dims_.size(); }

  Complex trace() const { return matrix_.trace(); }
  double purity() const;

  /// Throws InvariantViolation unless the density-matrix invariants hold.
  void validate() const;

 private:
  Dims dims_;
  Matrix matrix_;
};

class UnitaryMatrix {
 public:
  /// Validates U^dagger U = 1 within tol::kUnitary.
  explicit UnitaryMatrix(Matrix matrix);
  UnitaryMatrix(Matrix matrix, Unchecked);

  static UnitaryMatrix identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  UnitaryMatrix adjoint() const { return {matrix_.adjoint(), unchecked}; }

  /// max |(U^dagger U - 1)_ij|
  double unitarity_deviation() const;

 private:
  Matrix matrix_;
};

Matrix kron(const Matrix& a, const Matrix& b);

StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
UnitaryMatrix tensor_product(const UnitaryMatrix& a, const UnitaryMatrix& b);

/// Applies `op` to the listed subsystems of a vector living in `dims`. The
/// operator's index is big-endian over `targets` in the order given. No
/// unitarity or norm checks; building block for the checked overloads.
Vector apply_operator(const Matrix& op, const Dims& dims, const Vector& v,
                      const Subsystems& targets);

StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& s,
                          const Subsystems& targets);
/// rho -> U rho U^dagger with U acting on `targets`.
DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho,
                            const Subsystems& targets);

/// Reorders subsystems: result subsystem i is input subsystem order[i].
StateVector permute(const StateVector& s, const Subsystems& order);
DensityMatrix permute(const DensityMatrix& rho, const Subsystems& order);

/// Reduced state on `keep`, with subsystems in the order listed.
DensityMatrix partial_trace(const DensityMatrix& rho, const Subsystems& keep);
/// Same as partial_trace(DensityMatrix::pure(s), keep) without forming the
/// full projector.
DensityMatrix partial_trace(const StateVector& s, const Subsystems& keep);

UnitaryMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed);
UnitaryMatrix haar_random_unitary(std::size_t dim, Rng& rng);
/// Uniformly random pure state (normalized complex Gaussian vector).
StateVector random_state(Dims dims, Rng& rng);

Complex inner_product(const StateVector& a, const StateVector& b);

double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const DensityMatrix& b);
double fidelity(const DensityMatrix& a, const StateVector& b);

/// Amplitudes arranged as a (dim(cut) x dim(rest)) matrix; rest keeps its
/// original subsystem order.
Matrix bipartite_matrix(const StateVector& s, const Subsystems& cut);

/// Schmidt coefficients across cut | rest, in descending order.
Eigen::VectorXd schmidt_coefficients(const StateVector& s, const Subsystems& cut);

/// 1 - (largest Schmidt coefficient)^2; zero exactly for product states.
double product_deficit(const StateVector& s, const Subsystems& cut);

bool is_product_across(const StateVector& s, const Subsystems& cut, double tol);

/// max |rho - rho_cut (x) rho_rest| elementwise, evaluated with the cut
/// subsystems moved to the front.
double product_deviation(const DensityMatrix& rho, const Subsystems& cut);

double max_abs_deviation(const Matrix& a, const Matrix& b);

/// Per-trial generator seeding, stable across platforms for a given root.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace qdis
