#pragma once

// Encoding, corruption and measurement-free decoding of one logical qubit.
//
// Layout conventions:
//  - physical block: n_physical qubit subsystems starting at `offset`;
//  - logical layout after decoding: the logical qubit at `offset`, followed
//    by the n_physical - 1 ancilla qubits; syndrome a is the big-endian
//    value of the ancilla qubits;
//  - error-basis vector |Z_a> = E_a |Z_0> sits at column z * 2^n_ancilla + a
//    of the encoder.
// Qubit indices in the API are 0-based subsystem positions; Pauli labels
// such as "X3" name qubits 1-based.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdis/linalg.hpp"

namespace qdis {

enum class PauliKind { kIdentity, kX, kZ, kZX };

/// A single-qubit error: X (bit flip), Z (phase flip) or Z*X (bit flip then
/// phase flip). `qubit` is 1-based; ignored for the identity.
struct PauliError {
  PauliKind kind = PauliKind::kIdentity;
  std::size_t qubit = 0;

  std::string label() const;
  /// Parses "I", "X3", "Z1", "ZX2".
  static PauliError parse(std::string_view label);

  bool operator==(const PauliError&) const = default;
};

Matrix pauli_matrix(PauliKind kind);
UnitaryMatrix pauli_error_matrix(const PauliError& e, std::size_t n_qubits);
/// Tensor product of single-qubit operators, e.g. "XZZXI".
Matrix pauli_string_matrix(std::string_view paulis);

/// Every X_i, Z_i, Z_iX_i on n qubits in syndrome order: X_1..X_n, Z_1..Z_n,
/// ZX_1..ZX_n.
std::vector<PauliError> single_qubit_errors(std::size_t n_qubits);

struct ErrorOperator {
  std::string label;
  UnitaryMatrix op;
};

class QuantumCode {
 public:
  /// `error_ops` defines syndromes a = 1 .. 2^(n-1) - 1 in order. `complete`
  /// asserts that the code corrects every single-qubit error; for such codes
  /// the error basis must be orthonormal or construction throws.
  QuantumCode(std::string name, StateVector codeword_zero, StateVector codeword_one,
              std::vector<ErrorOperator> error_ops, bool complete);

  const std::string& name() const { return name_; }
  std::size_t n_physical() const { return n_physical_; }
  std::size_t n_ancilla() const { return n_physical_ - 1; }
  std::size_t syndrome_count() const { return std::size_t{1} << n_ancilla(); }
  std::size_t dimension() const { return std::size_t{1} << n_physical_; }
  bool complete() const { return complete_; }

  const StateVector& codeword(int z) const { return z == 0 ? zero_ : one_; }
  const std::vector<ErrorOperator>& error_ops() const { return error_ops_; }
  /// E_a on the physical block; identity for a = 0.
  Matrix error_matrix(std::size_t a) const;
  /// Label of syndrome a ("I" for a = 0).
  std::string syndrome_label(std::size_t a) const;
  /// Syndrome assigned to `label`, if any.
  std::optional<std::size_t> syndrome_of(std::string_view label) const;

  /// Present when the 2^n vectors E_a |Z_0> form an orthonormal basis.
  const std::optional<UnitaryMatrix>& encoder() const { return encoder_; }
  /// max |G - 1| over the Gram matrix of the error basis.
  double error_basis_deviation() const { return basis_deviation_; }

 private:
  std::string name_;
  std::size_t n_physical_;
  StateVector zero_;
  StateVector one_;
  std::vector<ErrorOperator> error_ops_;
  bool complete_;
  double basis_deviation_ = 0.0;
  std::optional<UnitaryMatrix> encoder_;
};

/// |000>, |111> with errors X_1, X_2, X_3. Not complete: phase errors are
/// invisible to it.
QuantumCode bit_flip_code();
/// Five-qubit perfect code (stabilizers XZZXI and cyclic shifts) with all 15
/// single-qubit errors.
QuantumCode five_qubit_code();
/// "bit-flip" or "five-qubit".
QuantumCode code_by_name(std::string_view name);

/// |Z_a> = E_a |Z_0>, ordered by z * 2^n_ancilla + a.
std::vector<StateVector> build_error_basis(const QuantumCode& code);
/// E with E (|z> (x) |a>) = |Z_a>. Throws if the error basis is not
/// orthonormal.
UnitaryMatrix build_encoder(const QuantumCode& code);

Subsystems physical_block(const QuantumCode& code, std::size_t offset);

/// E (logical (x) |0...0>)
StateVector encode(const StateVector& logical, const QuantumCode& code);
/// E^dagger applied to the physical block starting at `offset`.
StateVector decode(const StateVector& s, const QuantumCode& code, std::size_t offset = 0);
DensityMatrix decode(const DensityMatrix& rho, const QuantumCode& code, std::size_t offset = 0);

/// sum_a c_a E_a s on the physical block. Needs sum |c_a|^2 = 1 and
/// coefficients.size() == syndrome_count().
StateVector apply_superposed_error(const StateVector& s, const QuantumCode& code,
                                   std::span<const Complex> coefficients, std::size_t offset = 0);

/// A unitary U on the physical block with U |Z_0> = sum_a c_a |Z_a> for both
/// codewords: E (1 (x) V) E^dagger where V's first column is c.
UnitaryMatrix superposed_error_unitary(const QuantumCode& code, std::span<const Complex> coefficients);

struct MixedErrorChannel {
  struct Term {
    double weight;
    UnitaryMatrix op;
    Subsystems targets;
  };
  std::vector<Term> terms;

  void validate() const;
};

/// sum_j p_j U_j rho U_j^dagger
DensityMatrix apply_mixed_error(const DensityMatrix& rho, const MixedErrorChannel& channel);

/// Unitary on (one physical qubit (x) environment) with the environment
/// starting in `eta`.
struct EnvironmentCoupling {
  std::size_t env_dim;
  UnitaryMatrix coupling;
  StateVector eta;

  /// Haar-random coupling on 2 * env_dim with eta = first basis vector.
  static EnvironmentCoupling random(std::size_t env_dim, Rng& rng);

  void validate() const;
};

/// Environment vectors with |0> eta -> |0> mu + |1> nu and
/// |1> eta -> |0> sigma + |1> tau.
struct EnvironmentStates {
  Vector mu, nu, sigma, tau;
};
EnvironmentStates environment_states(const EnvironmentCoupling& c);

/// s (x) eta
StateVector attach_environment(const StateVector& s, const EnvironmentCoupling& c);

/// Applies the coupling to subsystems (qubit, env). `env` defaults to the
/// last subsystem.
StateVector apply_environment_coupling(const StateVector& s_with_env, const EnvironmentCoupling& c,
                                       std::size_t qubit, std::optional<std::size_t> env = std::nullopt);

/// Codeword z split on one qubit: |Z_0> = X_{Z0} (x) |0> + X_{Z1} (x) |1>,
/// with the singled-out qubit at position `qubit`. x0, x1 live on the other
/// n - 1 qubits in their original order.
struct CodewordSplit {
  Vector x0, x1;
};
CodewordSplit split_codeword(const QuantumCode& code, int z, std::size_t qubit);

/// Correct codeword, phase error, bit error and combined error, built from a
/// split codeword: X0|0> + X1|1>, X0|0> - X1|1>, X0|1> + X1|0>, X0|1> - X1|0>.
struct ErrorClassVectors {
  Vector correct, phase, bit, combined;
};
ErrorClassVectors error_class_vectors(const QuantumCode& code, int z, std::size_t qubit);

/// Codeword z coupled to the environment on `qubit`, assembled from the four
/// error classes with environment factors (mu+tau)/2, (mu-tau)/2,
/// (nu+sigma)/2 and (nu-sigma)/2. Dims: n_physical qubits then environment.
StateVector coupled_codeword_expansion(const QuantumCode& code, int z, std::size_t qubit,
                                       const EnvironmentCoupling& c);

struct ScalarProduct {
  int z, y, z2, y2;
  Complex value;
  double expected;
  double deviation;
};

struct OrthogonalityReport {
  std::size_t qubit;
  std::vector<ScalarProduct> products;  // the 10 independent <X_{Zy}, X_{Z'y'}>
  double max_deviation;
  double class_vector_deviation;  // max |Gram - 1| over the 8 error-class vectors

  bool satisfied(double tol) const { return max_deviation < tol; }
};

OrthogonalityReport check_orthogonality_conditions(const QuantumCode& code, std::size_t qubit);

struct DecodeReport {
  bool product;
  /// 1 - lambda_max^2 for pure input, max |rho - rho_A (x) rho_B| for mixed.
  double factorization_error;
  double fidelity;
  /// Diagnostic only; decoding never reads it.
  std::vector<double> syndrome_distribution;
};

/// Decodes the physical block at `offset` and checks that (bystanders +
/// logical qubit) factor out of (ancilla + environment) and match
/// `expected`, a state on the first offset + 1 subsystems.
DecodeReport decode_and_verify(const StateVector& corrupted, const QuantumCode& code,
                               const StateVector& expected, double tol, std::size_t offset = 0);
DecodeReport decode_and_verify(const DensityMatrix& corrupted, const QuantumCode& code,
                               const StateVector& expected, double tol, std::size_t offset = 0);

/// Discards everything after the logical qubit at `offset` and adjoins a
/// fresh |0...0> ancilla.
DensityMatrix refresh_ancilla(const DensityMatrix& decoded, const QuantumCode& code,
                              std::size_t offset = 0);

/// Computer state whose last subsystem is the qubit to encode.
struct BystanderState {
  explicit BystanderState(StateVector s);
  StateVector state;
};

/// Encodes the last qubit with a fresh ancilla; bystanders are untouched.
/// The physical block starts at offset state.subsystem_count() - 1.
StateVector encode_with_bystanders(const BystanderState& computer, const QuantumCode& code);

}  // namespace qdis
