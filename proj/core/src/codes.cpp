#include <cmath>
#include <string>

#include "qdis/errors.hpp"
#include "qdis/qec.hpp"

namespace qdis {
namespace {

using Index = Eigen::Index;

constexpr double kCodewordTolerance = 1e-12;

std::size_t qubit_count(const StateVector& s) {
  for (std::size_t d : s.dims())
    if (d != 2) throw InvalidArgument("codewords must be made of qubits");
  return s.subsystem_count();
}

}  // namespace

std::string PauliError::label() const {
  switch (kind) {
    case PauliKind::kIdentity: return "I";
    case PauliKind::kX: return "X" + std::to_string(qubit);
    case PauliKind::kZ: return "Z" + std::to_string(qubit);
    case PauliKind::kZX: return "ZX" + std::to_string(qubit);
  }
  return "?";
}

PauliError PauliError::parse(std::string_view label) {
  if (label == "I") return {};
  PauliKind kind;
  std::string_view digits;
  if (label.starts_with("ZX")) {
    kind = PauliKind::kZX;
    digits = label.substr(2);
  } else if (label.starts_with("X")) {
    kind = PauliKind::kX;
    digits = label.substr(1);
  } else if (label.starts_with("Z")) {
    kind = PauliKind::kZ;
    digits = label.substr(1);
  } else {
    throw InvalidArgument("unknown Pauli error label '" + std::string(label) + "'");
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
    throw InvalidArgument("Pauli error label '" + std::string(label) + "' needs a qubit number");
  }
  const std::size_t qubit = std::stoul(std::string(digits));
  if (qubit == 0) throw InvalidArgument("Pauli error qubits are numbered from 1");
  return {kind, qubit};
}

Matrix pauli_matrix(PauliKind kind) {
  Matrix m = Matrix::Zero(2, 2);
  switch (kind) {
    case PauliKind::kIdentity: m << 1, 0, 0, 1; break;
    case PauliKind::kX: m << 0, 1, 1, 0; break;
    case PauliKind::kZ: m << 1, 0, 0, -1; break;
    // Z * X: |0> -> -|1>, |1> -> |0>
    case PauliKind::kZX: m << 0, 1, -1, 0; break;
  }
  return m;
}

UnitaryMatrix pauli_error_matrix(const PauliError& e, std::size_t n_qubits) {
  if (e.kind != PauliKind::kIdentity && (e.qubit == 0 || e.qubit > n_qubits)) {
    throw InvalidArgument("error " + e.label() + " is outside a " + std::to_string(n_qubits) +
                          "-qubit block");
  }
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t q = 1; q <= n_qubits; ++q) {
    const bool hit = e.kind != PauliKind::kIdentity && q == e.qubit;
    m = kron(m, pauli_matrix(hit ? e.kind : PauliKind::kIdentity));
  }
  return {std::move(m), unchecked};
}

Matrix pauli_string_matrix(std::string_view paulis) {
  Matrix m = Matrix::Identity(1, 1);
  for (char c : paulis) {
    Matrix p(2, 2);
    switch (c) {
      case 'I': p = pauli_matrix(PauliKind::kIdentity); break;
      case 'X': p = pauli_matrix(PauliKind::kX); break;
      case 'Z': p = pauli_matrix(PauliKind::kZ); break;
      case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
      default: throw InvalidArgument(std::string("unknown Pauli '") + c + "'");
    }
    m = kron(m, p);
  }
  return m;
}

std::vector<PauliError> single_qubit_errors(std::size_t n_qubits) {
  std::vector<PauliError> out;
  for (PauliKind kind : {PauliKind::kX, PauliKind::kZ, PauliKind::kZX})
    for (std::size_t q = 1; q <= n_qubits; ++q) out.push_back({kind, q});
  return out;
}

// ---------------------------------------------------------------------------
// QuantumCode

QuantumCode::QuantumCode(std::string name, StateVector codeword_zero, StateVector codeword_one,
                         std::vector<ErrorOperator> error_ops, bool complete)
    : name_(std::move(name)),
      n_physical_(qubit_count(codeword_zero)),
      zero_(std::move(codeword_zero)),
      one_(std::move(codeword_one)),
      error_ops_(std::move(error_ops)),
      complete_(complete) {
  if (n_physical_ < 2) throw InvalidArgument("a code needs at least two physical qubits");
  if (qubit_count(one_) != n_physical_) throw InvalidArgument("codewords differ in qubit count");
  if (std::abs(inner_product(zero_, one_)) > kCodewordTolerance) {
    throw InvalidArgument("codewords are not orthogonal");
  }
  if (error_ops_.size() != syndrome_count() - 1) {
    throw InvalidArgument("code with " + std::to_string(n_ancilla()) + " ancilla qubits needs " +
                          std::to_string(syndrome_count() - 1) + " error operators, got " +
                          std::to_string(error_ops_.size()));
  }
  for (const auto& e : error_ops_) {
    if (e.op.dim() != dimension()) {
      throw InvalidArgument("error operator " + e.label + " has the wrong dimension");
    }
    if (e.op.unitarity_deviation() > tol::kUnitary) {
      throw InvalidArgument("error operator " + e.label + " is not unitary");
    }
  }

  const Index dim = static_cast<Index>(dimension());
  Matrix basis(dim, dim);
  for (int z = 0; z < 2; ++z)
    for (std::size_t a = 0; a < syndrome_count(); ++a)
      basis.col(static_cast<Index>(static_cast<std::size_t>(z) * syndrome_count() + a)) =
          error_matrix(a) * codeword(z).amplitudes();
  basis_deviation_ = max_abs_deviation(basis.adjoint() * basis, Matrix::Identity(dim, dim));
  if (basis_deviation_ <= tol::kUnitary) {
    encoder_.emplace(std::move(basis), unchecked);
  } else if (complete_) {
    throw InvalidArgument("code '" + name_ + "' is flagged complete but its error basis is not "
                             "orthonormal");
  }
}

Matrix QuantumCode::error_matrix(std::size_t a) const {
  if (a >= syndrome_count()) throw InvalidArgument("syndrome out of range");
  if (a == 0) {
    const Index dim = static_cast<Index>(dimension());
    return Matrix::Identity(dim, dim);
  }
  return error_ops_[a - 1].op.matrix();
}

std::string QuantumCode::syndrome_label(std::size_t a) const {
  if (a >= syndrome_count()) throw InvalidArgument("syndrome out of range");
  return a == 0 ? "I" : error_ops_[a - 1].label;
}

std::optional<std::size_t> QuantumCode::syndrome_of(std::string_view label) const {
  if (label == "I") return 0;
  for (std::size_t i = 0; i < error_ops_.size(); ++i)
    if (error_ops_[i].label == label) return i + 1;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shipped codes

QuantumCode bit_flip_code() {
  std::vector<ErrorOperator> errors;
  for (std::size_t q = 1; q <= 3; ++q) {
    const PauliError e{PauliKind::kX, q};
    errors.push_back({e.label(), pauli_error_matrix(e, 3)});
  }
  return {"bit-flip", StateVector::qubits("000"), StateVector::qubits("111"), std::move(errors),
          false};
}

QuantumCode five_qubit_code() {
  const Matrix generators[] = {pauli_string_matrix("XZZXI"), pauli_string_matrix("IXZZX"),
                               pauli_string_matrix("XIXZZ"), pauli_string_matrix("ZXIXZ")};
  // Equal-weight sum of the 16 stabilizer group elements acting on |00000>.
  const Vector vacuum = StateVector::qubits("00000").amplitudes();
  Vector zero = Vector::Zero(32);
  for (unsigned subset = 0; subset < 16; ++subset) {
    Vector v = vacuum;
    for (unsigned g = 0; g < 4; ++g)
      if (subset & (1u << g)) v = generators[g] * v;
    zero += v;
  }
  zero.normalize();
  Vector one = pauli_string_matrix("XXXXX") * zero;

  std::vector<ErrorOperator> errors;
  for (const PauliError& e : single_qubit_errors(5)) errors.push_back({e.label(), pauli_error_matrix(e, 5)});
  const Dims dims(5, 2);
  return {"five-qubit", StateVector(dims, std::move(zero)), StateVector(dims, std::move(one)),
          std::move(errors), true};
}

QuantumCode code_by_name(std::string_view name) {
  if (name == "bit-flip") return bit_flip_code();
  if (name == "five-qubit") return five_qubit_code();
  throw InvalidArgument("unknown code '" + std::string(name) + "' (expected bit-flip or five-qubit)");
}

}  // namespace qdis
