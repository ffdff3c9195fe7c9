#include "qdis/qec.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qdis/errors.hpp"

namespace qdis {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

const UnitaryMatrix& require_encoder(const QuantumCode& code) {
  if (!code.encoder()) {
    throw InvalidArgument("code '" + code.name() + "' has no orthonormal error basis (deviation " +
                          std::to_string(code.error_basis_deviation()) + ")");
  }
  return *code.encoder();
}

void check_block(const Dims& dims, const QuantumCode& code, std::size_t offset) {
  if (offset + code.n_physical() > dims.size()) {
    throw InvalidArgument("state has too few subsystems for the physical block at offset " +
                          std::to_string(offset));
  }
  for (std::size_t i = 0; i < code.n_physical(); ++i)
    if (dims[offset + i] != 2) throw InvalidArgument("physical block must consist of qubits");
}

// Inverse of splitting off one qubit: places y at `position` among n qubits.
Vector insert_qubit(const Vector& rest, int y, std::size_t position, std::size_t n) {
  Vector out = Vector::Zero(idx(std::size_t{1} << n));
  const std::size_t shift = n - 1 - position;
  for (std::size_t r = 0; r < static_cast<std::size_t>(rest.size()); ++r) {
    const std::size_t high = r >> shift;
    const std::size_t low = r & ((std::size_t{1} << shift) - 1);
    const std::size_t i = (high << (shift + 1)) | (static_cast<std::size_t>(y) << shift) | low;
    out(idx(i)) = rest(idx(r));
  }
  return out;
}

Subsystems leading(std::size_t count) {
  Subsystems s(count);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

std::vector<double> syndromes_from(const DensityMatrix& reduced) {
  std::vector<double> p(reduced.dimension());
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = std::max(0.0, reduced.matrix()(idx(a), idx(a)).real());
  return p;
}

Subsystems ancilla_subsystems(const QuantumCode& code, std::size_t offset) {
  Subsystems s(code.n_ancilla());
  std::iota(s.begin(), s.end(), offset + 1);
  return s;
}

void check_expected(const Dims& dims, const StateVector& expected, std::size_t offset) {
  std::size_t d = 1;
  for (std::size_t i = 0; i <= offset; ++i) d *= dims[i];
  if (expected.dimension() != d) {
    throw InvalidArgument("expected state does not match bystanders + logical qubit");
  }
}

}  // namespace

std::vector<StateVector> build_error_basis(const QuantumCode& code) {
  if (code.complete() && code.error_basis_deviation() > tol::kUnitary) {
    throw InvariantViolation("error basis of a complete code is not orthonormal");
  }
  std::vector<StateVector> basis;
  basis.reserve(2 * code.syndrome_count());
  for (int z = 0; z < 2; ++z)
    for (std::size_t a = 0; a < code.syndrome_count(); ++a)
      basis.emplace_back(code.codeword(z).dims(), code.error_matrix(a) * code.codeword(z).amplitudes());
  return basis;
}

UnitaryMatrix build_encoder(const QuantumCode& code) { return require_encoder(code); }

Subsystems physical_block(const QuantumCode& code, std::size_t offset) {
  Subsystems s(code.n_physical());
  std::iota(s.begin(), s.end(), offset);
  return s;
}

StateVector encode(const StateVector& logical, const QuantumCode& code) {
  if (logical.dims() != Dims{2}) throw InvalidArgument("encode expects a single logical qubit");
  return encode_with_bystanders(BystanderState(logical), code);
}

StateVector decode(const StateVector& s, const QuantumCode& code, std::size_t offset) {
  check_block(s.dims(), code, offset);
  return apply_unitary(require_encoder(code).adjoint(), s, physical_block(code, offset));
}

DensityMatrix decode(const DensityMatrix& rho, const QuantumCode& code, std::size_t offset) {
  check_block(rho.dims(), code, offset);
  return apply_unitary(require_encoder(code).adjoint(), rho, physical_block(code, offset));
}

StateVector apply_superposed_error(const StateVector& s, const QuantumCode& code,
                                   std::span<const Complex> coefficients, std::size_t offset) {
  check_block(s.dims(), code, offset);
  if (coefficients.size() != code.syndrome_count()) {
    throw InvalidArgument("need one coefficient per syndrome (" +
                          std::to_string(code.syndrome_count()) + ")");
  }
  double n2 = 0.0;
  for (const Complex& c : coefficients) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > tol::kAlgebraic) {
    throw InvalidArgument("error coefficients are not normalized: sum |c_a|^2 = " + std::to_string(n2));
  }
  const Subsystems block = physical_block(code, offset);
  Vector out = Vector::Zero(s.amplitudes().size());
  for (std::size_t a = 0; a < coefficients.size(); ++a) {
    if (coefficients[a] == Complex(0.0)) continue;
    out += coefficients[a] * apply_operator(code.error_matrix(a), s.dims(), s.amplitudes(), block);
  }
  return {s.dims(), std::move(out)};
}

UnitaryMatrix superposed_error_unitary(const QuantumCode& code, std::span<const Complex> coefficients) {
  const UnitaryMatrix& e = require_encoder(code);
  const std::size_t n = code.syndrome_count();
  if (coefficients.size() != n) throw InvalidArgument("need one coefficient per syndrome");
  Vector c(idx(n));
  for (std::size_t a = 0; a < n; ++a) c(idx(a)) = coefficients[a];
  if (std::abs(c.squaredNorm() - 1.0) > tol::kAlgebraic) {
    throw InvalidArgument("error coefficients are not normalized");
  }

  // Complete c to an orthonormal basis by Gram-Schmidt over c, e_0, e_1, ...
  Matrix v = Matrix::Zero(idx(n), idx(n));
  v.col(0) = c;
  Index filled = 1;
  for (std::size_t i = 0; i < n && filled < idx(n); ++i) {
    Vector w = Vector::Unit(idx(n), idx(i));
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < filled; ++j) w -= v.col(j).dot(w) * v.col(j);
    const double norm = w.norm();
    if (norm > 1e-6) v.col(filled++) = w / norm;
  }
  const Matrix local = kron(Matrix::Identity(2, 2), v);
  return UnitaryMatrix(e.matrix() * local * e.matrix().adjoint());
}

void MixedErrorChannel::validate() const {
  if (terms.empty()) throw InvalidArgument("mixed channel has no terms");
  double sum = 0.0;
  for (const Term& t : terms) {
    if (!(t.weight > 0.0)) throw InvalidArgument("channel weights must be positive");
    if (t.op.unitarity_deviation() > tol::kUnitary) throw InvalidArgument("channel operator is not unitary");
    sum += t.weight;
  }
  if (std::abs(sum - 1.0) > tol::kAlgebraic) throw InvalidArgument("channel weights must sum to 1");
}

DensityMatrix apply_mixed_error(const DensityMatrix& rho, const MixedErrorChannel& channel) {
  channel.validate();
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& t : channel.terms) {
    const Subsystems targets = t.targets.empty() ? leading(rho.subsystem_count()) : t.targets;
    out += t.weight * apply_unitary(t.op, rho, targets).matrix();
  }
  return {rho.dims(), std::move(out), unchecked};
}

// ---------------------------------------------------------------------------
// Environment

EnvironmentCoupling EnvironmentCoupling::random(std::size_t env_dim, Rng& rng) {
  if (env_dim < 2) throw InvalidArgument("environment dimension must be at least 2");
  return {env_dim, haar_random_unitary(2 * env_dim, rng), StateVector::basis({env_dim}, 0)};
}

void EnvironmentCoupling::validate() const {
  if (coupling.dim() != 2 * env_dim) throw InvalidArgument("coupling must act on qubit (x) environment");
  if (eta.dims() != Dims{env_dim}) throw InvalidArgument("eta must live in the environment");
  if (coupling.unitarity_deviation() > tol::kUnitary) throw InvalidArgument("coupling is not unitary");
}

EnvironmentStates environment_states(const EnvironmentCoupling& c) {
  c.validate();
  const Index d = idx(c.env_dim);
  const Vector zero_eta = c.coupling.matrix().leftCols(d) * c.eta.amplitudes();
  const Vector one_eta = c.coupling.matrix().rightCols(d) * c.eta.amplitudes();
  return {zero_eta.head(d), zero_eta.tail(d), one_eta.head(d), one_eta.tail(d)};
}

StateVector attach_environment(const StateVector& s, const EnvironmentCoupling& c) {
  return tensor_product(s, c.eta);
}

StateVector apply_environment_coupling(const StateVector& s_with_env, const EnvironmentCoupling& c,
                                       std::size_t qubit, std::optional<std::size_t> env) {
  c.validate();
  const std::size_t env_index = env.value_or(s_with_env.subsystem_count() - 1);
  const Dims& dims = s_with_env.dims();
  if (qubit >= dims.size() || env_index >= dims.size() || qubit == env_index) {
    throw InvalidArgument("coupling subsystem indices out of range");
  }
  if (dims[qubit] != 2) throw InvalidArgument("coupled subsystem is not a qubit");
  if (dims[env_index] != c.env_dim) throw InvalidArgument("environment dimension mismatch");
  return apply_unitary(c.coupling, s_with_env, {qubit, env_index});
}

// ---------------------------------------------------------------------------
// Singled-out qubit analysis

CodewordSplit split_codeword(const QuantumCode& code, int z, std::size_t qubit) {
  const std::size_t n = code.n_physical();
  if (qubit >= n) throw InvalidArgument("qubit index out of range");
  const Vector& amps = code.codeword(z).amplitudes();
  const std::size_t shift = n - 1 - qubit;
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  Vector x0 = Vector::Zero(idx(std::size_t{1} << (n - 1)));
  Vector x1 = x0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(amps.size()); ++i) {
    const std::size_t rest = ((i >> (shift + 1)) << shift) | (i & low_mask);
    ((i >> shift) & 1 ? x1 : x0)(idx(rest)) = amps(idx(i));
  }
  return {std::move(x0), std::move(x1)};
}

ErrorClassVectors error_class_vectors(const QuantumCode& code, int z, std::size_t qubit) {
  const std::size_t n = code.n_physical();
  const CodewordSplit x = split_codeword(code, z, qubit);
  const Vector x0_0 = insert_qubit(x.x0, 0, qubit, n);
  const Vector x0_1 = insert_qubit(x.x0, 1, qubit, n);
  const Vector x1_0 = insert_qubit(x.x1, 0, qubit, n);
  const Vector x1_1 = insert_qubit(x.x1, 1, qubit, n);
  return {x0_0 + x1_1, x0_0 - x1_1, x0_1 + x1_0, x0_1 - x1_0};
}

StateVector coupled_codeword_expansion(const QuantumCode& code, int z, std::size_t qubit,
                                       const EnvironmentCoupling& c) {
  const ErrorClassVectors v = error_class_vectors(code, z, qubit);
  const EnvironmentStates e = environment_states(c);
  const Matrix out = kron(v.correct, (e.mu + e.tau) / 2.0) + kron(v.phase, (e.mu - e.tau) / 2.0) +
                     kron(v.bit, (e.nu + e.sigma) / 2.0) + kron(v.combined, (e.nu - e.sigma) / 2.0);
  Dims dims(code.n_physical(), 2);
  dims.push_back(c.env_dim);
  return {std::move(dims), out.col(0)};
}

OrthogonalityReport check_orthogonality_conditions(const QuantumCode& code, std::size_t qubit) {
  if (qubit >= code.n_physical()) throw InvalidArgument("qubit index out of range");
  const CodewordSplit s0 = split_codeword(code, 0, qubit);
  const CodewordSplit s1 = split_codeword(code, 1, qubit);
  const Vector* parts[4] = {&s0.x0, &s0.x1, &s1.x0, &s1.x1};  // (Z, y) = 00, 01, 10, 11

  OrthogonalityReport report{qubit, {}, 0.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const Complex value = parts[i]->dot(*parts[j]);
      const double expected = i == j ? 0.5 : 0.0;
      const double deviation = std::abs(value - expected);
      report.products.push_back({i / 2, i % 2, j / 2, j % 2, value, expected, deviation});
      report.max_deviation = std::max(report.max_deviation, deviation);
    }

  Matrix classes(idx(code.dimension()), 8);
  for (int z = 0; z < 2; ++z) {
    const ErrorClassVectors v = error_class_vectors(code, z, qubit);
    classes.col(4 * z + 0) = v.correct;
    classes.col(4 * z + 1) = v.phase;
    classes.col(4 * z + 2) = v.bit;
    classes.col(4 * z + 3) = v.combined;
  }
  report.class_vector_deviation =
      max_abs_deviation(classes.adjoint() * classes, Matrix::Identity(8, 8));
  return report;
}

// ---------------------------------------------------------------------------
// Decoding

DecodeReport decode_and_verify(const StateVector& corrupted, const QuantumCode& code,
                               const StateVector& expected, double tol, std::size_t offset) {
  check_expected(corrupted.dims(), expected, offset);
  const StateVector decoded = decode(corrupted, code, offset);
  const Subsystems cut = leading(offset + 1);
  const double deficit = product_deficit(decoded, cut);
  return {deficit <= tol, deficit, fidelity(expected, partial_trace(decoded, cut)),
          syndromes_from(partial_trace(decoded, ancilla_subsystems(code, offset)))};
}

DecodeReport decode_and_verify(const DensityMatrix& corrupted, const QuantumCode& code,
                               const StateVector& expected, double tol, std::size_t offset) {
  check_expected(corrupted.dims(), expected, offset);
  const DensityMatrix decoded = decode(corrupted, code, offset);
  const Subsystems cut = leading(offset + 1);
  const double deviation = product_deviation(decoded, cut);
  return {deviation <= tol, deviation, fidelity(expected, partial_trace(decoded, cut)),
          syndromes_from(partial_trace(decoded, ancilla_subsystems(code, offset)))};
}

DensityMatrix refresh_ancilla(const DensityMatrix& decoded, const QuantumCode& code, std::size_t offset) {
  if (offset + code.n_physical() > decoded.subsystem_count()) {
    throw InvalidArgument("decoded state has too few subsystems for logical + ancilla");
  }
  const DensityMatrix kept = partial_trace(decoded, leading(offset + 1));
  const StateVector fresh = StateVector::basis(Dims(code.n_ancilla(), 2), 0);
  return tensor_product(kept, DensityMatrix::pure(fresh));
}

BystanderState::BystanderState(StateVector s) : state(std::move(s)) {
  if (state.dims().back() != 2) throw InvalidArgument("last subsystem must be the qubit to encode");
}

StateVector encode_with_bystanders(const BystanderState& computer, const QuantumCode& code) {
  const UnitaryMatrix& e = require_encoder(code);
  const std::size_t offset = computer.state.subsystem_count() - 1;
  const StateVector ancilla = StateVector::basis(Dims(code.n_ancilla(), 2), 0);
  return apply_unitary(e, tensor_product(computer.state, ancilla), physical_block(code, offset));
}

}  // namespace qdis
