#include "qdis/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "qdis/errors.hpp"

namespace qdis {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
  return strides;
}

void check_subsystems(const Subsystems& which, std::size_t count, const char* what) {
  std::vector<bool> seen(count, false);
  for (std::size_t s : which) {
    if (s >= count) {
      throw InvalidArgument(std::string(what) + ": subsystem index " + std::to_string(s) +
                            " out of range (" + std::to_string(count) + " subsystems)");
    }
    if (seen[s]) {
      throw InvalidArgument(std::string(what) + ": duplicate subsystem index " +
                            std::to_string(s));
    }
    seen[s] = true;
  }
}

// Full ordering with `front` first and the remaining subsystems after it in
// ascending order.
Subsystems front_then_rest(const Subsystems& front, std::size_t count) {
  Subsystems order = front;
  std::vector<bool> used(count, false);
  for (std::size_t s : front) used[s] = true;
  for (std::size_t s = 0; s < count; ++s)
    if (!used[s]) order.push_back(s);
  return order;
}

// map[new_index] = old_index for a subsystem reordering.
std::vector<std::size_t> permutation_map(const Dims& dims, const Subsystems& order) {
  const std::size_t n = dims.size();
  const auto old_strides = strides_of(dims);
  Dims new_dims(n);
  for (std::size_t i = 0; i < n; ++i) new_dims[i] = dims[order[i]];
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());

  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t old_index = 0;
    for (std::size_t i = 0; i < n; ++i) old_index += digits[i] * old_strides[order[i]];
    map[k] = old_index;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < new_dims[i]) break;
      digits[i] = 0;
    }
  }
  return map;
}

Dims reorder_dims(const Dims& dims, const Subsystems& order) {
  Dims out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = dims[order[i]];
  return out;
}

std::size_t product_of(const Dims& dims, const Subsystems& which) {
  std::size_t p = 1;
  for (std::size_t s : which) p *= dims[s];
  return p;
}

void check_cut(const Subsystems& cut, std::size_t count) {
  if (cut.empty() || cut.size() >= count) {
    throw InvalidArgument("cut must be a proper nonempty subset of the subsystems");
  }
  check_subsystems(cut, count, "cut");
}

}  // namespace

std::size_t total_dimension(const Dims& dims) {
  if (dims.empty()) throw InvalidArgument("dims must not be empty");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d < 2) throw InvalidArgument("subsystem dimension must be at least 2");
    if (total > kMaxDimension / d) {
      throw InvalidArgument("total dimension exceeds cap of " + std::to_string(kMaxDimension));
    }
    total *= d;
  }
  return total;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Dims dims, Vector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (total_dimension(dims_) != dimension()) {
    throw InvalidArgument("amplitude count does not match product of dims");
  }
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol::kAlgebraic) {
    std::ostringstream os;
    os << "state vector is not normalized: |psi|^2 = " << n2;
    throw InvariantViolation(os.str());
  }
}

StateVector::StateVector(Dims dims, Vector amplitudes, Unchecked)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(Dims dims, std::size_t index) {
  const std::size_t total = total_dimension(dims);
  if (index >= total) throw InvalidArgument("basis index out of range");
  Vector v = Vector::Zero(idx(total));
  v(idx(index)) = 1.0;
  return {std::move(dims), std::move(v), unchecked};
}

StateVector StateVector::qubits(std::string_view bits) {
  if (bits.empty()) throw InvalidArgument("empty bit string");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bit string must contain only 0 and 1");
    index = index * 2 + static_cast<std::size_t>(c - '0');
  }
  return basis(Dims(bits.size(), 2), index);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Dims dims, Matrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  validate();
}

DensityMatrix::DensityMatrix(Dims dims, Matrix matrix, Unchecked)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {}

DensityMatrix DensityMatrix::pure(const StateVector& s) {
  const Vector& a = s.amplitudes();
  return {s.dims(), a * a.adjoint(), unchecked};
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return matrix_.cwiseAbs2().sum();
}

void DensityMatrix::validate() const {
  if (matrix_.rows() != matrix_.cols()) throw InvariantViolation("density matrix not square");
  if (total_dimension(dims_) != dimension()) {
    throw InvariantViolation("density matrix side does not match product of dims");
  }
  if (max_abs_deviation(matrix_, matrix_.adjoint()) > tol::kAlgebraic) {
    throw InvariantViolation("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol::kAlgebraic) {
    throw InvariantViolation("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol::kNegativeEigenvalue) {
    throw InvariantViolation("density matrix has a negative eigenvalue");
  }
}

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw InvalidArgument("unitary must be a nonempty square matrix");
  }
  const double dev = unitarity_deviation();
  if (dev > tol::kUnitary) {
    std::ostringstream os;
    os << "matrix is not unitary: max |U^dagger U - 1| = " << dev;
    throw InvariantViolation(os.str());
  }
}

UnitaryMatrix::UnitaryMatrix(Matrix matrix, Unchecked) : matrix_(std::move(matrix)) {}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("unitary dimension must be positive");
  return {Matrix::Identity(idx(dim), idx(dim)), unchecked};
}

double UnitaryMatrix::unitarity_deviation() const {
  const Matrix g = matrix_.adjoint() * matrix_;
  return max_abs_deviation(g, Matrix::Identity(g.rows(), g.cols()));
}

// ---------------------------------------------------------------------------
// Tensor products

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  total_dimension(dims);
  Vector v(a.amplitudes().size() * b.amplitudes().size());
  for (Index i = 0; i < a.amplitudes().size(); ++i)
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  return {std::move(dims), std::move(v), unchecked};
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  total_dimension(dims);
  return {std::move(dims), kron(a.matrix(), b.matrix()), unchecked};
}

UnitaryMatrix tensor_product(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() * b.dim() > kMaxDimension) throw InvalidArgument("unitary exceeds dimension cap");
  return {kron(a.matrix(), b.matrix()), unchecked};
}

// ---------------------------------------------------------------------------
// Local operators

Vector apply_operator(const Matrix& op, const Dims& dims, const Vector& v,
                      const Subsystems& targets) {
  const std::size_t total = total_dimension(dims);
  if (static_cast<std::size_t>(v.size()) != total) {
    throw InvalidArgument("vector length does not match dims");
  }
  if (targets.empty()) throw InvalidArgument("apply_operator: empty target list");
  check_subsystems(targets, dims.size(), "apply_operator");
  const std::size_t target_dim = product_of(dims, targets);
  if (static_cast<std::size_t>(op.rows()) != target_dim ||
      static_cast<std::size_t>(op.cols()) != target_dim) {
    throw InvalidArgument("operator dimension " + std::to_string(op.rows()) +
                          " does not match target dimension " + std::to_string(target_dim));
  }

  const auto strides = strides_of(dims);

  // Offset of each operator basis index within the full index.
  std::vector<std::size_t> offsets(target_dim, 0);
  for (std::size_t t = 0; t < target_dim; ++t) {
    std::size_t rem = t;
    for (std::size_t j = targets.size(); j-- > 0;) {
      const std::size_t d = dims[targets[j]];
      offsets[t] += (rem % d) * strides[targets[j]];
      rem /= d;
    }
  }

  // Base indices: all target digits zero.
  std::vector<std::size_t> bases;
  bases.reserve(total / target_dim);
  for (std::size_t i = 0; i < total; ++i) {
    bool zero = true;
    for (std::size_t t : targets) {
      if ((i / strides[t]) % dims[t] != 0) {
        zero = false;
        break;
      }
    }
    if (zero) bases.push_back(i);
  }

  Matrix gathered(idx(target_dim), idx(bases.size()));
  for (std::size_t b = 0; b < bases.size(); ++b)
    for (std::size_t t = 0; t < target_dim; ++t)
      gathered(idx(t), idx(b)) = v(idx(bases[b] + offsets[t]));

  const Matrix result = op * gathered;

  Vector out(v.size());
  for (std::size_t b = 0; b < bases.size(); ++b)
    for (std::size_t t = 0; t < target_dim; ++t)
      out(idx(bases[b] + offsets[t])) = result(idx(t), idx(b));
  return out;
}

StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& s,
                          const Subsystems& targets) {
  Vector out = apply_operator(u.matrix(), s.dims(), s.amplitudes(), targets);
  return {s.dims(), std::move(out)};
}

DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho,
                            const Subsystems& targets) {
  const Matrix& m = rho.matrix();
  // Y = U rho column by column, then U rho U^dagger = (U Y^dagger)^dagger.
  Matrix y(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) y.col(c) = apply_operator(u.matrix(), rho.dims(), m.col(c), targets);
  const Matrix yd = y.adjoint();
  Matrix z(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) z.col(c) = apply_operator(u.matrix(), rho.dims(), yd.col(c), targets);
  Matrix out = z.adjoint();
  return {rho.dims(), std::move(out), unchecked};
}

// ---------------------------------------------------------------------------
// Permutation and partial trace

StateVector permute(const StateVector& s, const Subsystems& order) {
  if (order.size() != s.subsystem_count()) throw InvalidArgument("permute: order must list every subsystem");
  check_subsystems(order, s.subsystem_count(), "permute");
  const auto map = permutation_map(s.dims(), order);
  Vector out(s.amplitudes().size());
  for (std::size_t k = 0; k < map.size(); ++k) out(idx(k)) = s.amplitudes()(idx(map[k]));
  return {reorder_dims(s.dims(), order), std::move(out), unchecked};
}

DensityMatrix permute(const DensityMatrix& rho, const Subsystems& order) {
  if (order.size() != rho.subsystem_count()) throw InvalidArgument("permute: order must list every subsystem");
  check_subsystems(order, rho.subsystem_count(), "permute");
  const auto map = permutation_map(rho.dims(), order);
  const Matrix& m = rho.matrix();
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < map.size(); ++j)
    for (std::size_t i = 0; i < map.size(); ++i) out(idx(i), idx(j)) = m(idx(map[i]), idx(map[j]));
  return {reorder_dims(rho.dims(), order), std::move(out), unchecked};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Subsystems& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep list is empty");
  check_subsystems(keep, rho.subsystem_count(), "partial_trace");
  const Dims kept_dims = reorder_dims(rho.dims(), keep);
  const std::size_t kept = product_of(rho.dims(), keep);
  const std::size_t rest = rho.dimension() / kept;
  if (rest == 1) return permute(rho, keep);

  const DensityMatrix p = permute(rho, front_then_rest(keep, rho.subsystem_count()));
  const Matrix& m = p.matrix();
  Matrix out = Matrix::Zero(idx(kept), idx(kept));
  for (std::size_t i = 0; i < kept; ++i)
    for (std::size_t j = 0; j < kept; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < rest; ++k) acc += m(idx(i * rest + k), idx(j * rest + k));
      out(idx(i), idx(j)) = acc;
    }
  return {kept_dims, std::move(out), unchecked};
}

DensityMatrix partial_trace(const StateVector& s, const Subsystems& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep list is empty");
  check_subsystems(keep, s.subsystem_count(), "partial_trace");
  const Dims kept_dims = reorder_dims(s.dims(), keep);
  if (keep.size() == s.subsystem_count()) return DensityMatrix::pure(permute(s, keep));
  const Matrix m = bipartite_matrix(s, keep);
  Matrix out = m * m.adjoint();
  return {kept_dims, std::move(out), unchecked};
}

// ---------------------------------------------------------------------------
// Random sampling

UnitaryMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(dim, rng);
}

UnitaryMatrix haar_random_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidArgument("haar_random_unitary: dim must be positive");
  if (dim > kMaxDimension) throw InvalidArgument("haar_random_unitary: dim exceeds cap");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(idx(dim), idx(dim));
  for (Index j = 0; j < z.cols(); ++j)
    for (Index i = 0; i < z.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(z.rows(), z.cols());
  const Matrix& r = qr.matrixQR();
  // Fix the phase ambiguity of QR so the result is Haar distributed.
  for (Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0);
  }
  return UnitaryMatrix(std::move(q));
}

StateVector random_state(Dims dims, Rng& rng) {
  const std::size_t total = total_dimension(dims);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(idx(total));
  for (Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v.normalize();
  return {std::move(dims), std::move(v)};
}

// ---------------------------------------------------------------------------
// Overlaps and factorization

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("inner_product: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("fidelity: dimension mismatch");
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

double fidelity(const StateVector& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("fidelity: dimension mismatch");
  const Vector& v = a.amplitudes();
  const double f = v.dot(b.matrix() * v).real();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& a, const StateVector& b) { return fidelity(b, a); }

Matrix bipartite_matrix(const StateVector& s, const Subsystems& cut) {
  check_subsystems(cut, s.subsystem_count(), "bipartite_matrix");
  if (cut.empty()) throw InvalidArgument("bipartite_matrix: empty cut");
  const std::size_t rows = product_of(s.dims(), cut);
  const std::size_t cols = s.dimension() / rows;
  const StateVector p = permute(s, front_then_rest(cut, s.subsystem_count()));
  Matrix m(idx(rows), idx(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(idx(i), idx(j)) = p.amplitudes()(idx(i * cols + j));
  return m;
}

Eigen::VectorXd schmidt_coefficients(const StateVector& s, const Subsystems& cut) {
  check_cut(cut, s.subsystem_count());
  const Matrix m = bipartite_matrix(s, cut);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

double product_deficit(const StateVector& s, const Subsystems& cut) {
  const Eigen::VectorXd lambda = schmidt_coefficients(s, cut);
  // Relative to the norm so round-off in |psi| does not register as entanglement.
  const double total = lambda.squaredNorm();
  return std::max(0.0, 1.0 - lambda(0) * lambda(0) / total);
}

bool is_product_across(const StateVector& s, const Subsystems& cut, double tol) {
  return product_deficit(s, cut) <= tol;
}

double product_deviation(const DensityMatrix& rho, const Subsystems& cut) {
  check_cut(cut, rho.subsystem_count());
  const Subsystems order = front_then_rest(cut, rho.subsystem_count());
  const Subsystems rest(order.begin() + static_cast<std::ptrdiff_t>(cut.size()), order.end());
  const DensityMatrix a = partial_trace(rho, cut);
  const DensityMatrix b = partial_trace(rho, rest);
  return max_abs_deviation(permute(rho, order).matrix(), kron(a.matrix(), b.matrix()));
}

double max_abs_deviation(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("max_abs_deviation: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace qdis
