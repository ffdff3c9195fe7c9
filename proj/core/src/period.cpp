#include "qdis/period.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_set>

#include "qdis/errors.hpp"

namespace qdis {
namespace {

using Index = Eigen::Index;
__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % n);
}

unsigned resolve_k(std::uint64_t N, std::optional<unsigned> k) {
  const unsigned minimum = choose_register_size(N);
  if (!k) return minimum;
  if (*k < minimum) {
    throw InvalidArgument("k = " + std::to_string(*k) + " gives K < 2 N^2; need k >= " +
                          std::to_string(minimum));
  }
  return *k;
}

struct Pipeline {
  const PeriodicFunctionSpec& spec;
  StateVector psi;
  UnitaryMatrix dft;

  explicit Pipeline(const PeriodicFunctionSpec& s)
      : spec(s), psi(prepare_entangled_state(s)), dft(dft_unitary(s.K())) {}

  std::uint64_t residue_of(std::uint64_t y) const {
    const auto& t = spec.one_period();
    for (std::uint64_t c = 0; c < t.size(); ++c)
      if (t[c] == y) return c;
    throw InvariantViolation("register-2 outcome is not a value of f");
  }

  MeasuredRun from_collapse(const CollapseResult& collapsed) const {
    const auto& layout = spec.layout();
    const StateVector reg1 = first_register_factor(collapsed.state, layout, collapsed.outcome);
    const Vector transformed = dft.matrix() * reg1.amplitudes();
    std::vector<double> p(static_cast<std::size_t>(transformed.size()));
    for (Index r = 0; r < transformed.size(); ++r) p[static_cast<std::size_t>(r)] = std::norm(transformed(r));
    return {residue_of(collapsed.outcome), collapsed.outcome, collapsed.probability,
            OutcomeDistribution::from_probabilities(Register::kFirst, std::move(p))};
  }

  MeasuredRun measure(std::uint64_t residue) const {
    if (residue >= spec.period()) throw InvalidArgument("residue must be below the period");
    return from_collapse(collapse(psi, spec.layout(), Register::kSecond, spec(residue)));
  }

  MeasuredRun measure(Rng& rng) const {
    return from_collapse(collapse(psi, spec.layout(), Register::kSecond, rng));
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Function specs

PeriodicFunctionSpec::PeriodicFunctionSpec(std::uint64_t N, std::optional<std::uint64_t> generator,
                                           std::vector<std::uint64_t> table,
                                           std::optional<unsigned> k)
    : n_(N),
      generator_(generator),
      table_(std::move(table)),
      layout_(resolve_k(N, k), value_register_size(N)) {}

PeriodicFunctionSpec PeriodicFunctionSpec::modular_exponentiation(std::uint64_t N, std::uint64_t b,
                                                                  std::optional<unsigned> k) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  if (b == 0 || std::gcd(b, N) != 1) {
    throw InvalidArgument("b = " + std::to_string(b) + " is not coprime to N = " + std::to_string(N));
  }
  std::vector<std::uint64_t> table{1 % N};
  for (std::uint64_t v = b % N; v != table.front(); v = mul_mod(v, b, N)) table.push_back(v);
  return {N, b, std::move(table), k};
}

PeriodicFunctionSpec PeriodicFunctionSpec::from_table(std::uint64_t N,
                                                      std::vector<std::uint64_t> one_period,
                                                      std::optional<unsigned> k) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  if (one_period.empty()) throw InvalidArgument("function table must not be empty");
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t v : one_period) {
    if (v >= N) throw InvalidArgument("function value " + std::to_string(v) + " is not below N");
    if (!seen.insert(v).second) throw InvalidArgument("function must be injective on one period");
  }
  return {N, std::nullopt, std::move(one_period), k};
}

unsigned choose_register_size(std::uint64_t N) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  const u128 target = static_cast<u128>(N) * N * 2;
  unsigned k = 0;
  while ((static_cast<u128>(1) << k) < target) ++k;
  return k;
}

unsigned value_register_size(std::uint64_t N) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  unsigned m = 1;
  while ((std::uint64_t{1} << m) < N) ++m;
  return m;
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("mod_pow: modulus must be positive");
  std::uint64_t result = 1 % n;
  b %= n;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, b, n);
    b = mul_mod(b, b, n);
    e >>= 1;
  }
  return result;
}

std::uint64_t last_term_index(std::uint64_t p, std::uint64_t c, std::uint64_t K) {
  if (p == 0 || c >= K) throw InvalidArgument("last_term_index: need p > 0 and c < K");
  return (K - 1 - c) / p;
}

// ---------------------------------------------------------------------------
// States and transforms

StateVector prepare_entangled_state(const PeriodicFunctionSpec& spec) {
  const auto& layout = spec.layout();
  const Dims dims = layout.dims();
  total_dimension(dims);
  Vector v = Vector::Zero(static_cast<Index>(layout.K() * layout.M()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(layout.K()));
  for (std::size_t x = 0; x < layout.K(); ++x)
    v(static_cast<Index>(composite_index(layout, x, spec(x)))) = amp;
  return {dims, std::move(v)};
}

UnitaryMatrix dft_unitary(std::size_t K) {
  if (K == 0) throw InvalidArgument("dft_unitary: K must be positive");
  if (K > kMaxDimension) throw InvalidArgument("dft_unitary: K exceeds dimension cap");
  // Phases depend only on x r mod K; tabulate the K roots of unity once.
  std::vector<Complex> roots(K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(K));
  for (std::size_t j = 0; j < K; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(K);
    roots[j] = std::polar(scale, theta);
  }
  Matrix u(static_cast<Index>(K), static_cast<Index>(K));
  for (std::size_t x = 0; x < K; ++x)
    for (std::size_t r = 0; r < K; ++r) u(static_cast<Index>(r), static_cast<Index>(x)) = roots[(x * r) % K];
  return {std::move(u), unchecked};
}

Complex geometric_sum_closed_form(const GeometricSumInputs& in) {
  if (in.K == 0) throw InvalidArgument("geometric sum: K must be positive");
  const std::uint64_t two_k = 2 * in.K;
  const std::uint64_t pr = mul_mod(in.p, in.r, two_k);
  const double terms = static_cast<double>(in.L) + 1.0;
  if (pr % in.K == 0) return {terms, 0.0};

  const double k = static_cast<double>(in.K);
  const double denom = std::sin(std::numbers::pi * static_cast<double>(pr) / k);
  if (std::abs(denom) < 1e-12) return {terms, 0.0};

  // Reduce every angle modulo 2 pi in exact integer arithmetic first.
  const std::uint64_t phase = mul_mod(pr, in.L % two_k, two_k);
  const std::uint64_t numer = mul_mod(pr, (in.L + 1) % two_k, two_k);
  const double ratio = std::sin(std::numbers::pi * static_cast<double>(numer) / k) / denom;
  return std::polar(1.0, std::numbers::pi * static_cast<double>(phase) / k) * ratio;
}

// ---------------------------------------------------------------------------
// Pipelines

MeasuredRun run_with_measurement(const PeriodicFunctionSpec& spec, std::uint64_t residue) {
  return Pipeline(spec).measure(residue);
}

MeasuredRun run_with_measurement(const PeriodicFunctionSpec& spec, Rng& rng) {
  return Pipeline(spec).measure(rng);
}

OutcomeDistribution measured_mixture(const PeriodicFunctionSpec& spec) {
  const Pipeline pipeline(spec);
  std::vector<double> mix(spec.K(), 0.0);
  for (std::uint64_t c = 0; c < spec.period(); ++c) {
    const MeasuredRun run = pipeline.measure(c);
    const double weight = static_cast<double>(last_term_index(spec.period(), c, spec.K()) + 1) /
                          static_cast<double>(spec.K());
    for (std::size_t r = 0; r < mix.size(); ++r) mix[r] += weight * run.distribution[r];
  }
  return OutcomeDistribution::from_probabilities(Register::kFirst, std::move(mix));
}

OutcomeDistribution run_without_measurement(const PeriodicFunctionSpec& spec, IgnorePath path) {
  const StateVector psi = prepare_entangled_state(spec);
  const UnitaryMatrix u = dft_unitary(spec.K());

  if (path == IgnorePath::kFullState) {
    const StateVector transformed = apply_unitary(u, psi, {0});
    return measurement_distribution(transformed, spec.layout(), Register::kFirst);
  }

  // Ignore register 2: reduce, conjugate by U, read the diagonal.
  const DensityMatrix rho = partial_trace(psi, {0});
  const Matrix w = u.matrix() * rho.matrix();
  std::vector<double> p(spec.K());
  // (U rho U^dagger)_rr = sum_x W(r,x) conj(U(r,x))
  for (std::size_t r = 0; r < p.size(); ++r) {
    const auto ri = static_cast<Index>(r);
    p[r] = (w.row(ri).cwiseProduct(u.matrix().row(ri).conjugate())).sum().real();
  }
  return OutcomeDistribution::from_probabilities(Register::kFirst, std::move(p));
}

std::vector<std::uint64_t> sample_outcomes(const PeriodicFunctionSpec& spec, std::size_t count,
                                           Rng& rng) {
  const Pipeline pipeline(spec);
  std::vector<std::uint64_t> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const MeasuredRun run = pipeline.measure(rng);
    samples.push_back(sample_outcome(run.distribution, rng));
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Period extraction

std::vector<Convergent> convergents(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidArgument("convergents: zero denominator");
  std::vector<Convergent> out;
  std::uint64_t h_prev = 1, h_prev2 = 0;
  std::uint64_t k_prev = 0, k_prev2 = 1;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t h = a * h_prev + h_prev2;
    const std::uint64_t k = a * k_prev + k_prev2;
    out.push_back({h, k});
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const std::uint64_t rem = num % den;
    num = den;
    den = rem;
  }
  return out;
}

std::optional<std::uint64_t> period_candidate(std::uint64_t r, std::uint64_t K, std::uint64_t N) {
  if (K == 0 || r >= K) throw InvalidArgument("period_candidate: need r < K");
  if (r == 0) return std::nullopt;
  for (const Convergent& c : convergents(r, K)) {
    if (c.denominator > N) break;
    // |r/K - j/q| <= 1/(2K)  <=>  2 |r q - j K| <= q
    const auto rq = static_cast<u128>(r) * c.denominator;
    const auto jk = static_cast<u128>(c.numerator) * K;
    const auto diff = rq > jk ? rq - jk : jk - rq;
    if (2 * diff <= c.denominator) {
      if (c.denominator < 2) return std::nullopt;
      return c.denominator;
    }
  }
  return std::nullopt;
}

std::optional<std::uint64_t> infer_period(std::span<const std::uint64_t> samples, std::uint64_t K,
                                          std::uint64_t N,
                                          const std::function<std::uint64_t(std::uint64_t)>& f) {
  std::uint64_t candidate = 1;
  for (std::uint64_t r : samples) {
    if (r >= K) throw InvalidArgument("sample " + std::to_string(r) + " is not below K");
    const auto q = period_candidate(r, K, N);
    if (!q) continue;
    const std::uint64_t merged = std::lcm(candidate, *q);
    if (merged <= N) candidate = merged;
  }
  if (candidate < 2) return std::nullopt;
  if (!f) return candidate;

  const std::uint64_t checks = std::min<std::uint64_t>(2 * N, K);
  const auto periodic_with = [&](std::uint64_t d) {
    for (std::uint64_t x = 0; x < checks; ++x)
      if (f(x + d) != f(x)) return false;
    return true;
  };
  if (!periodic_with(candidate)) return std::nullopt;
  for (std::uint64_t d = 1; d < candidate; ++d)
    if (candidate % d == 0 && periodic_with(d)) return d;
  return candidate;
}

}  // namespace qdis
