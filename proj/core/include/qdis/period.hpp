#pragma once

// Period finding with a discrete Fourier transform on register 1, computed
// three ways: by measuring register 2 first, by tracing it out, and by
// transforming the full entangled state and ignoring register 2.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdis/linalg.hpp"
#include "qdis/registers.hpp"

namespace qdis {

/// A function with promised period p and values in [0, N), plus the
/// register sizes used to sample it.
class PeriodicFunctionSpec {
 public:
  /// f(x) = b^x mod N. Requires gcd(b, N) = 1.
  static PeriodicFunctionSpec modular_exponentiation(std::uint64_t N, std::uint64_t b,
                                                     std::optional<unsigned> k = std::nullopt);
  /// f(x) = one_period[x mod p] with p = one_period.size(). Values must be
  /// distinct and below N.
  static PeriodicFunctionSpec from_table(std::uint64_t N, std::vector<std::uint64_t> one_period,
                                         std::optional<unsigned> k = std::nullopt);

  std::uint64_t N() const { return n_; }
  std::optional<std::uint64_t> generator() const { return generator_; }
  /// True period; for verification only, the pipeline never reads it.
  std::uint64_t period() const { return table_.size(); }
  const std::vector<std::uint64_t>& one_period() const { return table_; }
  const RegisterLayout& layout() const { return layout_; }
  std::size_t K() const { return layout_.K(); }

  std::uint64_t operator()(std::uint64_t x) const { return table_[x % table_.size()]; }

 private:
  PeriodicFunctionSpec(std::uint64_t N, std::optional<std::uint64_t> generator,
                       std::vector<std::uint64_t> table, std::optional<unsigned> k);

  std::uint64_t n_;
  std::optional<std::uint64_t> generator_;
  std::vector<std::uint64_t> table_;
  RegisterLayout layout_;
};

/// Smallest k with 2^k >= 2 N^2.
unsigned choose_register_size(std::uint64_t N);
/// Smallest m >= 1 with 2^m >= N.
unsigned value_register_size(std::uint64_t N);

/// b^e mod n without overflow for n < 2^32.
std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t n);

/// Largest L with c + L p < K.
std::uint64_t last_term_index(std::uint64_t p, std::uint64_t c, std::uint64_t K);

/// (1/sqrt K) sum_x |x>|f(x)>
StateVector prepare_entangled_state(const PeriodicFunctionSpec& spec);

/// Entry (r, x) = exp(2 pi i x r / K) / sqrt K.
UnitaryMatrix dft_unitary(std::size_t K);

struct GeometricSumInputs {
  std::uint64_t p = 0;
  std::uint64_t r = 0;
  std::uint64_t K = 1;
  std::uint64_t L = 0;
};

/// sum_{n=0}^{L} exp(2 pi i p r n / K) via its closed form; L + 1 when
/// p r = 0 mod K.
Complex geometric_sum_closed_form(const GeometricSumInputs& in);

struct MeasuredRun {
  std::uint64_t residue;          // c, smallest x with f(x) = f(c)
  std::uint64_t register2_value;  // f(c)
  double branch_probability;      // (L(c) + 1) / K
  OutcomeDistribution distribution;
};

/// Collapses register 2 onto f(residue), transforms register 1, and returns
/// the exact distribution over r.
MeasuredRun run_with_measurement(const PeriodicFunctionSpec& spec, std::uint64_t residue);
MeasuredRun run_with_measurement(const PeriodicFunctionSpec& spec, Rng& rng);

/// Branch distributions of run_with_measurement mixed with weights (L(c)+1)/K.
OutcomeDistribution measured_mixture(const PeriodicFunctionSpec& spec);

enum class IgnorePath { kReducedDensity, kFullState };

OutcomeDistribution run_without_measurement(const PeriodicFunctionSpec& spec, IgnorePath path);

/// Draws `count` values of r, each from a fresh measure-then-transform run.
std::vector<std::uint64_t> sample_outcomes(const PeriodicFunctionSpec& spec, std::size_t count,
                                           Rng& rng);

struct Convergent {
  std::uint64_t numerator;
  std::uint64_t denominator;
};

/// Convergents of num/den, in order.
std::vector<Convergent> convergents(std::uint64_t num, std::uint64_t den);

/// Denominator of the first convergent j/q of r/K with q <= N and
/// |r/K - j/q| <= 1/(2K); nullopt when r carries no information.
std::optional<std::uint64_t> period_candidate(std::uint64_t r, std::uint64_t K, std::uint64_t N);

/// Combines per-sample candidates by lcm (kept <= N). When `f` is given the
/// result must satisfy f(x + p) = f(x) on spot checks and is reduced to the
/// smallest such divisor. nullopt means inconclusive.
std::optional<std::uint64_t> infer_period(std::span<const std::uint64_t> samples, std::uint64_t K,
                                          std::uint64_t N,
                                          const std::function<std::uint64_t(std::uint64_t)>& f = {});

}  // namespace qdis
