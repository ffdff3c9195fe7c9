#pragma once

// Two-register bookkeeping: register 1 holds x (k qubits), register 2 holds
// y (m qubits). A state over both registers has dims {K, M} with composite
// index x * M + y.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qdis/linalg.hpp"

namespace qdis {

enum class Register { kFirst = 1, kSecond = 2 };

class RegisterLayout {
 public:
  RegisterLayout(unsigned k, unsigned m);

  unsigned k() const { return k_; }
  unsigned m() const { return m_; }
  std::size_t K() const { return std::size_t{1} << k_; }
  std::size_t M() const { return std::size_t{1} << m_; }
  std::size_t size(Register r) const { return r == Register::kFirst ? K() : M(); }
  Dims dims() const { return {K(), M()}; }

 private:
  unsigned k_;
  unsigned m_;
};

struct OutcomeDistribution {
  Register reg;
  std::vector<double> probabilities;

  /// Clamps entries in [-1e-14, 0) to zero and checks the sum; more negative
  /// entries or a sum off by more than 1e-10 throw InvariantViolation.
  static OutcomeDistribution from_probabilities(Register reg, std::vector<double> p);

  std::size_t size() const { return probabilities.size(); }
  double operator[](std::size_t i) const { return probabilities[i]; }
};

struct CollapseResult {
  std::size_t outcome;
  double probability;
  StateVector state;
};

std::size_t composite_index(const RegisterLayout& layout, std::size_t x, std::size_t y);

OutcomeDistribution measurement_distribution(const StateVector& s, const RegisterLayout& layout,
                                             Register reg);

/// Projects `reg` onto `outcome` and renormalizes.
CollapseResult collapse(const StateVector& s, const RegisterLayout& layout, Register reg,
                        std::size_t outcome);
/// Draws the outcome from measurement_distribution, then collapses.
CollapseResult collapse(const StateVector& s, const RegisterLayout& layout, Register reg, Rng& rng);

/// Draws one outcome index from an exact distribution.
std::size_t sample_outcome(const OutcomeDistribution& dist, Rng& rng);

/// The register-1 factor of a state that is a product across the register
/// cut with register 2 in basis state `y` (e.g. right after collapse).
StateVector first_register_factor(const StateVector& s, const RegisterLayout& layout, std::size_t y);

}  // namespace qdis
