#include "qdis/registers.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qdis/errors.hpp"

namespace qdis {
namespace {

constexpr double kClampFloor = -1e-14;
constexpr double kSumTolerance = 1e-10;
constexpr double kForcedOutcomeFloor = 1e-14;

void check_layout(const StateVector& s, const RegisterLayout& layout) {
  if (s.dimension() != layout.K() * layout.M()) {
    throw InvalidArgument("state dimension " + std::to_string(s.dimension()) +
                          " does not match register layout K*M = " +
                          std::to_string(layout.K() * layout.M()));
  }
}

}  // namespace

RegisterLayout::RegisterLayout(unsigned k, unsigned m) : k_(k), m_(m) {
  if (k < 1 || m < 1) throw InvalidArgument("register qubit counts must be at least 1");
  if (k + m > 16) throw InvalidArgument("register layout exceeds dimension cap");
}

OutcomeDistribution OutcomeDistribution::from_probabilities(Register reg, std::vector<double> p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < 0.0) {
      if (v < kClampFloor) throw InvariantViolation("negative probability " + std::to_string(v));
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvariantViolation("probabilities sum to " + std::to_string(sum));
  }
  return {reg, std::move(p)};
}

std::size_t composite_index(const RegisterLayout& layout, std::size_t x, std::size_t y) {
  if (x >= layout.K()) throw InvalidArgument("register-1 value out of range");
  if (y >= layout.M()) throw InvalidArgument("register-2 value out of range");
  return x * layout.M() + y;
}

OutcomeDistribution measurement_distribution(const StateVector& s, const RegisterLayout& layout,
                                             Register reg) {
  check_layout(s, layout);
  const std::size_t K = layout.K();
  const std::size_t M = layout.M();
  std::vector<double> p(layout.size(reg), 0.0);
  for (std::size_t x = 0; x < K; ++x)
    for (std::size_t y = 0; y < M; ++y) {
      const double w = std::norm(s[x * M + y]);
      p[reg == Register::kFirst ? x : y] += w;
    }
  return OutcomeDistribution::from_probabilities(reg, std::move(p));
}

CollapseResult collapse(const StateVector& s, const RegisterLayout& layout, Register reg,
                        std::size_t outcome) {
  check_layout(s, layout);
  if (outcome >= layout.size(reg)) throw InvalidArgument("outcome out of range");
  const std::size_t K = layout.K();
  const std::size_t M = layout.M();
  Vector v = Vector::Zero(s.amplitudes().size());
  for (std::size_t x = 0; x < K; ++x)
    for (std::size_t y = 0; y < M; ++y) {
      if ((reg == Register::kFirst ? x : y) != outcome) continue;
      const auto i = static_cast<Eigen::Index>(x * M + y);
      v(i) = s.amplitudes()(i);
    }
  const double prob = v.squaredNorm();
  if (prob <= kForcedOutcomeFloor) {
    throw InvalidArgument("cannot collapse onto outcome " + std::to_string(outcome) +
                          " with probability " + std::to_string(prob));
  }
  v /= std::sqrt(prob);
  return {outcome, prob, StateVector(layout.dims(), std::move(v))};
}

CollapseResult collapse(const StateVector& s, const RegisterLayout& layout, Register reg, Rng& rng) {
  const auto dist = measurement_distribution(s, layout, reg);
  return collapse(s, layout, reg, sample_outcome(dist, rng));
}

std::size_t sample_outcome(const OutcomeDistribution& dist, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(dist.probabilities.begin(), dist.probabilities.end());
  return pick(rng);
}

StateVector first_register_factor(const StateVector& s, const RegisterLayout& layout, std::size_t y) {
  check_layout(s, layout);
  if (y >= layout.M()) throw InvalidArgument("register-2 value out of range");
  const std::size_t K = layout.K();
  const std::size_t M = layout.M();
  Vector v(static_cast<Eigen::Index>(K));
  for (std::size_t x = 0; x < K; ++x) v(static_cast<Eigen::Index>(x)) = s[x * M + y];
  // Normalization check in the constructor rejects states that were not a
  // product with register 2 in |y>.
  return StateVector({K}, std::move(v));
}

}  // namespace qdis
