// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qdis/period.hpp"
#include "qdis/qec.hpp"

using namespace qdis;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_diff(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Subsystems block(std::size_t offset, std::size_t n) {
  Subsystems s(n);
  std::iota(s.begin(), s.end(), offset);
  return s;
}

PeriodicFunctionSpec random_table_spec(Rng& rng) {
  const std::uint64_t N = std::uniform_int_distribution<std::uint64_t>(2, 5)(rng);
  const std::uint64_t p = std::uniform_int_distribution<std::uint64_t>(1, N)(rng);
  std::vector<std::uint64_t> values(N);
  std::iota(values.begin(), values.end(), 0);
  std::shuffle(values.begin(), values.end(), rng);
  values.resize(p);
  return PeriodicFunctionSpec::from_table(N, values);
}

std::vector<Complex> random_coefficients(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(n);
  double norm2 = 0.0;
  for (auto& x : c) {
    x = {g(rng), g(rng)};
    norm2 += std::norm(x);
  }
  for (auto& x : c) x /= std::sqrt(norm2);
  return c;
}

const QuantumCode& five() {
  static const QuantumCode code = five_qubit_code();
  return code;
}

// ---------- criteria ----------

Outcome three_path_equivalence() {
  std::vector<PeriodicFunctionSpec> specs{PeriodicFunctionSpec::modular_exponentiation(15, 7),
                                          PeriodicFunctionSpec::modular_exponentiation(21, 2)};
  Rng rng(2024);
  for (int i = 0; i < 20; ++i) specs.push_back(random_table_spec(rng));
  double worst = 0.0;
  bool sizes_ok = specs[0].K() == 512 && specs[1].K() == 1024;
  for (std::size_t i = 2; i < specs.size(); ++i) sizes_ok = sizes_ok && specs[i].K() <= 64;
  for (const auto& spec : specs) {
    const auto m = measured_mixture(spec);
    const auto r = run_without_measurement(spec, IgnorePath::kReducedDensity);
    const auto f = run_without_measurement(spec, IgnorePath::kFullState);
    worst = std::max({worst, max_diff(m, r), max_diff(m, f), max_diff(r, f)});
  }
  return {sizes_ok && worst <= 1e-10, fmt("%zu specs, max pairwise deviation %.3e (tol 1e-10)", specs.size(), worst)};
}

Outcome exact_divisor_peaks() {
  const auto spec = PeriodicFunctionSpec::modular_exponentiation(15, 7);
  const auto oracle = oracle::direct_period_distribution(512, oracle::multiplicative_order(7, 15));
  double peak_err = 0.0, off_max = 0.0, oracle_err = 0.0;
  for (const auto& d : {measured_mixture(spec), run_without_measurement(spec, IgnorePath::kReducedDensity),
                        run_without_measurement(spec, IgnorePath::kFullState)}) {
    for (std::size_t r = 0; r < 512; ++r) {
      oracle_err = std::max(oracle_err, std::abs(d[r] - oracle[r]));
      if (r % 128 == 0) peak_err = std::max(peak_err, std::abs(d[r] - 0.25));
      else off_max = std::max(off_max, d[r]);
    }
  }
  return {peak_err <= 1e-10 && off_max < 1e-12 && oracle_err <= 1e-10,
          fmt("peak error %.3e (tol 1e-10), off-peak max %.3e (tol 1e-12), oracle deviation %.3e", peak_err, off_max,
              oracle_err)};
}

Outcome geometric_sum() {
  Rng rng(1010);
  int zero_branch = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t K = std::uniform_int_distribution<std::uint64_t>(1, 4096)(rng);
    const std::uint64_t p = std::uniform_int_distribution<std::uint64_t>(1, K)(rng);
    std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, K - 1)(rng);
    if (trial % 10 == 0) {
      // Force p r = 0 mod K.
      const std::uint64_t step = K / std::gcd(p, K);
      r = step * std::uniform_int_distribution<std::uint64_t>(0, K / step - 1)(rng);
    }
    const std::uint64_t L = std::uniform_int_distribution<std::uint64_t>(0, K / p + 1)(rng);
    if ((p * r) % K == 0) ++zero_branch;
    const Complex closed = geometric_sum_closed_form({p, r, K, L});
    const Complex brute = oracle::brute_geometric_sum(p, r, K, L);
    worst = std::max(worst, std::abs(closed - brute) / std::max(1.0, std::abs(brute)));
  }
  return {worst <= 1e-9 && zero_branch > 0,
          fmt("1000 tuples (%d on the pr = 0 mod K branch), max relative error %.3e (tol 1e-9)", zero_branch, worst)};
}

Outcome period_recovery() {
  int failures = 0, runs = 0;
  for (auto [N, b] : {std::pair<std::uint64_t, std::uint64_t>{15, 7}, {21, 2}}) {
    const std::uint64_t truth = oracle::multiplicative_order(b, N);
    const auto spec = PeriodicFunctionSpec::modular_exponentiation(N, b);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng(derive_seed(seed, 0));
      const auto samples = sample_outcomes(spec, 32, rng);
      const auto p = infer_period(samples, spec.K(), N, [&](std::uint64_t x) { return spec(x); });
      ++runs;
      if (!p || *p != truth) ++failures;
    }
  }
  return {failures == 0, fmt("%d/%d seeded 32-sample runs recovered p (4 for N=15, 6 for N=21)", runs - failures, runs)};
}

Outcome scalar_products() {
  double worst = 0.0;
  for (std::size_t q = 0; q < 5; ++q) {
    const auto r = check_orthogonality_conditions(five(), q);
    if (r.products.size() != 10) return {false, "expected 10 scalar products"};
    worst = std::max(worst, r.max_deviation);
  }
  const bool bit_flip_rejected = !check_orthogonality_conditions(bit_flip_code(), 0).satisfied(1e-12);
  return {worst < 1e-12 && bit_flip_rejected,
          fmt("five-qubit max deviation %.3e over 5 qubits (tol 1e-12); bit-flip code %s", worst,
              bit_flip_rejected ? "reported non-compliant" : "wrongly compliant")};
}

Outcome all_pauli_recovery() {
  Rng rng(6);
  int ok = 0;
  double worst_fid = 0.0, worst_syn = 0.0;
  const auto errors = single_qubit_errors(5);
  for (const auto& e : errors) {
    const StateVector logical = random_state({2}, rng);
    const StateVector corrupted = apply_unitary(pauli_error_matrix(e, 5), encode(logical, five()), block(0, 5));
    const auto rep = decode_and_verify(corrupted, five(), logical, 1e-10);
    const std::size_t a = *five().syndrome_of(e.label());
    double syn = 0.0;
    for (std::size_t s = 0; s < 16; ++s) syn = std::max(syn, std::abs(rep.syndrome_distribution[s] - (s == a ? 1.0 : 0.0)));
    worst_fid = std::max(worst_fid, std::abs(1.0 - rep.fidelity));
    worst_syn = std::max(worst_syn, syn);
    if (rep.product && std::abs(1.0 - rep.fidelity) <= 1e-10 && syn <= 1e-10) ++ok;
  }
  return {ok == 15, fmt("%d/15 errors recovered, max |1 - F| %.3e, max syndrome deviation %.3e", ok, worst_fid, worst_syn)};
}

Outcome unknown_errors() {
  int ok = 0, total = 0;
  double min_fid = 1.0;
  const StateVector logical({2}, Vector{{1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0))}});
  const StateVector encoded = encode(logical, five());
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(70, t));
    const auto c = random_coefficients(16, rng);
    const auto rep = decode_and_verify(apply_superposed_error(encoded, five(), c), five(), logical, 1e-10);
    ++total;
    min_fid = std::min(min_fid, rep.fidelity);
    if (rep.product && rep.fidelity >= 1.0 - 1e-10) ++ok;
  }
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(71, t));
    const auto coupling = EnvironmentCoupling::random(4, rng);
    const StateVector with_env = attach_environment(encoded, coupling);
    for (std::size_t q = 0; q < 5; ++q) {
      const auto rep = decode_and_verify(apply_environment_coupling(with_env, coupling, q), five(), logical, 1e-10);
      ++total;
      min_fid = std::min(min_fid, rep.fidelity);
      if (rep.product && rep.fidelity >= 1.0 - 1e-10) ++ok;
    }
  }
  return {ok == total, fmt("%d/%d trials product with fidelity >= 1 - 1e-10 (min fidelity %.17g)", ok, total, min_fid)};
}

Outcome entanglement_preservation() {
  const StateVector bell({2, 2}, Vector{{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)}});
  const StateVector encoded = encode_with_bystanders(BystanderState(bell), five());
  double min_fid = 1.0;
  bool product = true;
  for (const auto& e : single_qubit_errors(5)) {
    const StateVector corrupted = apply_unitary(pauli_error_matrix(e, 5), encoded, block(1, 5));
    const auto rep = decode_and_verify(corrupted, five(), bell, 1e-10, 1);
    min_fid = std::min(min_fid, rep.fidelity);
    product = product && rep.product;
  }
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto coupling = EnvironmentCoupling::random(4, rng);
    const std::size_t q = 1 + static_cast<std::size_t>(t % 5);
    const auto rep = decode_and_verify(apply_environment_coupling(attach_environment(encoded, coupling), coupling, q),
                                       five(), bell, 1e-10, 1);
    min_fid = std::min(min_fid, rep.fidelity);
    product = product && rep.product;
  }
  return {product && min_fid >= 1.0 - 1e-10,
          fmt("15 Pauli + 20 environment trials on a Bell pair, min fidelity %.17g", min_fid)};
}

Outcome mixture_recovery() {
  Rng rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, 15);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  double worst_factor = 0.0, worst_logical = 0.0;
  for (int t = 0; t < 50; ++t) {
    const StateVector z = StateVector::basis({2}, static_cast<std::size_t>(t % 2));
    MixedErrorChannel ch;
    double total = 0.0;
    const int terms = 2 + t % 5;
    for (int j = 0; j < terms; ++j) {
      const double w = weight(rng);
      total += w;
      ch.terms.push_back({w, UnitaryMatrix(five().error_matrix(pick(rng)), unchecked), block(0, 5)});
    }
    for (auto& term : ch.terms) term.weight /= total;
    const DensityMatrix decoded = decode(apply_mixed_error(DensityMatrix::pure(encode(z, five())), ch), five());
    worst_factor = std::max(worst_factor, product_deviation(decoded, {0}));
    worst_logical = std::max(worst_logical, max_abs_deviation(partial_trace(decoded, {0}).matrix(),
                                                              DensityMatrix::pure(z).matrix()));
  }
  return {worst_factor <= 1e-10 && worst_logical <= 1e-10,
          fmt("50 channels, max |rho - |z><z| (x) sigma| %.3e, logical deviation %.3e (tol 1e-10)", worst_factor,
              worst_logical)};
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qdis_acceptance";
  fs::create_directories(dir);
  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const std::vector<std::string> configs{"period --N 21 --b 2 --samples 32 --seed 11",
                                         "qec --code five-qubit --channel environment --trials 25 --seed 7",
                                         "qec --code five-qubit --channel mixed --trials 10 --seed 3"};
  int identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string reports[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / ("r" + std::to_string(i) + "_" + std::to_string(run) + ".json");
      const std::string cmd = std::string(QDIS_CLI_PATH) + " " + configs[i] + " --out " + out.string();
      if (std::system(cmd.c_str()) != 0) return {false, "CLI failed: " + cmd};
      reports[run] = slurp(out);
    }
    if (!reports[0].empty() && reports[0] == reports[1]) ++identical;
  }
  return {identical == static_cast<int>(configs.size()),
          fmt("%d/%zu configs produced byte-identical reports over two runs", identical, configs.size())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s;  // <= 0: none
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "three-path equivalence", three_path_equivalence, 10.0},
      {2, "exact-divisor peaks", exact_divisor_peaks, 0.0},
      {3, "geometric-sum closed form", geometric_sum, 5.0},
      {4, "period recovery", period_recovery, 0.0},
      {5, "scalar-product conditions", scalar_products, 0.0},
      {6, "all-Pauli recovery", all_pauli_recovery, 0.0},
      {7, "measurement-free correction of unknown errors", unknown_errors, 60.0},
      {8, "entanglement preservation", entanglement_preservation, 0.0},
      {9, "mixture recovery", mixture_recovery, 0.0},
      {10, "reproducibility", reproducibility, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2fs", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(" (limit %.0fs)", c.time_limit_s);
      if (secs >= c.time_limit_s) o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
