#include "qdis/tools/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qdis/code_json.hpp"
#include "qdis/errors.hpp"
#include "qdis/period.hpp"
#include "qdis/qec.hpp"
#include "qdis/version.hpp"

namespace qdis::tools {

namespace {

constexpr std::size_t kMaxSamples = 1'000'000;
constexpr std::size_t kMaxTrials = 100'000;

Json header(Json config, std::optional<std::uint64_t> seed) {
  Json j;
  j["config"] = std::move(config);
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["version"] = kVersion;
  return j;
}

Json check(const std::string& name, bool pass, std::optional<double> deviation) {
  return Json{{"name", name}, {"pass", pass}, {"deviation", deviation ? Json(*deviation) : Json(nullptr)}};
}

double max_diff(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Subsystems block(const QuantumCode& code) { return physical_block(code, 0); }

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

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

// ---------- qec trials ----------

struct Trial {
  Json row;
  DecodeReport report;
  std::optional<double> overlap_deviation;  // superposed only
};

Json trial_row(std::size_t t, const DecodeReport& r) {
  Json row;
  row["trial"] = t;
  row["fidelity"] = r.fidelity;
  row["product"] = r.product;
  row["factorization_error"] = r.factorization_error;
  row["syndrome_distribution"] = r.syndrome_distribution;
  return row;
}

Trial pauli_trial(const QuantumCode& code, const PauliError& e, const StateVector& logical, std::size_t t) {
  const StateVector corrupted = apply_unitary(pauli_error_matrix(e, code.n_physical()), encode(logical, code), block(code));
  Trial out{{}, decode_and_verify(corrupted, code, logical, kProductTol), std::nullopt};
  out.row = trial_row(t, out.report);
  out.row["error"] = e.label();
  return out;
}

Trial superposed_trial(const QuantumCode& code, const StateVector& logical, Rng& rng, std::size_t t) {
  const auto c = random_coefficients(code.syndrome_count(), rng);
  const StateVector corrupted = apply_superposed_error(encode(logical, code), code, c);
  Trial out{{}, decode_and_verify(corrupted, code, logical, kProductTol), std::nullopt};
  // The decoded ancilla should carry exactly the coefficients.
  Vector cv(static_cast<Eigen::Index>(c.size()));
  for (std::size_t a = 0; a < c.size(); ++a) cv(static_cast<Eigen::Index>(a)) = c[a];
  out.overlap_deviation = max_abs_deviation(decode(corrupted, code).amplitudes(), kron(logical.amplitudes(), cv));
  out.row = trial_row(t, out.report);
  out.row["ancilla_overlap_deviation"] = *out.overlap_deviation;
  return out;
}

Trial mixed_trial(const QuantumCode& code, const StateVector& logical, Rng& rng, std::size_t t) {
  constexpr int kTerms = 4;
  std::uniform_int_distribution<std::size_t> pick(0, code.syndrome_count() - 1);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  MixedErrorChannel channel;
  Json terms = Json::array();
  double total = 0.0;
  std::vector<std::size_t> syndromes;
  for (int j = 0; j < kTerms; ++j) {
    const std::size_t a = pick(rng);
    const double w = weight(rng);
    total += w;
    syndromes.push_back(a);
    channel.terms.push_back({w, UnitaryMatrix(code.error_matrix(a), unchecked), block(code)});
  }
  for (std::size_t j = 0; j < channel.terms.size(); ++j) {
    channel.terms[j].weight /= total;
    terms.push_back({{"weight", channel.terms[j].weight}, {"error", code.syndrome_label(syndromes[j])}});
  }
  const DensityMatrix corrupted = apply_mixed_error(DensityMatrix::pure(encode(logical, code)), channel);
  Trial out{{}, decode_and_verify(corrupted, code, logical, kProductTol), std::nullopt};
  out.row = trial_row(t, out.report);
  out.row["terms"] = std::move(terms);
  return out;
}

Trial environment_trial(const QuantumCode& code, const StateVector& logical, std::size_t env_dim, Rng& rng,
                        std::size_t t) {
  const auto coupling = EnvironmentCoupling::random(env_dim, rng);
  const std::size_t qubit = t % code.n_physical();
  const StateVector coupled =
      apply_environment_coupling(attach_environment(encode(logical, code), coupling), coupling, qubit);
  Trial out{{}, decode_and_verify(coupled, code, logical, kProductTol), std::nullopt};
  out.row = trial_row(t, out.report);
  out.row["qubit"] = qubit + 1;
  out.row["env_dim"] = env_dim;
  return out;
}

}  // namespace

// ---------- period ----------

Report run_period_experiment(const PeriodConfig& cfg) {
  if (cfg.samples == 0 || cfg.samples > kMaxSamples)
    throw InvalidArgument("samples must be in [1, " + std::to_string(kMaxSamples) + "]");
  const auto spec = PeriodicFunctionSpec::modular_exponentiation(cfg.N, cfg.b, cfg.k);
  const auto& layout = spec.layout();
  (void)total_dimension(layout.dims());

  const auto measured = measured_mixture(spec);
  const auto reduced = run_without_measurement(spec, IgnorePath::kReducedDensity);
  const auto full = run_without_measurement(spec, IgnorePath::kFullState);
  const double d_mr = max_diff(measured, reduced);
  const double d_mf = max_diff(measured, full);
  const double d_rf = max_diff(reduced, full);
  const double d_max = std::max({d_mr, d_mf, d_rf});

  Rng rng(derive_seed(cfg.seed, 0));
  const auto samples = sample_outcomes(spec, cfg.samples, rng);
  const auto inferred = infer_period(samples, spec.K(), spec.N(), [&](std::uint64_t x) { return spec(x); });

  Json config{{"subcommand", "period"},
              {"N", cfg.N},
              {"b", cfg.b},
              {"k", cfg.k ? Json(*cfg.k) : Json(nullptr)},
              {"samples", cfg.samples},
              {"format", cfg.format == OutputFormat::kJson ? "json" : "csv"}};
  Report report{header(std::move(config), cfg.seed), kSuccess};
  Json& results = report.body["results"];
  results["k"] = layout.k();
  results["m"] = layout.m();
  results["K"] = spec.K();
  results["reference_period"] = spec.period();
  results["distributions"] = {{"measured", measured.probabilities},
                              {"reduced_rho", reduced.probabilities},
                              {"full_psi", full.probabilities}};
  results["deviations"] = {{"measured_vs_reduced_rho", d_mr}, {"measured_vs_full_psi", d_mf}, {"reduced_rho_vs_full_psi", d_rf}};
  results["samples"] = samples;
  results["inferred_period"] = inferred ? Json(*inferred) : Json(nullptr);

  const bool recovered = inferred && *inferred == spec.period();
  report.body["checks"] = Json::array({check("three_path_equivalence", d_max <= kEquivalenceTol, d_max),
                                       check("period_recovered", recovered, std::nullopt)});
  if (d_max > kEquivalenceTol) report.exit_code = kInternalError;
  else if (!recovered) report.exit_code = kInconclusive;
  return report;
}

std::string period_csv(const Report& report) {
  const Json& d = report.body.at("results").at("distributions");
  std::ostringstream os;
  os.precision(17);
  os << "r,measured,reduced_rho,full_psi\n";
  for (std::size_t r = 0; r < d.at("measured").size(); ++r)
    os << r << ',' << d["measured"][r].get<double>() << ',' << d["reduced_rho"][r].get<double>() << ','
       << d["full_psi"][r].get<double>() << '\n';
  return os.str();
}

// ---------- qec ----------

Report run_qec_experiment(const QecConfig& cfg) {
  const QuantumCode code = code_by_name(cfg.code);
  if (cfg.trials == 0 || cfg.trials > kMaxTrials)
    throw InvalidArgument("trials must be in [1, " + std::to_string(kMaxTrials) + "]");
  if (cfg.env_dim < 2) throw InvalidArgument("env-dim must be >= 2");

  const std::string& ch = cfg.channel;
  std::optional<PauliError> fixed_error;
  if (ch.rfind("pauli:", 0) == 0) {
    fixed_error = PauliError::parse(ch.substr(6));
    if (fixed_error->kind == PauliKind::kIdentity || fixed_error->qubit > code.n_physical())
      throw InvalidArgument("pauli channel needs a non-identity error on qubits 1.." + std::to_string(code.n_physical()));
  } else if (ch == "environment") {
    (void)total_dimension({code.dimension(), cfg.env_dim});
  } else if (ch != "superposed" && ch != "mixed" && ch != "all-paulis" && ch != "phase-error") {
    throw InvalidArgument("unknown channel '" + ch + "'");
  }

  const auto all_errors = single_qubit_errors(code.n_physical());
  const std::size_t trials = ch == "all-paulis" ? all_errors.size() : cfg.trials;

  Json rows = Json::array();
  std::size_t product_count = 0, fidelity_count = 0;
  double min_fidelity = 1.0, max_factorization = 0.0, max_overlap = 0.0;
  bool any_overlap = false;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(cfg.seed, t));
    const StateVector logical = random_state({2}, rng);
    Trial trial;
    if (fixed_error) trial = pauli_trial(code, *fixed_error, logical, t);
    else if (ch == "all-paulis") trial = pauli_trial(code, all_errors[t], logical, t);
    else if (ch == "phase-error") trial = pauli_trial(code, {PauliKind::kZ, t % code.n_physical() + 1}, logical, t);
    else if (ch == "superposed") trial = superposed_trial(code, logical, rng, t);
    else if (ch == "mixed") trial = mixed_trial(code, logical, rng, t);
    else trial = environment_trial(code, logical, cfg.env_dim, rng, t);

    product_count += trial.report.product ? 1 : 0;
    fidelity_count += trial.report.fidelity >= 1.0 - kFidelityTol ? 1 : 0;
    min_fidelity = std::min(min_fidelity, trial.report.fidelity);
    max_factorization = std::max(max_factorization, trial.report.factorization_error);
    if (trial.overlap_deviation) {
      any_overlap = true;
      max_overlap = std::max(max_overlap, *trial.overlap_deviation);
    }
    rows.push_back(std::move(trial.row));
  }

  Json config{{"subcommand", "qec"}, {"code", cfg.code}, {"channel", ch}, {"trials", cfg.trials}, {"env_dim", cfg.env_dim}};
  Report report{header(std::move(config), cfg.seed), kSuccess};
  Json& results = report.body["results"];
  results["trials_run"] = trials;
  results["product_count"] = product_count;
  results["fidelity_pass_count"] = fidelity_count;
  results["min_fidelity"] = min_fidelity;
  results["max_factorization_error"] = max_factorization;
  results["trials"] = std::move(rows);

  Json checks = Json::array({check("product", product_count == trials, max_factorization),
                             check("logical_fidelity", fidelity_count == trials, 1.0 - min_fidelity)});
  if (any_overlap) checks.push_back(check("ancilla_overlaps", max_overlap <= kFidelityTol, max_overlap));
  report.body["checks"] = std::move(checks);
  return report;
}

// ---------- verify ----------

Report verify_code(const std::string& code_name) {
  const QuantumCode code = code_by_name(code_name);
  Report report{header(Json{{"subcommand", "verify"}, {"code", code_name}}, std::nullopt), kSuccess};
  Json qubits = Json::array();
  Json checks = Json::array();
  for (std::size_t q = 0; q < code.n_physical(); ++q) {
    const auto r = check_orthogonality_conditions(code, q);
    Json products = Json::array();
    for (const auto& p : r.products)
      products.push_back({{"z", p.z}, {"y", p.y}, {"z2", p.z2}, {"y2", p.y2}, {"value", complex_json(p.value)},
                          {"expected", p.expected}, {"deviation", p.deviation}});
    qubits.push_back({{"qubit", q + 1},
                      {"products", std::move(products)},
                      {"max_deviation", r.max_deviation},
                      {"class_vector_deviation", r.class_vector_deviation},
                      {"satisfied", r.satisfied(kScalarProductTol)}});
    checks.push_back(check("scalar_products_qubit_" + std::to_string(q + 1), r.satisfied(kScalarProductTol), r.max_deviation));
  }
  report.body["results"] = {{"code", code_to_json(code)}, {"qubits", std::move(qubits)}};
  report.body["checks"] = std::move(checks);
  return report;
}

}  // namespace qdis::tools
