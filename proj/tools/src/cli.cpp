#include "qdis/tools/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "qdis/errors.hpp"
#include "qdis/tools/experiments.hpp"
#include "qdis/version.hpp"

namespace qdis::tools {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulations of period finding and measurement-free error correction"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PeriodConfig period;
  std::string period_out;
  auto* p = app.add_subcommand("period", "Three-path period finding for f(x) = b^x mod N");
  p->add_option("--N", period.N, "Modulus")->required();
  p->add_option("--b", period.b, "Base, coprime to N")->required();
  p->add_option("--k", period.k, "Register-1 qubits (default: smallest with 2^k >= 2N^2)");
  p->add_option("--samples", period.samples, "Outcomes to sample")->required();
  p->add_option("--seed", period.seed, "Root seed")->required();
  p->add_option("--out", period_out, "Report path")->required();
  p->add_option("--format", period.format, "json or csv")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"json", OutputFormat::kJson},
                                                                              {"csv", OutputFormat::kCsv}}));

  QecConfig qec;
  std::string qec_out;
  auto* q = app.add_subcommand("qec", "Encode, corrupt and decode without syndrome measurement");
  q->add_option("--code", qec.code, "bit-flip or five-qubit")->required();
  q->add_option("--channel", qec.channel,
                "pauli:<op><idx>, superposed, mixed, environment, all-paulis or phase-error")
      ->required();
  q->add_option("--trials", qec.trials, "Trial count (all-paulis runs one per error)")->required();
  q->add_option("--seed", qec.seed, "Root seed")->required();
  q->add_option("--env-dim", qec.env_dim, "Environment dimension")->capture_default_str();
  q->add_option("--out", qec_out, "Report path")->required();

  std::string verify_name;
  std::string verify_out;
  auto* v = app.add_subcommand("verify", "Scalar-product conditions of a code at every qubit");
  v->add_option("--code", verify_name, "bit-flip or five-qubit")->required();
  v->add_option("--out", verify_out, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidConfig;
  }

  try {
    if (*p) {
      const Report r = run_period_experiment(period);
      write_file(period_out, period.format == OutputFormat::kCsv ? period_csv(r) : to_json_text(r.body));
      if (r.exit_code == kInconclusive) err << "period: inconclusive\n";
      return r.exit_code;
    }
    if (*q) {
      const Report r = run_qec_experiment(qec);
      write_file(qec_out, to_json_text(r.body));
      return r.exit_code;
    }
    const Report r = verify_code(verify_name);
    const std::string text = to_json_text(r.body);
    out << text;
    if (!verify_out.empty()) write_file(verify_out, text);
    return r.exit_code;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace qdis::tools
