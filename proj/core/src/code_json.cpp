#include "qdis/code_json.hpp"

#include "qdis/errors.hpp"

namespace qdis {

nlohmann::json code_to_json(const QuantumCode& code) {
  nlohmann::json codewords = nlohmann::json::array();
  for (int z = 0; z < 2; ++z) {
    nlohmann::json amps = nlohmann::json::array();
    const Vector& v = code.codeword(z).amplitudes();
    for (Eigen::Index i = 0; i < v.size(); ++i) amps.push_back({v(i).real(), v(i).imag()});
    codewords.push_back(std::move(amps));
  }
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& e : code.error_ops()) ops.push_back(e.label);
  return {{"name", code.name()},
          {"n_physical", code.n_physical()},
          {"complete", code.complete()},
          {"codewords", std::move(codewords)},
          {"error_ops", std::move(ops)}};
}

QuantumCode code_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n_physical").get<std::size_t>();
    const Dims dims(n, 2);
    const auto& words = j.at("codewords");
    if (!words.is_array() || words.size() != 2) throw InvalidArgument("code JSON needs two codewords");
    std::vector<StateVector> codewords;
    for (const auto& w : words) {
      Vector v(static_cast<Eigen::Index>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = Complex(w[i].at(0).get<double>(), w[i].at(1).get<double>());
      codewords.emplace_back(dims, std::move(v));
    }
    std::vector<ErrorOperator> errors;
    for (const auto& label : j.at("error_ops")) {
      const auto text = label.get<std::string>();
      errors.push_back({text, pauli_error_matrix(PauliError::parse(text), n)});
    }
    return {j.at("name").get<std::string>(), std::move(codewords[0]), std::move(codewords[1]),
            std::move(errors), j.at("complete").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed code JSON: ") + e.what());
  }
}

}  // namespace qdis
