#include <string>

#include "json.hpp"
#include "qmehler/polyalg.hpp"

namespace qmehler {

namespace {

nlohmann::json coeff_pair(const ExactScalar& c) {
  return nlohmann::json::array({numerator(c).str(), denominator(c).str()});
}

ExactScalar coeff_from_pair(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw DomainError("polynomial JSON: coefficient must be a [num, den] string pair");
  ExactInt num(j[0].get<std::string>());
  ExactInt den(j[1].get<std::string>());
  if (den == 0) throw DomainError("polynomial JSON: zero denominator");
  return ExactScalar(num, den);
}

}  // namespace

std::string poly1_to_json(const Poly1& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (long i = 0; i <= p.degree(); ++i) coeffs.push_back(coeff_pair(p.coeff(i)));
  return nlohmann::json{{"coeffs", coeffs}}.dump();
}

std::string poly2_to_json(const Poly2& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i <= p.x_degree(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j <= p.y_degree(); ++j) row.push_back(coeff_pair(p.coeff(i, j)));
    rows.push_back(row);
  }
  return nlohmann::json{{"coeffs", rows}}.dump();
}

Poly1 poly1_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<ExactScalar> v;
  for (const auto& c : j.at("coeffs")) v.push_back(coeff_from_pair(c));
  return Poly1(std::move(v));
}

Poly2 poly2_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Poly2 out;
  long i = 0;
  for (const auto& row : j.at("coeffs")) {
    long k = 0;
    for (const auto& c : row) {
      ExactScalar value = coeff_from_pair(c);
      if (!(value == ExactScalar(0))) out = out + Poly2::monomial(i, k, value);
      ++k;
    }
    ++i;
  }
  return out;
}

}  // namespace qmehler
