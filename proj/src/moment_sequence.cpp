#include "rtnlab/moment_sequence.hpp"

#include <json.hpp>

#include <stdexcept>

namespace rtnlab {

Rational MomentSequence::at_permutation(const Permutation& pi) const {
  Rational out = 1;
  for (int l : cycle_type(pi)) {
    if (l > order()) throw std::out_of_range("MomentSequence: cycle length exceeds available order");
    out *= at(l);
  }
  return out;
}

std::vector<double> MomentSequence::to_doubles() const {
  std::vector<double> out;
  out.reserve(m.size());
  for (const Rational& r : m) out.push_back(to_double(r));
  return out;
}

std::string MomentSequence::to_json_string() const {
  nlohmann::json j;
  j["order"] = order();
  auto arr = nlohmann::json::array();
  for (const Rational& r : m) arr.push_back(rat_to_string(r));
  j["moments"] = arr;
  return j.dump();
}

MomentSequence MomentSequence::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int order = j.at("order").get<int>();
  std::vector<Rational> values;
  for (const auto& item : j.at("moments")) values.push_back(rat_from_string(item.get<std::string>()));
  if (static_cast<int>(values.size()) != order)
    throw std::runtime_error("MomentSequence JSON: order does not match moment count");
  return MomentSequence(std::move(values));
}

}  // namespace rtnlab
