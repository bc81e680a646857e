#include "modkit/io.hpp"

#include <fstream>
#include <stdexcept>

namespace modkit {

Json linear_to_json(const LinearFunction& g) {
  Json doc;
  doc["n"] = g.n();
  doc["kind"] = "linear";
  Json values = Json::array();
  values.push_back(g.c0);
  for (double c : g.coeffs) values.push_back(c);
  doc["values"] = std::move(values);
  return doc;
}

Json function_to_json(const SetFunction& f) {
  if (const auto* g = f.as_linear()) return linear_to_json(*g);
  Json doc;
  doc["n"] = f.n();
  if (const auto* sym = f.symmetric_values()) {
    doc["kind"] = "symmetric";
    doc["values"] = *sym;
    return doc;
  }
  const SetFunction t = to_table(f);
  doc["kind"] = "table";
  auto vals = t.table_values();
  doc["values"] = std::vector<double>(vals.begin(), vals.end());
  return doc;
}

SetFunction function_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("kind") || !doc.contains("values")) {
    throw std::invalid_argument("set-function file needs \"n\", \"kind\" and \"values\"");
  }
  const int n = doc.at("n").get<int>();
  const auto kind = doc.at("kind").get<std::string>();
  const auto values = doc.at("values").get<std::vector<double>>();
  if (kind == "table") return SetFunction::table(n, values);
  if (kind == "linear") {
    if (values.size() != static_cast<std::size_t>(n) + 1) throw std::invalid_argument("linear values must be [c0, c1..cn]");
    return SetFunction::linear({values.front(), std::vector<double>(values.begin() + 1, values.end())});
  }
  if (kind == "symmetric") {
    if (values.size() != static_cast<std::size_t>(n) + 1) throw std::invalid_argument("symmetric values must have n+1 entries");
    return SetFunction::symmetric(values);
  }
  throw std::invalid_argument("unknown function kind \"" + kind + "\"");
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

SetFunction load_function(const std::string& path) {
  try {
    return function_from_json(load_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad set-function file " + path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace modkit
