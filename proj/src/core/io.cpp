#include "core/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bitorus {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), Errc::io, "malformed JSON");
  return j;
}

double number_field(const json& obj, const char* key, std::size_t atom_index) {
  auto it = obj.find(key);
  require(it != obj.end() && it->is_number(), Errc::io,
          std::string("atom ") + std::to_string(atom_index) + ": missing numeric \"" + key + "\"");
  return it->get<double>();
}

}  // namespace

AtomicMeasure2D measure2_from_json(const std::string& text, bool probability) {
  json j = parse(text);
  require(j.is_object() && j.contains("atoms") && j["atoms"].is_array(), Errc::io,
          "measure JSON must be an object with an \"atoms\" array");
  std::vector<Atom2> atoms;
  std::size_t i = 0;
  for (const json& a : j["atoms"]) {
    require(a.is_object(), Errc::io, "atom " + std::to_string(i) + ": not an object");
    atoms.push_back({number_field(a, "s_angle", i), number_field(a, "t_angle", i),
                     number_field(a, "weight", i)});
    ++i;
  }
  try {
    return probability ? AtomicMeasure2D::probability(std::move(atoms))
                       : AtomicMeasure2D::finite(std::move(atoms));
  } catch (const Error& e) {
    fail(Errc::io, std::string("invalid measure: ") + e.what());
  }
}

std::string measure2_to_json(const AtomicMeasure2D& mu) {
  std::string out = "{\"atoms\":[";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom2& a = mu.atoms()[i];
    if (i) out += ",";
    out += "{\"s_angle\":" + fmt17(a.s_angle) + ",\"t_angle\":" + fmt17(a.t_angle) +
           ",\"weight\":" + fmt17(a.weight) + "}";
  }
  out += "]}";
  return out;
}

AtomicMeasure1D measure1_from_json(const std::string& text, bool probability) {
  json j = parse(text);
  require(j.is_object() && j.contains("atoms") && j["atoms"].is_array(), Errc::io,
          "measure JSON must be an object with an \"atoms\" array");
  std::vector<Atom1> atoms;
  std::size_t i = 0;
  for (const json& a : j["atoms"]) {
    require(a.is_object(), Errc::io, "atom " + std::to_string(i) + ": not an object");
    atoms.push_back({number_field(a, "x_angle", i), number_field(a, "weight", i)});
    ++i;
  }
  try {
    return probability ? AtomicMeasure1D::probability(std::move(atoms))
                       : AtomicMeasure1D::finite(std::move(atoms));
  } catch (const Error& e) {
    fail(Errc::io, std::string("invalid measure: ") + e.what());
  }
}

std::string measure1_to_json(const AtomicMeasure1D& nu) {
  std::string out = "{\"atoms\":[";
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const Atom1& a = nu.atoms()[i];
    if (i) out += ",";
    out += "{\"x_angle\":" + fmt17(a.angle) + ",\"weight\":" + fmt17(a.weight) + "}";
  }
  out += "]}";
  return out;
}

LevyData levy_from_json(const std::string& text) {
  json j = parse(text);
  require(j.is_object() && j.contains("rho1") && j.contains("rho2"), Errc::io,
          "Levy JSON needs \"rho1\" and \"rho2\" measures");
  LevyData ld;
  ld.rho1 = measure2_from_json(j["rho1"].dump(), /*probability=*/false);
  ld.rho2 = measure2_from_json(j["rho2"].dump(), /*probability=*/false);
  require(j.contains("a") && j["a"].is_number(), Errc::io, "Levy JSON needs numeric \"a\"");
  ld.a = j["a"].get<double>();
  double g1 = j.value("gamma1_angle", 0.0);
  double g2 = j.value("gamma2_angle", 0.0);
  ld.gamma1 = unit(g1);
  ld.gamma2 = unit(g2);
  try {
    validate_levy(ld);
  } catch (const Error& e) {
    fail(Errc::io, std::string("invalid Levy data: ") + e.what());
  }
  return ld;
}

std::string levy_to_json(const LevyData& ld) {
  std::string out = "{\"rho1\":" + measure2_to_json(ld.rho1);
  out += ",\"rho2\":" + measure2_to_json(ld.rho2);
  out += ",\"a\":" + fmt17(ld.a);
  out += ",\"gamma1_angle\":" + fmt17(std::arg(ld.gamma1));
  out += ",\"gamma2_angle\":" + fmt17(std::arg(ld.gamma2)) + "}";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::io, "cannot write " + tmp);
    out << content;
    require(out.good(), Errc::io, "write failed for " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, Errc::io, "rename failed for " + path);
}

}  // namespace bitorus
