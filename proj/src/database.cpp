#include "kinel/database.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kinel {

namespace {

constexpr double kGPa = 1e9;

ElasticityMatrix from_constants_gpa(SymmetryClass tag,
                                    std::vector<double> c_gpa, double density) {
  for (double& v : c_gpa) v *= kGPa;
  return {class_pattern(tag, c_gpa), density, tag};
}

}  // namespace

MaterialDatabase MaterialDatabase::builtin() {
  MaterialDatabase db;
  db.insert({"nickel",
             from_constants_gpa(SymmetryClass::cubic, {253.0, 152.0, 124.0}, 8910.0),
             "single crystal Ni, mean constants"});
  db.insert({"zinc",
             from_constants_gpa(SymmetryClass::transverse_isotropic,
                                {165.0, 31.1, 50.0, 61.8, 39.6}, 7140.0),
             "single crystal Zn"});
  db.insert({"celestite",
             from_constants_gpa(SymmetryClass::orthotropic,
                                {104.0, 77.0, 60.0, 106.0, 62.0, 123.0, 13.9,
                                 27.9, 26.6},
                                3960.0),
             "SrSO4"});
  db.insert({"isoref",
             from_constants_gpa(SymmetryClass::isotropic, {60.0, 25.0}, 2700.0),
             "reference isotropic material"});
  return db;
}

void MaterialDatabase::insert(MaterialRecord rec) {
  if (records_.count(rec.name))
    throw std::invalid_argument("duplicate material name: " + rec.name);
  records_.emplace(rec.name, std::move(rec));
}

const MaterialRecord& MaterialDatabase::get(const std::string& name) const {
  auto it = records_.find(name);
  if (it == records_.end())
    throw std::invalid_argument("unknown material: " + name);
  return it->second;
}

bool MaterialDatabase::contains(const std::string& name) const {
  return records_.count(name) > 0;
}

std::vector<std::string> MaterialDatabase::names() const {
  std::vector<std::string> out;
  for (const auto& [name, rec] : records_) out.push_back(name);
  return out;
}

MaterialRecord material_record_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const auto tag = symmetry_class_from_string(j.at("class").get<std::string>());
  const auto c = j.at("constants_GPa").get<std::vector<double>>();
  const double density = j.at("density_kg_m3").get<double>();
  MaterialRecord rec{j.at("name").get<std::string>(),
                     from_constants_gpa(tag, c, density),
                     j.value("provenance", "")};
  return rec;
}

std::string material_record_to_json_text(const MaterialRecord& rec) {
  nlohmann::json j;
  j["name"] = rec.name;
  j["class"] = to_string(rec.material.class_tag());
  std::vector<double> c = class_constants(rec.material);
  for (double& v : c) v /= kGPa;
  j["constants_GPa"] = c;
  j["density_kg_m3"] = rec.material.density();
  if (!rec.provenance.empty()) j["provenance"] = rec.provenance;
  return j.dump(2);
}

MaterialRecord load_material_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open material file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return material_record_from_json_text(ss.str());
}

void save_material_json(const MaterialRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write material file: " + path);
  out << material_record_to_json_text(rec) << "\n";
}

}  // namespace kinel
