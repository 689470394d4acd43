#ifndef KINEL_DATABASE_HPP
#define KINEL_DATABASE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinel/material.hpp"

namespace kinel {

//! A named material. Files store constants in GPa; the stiffness held here is
//! already converted to Pa.
struct MaterialRecord {
  std::string name;
  ElasticityMatrix material;
  std::string provenance;
};

//! In-memory material database seeded with the built-in records
//! (nickel, zinc, celestite and a reference isotropic material).
class MaterialDatabase {
public:
  static MaterialDatabase builtin();

  void insert(MaterialRecord rec);  // throws on duplicate name
  const MaterialRecord& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, MaterialRecord> records_;
};

//! JSON schema: {name, class, constants_GPa: [...], density_kg_m3}.
//! Triclinic files list the 21 upper-triangle constants row by row.
MaterialRecord load_material_json(const std::string& path);
void save_material_json(const MaterialRecord& rec, const std::string& path);
MaterialRecord material_record_from_json_text(const std::string& text);
std::string material_record_to_json_text(const MaterialRecord& rec);

}  // namespace kinel

#endif
