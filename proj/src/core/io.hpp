#pragma once

// JSON formats: group files (generator and krh forms), decompositions,
// reports, catalog rows and trajectory files.

#include <string>

#include <json.hpp>

#include "action.hpp"
#include "classify.hpp"
#include "krh.hpp"
#include "minimize.hpp"
#include "pointgroups.hpp"
#include "symgroup.hpp"

namespace equiorbit {

using Json = nlohmann::ordered_json;

// Wraps parser errors as parse errors.
Json parse_json(const std::string& text);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json matrix_to_json(const Mat3& m);
// [[..],[..],[..]], a name ("identity", "minus_identity", "kappa", "pi3",
// "pi3_prime") or {"name": .., "p": .., "matrix": .., "negate": bool}.
Mat3 matrix_from_json(const Json& j);

Json label_to_json(const Label& l);
Label label_from_json(const Json& j);

// {"name", "p", "generators"}; reading prefers explicit generators, else the
// standard copy of the named group (optionally conjugated by "frame").
Json matrix_group_to_json(const MatrixGroup& g);
MatrixGroup matrix_group_from_json(const Json& j);

// Accepts the generator form ("generators") and the krh form ("krh").
SymmetryGroup group_from_json(const Json& j);
// Generator form. Permutations are written 1-based.
Json group_to_json(const SymmetryGroup& g);

Json decomposition_to_json(const SymmetryGroup& g, const Decomposition& d);
KrhData krh_from_json(const Json& j);
HatKrhData hat_from_json(const Json& j);

Json report_to_json(const SymmetryGroup& g, const GroupReport& r);
Json catalog_entry_to_json(const CatalogEntry& e);
Json minimize_report_to_json(const MinimizeReport& r);

struct TrajectoryMeta {
  std::vector<double> masses;
  double alpha = 1.0;
  Vec3 omega{0, 0, 0};
  std::optional<Vec3> view_axis;  // rotation axis of the group, if any
};

// Fixed field order, 17 significant digits. samples > 0 adds sampled positions.
std::string trajectory_to_json(const FourierLoop& loop, const TrajectoryMeta& meta, int samples = 0);
FourierLoop trajectory_from_json(const Json& j, TrajectoryMeta* meta = nullptr);

}  // namespace equiorbit
