#pragma once

// Finite subgroups of SO(3) and O(3): generator matrices, closure, the
// three catalog tables (rotation groups, groups containing -1, mixed groups),
// recognition of a group by its invariants, and tabulated normalizers.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace equiorbit {

inline constexpr double kTolMat = 1e-9;
inline constexpr std::size_t kMaxOrder = 360;

enum class Family {
  Trivial,
  C,
  D,
  T,
  O,
  Y,
  I,
  IxC,
  IxD,
  IxT,
  IxO,
  IxY,
  C2pCp,
  DpCp,
  D2pDp,
  OT,
  Pprime,  // antiprism P'_2p, an alias of IxC or C2pCp depending on parity
  Cph,     // prism C_ph, the other parity
  Unknown,
};

struct Label {
  Family family = Family::Unknown;
  int p = 0;  // 0 for families without a parameter

  friend bool operator==(const Label&, const Label&) = default;
};

bool has_parameter(Family f);
std::string family_name(Family f);
// Parses the catalog names used in files and on the command line.
Family parse_family(const std::string& name);
Label make_label(Family f, int p = 0);
std::string to_string(const Label& l);
// Human-readable symbol such as "C_{2p}C_p" with p substituted ("C4C2").
std::string symbol(const Label& l);

// Resolves aliases (Pprime, Cph, C1, IxC1, D1, ...) to the label recognize() returns.
Label canonical(const Label& l);

// Order of the named group as listed in the tables.
int catalog_order(const Label& l);

// Snaps entries close to the canonical algebraic values and checks orthogonality.
Mat3 snap(const Mat3& m);
bool is_orthogonal(const Mat3& m, double tol = kTolMat);
// Throws invalid-parameter unless m is orthogonal with det +-1.
void require_orthogonal(const Mat3& m);
bool same_matrix(const Mat3& x, const Mat3& y, double tol = kTolMat);
// Lexicographic order on entries, used to pick canonical representatives.
bool lex_less(const Mat3& x, const Mat3& y);
// Order of an orthogonal matrix of finite order (0 if > 720).
int matrix_order(const Mat3& m);

Mat3 rotation_zeta(int p);
Mat3 kappa();
Mat3 pi3();
Mat3 pi3_prime();

class MatrixGroup {
public:
  MatrixGroup() : elems_{Mat3::identity()} {}

  // Closure of the generators; throws not-finite past kMaxOrder elements.
  static MatrixGroup generate(std::span<const Mat3> gens, std::optional<Label> name = std::nullopt);
  // Wraps a set that is already known to be closed (checked).
  static MatrixGroup from_elements(std::vector<Mat3> elems, std::optional<Label> name = std::nullopt);

  std::size_t order() const { return elems_.size(); }
  const std::vector<Mat3>& elements() const { return elems_; }
  const std::optional<Label>& name() const { return name_; }
  MatrixGroup with_name(std::optional<Label> name) const;

  std::optional<std::size_t> index_of(const Mat3& m, double tol = 1e-7) const;
  bool contains(const Mat3& m, double tol = 1e-7) const { return index_of(m, tol).has_value(); }
  bool contains_minus_identity() const { return contains(-Mat3::identity()); }
  bool is_subgroup_of(const MatrixGroup& other) const;
  bool same_set(const MatrixGroup& other) const;
  // c G c^T
  MatrixGroup conjugated(const Mat3& c) const;
  // True if m G m^T == G as sets.
  bool normalized_by(const Mat3& m) const;
  bool is_rotation_group() const;

private:
  std::vector<Mat3> elems_;
  std::optional<Label> name_;
};

std::vector<Mat3> standard_generators(const Label& l);
MatrixGroup generate_group(std::span<const Mat3> gens);
// H u (-1)(G \ H); requires H a subgroup of index 2.
MatrixGroup mixed_group(const MatrixGroup& g, const MatrixGroup& h);
MatrixGroup build_named(const Label& l);

// Identifies the family by order, -1 membership, and (det, trace) multiset.
Label recognize(const MatrixGroup& g);

struct Normalizer {
  bool continuous = false;
  std::string symbol;                   // as printed, e.g. "I x O(2)"
  std::vector<std::string> generators;  // printed generator names (normalizer's extra ones)
  std::optional<MatrixGroup> group;     // finite cases only
};

// The tabulated normalizer column (SO(3) normalizer for rotation groups,
// O(3) normalizer for the other two tables).
Normalizer normalizer_in_O3(const Label& l);

struct CatalogEntry {
  Label label;
  std::string symbol;
  int order = 0;
  std::vector<std::string> generators;
  Normalizer normalizer;
};

CatalogEntry catalog_entry(const Label& l);
// Families of the three tables in table order (without the aliases).
std::vector<Family> catalog_families();

// Rotation axis of a proper rotation different from the identity.
Vec3 rotation_axis(const Mat3& proper);
// Rotation angle in [0, pi] of a proper rotation.
double rotation_angle(const Mat3& proper);

}  // namespace equiorbit
