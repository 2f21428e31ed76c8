#pragma once

// Group-level checks: rotation axes, kernel cases, V-variation verdicts for
// maximal time isotropies, the collision-exclusion test, and the admissible
// core / extension lists.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointgroups.hpp"
#include "symgroup.hpp"

namespace equiorbit {

struct AxesResult {
  // "none", "axis", "plane" (every direction in the span) or "all"
  std::string kind = "none";
  std::vector<Vec3> basis;
};

AxesResult rotation_axes(const SymmetryGroup& g);
bool is_type_R(const SymmetryGroup& g);

// Fixed space of g -> det tau(g) det rho(g) rho(g).
std::vector<Vec3> angular_momentum_fixed_space(const SymmetryGroup& g);

enum class KernelCase { Free, PlaneReflection, Full, Degenerate };
std::string to_string(KernelCase c);

struct KernelCaseResult {
  KernelCase tag = KernelCase::Free;
  std::vector<Vec3> E;            // fixed space of ker tau cap H_1
  std::optional<Label> core_label;
  std::string reflection_family;  // "Cph", "IxDp", "DpCp", "D2pDp" or "other" for PlaneReflection
  bool collision_evidence = false;
};

// Throws planar-degenerate when the core is a single plane reflection.
KernelCaseResult kernel_case(const SymmetryGroup& g, std::span<const int> component);

enum class VerdictStatus { TrivialAction, RotatingCircle, SphereAveraging, NoVariationFound };
std::string to_string(VerdictStatus s);

struct Witness {
  int index = 0;
  bool sphere = false;
  Vec3 axis{0, 0, 1};  // circle normal (circle case)
  double radius = 1.0;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::NoVariationFound;
  std::optional<Witness> witness;
  Label isotropy_label;
};

Verdict vvariation_verdict(const SymmetryGroup& g_star);

struct IsotropyCheck {
  std::optional<Fraction> time;
  Label label;
  Verdict verdict;
  bool excluded = false;  // colliding minimizers ruled out at this time
  std::string reason;
};

struct TheoremACheck {
  bool pass = false;
  std::vector<IsotropyCheck> isotropies;
};

TheoremACheck theorem_A_check(const SymmetryGroup& g);

// Labels in the admissible-core list (before the fixed-plane elimination).
bool admissible_core(const MatrixGroup& K);
bool admissible_core(const Label& l);
// After eliminating cores with fixed planes (only the antiprism family remains).
bool admissible_core_eliminated(const Label& l);

// Index-2 extensions of an admissible core; throws invalid-parameter otherwise.
std::vector<Label> admissible_extensions(const Label& K);

enum class Coercivity { Coercive, Undetermined, UncoerciveEvidence };
std::string to_string(Coercivity c);

// Dimension of the G-fixed constant configurations aligned with omega.
int fixed_constant_dimension(const SymmetryGroup& g, const Vec3& omega);
Coercivity coercivity_status(const SymmetryGroup& g, const Vec3& omega);

struct GroupReport {
  AxesResult axes;
  Coercivity coercivity = Coercivity::Undetermined;
  std::vector<KernelCaseResult> kernel_cases;  // per transitive component
  std::optional<std::string> collision_evidence;
  TheoremACheck theorem_A;
};

GroupReport check_group(const SymmetryGroup& g, const Vec3& omega = {0, 0, 0});

}  // namespace equiorbit
