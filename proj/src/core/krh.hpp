#pragma once

// Krh / Krh-hat coordinates of a symmetry group, reconstruction of the
// group from them, and disjoint sums.

#include <optional>
#include <span>
#include <vector>

#include "pointgroups.hpp"
#include "symgroup.hpp"

namespace equiorbit {

// (K, [r], [h]). The cover is generated in Iso(R) x O(3) by (1, r),
// (t -> -t, h) and K.
struct KrhData {
  MatrixGroup K;
  Mat3 r = Mat3::identity();
  std::optional<Mat3> h;
  // Number of cover steps per period in the source group (1 if unknown).
  std::int64_t m = 1;
  // Time (fraction of the period) moved to the origin so that h fixes t = 0.
  Fraction time_origin;
};

// (Khat, (k, rhat), hhat) for one transitive component. hhat acts on cover
// time as t -> hhat_center - t.
struct HatKrhData {
  MatrixGroup Khat;
  std::int64_t k = 1;
  Mat3 rhat = Mat3::identity();
  std::optional<Mat3> hhat;
  std::int64_t hhat_center = 0;
  double mass = 1.0;
};

struct Decomposition {
  KrhData krh;
  std::vector<std::vector<int>> components;
  std::vector<HatKrhData> hats;
};

KrhData krh_data(const SymmetryGroup& g);
HatKrhData hat_krh_data(const SymmetryGroup& g, std::span<const int> component);
Decomposition decompose(const SymmetryGroup& g);

// Builds the finite quotient of the cover on a circle of length period.
// Throws invalid-data when the pieces are inconsistent.
SymmetryGroup group_from_data(const KrhData& krh, std::span<const HatKrhData> comps, double period = 1.0);

// Index set = disjoint union; throws incompatible-sum unless the Krh data agree
// up to conjugacy in O(3).
SymmetryGroup disjoint_sum(const SymmetryGroup& g1, const SymmetryGroup& g2);

// Rotation C with K = C S C^T, S the standard copy of K's catalog group.
std::optional<Mat3> standard_frame(const MatrixGroup& K);

// C in O(3) with C K2 C^T = K1, C r2 C^T in r1 K1, C h2 C^T in h1 K1.
std::optional<Mat3> find_conjugator(const KrhData& a, const KrhData& b);
inline bool krh_equivalent(const KrhData& a, const KrhData& b) { return find_conjugator(a, b).has_value(); }

// Canonical representative of the coset m Q: elements commuting with ref
// first, then lowest order, then lexicographically smallest.
Mat3 canonical_coset_rep(const Mat3& m, const MatrixGroup& q, const MatrixGroup& ref);

// Small generating set, elements of highest order first.
std::vector<Mat3> small_generating_set(const MatrixGroup& g);

// Order of m modulo the subgroup q (smallest j >= 1 with m^j in q).
int order_mod(const Mat3& m, const MatrixGroup& q);

}  // namespace equiorbit
