#pragma once

// Symmetry groups G of the n-body problem: finite sets of triples
// (tau, rho, sigma) acting on the time circle, on space, and on the bodies.

#include <optional>
#include <span>
#include <vector>

#include "linalg.hpp"
#include "loop.hpp"
#include "pointgroups.hpp"
#include "rational.hpp"

namespace equiorbit {

// Isometry of the circle R/Z (time measured in units of the period):
// rotation t -> t + offset, or reflection t -> offset - t.
struct TimeIsometry {
  enum class Kind { Rotation, Reflection };

  Kind kind = Kind::Rotation;
  Fraction offset;

  static TimeIsometry identity() { return {}; }
  static TimeIsometry rotation(Fraction a) { return {Kind::Rotation, a}; }
  static TimeIsometry reflection(Fraction a) { return {Kind::Reflection, a}; }

  bool is_reflection() const { return kind == Kind::Reflection; }
  bool is_identity() const { return kind == Kind::Rotation && offset.is_zero(); }
  int det() const { return is_reflection() ? -1 : 1; }
  Fraction apply(const Fraction& t) const { return is_reflection() ? offset - t : offset + t; }
  double apply(double t) const;
  TimeIsometry inverse() const;

  friend TimeIsometry operator*(const TimeIsometry& f, const TimeIsometry& g);
  friend bool operator==(const TimeIsometry&, const TimeIsometry&) = default;
};

// One-line permutation, 0-based: sigma[i] is the image of body i.
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
Permutation compose(const Permutation& f, const Permutation& g);  // f after g
Permutation inverse(const Permutation& f);
bool is_permutation(const Permutation& f);

struct SymmetryElement {
  TimeIsometry tau;
  Mat3 rho = Mat3::identity();
  Permutation sigma;

  static SymmetryElement identity(int n) { return {TimeIsometry::identity(), Mat3::identity(), identity_permutation(n)}; }
  SymmetryElement inverse() const;
  bool same(const SymmetryElement& other) const;
  friend SymmetryElement operator*(const SymmetryElement& g, const SymmetryElement& h);
};

using Configuration = std::vector<Vec3>;

class SymmetryGroup {
public:
  // Closure of the generators. Throws not-finite past kMaxOrder, and
  // incompatible-masses if sigma joins bodies with different masses.
  static SymmetryGroup make(std::span<const SymmetryElement> generators, int n,
                            std::vector<double> masses, double period = 1.0);

  int n() const { return n_; }
  double period() const { return period_; }
  const std::vector<double>& masses() const { return masses_; }
  std::size_t order() const { return elems_.size(); }
  const std::vector<SymmetryElement>& elements() const { return elems_; }
  const std::vector<SymmetryElement>& generators() const { return gens_; }

  std::optional<std::size_t> index_of(const SymmetryElement& g) const;
  bool contains(const SymmetryElement& g) const { return index_of(g).has_value(); }

  // Elements satisfying pred; the result is assumed (and checked) to be a subgroup.
  template <class Pred>
  SymmetryGroup subgroup(Pred pred) const {
    std::vector<SymmetryElement> sub;
    for (const auto& g : elems_)
      if (pred(g)) sub.push_back(g);
    return from_closed(std::move(sub));
  }

  // Restriction to an invariant subset of the bodies, renumbered in the given order.
  SymmetryGroup restricted_to(std::span<const int> bodies) const;

  // rho(G) as a matrix group.
  MatrixGroup space_image() const;
  // Smallest m with tau(ker det tau) = <rotation by 1/m>.
  std::int64_t rotation_denominator() const;
  bool has_time_reflections() const;

  SymmetryGroup with_period(double period) const;
  SymmetryGroup with_masses(std::vector<double> masses) const;

private:
  SymmetryGroup from_closed(std::vector<SymmetryElement> elems) const;

  int n_ = 0;
  double period_ = 1.0;
  std::vector<double> masses_;
  std::vector<SymmetryElement> elems_;
  std::vector<SymmetryElement> gens_;
};

SymmetryGroup make_group(std::span<const SymmetryElement> generators, int n,
                         std::vector<double> masses, double period = 1.0);

// x'_{sigma(g) i} = rho(g) x_i
Configuration act_on_config(const SymmetryElement& g, const Configuration& x);

// (g x)_{sigma(g) i}(t) = rho(g) x_i(tau(g)^{-1} t), applied to the coefficients.
FourierLoop act_on_loop(const SymmetryElement& g, const FourierLoop& loop);

// sigma-orbits, each sorted, ordered by least element.
std::vector<std::vector<int>> transitive_components(const SymmetryGroup& g);

// ker tau. Throws degenerate-core if rho is not injective on it.
SymmetryGroup core(const SymmetryGroup& g);

// Stabilizer of body i under sigma.
SymmetryGroup body_stabilizer(const SymmetryGroup& g, int body);

SymmetryGroup isotropy_at_time(const SymmetryGroup& g, const Fraction& t);

struct MaximalIsotropy {
  std::optional<Fraction> time;  // empty means "generic" (no time reflections)
  SymmetryGroup group;
};

// One representative per conjugacy class of maximal time isotropy.
std::vector<MaximalIsotropy> maximal_isotropies(const SymmetryGroup& g);

// Fixed space of the representation g -> det tau(g) det rho(g) rho(g),
// returned as an orthonormal basis (possibly empty).
std::vector<Vec3> twisted_fixed_space(const SymmetryGroup& g);

// Fixed space of a family of matrices (orthonormal basis).
std::vector<Vec3> fixed_space(std::span<const Mat3> mats);

struct FrameNormalization {
  SymmetryGroup group;
  double theta = 0.0;          // frame rotation rate (radians per unit time)
  Vec3 axis{0, 0, 1};
  bool reduced = false;        // true if the returned group differs from the input
};

// Rotating-frame reduction x(t) = R_axis(theta t) q(t) removing the rotational
// part of the time-shift generator.
FrameNormalization normalize_frame(const SymmetryGroup& g);

}  // namespace equiorbit
