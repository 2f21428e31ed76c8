#pragma once

// Rotating-frame action
//   A = int_0^T sum_i m_i/2 |x_i' + Omega x_i|^2 + sum_{i<j} m_i m_j |x_i - x_j|^{-alpha} dt
// on truncated Fourier loops, discretized by the trapezoid rule.

#include <cstdint>
#include <vector>

#include "linalg.hpp"
#include "loop.hpp"
#include "symgroup.hpp"

namespace equiorbit {

constexpr double kDistFloor = 1e-12;

struct FrameSpec {
  Vec3 omega{0, 0, 0};
  Mat3 Omega() const { return cross_matrix(omega); }
};

struct ActionValue {
  double value = 0.0;  // kinetic + potential; meaningless when colliding
  double kinetic = 0.0;
  double potential = 0.0;
  bool colliding = false;
  double min_distance = 0.0;  // smallest sampled mutual distance
};

// max(1024, 8 N)
int default_samples(int modes);

// samples <= 0 selects default_samples.
ActionValue eval_action(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                        const FrameSpec& frame, int samples = 0);

struct ActionGradient {
  ActionValue value;
  std::vector<double> grad;  // in FourierLoop::to_vector layout
};

// Throws gradient-undefined when a sampled distance falls below kDistFloor.
ActionGradient action_and_gradient(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                                   const FrameSpec& frame, int samples = 0);
std::vector<double> grad_action(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                                const FrameSpec& frame, int samples = 0);

// (1/|G|) sum_g g.loop. The loop period must match the group's.
FourierLoop equivariant_project(const SymmetryGroup& g, const FourierLoop& loop);

struct RandomLoop {
  FourierLoop loop;
  bool zero = false;  // the equivariant space is trivial
};

// Projection of a seeded random loop; coefficients decay like 1/(1+k).
RandomLoop random_equivariant_loop(const SymmetryGroup& g, int modes, std::uint64_t seed);

// sum_i m_i x_i x (x_i' + Omega x_i) at time t.
Vec3 angular_momentum(const FourierLoop& loop, const std::vector<double>& masses, double t,
                      const FrameSpec& frame = {});

// x(t) = R_axis(2 pi turns t / T) q(t); the result carries modes + |turns| harmonics.
FourierLoop rotating_frame_map(const FourierLoop& q, const Vec3& axis, int turns);

// Positions at M uniform samples: [sample][body].
std::vector<std::vector<Vec3>> sample_positions(const FourierLoop& loop, int samples);

}  // namespace equiorbit
