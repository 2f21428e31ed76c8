#pragma once

// Equivariant minimization of the action, collision reporting, and
// independent ODE verification of the resulting loops.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "action.hpp"
#include "loop.hpp"
#include "symgroup.hpp"

namespace equiorbit {

constexpr double kCollisionTol = 1e-6;

struct MinimizeOptions {
  int modes = 24;
  int max_iter = 5000;
  double grad_tol = 1e-8;
  int max_restarts = 50;
  int samples = 0;          // quadrature points, 0 = default_samples(modes)
  int descent_iters = 30;   // preconditioned gradient steps before L-BFGS
  int memory = 20;          // L-BFGS history
  bool verify = true;       // run verify_ode on the result
  int polish_modes = 0;     // if > modes, refine the result at this mode count
  std::optional<FourierLoop> warm_start;
};

struct MinimizeReport {
  double final_action = 0.0;
  double grad_norm = 0.0;
  double min_mutual_distance = 0.0;
  int iterations = 0;
  int modes = 0;  // of the returned loop
  bool collisionless = false;
  bool converged = false;  // grad_norm < grad_tol
  std::optional<double> ode_residual;
  int restarts = 0;
  std::uint64_t seed_used = 0;
  std::optional<std::string> warning;
  std::vector<double> action_log;  // accepted iterates
};

struct MinimizeResult {
  FourierLoop loop;
  MinimizeReport report;
};

// Throws empty-constraint when the group admits no non-zero equivariant loop.
MinimizeResult minimize(const SymmetryGroup& g, const FrameSpec& frame, double alpha, std::uint64_t seed,
                        const MinimizeOptions& options = {});

struct CollisionReport {
  double min_distance = 0.0;
  int body_a = -1, body_b = -1;
  double time = 0.0;
};

// Minimum pairwise distance over `samples` uniform times (0 = 4 default_samples).
CollisionReport collision_report(const FourierLoop& loop, int samples = 0);

struct OdeCheck {
  double residual = 0.0;  // max_deviation + periodicity_defect
  double max_deviation = 0.0;
  double periodicity_defect = 0.0;
};

// Integrates the rotating-frame Newton equations from the loop's t = 0 state
// over one period. Throws near-collision if the integrator stalls.
OdeCheck verify_ode(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                    const FrameSpec& frame, int observations = 256);

}  // namespace equiorbit
