#pragma once

#include <span>
#include <vector>

#include "myogan/dynsim.hpp"
#include "myogan/tensor.hpp"

namespace myogan {

// Torque-balance physics for the single-DOF plant. The equation of motion is
//
//   I * theta'' + b * theta' + G0 * sin(theta) = sum_n s_n * rho_n * F_n
//
// with the velocity term realized as viscous damping (a one-DOF pendulum has
// no Coriolis force) and a constant mass term (no configuration dependence
// in one DOF). The muscle sum is moment-arm weighted so both sides carry
// torque units.

struct MuscleMoment {
  int sign = +1;
  double moment_arm = 0.02;  // m
};

struct PhysicsParams {
  double inertia = 1.0;
  double damping = 0.5;
  double gravity_torque = 2.0;
  std::vector<MuscleMoment> muscles;
};

PhysicsParams physics_params(const SimConfig& cfg);
void validate(const PhysicsParams& p);

// Central differences at interior points, second-order one-sided stencils at
// the endpoints. L >= 3 required.
struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};
Derivatives kinematic_derivatives(std::span<const double> theta, double dt);

// Mean squared torque-balance violation over all frames, units (N m)^2.
// Derivatives come from kinematic_derivatives unless supplied.
double lagrangian_residual(std::span<const double> theta, const Tensor& forces,
                           const PhysicsParams& params, double dt);
double lagrangian_residual(std::span<const double> theta, std::span<const double> thetadot,
                           std::span<const double> thetaddot, const Tensor& forces,
                           const PhysicsParams& params);

// exp(-residual): 1 iff the residual vanishes, strictly decreasing in it.
double structural_reward(std::span<const double> theta, const Tensor& forces,
                         const PhysicsParams& params, double dt);

// How the generator's reward treats physics. `physics` is exp(-PL);
// `none` disables the physics factor (vanilla adversarial learning);
// `paper_literal` is exp(+PL^2) with the exponent clamped to stay finite,
// kept selectable for reproducing the uncorrected formula.
enum class RewardMode { physics, none, paper_literal };
const char* reward_mode_name(RewardMode m);
RewardMode reward_mode_from_name(const std::string& name);
double sequence_reward(std::span<const double> theta, const Tensor& forces,
                       const PhysicsParams& params, double dt, RewardMode mode);

// Net generalized force required to realize theta: I*th'' + b*th' + G0*sin th.
std::vector<double> inverse_dynamics_torque(std::span<const double> theta,
                                            const PhysicsParams& params, double dt);

// Distributes a torque series onto the agonist channel: positive torque goes
// to the first flexor, negative to the first extensor, as F = |tau| / rho.
// The antagonist stays at zero; there is no co-contraction in the reference.
Tensor distribute_torque(std::span<const double> torque, const PhysicsParams& params);

// Reference forces for positive samples: distribute(inverse_dynamics(theta)).
Tensor inverse_dynamics_forces(std::span<const double> theta, const PhysicsParams& params,
                               double dt);

}  // namespace myogan
