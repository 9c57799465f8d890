#include "myogan/physics.hpp"

#include <algorithm>
#include <cmath>

#include "myogan/errors.hpp"

namespace myogan {

PhysicsParams physics_params(const SimConfig& cfg) {
  PhysicsParams p;
  p.inertia = cfg.inertia;
  p.damping = cfg.damping;
  p.gravity_torque = cfg.gravity_torque;
  for (const MuscleConfig& m : cfg.muscles) p.muscles.push_back({m.sign, m.moment_arm});
  return p;
}

void validate(const PhysicsParams& p) {
  if (!(p.inertia > 0.0)) throw InputError("physics params: inertia must be > 0");
  if (p.damping < 0.0) throw InputError("physics params: damping must be >= 0");
  if (p.muscles.empty()) throw InputError("physics params: no muscles");
  bool flexor = false, extensor = false;
  for (const MuscleMoment& m : p.muscles) {
    if (!(m.moment_arm > 0.0)) throw InputError("physics params: moment arm must be > 0");
    if (m.sign != 1 && m.sign != -1) throw InputError("physics params: sign must be +1 or -1");
    flexor = flexor || m.sign == 1;
    extensor = extensor || m.sign == -1;
  }
  if (!flexor || !extensor) {
    throw InputError("physics params: need at least one flexor and one extensor");
  }
}

Derivatives kinematic_derivatives(std::span<const double> theta, double dt) {
  const std::size_t n = theta.size();
  if (n < 3) throw InputError("kinematic_derivatives: need at least 3 frames");
  if (!(dt > 0.0)) throw InputError("kinematic_derivatives: dt must be > 0");
  if (!all_finite(theta)) throw InputError("kinematic_derivatives: non-finite theta");

  Derivatives d;
  d.first.resize(n);
  d.second.resize(n);
  const double inv2dt = 1.0 / (2.0 * dt);
  const double invdt2 = 1.0 / (dt * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d.first[i] = (theta[i + 1] - theta[i - 1]) * inv2dt;
    d.second[i] = (theta[i + 1] - 2.0 * theta[i] + theta[i - 1]) * invdt2;
  }
  d.first[0] = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) * inv2dt;
  d.first[n - 1] = (3.0 * theta[n - 1] - 4.0 * theta[n - 2] + theta[n - 3]) * inv2dt;
  if (n >= 4) {
    d.second[0] = (2.0 * theta[0] - 5.0 * theta[1] + 4.0 * theta[2] - theta[3]) * invdt2;
    d.second[n - 1] =
        (2.0 * theta[n - 1] - 5.0 * theta[n - 2] + 4.0 * theta[n - 3] - theta[n - 4]) * invdt2;
  } else {
    // Three points define a parabola; its curvature is constant.
    d.second[0] = d.second[1];
    d.second[n - 1] = d.second[1];
  }
  return d;
}

namespace {

void check_residual_inputs(std::span<const double> theta, const Tensor& forces,
                           const PhysicsParams& params) {
  validate(params);
  if (forces.rank() != 2 || forces.rows() != params.muscles.size() ||
      forces.cols() != theta.size()) {
    throw InputError("lagrangian_residual: forces must be " +
                     std::to_string(params.muscles.size()) + "x" + std::to_string(theta.size()) +
                     ", got " + shape_str(forces.shape));
  }
  if (!all_finite(theta) || !forces.all_finite()) {
    throw InputError("lagrangian_residual: non-finite input");
  }
}

}  // namespace

double lagrangian_residual(std::span<const double> theta, std::span<const double> thetadot,
                           std::span<const double> thetaddot, const Tensor& forces,
                           const PhysicsParams& params) {
  check_residual_inputs(theta, forces, params);
  if (thetadot.size() != theta.size() || thetaddot.size() != theta.size()) {
    throw InputError("lagrangian_residual: derivative lengths disagree with theta");
  }
  const std::size_t frames = theta.size();
  const std::size_t n_muscles = params.muscles.size();
  double acc = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    double muscle_torque = 0.0;
    for (std::size_t n = 0; n < n_muscles; ++n) {
      muscle_torque += params.muscles[n].sign * params.muscles[n].moment_arm * forces(n, t);
    }
    const double violation = params.inertia * thetaddot[t] + params.damping * thetadot[t] +
                             params.gravity_torque * std::sin(theta[t]) - muscle_torque;
    acc += violation * violation;
  }
  return acc / static_cast<double>(frames);
}

double lagrangian_residual(std::span<const double> theta, const Tensor& forces,
                           const PhysicsParams& params, double dt) {
  check_residual_inputs(theta, forces, params);
  const Derivatives d = kinematic_derivatives(theta, dt);
  return lagrangian_residual(theta, d.first, d.second, forces, params);
}

double structural_reward(std::span<const double> theta, const Tensor& forces,
                         const PhysicsParams& params, double dt) {
  return std::exp(-lagrangian_residual(theta, forces, params, dt));
}

const char* reward_mode_name(RewardMode m) {
  switch (m) {
    case RewardMode::physics: return "physics";
    case RewardMode::none: return "none";
    case RewardMode::paper_literal: return "paper_literal";
  }
  return "?";
}

RewardMode reward_mode_from_name(const std::string& name) {
  if (name == "physics") return RewardMode::physics;
  if (name == "none") return RewardMode::none;
  if (name == "paper_literal") return RewardMode::paper_literal;
  throw InputError("unknown reward mode: " + name);
}

double sequence_reward(std::span<const double> theta, const Tensor& forces,
                       const PhysicsParams& params, double dt, RewardMode mode) {
  switch (mode) {
    case RewardMode::none: return 1.0;
    case RewardMode::physics: return structural_reward(theta, forces, params, dt);
    case RewardMode::paper_literal: {
      const double pl = lagrangian_residual(theta, forces, params, dt);
      return std::exp(std::min(pl * pl, 700.0));  // clamp keeps the value finite
    }
  }
  throw InputError("unknown reward mode");
}

std::vector<double> inverse_dynamics_torque(std::span<const double> theta,
                                            const PhysicsParams& params, double dt) {
  validate(params);
  if (theta.size() < 3) throw InputError("inverse_dynamics_torque: need at least 3 frames");
  const Derivatives d = kinematic_derivatives(theta, dt);
  std::vector<double> torque(theta.size());
  for (std::size_t t = 0; t < theta.size(); ++t) {
    torque[t] = params.inertia * d.second[t] + params.damping * d.first[t] +
                params.gravity_torque * std::sin(theta[t]);
  }
  return torque;
}

Tensor distribute_torque(std::span<const double> torque, const PhysicsParams& params) {
  validate(params);
  std::size_t flexor = params.muscles.size(), extensor = params.muscles.size();
  for (std::size_t n = 0; n < params.muscles.size(); ++n) {
    if (params.muscles[n].sign > 0 && flexor == params.muscles.size()) flexor = n;
    if (params.muscles[n].sign < 0 && extensor == params.muscles.size()) extensor = n;
  }
  Tensor forces({params.muscles.size(), torque.size()});
  for (std::size_t t = 0; t < torque.size(); ++t) {
    if (torque[t] >= 0.0) {
      forces(flexor, t) = torque[t] / params.muscles[flexor].moment_arm;
    } else {
      forces(extensor, t) = -torque[t] / params.muscles[extensor].moment_arm;
    }
  }
  return forces;
}

Tensor inverse_dynamics_forces(std::span<const double> theta, const PhysicsParams& params,
                               double dt) {
  return distribute_torque(inverse_dynamics_torque(theta, params, dt), params);
}

}  // namespace myogan
