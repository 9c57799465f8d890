#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "myogan/tensor.hpp"

namespace myogan {

// Synthetic single-DOF musculoskeletal simulator. One antagonist muscle set
// drives a damped gravitational pendulum:
//
//   I * theta'' + b * theta' + G0 * sin(theta) = sum_n s_n * rho_n * F_n
//
// Muscle force follows first-order activation dynamics a' = (u - a) / tau
// under zero-order-hold excitation, F_n = Fmax_n * a_n. The sEMG channel is
// the activation envelope with multiplicative Gaussian noise, rectified at 0.

struct MuscleConfig {
  double fmax = 50.0;        // N
  int sign = +1;             // +1 flexor, -1 extensor
  double moment_arm = 0.02;  // m
};

struct SimConfig {
  double inertia = 1.0;          // kg m^2
  double damping = 0.5;          // N m s / rad
  double gravity_torque = 2.0;   // N m (m_p * g * l_c)
  std::vector<MuscleConfig> muscles = {{50.0, +1, 0.02}, {50.0, -1, 0.02}};
  double activation_tau = 0.05;  // s
  double emg_noise = 0.05;       // stddev of the multiplicative envelope noise
  std::size_t frames = 100;      // cycle length L (100 and 156 are the stock presets)
  double dt = 0.01;              // s per frame
  std::uint64_t seed = 0;

  std::size_t muscle_count() const { return muscles.size(); }
};

void validate(const SimConfig& cfg);

// One normalized motion cycle.
struct MotionSample {
  double dt = 0.0;
  Tensor emg;                 // B x L, dimensionless envelope
  Tensor force;               // N x L, newtons
  std::vector<double> theta;  // L, radians

  std::size_t frames() const { return theta.size(); }
  std::size_t emg_channels() const { return emg.rows(); }
  std::size_t muscle_count() const { return force.rows(); }
};

void validate(const MotionSample& s);

// Simulation output plus the integrator's own state derivatives at frame
// times (exact by construction, useful for residual checks without finite
// differences).
struct SimTrace {
  MotionSample sample;
  std::vector<double> thetadot;
  std::vector<double> thetaddot;
};

// excitations: N x L in [0, 1], held constant over each frame interval.
SimTrace simulate_cycle_trace(const Tensor& excitations, const SimConfig& cfg,
                              std::uint64_t noise_seed);
MotionSample simulate_cycle(const Tensor& excitations, const SimConfig& cfg,
                            std::uint64_t noise_seed);

enum class Split { train, test, eval };
const char* split_name(Split s);
Split split_from_name(const std::string& name);

enum class ExcitationFamily { sine, ramp, mixed };
const char* family_name(ExcitationFamily f);
ExcitationFamily family_from_name(const std::string& name);

// Shape labels attached to each sample; the `mixed` family draws uniformly
// from all four shapes so a single dataset carries every class.
inline constexpr int kShapeClasses = 4;
const char* shape_label_name(int label);  // sine | ramp | mixed_a | mixed_b

struct Dataset {
  SimConfig config;
  ExcitationFamily family = ExcitationFamily::sine;
  std::uint64_t seed = 0;
  std::vector<MotionSample> samples;
  std::vector<Split> split;
  std::vector<int> shape_label;

  std::vector<std::size_t> indices(Split s) const;
  std::size_t count(Split s) const { return indices(s).size(); }
};

void validate(const Dataset& ds);

// Deterministic in (n_cycles, cfg, family, seed); split 80/10/10 by index.
Dataset make_dataset(std::size_t n_cycles, const SimConfig& cfg, ExcitationFamily family,
                     std::uint64_t seed);

// Linear interpolation of every channel onto `frames` uniform points spanning
// the same duration; dt is rescaled accordingly.
MotionSample resample_cycle(const MotionSample& sample, std::size_t frames);

// --- dataset files -----------------------------------------------------
//
// One CSV per sample with header t,emg_0..emg_{B-1},force_0..force_{N-1},theta
// plus a JSON manifest recording the SimConfig, seed, family, split tags and
// a content hash. Floats carry 17 significant digits.

std::string sample_to_csv(const MotionSample& s);
MotionSample sample_from_csv(const std::string& csv, std::size_t emg_channels,
                             std::size_t muscle_count);

void write_dataset(const std::filesystem::path& dir, const Dataset& ds, bool overwrite = false);
Dataset read_dataset(const std::filesystem::path& dir);

// FNV-1a64 over the CSV serialization of every sample, in order.
std::uint64_t dataset_content_hash(const Dataset& ds);

}  // namespace myogan
