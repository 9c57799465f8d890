#include "myogan/dynsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "myogan/errors.hpp"
#include "myogan/rng.hpp"

namespace myogan {

using nlohmann::json;

namespace {

constexpr double kThetaBlowup = 10.0 * std::numbers::pi;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (!(cfg.inertia > 0.0) || !std::isfinite(cfg.inertia)) {
    throw InputError("sim config: inertia must be positive, got " + std::to_string(cfg.inertia));
  }
  if (cfg.damping < 0.0 || !std::isfinite(cfg.damping)) {
    throw InputError("sim config: damping must be finite and >= 0");
  }
  if (!std::isfinite(cfg.gravity_torque)) throw InputError("sim config: gravity torque not finite");
  if (cfg.muscles.empty()) throw InputError("sim config: needs at least one muscle");
  bool has_flexor = false, has_extensor = false;
  for (std::size_t n = 0; n < cfg.muscles.size(); ++n) {
    const MuscleConfig& m = cfg.muscles[n];
    if (!(m.fmax > 0.0) || !(m.moment_arm > 0.0)) {
      throw InputError("sim config: muscle " + std::to_string(n) +
                       " needs fmax > 0 and moment_arm > 0");
    }
    if (m.sign != +1 && m.sign != -1) {
      throw InputError("sim config: muscle " + std::to_string(n) + " sign must be +1 or -1");
    }
    has_flexor = has_flexor || m.sign == +1;
    has_extensor = has_extensor || m.sign == -1;
  }
  if (!has_flexor || !has_extensor) {
    throw InputError("sim config: need at least one flexor (+1) and one extensor (-1)");
  }
  if (!(cfg.activation_tau > 0.0)) throw InputError("sim config: activation_tau must be > 0");
  if (cfg.emg_noise < 0.0) throw InputError("sim config: emg_noise must be >= 0");
  if (cfg.frames < 3) throw InputError("sim config: frames must be >= 3");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InputError("sim config: dt must be > 0");
}

void validate(const MotionSample& s) {
  const std::size_t L = s.theta.size();
  if (L < 3) throw InputError("motion sample: needs at least 3 frames, got " + std::to_string(L));
  if (s.emg.rank() != 2 || s.force.rank() != 2 || s.emg.cols() != L || s.force.cols() != L) {
    throw InputError("motion sample: emg/force/theta frame counts disagree");
  }
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw InputError("motion sample: dt must be > 0");
  if (!s.emg.all_finite() || !s.force.all_finite() || !all_finite(s.theta)) {
    throw InputError("motion sample: non-finite entries");
  }
  for (double v : s.emg.data) {
    if (v < 0.0) throw InputError("motion sample: negative emg entry");
  }
  for (double v : s.force.data) {
    if (v < 0.0) throw InputError("motion sample: negative force entry");
  }
}

SimTrace simulate_cycle_trace(const Tensor& excitations, const SimConfig& cfg,
                              std::uint64_t noise_seed) {
  validate(cfg);
  const std::size_t n_muscles = cfg.muscle_count();
  const std::size_t frames = cfg.frames;
  if (excitations.rank() != 2 || excitations.rows() != n_muscles ||
      excitations.cols() != frames) {
    throw InputError("simulate_cycle: excitations must be " + std::to_string(n_muscles) + "x" +
                     std::to_string(frames) + ", got " + shape_str(excitations.shape));
  }
  for (double u : excitations.data) {
    if (!std::isfinite(u)) throw InputError("simulate_cycle: non-finite excitation");
    if (u < 0.0 || u > 1.0) {
      throw InputError("simulate_cycle: excitation " + std::to_string(u) + " outside [0, 1]");
    }
  }

  const double dt = cfg.dt;
  const double tau = cfg.activation_tau;
  // Activation decay over a half and a full step; excitation is held constant
  // across each frame interval, so the first-order activation ODE has the
  // closed form a(s) = u + (a0 - u) * exp(-s / tau) inside the step.
  const double decay_half = std::exp(-0.5 * dt / tau);
  const double decay_full = std::exp(-dt / tau);

  Tensor activation({n_muscles, frames});
  std::vector<double> theta(frames, 0.0), thetadot(frames, 0.0), thetaddot(frames, 0.0);

  std::vector<double> gain(n_muscles);  // sign * moment_arm * fmax
  for (std::size_t n = 0; n < n_muscles; ++n) {
    gain[n] = cfg.muscles[n].sign * cfg.muscles[n].moment_arm * cfg.muscles[n].fmax;
  }

  auto muscle_torque = [&](const std::vector<double>& act) {
    double t = 0.0;
    for (std::size_t n = 0; n < n_muscles; ++n) t += gain[n] * act[n];
    return t;
  };
  auto accel = [&](double th, double w, double tq) {
    return (tq - cfg.damping * w - cfg.gravity_torque * std::sin(th)) / cfg.inertia;
  };

  std::vector<double> a_now(n_muscles, 0.0), a_half(n_muscles), a_full(n_muscles);
  for (std::size_t k = 0; k + 1 < frames; ++k) {
    for (std::size_t n = 0; n < n_muscles; ++n) activation(n, k) = a_now[n];
    const double th = theta[k], w = thetadot[k];
    const double tq_now = muscle_torque(a_now);
    thetaddot[k] = accel(th, w, tq_now);

    for (std::size_t n = 0; n < n_muscles; ++n) {
      const double u = excitations(n, k);
      a_half[n] = u + (a_now[n] - u) * decay_half;
      a_full[n] = u + (a_now[n] - u) * decay_full;
    }
    const double tq_half = muscle_torque(a_half);
    const double tq_full = muscle_torque(a_full);

    // Classical RK4 on (theta, thetadot) with exact activation at substeps.
    const double k1_th = w;
    const double k1_w = thetaddot[k];
    const double k2_th = w + 0.5 * dt * k1_w;
    const double k2_w = accel(th + 0.5 * dt * k1_th, w + 0.5 * dt * k1_w, tq_half);
    const double k3_th = w + 0.5 * dt * k2_w;
    const double k3_w = accel(th + 0.5 * dt * k2_th, w + 0.5 * dt * k2_w, tq_half);
    const double k4_th = w + dt * k3_w;
    const double k4_w = accel(th + dt * k3_th, w + dt * k3_w, tq_full);

    theta[k + 1] = th + dt / 6.0 * (k1_th + 2.0 * k2_th + 2.0 * k3_th + k4_th);
    thetadot[k + 1] = w + dt / 6.0 * (k1_w + 2.0 * k2_w + 2.0 * k3_w + k4_w);
    a_now.swap(a_full);

    if (std::fabs(theta[k + 1]) > kThetaBlowup || !std::isfinite(theta[k + 1])) {
      std::ostringstream os;
      os << "simulate_cycle: |theta| exceeded " << kThetaBlowup << " rad at frame " << k + 1
         << " (inertia=" << cfg.inertia << ", damping=" << cfg.damping
         << ", gravity_torque=" << cfg.gravity_torque << ", dt=" << cfg.dt << ")";
      throw InstabilityError(os.str());
    }
  }
  for (std::size_t n = 0; n < n_muscles; ++n) activation(n, frames - 1) = a_now[n];
  thetaddot[frames - 1] = accel(theta[frames - 1], thetadot[frames - 1], muscle_torque(a_now));

  SimTrace out;
  out.sample.dt = dt;
  out.sample.theta = std::move(theta);
  out.thetadot = std::move(thetadot);
  out.thetaddot = std::move(thetaddot);
  out.sample.force = Tensor({n_muscles, frames});
  out.sample.emg = Tensor({n_muscles, frames});
  Rng noise(noise_seed);
  for (std::size_t n = 0; n < n_muscles; ++n) {
    for (std::size_t k = 0; k < frames; ++k) {
      const double a = activation(n, k);
      out.sample.force(n, k) = cfg.muscles[n].fmax * a;
      const double eta = cfg.emg_noise * noise.normal();
      out.sample.emg(n, k) = std::max(0.0, a * (1.0 + eta));
    }
  }
  return out;
}

MotionSample simulate_cycle(const Tensor& excitations, const SimConfig& cfg,
                            std::uint64_t noise_seed) {
  return simulate_cycle_trace(excitations, cfg, noise_seed).sample;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::eval: return "eval";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  if (name == "eval") return Split::eval;
  throw InputError("unknown split name: " + name);
}

const char* family_name(ExcitationFamily f) {
  switch (f) {
    case ExcitationFamily::sine: return "sine";
    case ExcitationFamily::ramp: return "ramp";
    case ExcitationFamily::mixed: return "mixed";
  }
  return "?";
}

ExcitationFamily family_from_name(const std::string& name) {
  if (name == "sine") return ExcitationFamily::sine;
  if (name == "ramp") return ExcitationFamily::ramp;
  if (name == "mixed") return ExcitationFamily::mixed;
  throw InputError("unknown excitation family: " + name);
}

const char* shape_label_name(int label) {
  switch (label) {
    case 0: return "sine";
    case 1: return "ramp";
    case 2: return "mixed_a";
    case 3: return "mixed_b";
  }
  throw InputError("unknown shape label: " + std::to_string(label));
}

std::vector<std::size_t> Dataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s) out.push_back(i);
  }
  return out;
}

void validate(const Dataset& ds) {
  if (ds.samples.empty()) throw InputError("dataset: empty");
  if (ds.split.size() != ds.samples.size() || ds.shape_label.size() != ds.samples.size()) {
    throw InputError("dataset: split/label arrays out of sync with samples");
  }
  const MotionSample& first = ds.samples.front();
  for (const MotionSample& s : ds.samples) {
    validate(s);
    if (s.frames() != first.frames() || s.emg_channels() != first.emg_channels() ||
        s.muscle_count() != first.muscle_count() || s.dt != first.dt) {
      throw InputError("dataset: samples disagree on B/N/L/dt");
    }
  }
}

namespace {

double triangle01(double x) { return x < 0.0 || x > 1.0 ? 0.0 : 1.0 - std::fabs(2.0 * x - 1.0); }

// Excitation value for one muscle at cycle position x in [0, 1).
double shape_excitation(int label, bool flexor, double x, double amp, double phase_jitter,
                        double mod_jitter) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double s = std::sin(two_pi * (x + phase_jitter));
  const double half_sine = flexor ? std::max(0.0, s) : std::max(0.0, -s);
  const double ramp = flexor ? triangle01(2.0 * x) : triangle01(2.0 * (x - 0.5));
  double u = 0.0;
  switch (label) {
    case 0: u = amp * half_sine; break;
    case 1: u = amp * ramp; break;
    case 2: u = amp * (0.5 * half_sine + 0.5 * ramp); break;
    case 3: {
      const double mod = 0.6 + 0.4 * std::sin(2.0 * two_pi * (x + mod_jitter));
      u = amp * half_sine * mod;
      break;
    }
    default: throw InputError("unknown shape label: " + std::to_string(label));
  }
  return std::clamp(u, 0.0, 1.0);
}

Tensor family_excitations(int label, const SimConfig& cfg, Rng rng) {
  const std::size_t n_muscles = cfg.muscle_count();
  Tensor u({n_muscles, cfg.frames});
  for (std::size_t n = 0; n < n_muscles; ++n) {
    const double amp = rng.uniform(0.35, 0.9);
    const double phase_jitter = rng.uniform(-0.12, 0.12);
    const double mod_jitter = rng.uniform(0.0, 1.0);
    const bool flexor = cfg.muscles[n].sign > 0;
    for (std::size_t k = 0; k < cfg.frames; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(cfg.frames);
      u(n, k) = shape_excitation(label, flexor, x, amp, phase_jitter, mod_jitter);
    }
  }
  return u;
}

}  // namespace

Dataset make_dataset(std::size_t n_cycles, const SimConfig& cfg, ExcitationFamily family,
                     std::uint64_t seed) {
  if (n_cycles == 0) throw InputError("make_dataset: n_cycles must be >= 1");
  validate(cfg);

  Dataset ds;
  ds.config = cfg;
  ds.family = family;
  ds.seed = seed;
  ds.samples.reserve(n_cycles);
  const Rng root(seed);
  for (std::size_t i = 0; i < n_cycles; ++i) {
    int label = 0;
    switch (family) {
      case ExcitationFamily::sine: label = 0; break;
      case ExcitationFamily::ramp: label = 1; break;
      case ExcitationFamily::mixed:
        label = static_cast<int>(root.child(i, 2).below(kShapeClasses));
        break;
    }
    const Tensor u = family_excitations(label, cfg, root.child(i, 0));
    ds.samples.push_back(simulate_cycle(u, cfg, root.child(i, 1).root()));
    ds.shape_label.push_back(label);
  }

  // 80/10/10 by index; train is never left empty.
  std::size_t n_train = (8 * n_cycles) / 10;
  const std::size_t n_test = n_cycles / 10;
  if (n_train == 0) n_train = 1;
  ds.split.resize(n_cycles);
  for (std::size_t i = 0; i < n_cycles; ++i) {
    if (i < n_train) {
      ds.split[i] = Split::train;
    } else if (i < n_train + n_test) {
      ds.split[i] = Split::test;
    } else {
      ds.split[i] = Split::eval;
    }
  }
  validate(ds);
  return ds;
}

MotionSample resample_cycle(const MotionSample& sample, std::size_t frames) {
  validate(sample);
  if (frames < 3) throw InputError("resample_cycle: frames must be >= 3");
  const std::size_t src = sample.frames();
  const double duration = static_cast<double>(src - 1) * sample.dt;

  MotionSample out;
  out.dt = duration / static_cast<double>(frames - 1);
  out.emg = Tensor({sample.emg.rows(), frames});
  out.force = Tensor({sample.force.rows(), frames});
  out.theta.resize(frames);

  auto interp = [&](auto&& get, std::size_t j) {
    const double pos = static_cast<double>(j) * static_cast<double>(src - 1) /
                       static_cast<double>(frames - 1);
    std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 > src - 2) i0 = src - 2;
    const double frac = pos - static_cast<double>(i0);
    return get(i0) * (1.0 - frac) + get(i0 + 1) * frac;
  };

  for (std::size_t j = 0; j < frames; ++j) {
    for (std::size_t c = 0; c < sample.emg.rows(); ++c) {
      out.emg(c, j) = interp([&](std::size_t i) { return sample.emg(c, i); }, j);
    }
    for (std::size_t c = 0; c < sample.force.rows(); ++c) {
      out.force(c, j) = interp([&](std::size_t i) { return sample.force(c, i); }, j);
    }
    out.theta[j] = interp([&](std::size_t i) { return sample.theta[i]; }, j);
  }
  return out;
}

std::string sample_to_csv(const MotionSample& s) {
  std::ostringstream os;
  os << "t";
  for (std::size_t c = 0; c < s.emg_channels(); ++c) os << ",emg_" << c;
  for (std::size_t c = 0; c < s.muscle_count(); ++c) os << ",force_" << c;
  os << ",theta\n";
  for (std::size_t k = 0; k < s.frames(); ++k) {
    os << fmt17(static_cast<double>(k) * s.dt);
    for (std::size_t c = 0; c < s.emg_channels(); ++c) os << "," << fmt17(s.emg(c, k));
    for (std::size_t c = 0; c < s.muscle_count(); ++c) os << "," << fmt17(s.force(c, k));
    os << "," << fmt17(s.theta[k]) << "\n";
  }
  return os.str();
}

MotionSample sample_from_csv(const std::string& csv, std::size_t emg_channels,
                             std::size_t muscle_count) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw InputError("sample csv: empty");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 1 + emg_channels + muscle_count + 1) {
      throw InputError("sample csv: row has " + std::to_string(row.size()) + " columns, expected " +
                       std::to_string(2 + emg_channels + muscle_count));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 3) throw InputError("sample csv: fewer than 3 frames");
  MotionSample s;
  const std::size_t frames = rows.size();
  s.dt = rows[1][0] - rows[0][0];
  s.emg = Tensor({emg_channels, frames});
  s.force = Tensor({muscle_count, frames});
  s.theta.resize(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    for (std::size_t c = 0; c < emg_channels; ++c) s.emg(c, k) = rows[k][1 + c];
    for (std::size_t c = 0; c < muscle_count; ++c) s.force(c, k) = rows[k][1 + emg_channels + c];
    s.theta[k] = rows[k][1 + emg_channels + muscle_count];
  }
  validate(s);
  return s;
}

std::uint64_t dataset_content_hash(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const MotionSample& s : ds.samples) {
    const std::string csv = sample_to_csv(s);
    h = fnv1a64(csv.data(), csv.size(), h);
  }
  return h;
}

namespace {

json sim_config_to_json(const SimConfig& cfg) {
  json muscles = json::array();
  for (const MuscleConfig& m : cfg.muscles) {
    muscles.push_back({{"fmax", m.fmax}, {"sign", m.sign}, {"moment_arm", m.moment_arm}});
  }
  return json{{"inertia", cfg.inertia},
              {"damping", cfg.damping},
              {"gravity_torque", cfg.gravity_torque},
              {"muscles", muscles},
              {"activation_tau", cfg.activation_tau},
              {"emg_noise", cfg.emg_noise},
              {"frames", cfg.frames},
              {"dt", cfg.dt},
              {"seed", cfg.seed}};
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig cfg;
  cfg.inertia = j.at("inertia").get<double>();
  cfg.damping = j.at("damping").get<double>();
  cfg.gravity_torque = j.at("gravity_torque").get<double>();
  cfg.muscles.clear();
  for (const json& m : j.at("muscles")) {
    cfg.muscles.push_back({m.at("fmax").get<double>(), m.at("sign").get<int>(),
                           m.at("moment_arm").get<double>()});
  }
  cfg.activation_tau = j.at("activation_tau").get<double>();
  cfg.emg_noise = j.at("emg_noise").get<double>();
  cfg.frames = j.at("frames").get<std::size_t>();
  cfg.dt = j.at("dt").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp.string());
    out << text;
    if (!out) throw InputError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const Dataset& ds, bool overwrite) {
  validate(ds);
  std::filesystem::create_directories(dir);
  const auto manifest_path = dir / "manifest.json";
  if (!overwrite && std::filesystem::exists(manifest_path)) {
    throw InputError("refusing to overwrite existing dataset: " + manifest_path.string() +
                     " (pass overwrite to replace)");
  }

  json files = json::array();
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%04zu.csv", i);
    write_text_atomic(dir / name, sample_to_csv(ds.samples[i]));
    files.push_back({{"file", name},
                     {"split", split_name(ds.split[i])},
                     {"shape", shape_label_name(ds.shape_label[i])}});
  }

  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(dataset_content_hash(ds)));
  json manifest{{"format", "myogan-dataset"},
                {"version", 1},
                {"sim", sim_config_to_json(ds.config)},
                {"family", family_name(ds.family)},
                {"seed", ds.seed},
                {"cycles", ds.samples.size()},
                {"content_hash", hash_hex},
                {"samples", files}};
  write_text_atomic(manifest_path, manifest.dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw InputError("dataset manifest not found: " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("dataset manifest unreadable: " + manifest_path.string() + ": " + e.what());
  }
  if (manifest.value("format", "") != "myogan-dataset") {
    throw InputError("not a dataset manifest: " + manifest_path.string());
  }

  Dataset ds;
  ds.config = sim_config_from_json(manifest.at("sim"));
  ds.family = family_from_name(manifest.at("family").get<std::string>());
  ds.seed = manifest.at("seed").get<std::uint64_t>();
  const std::size_t n_muscles = ds.config.muscle_count();
  for (const json& f : manifest.at("samples")) {
    const auto file = dir / f.at("file").get<std::string>();
    std::ifstream cin(file, std::ios::binary);
    if (!cin) throw InputError("dataset sample missing: " + file.string());
    std::string csv((std::istreambuf_iterator<char>(cin)), std::istreambuf_iterator<char>());
    ds.samples.push_back(sample_from_csv(csv, n_muscles, n_muscles));
    ds.split.push_back(split_from_name(f.at("split").get<std::string>()));
    const std::string shape = f.at("shape").get<std::string>();
    int label = -1;
    for (int s = 0; s < kShapeClasses; ++s) {
      if (shape == shape_label_name(s)) label = s;
    }
    if (label < 0) throw InputError("dataset manifest: unknown shape label " + shape);
    ds.shape_label.push_back(label);
  }
  validate(ds);

  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(dataset_content_hash(ds)));
  if (manifest.contains("content_hash") &&
      manifest.at("content_hash").get<std::string>() != hash_hex) {
    throw InputError("dataset content hash mismatch under " + dir.string());
  }
  return ds;
}

}  // namespace myogan
