#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tgf/control.hpp"
#include "tgf/errors.hpp"
#include "tgf/grid.hpp"
#include "tgf/noise.hpp"
#include "tgf/state_solver.hpp"
#include "tgf/trajectory.hpp"

namespace tgf {

/// Initial velocity: "zero", "random" (random_solenoidal) or "shear"
/// (amplitude * sin(2 pi x2 / L) e1).
struct InitialSpec {
  std::string kind = "zero";
  double amplitude = 0.0;
  std::uint64_t seed = 1;
  int band = 2;
  double decay = 2.0;
};

struct RunConfig {
  TorusGrid grid;
  TimeGrid time;
  FluidParams fluid;
  bool enforce_thermo = true;
  NoiseSpec noise;
  double lambda = 1.0;
  double radius = 1.0e3;
  int samples = 1;
  /// Synthetic inverse-crime target: f*(t) = amplitude cos(pi t / 2T) w, with w
  /// random_solenoidal(band 2, seed). Used when no target file is given and
  /// the amplitude is non-zero; otherwise the target is the zero field.
  double synthetic_amplitude = 0.0;
  std::uint64_t synthetic_seed = 7;
  InitialSpec initial;
  OptimizerOptions optimizer;
  std::string target_file;
  std::string control_file;
  std::string output_dir = "out";
  /// Directory of the config file; relative paths resolve against it.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& p) const;
};

/// Parses and validates a JSON document. Throws ConfigError naming the key.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

SpectralField initial_state(const RunConfig& cfg);
/// Spatial profile of the synthetic control (unit time factor).
SpectralField synthetic_profile(const RunConfig& cfg);
/// f*(t_n) of the synthetic target.
Trajectory synthetic_control(const RunConfig& cfg);
/// Target from file, synthetic inverse crime, or zero (see RunConfig).
Trajectory build_target(const RunConfig& cfg);
ControlProblem build_problem(const RunConfig& cfg);

/// Binary trajectory container. Header (40 bytes, little-endian):
/// "TGF3", version u32, N u32, components u32 (= 2), steps u32, dt f64, L f64, role u32.
/// Body: for every snapshot, modes with k1 outer in -N/2+1..N/2, k2 inner,
/// skipping k = 0; each mode stores (re, im) of component 0 then component 1.
inline constexpr std::uint32_t kTrajectoryVersion = 1;
inline constexpr std::size_t kTrajectoryHeaderBytes = 40;

std::vector<unsigned char> encode_trajectory(const Trajectory& t);
Trajectory decode_trajectory(const std::vector<unsigned char>& bytes);
void write_trajectory(const std::filesystem::path& path, const Trajectory& t);
Trajectory read_trajectory(const std::filesystem::path& path);

/// Columns: step,t,u_l2sq,u_grad_l2sq,Au_l2sq,A32u_l2sq,Av_L4_4,energy_residual
void write_report_csv(const std::filesystem::path& path, const StateRunReport& r);
/// Columns: iter,J,stderr,grad_norm,residual,step,wall_time
void write_history_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& h);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace tgf
