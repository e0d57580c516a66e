#include "tgf/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tgf/operators.hpp"
#include "tgf/random_fields.hpp"
#include "tgf/state_solver.hpp"

namespace tgf {

using nlohmann::json;

std::filesystem::path RunConfig::resolve(const std::string& p) const {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path;
  return base_dir / path;
}

namespace {

// Typed access into one JSON object, with errors naming the dotted key.
class Section {
 public:
  Section(const json* obj, std::string prefix, std::set<std::string> allowed)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (obj_ == nullptr) return;
    if (!obj_->is_object()) throw ConfigError(prefix_, "expected an object");
    for (const auto& [k, _] : obj_->items()) {
      if (!allowed.count(k)) throw ConfigError(key(k), "unknown key");
    }
  }

  std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }
  bool has(const std::string& k) const { return obj_ != nullptr && obj_->contains(k) && !(*obj_)[k].is_null(); }

  double number(const std::string& k, std::optional<double> fallback = std::nullopt) const {
    if (!has(k)) {
      if (fallback) return *fallback;
      throw ConfigError(key(k), "required number is missing");
    }
    const json& v = (*obj_)[k];
    if (!v.is_number()) throw ConfigError(key(k), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key(k), "must be finite");
    return d;
  }

  std::int64_t integer(const std::string& k, std::optional<std::int64_t> fallback = std::nullopt) const {
    if (!has(k)) {
      if (fallback) return *fallback;
      throw ConfigError(key(k), "required integer is missing");
    }
    const json& v = (*obj_)[k];
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw ConfigError(key(k), "integer out of range");
      }
      return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) throw ConfigError(key(k), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& k, std::uint64_t fallback) const {
    if (!has(k)) return fallback;
    const json& v = (*obj_)[k];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) throw ConfigError(key(k), "must be non-negative");
    throw ConfigError(key(k), "expected a non-negative integer");
  }

  bool boolean(const std::string& k, bool fallback) const {
    if (!has(k)) return fallback;
    const json& v = (*obj_)[k];
    if (!v.is_boolean()) throw ConfigError(key(k), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k, const std::string& fallback) const {
    if (!has(k)) return fallback;
    const json& v = (*obj_)[k];
    if (!v.is_string()) throw ConfigError(key(k), "expected a string");
    return v.get<std::string>();
  }

 private:
  const json* obj_;
  std::string prefix_;
};

const json* child(const json& root, const char* name) {
  if (!root.contains(name) || root[name].is_null()) return nullptr;
  return &root[name];
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  const Section top(&root, "", {"grid", "time", "fluid", "noise", "control", "paths", "initial", "optimizer"});
  if (!child(root, "grid")) throw ConfigError("grid", "required section is missing");
  if (!child(root, "time")) throw ConfigError("time", "required section is missing");
  if (!child(root, "fluid")) throw ConfigError("fluid", "required section is missing");

  RunConfig cfg;
  cfg.base_dir = base_dir;

  const Section grid(child(root, "grid"), "grid", {"L", "N"});
  const double L = grid.number("L");
  require(L > 0.0, "grid.L", "must be positive");
  const std::int64_t N = grid.integer("N");
  require(N >= 4 && N % 2 == 0 && N <= 4096, "grid.N", "must be an even integer in [4, 4096]");
  cfg.grid = TorusGrid(L, static_cast<int>(N));

  const Section time(child(root, "time"), "time", {"T", "steps"});
  const double T = time.number("T");
  require(T > 0.0, "time.T", "must be positive");
  const std::int64_t steps = time.integer("steps");
  require(steps >= 1 && steps <= 100000000, "time.steps", "must be a positive integer");
  cfg.time = TimeGrid(T, static_cast<int>(steps));

  const Section fluid(child(root, "fluid"), "fluid", {"nu", "alpha1", "alpha2", "beta", "enforce_thermo"});
  const double nu = fluid.number("nu");
  const double a1 = fluid.number("alpha1");
  const double a2 = fluid.number("alpha2");
  const double beta = fluid.number("beta");
  require(nu >= 0.0, "fluid.nu", "must be non-negative");
  require(a1 >= 0.0, "fluid.alpha1", "must be non-negative");
  require(beta >= 0.0, "fluid.beta", "must be non-negative");
  cfg.enforce_thermo = fluid.boolean("enforce_thermo", true);
  try {
    cfg.fluid = FluidParams(nu, a1, a2, beta, cfg.enforce_thermo ? ThermoPolicy::enforce : ThermoPolicy::warn);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("fluid.alpha2", e.what());
  }

  const Section noise(child(root, "noise"), "noise",
                      {"sigma", "s", "gamma", "theta", "c_hat", "master_seed", "cutoff"});
  NoiseSpec ns;
  ns.sigma = noise.number("sigma", 0.0);
  require(ns.sigma >= 0.0, "noise.sigma", "must be non-negative");
  ns.s = noise.number("s", 4.0);
  ns.gamma = noise.number("gamma", 0.25);
  require(ns.gamma > 0.0 && ns.gamma < 0.5, "noise.gamma", "must lie in (0, 1/2)");
  require(ns.s > 4.0 - 2.0 * ns.gamma, "noise.s", "violates the trace condition s > 4 - 2*gamma");
  ns.theta = noise.number("theta", 1.0);
  require(ns.theta > 0.0, "noise.theta", "must be positive");
  if (noise.has("c_hat")) {
    ns.c_hat = noise.number("c_hat");
    require(*ns.c_hat > 0.0, "noise.c_hat", "must be positive");
  }
  ns.master_seed = noise.unsigned_integer("master_seed", 0);
  if (noise.has("cutoff")) {
    ns.cutoff = noise.number("cutoff");
    require(ns.cutoff > 0.0, "noise.cutoff", "must be positive");
  }
  try {
    cfg.noise = resolve_noise_spec(ns, cfg.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("noise", e.what());
  }

  const Section control(child(root, "control"), "control",
                        {"lambda", "radius_R", "samples", "synthetic_amplitude", "synthetic_seed"});
  cfg.lambda = control.number("lambda", 1.0);
  require(cfg.lambda > 0.0, "control.lambda", "must be positive");
  cfg.radius = control.number("radius_R", 1.0e3);
  require(cfg.radius > 0.0, "control.radius_R", "must be positive");
  const std::int64_t samples = control.integer("samples", 1);
  require(samples >= 1 && samples <= 1000000, "control.samples", "must be a positive integer");
  cfg.samples = static_cast<int>(samples);
  cfg.synthetic_amplitude = control.number("synthetic_amplitude", 0.0);
  cfg.synthetic_seed = control.unsigned_integer("synthetic_seed", 7);

  const Section initial(child(root, "initial"), "initial", {"kind", "amplitude", "seed", "band", "decay"});
  cfg.initial.kind = initial.string("kind", "zero");
  require(cfg.initial.kind == "zero" || cfg.initial.kind == "random" || cfg.initial.kind == "shear", "initial.kind",
          "must be one of zero, random, shear");
  cfg.initial.amplitude = initial.number("amplitude", 0.0);
  cfg.initial.seed = initial.unsigned_integer("seed", 1);
  const std::int64_t band = initial.integer("band", 2);
  require(band >= 1, "initial.band", "must be >= 1");
  cfg.initial.band = static_cast<int>(band);
  cfg.initial.decay = initial.number("decay", 2.0);

  const Section opt(child(root, "optimizer"), "optimizer", {"max_iters", "step0", "armijo_c", "tol_residual"});
  const std::int64_t iters = opt.integer("max_iters", 200);
  require(iters >= 0, "optimizer.max_iters", "must be non-negative");
  cfg.optimizer.max_iters = static_cast<int>(iters);
  cfg.optimizer.step0 = opt.number("step0", 1.0);
  require(cfg.optimizer.step0 > 0.0, "optimizer.step0", "must be positive");
  cfg.optimizer.armijo_c = opt.number("armijo_c", 1e-4);
  require(cfg.optimizer.armijo_c > 0.0 && cfg.optimizer.armijo_c < 1.0, "optimizer.armijo_c", "must lie in (0, 1)");
  cfg.optimizer.tol_residual = opt.number("tol_residual", 0.0);
  require(cfg.optimizer.tol_residual >= 0.0, "optimizer.tol_residual", "must be non-negative");

  const Section paths(child(root, "paths"), "paths", {"target_file", "control_file", "output_dir"});
  cfg.target_file = paths.string("target_file", "");
  cfg.control_file = paths.string("control_file", "");
  cfg.output_dir = paths.string("output_dir", "out");
  require(!cfg.output_dir.empty(), "paths.output_dir", "must not be empty");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

SpectralField initial_state(const RunConfig& cfg) {
  const TorusGrid& g = cfg.grid;
  if (cfg.initial.kind == "random") {
    return random_solenoidal(g, cfg.initial.band, cfg.initial.seed, cfg.initial.amplitude, cfg.initial.decay);
  }
  SpectralField v(g, 2);
  if (cfg.initial.kind == "shear") {
    // a sin(2 pi x2 / L) e1 = a (e^{i..} - e^{-i..}) / (2i)
    v.mode(0, 0, 1) = cplx(0.0, -0.5 * cfg.initial.amplitude);
    v.mode(0, 0, -1) = cplx(0.0, 0.5 * cfg.initial.amplitude);
  }
  return v;
}

SpectralField synthetic_profile(const RunConfig& cfg) {
  return random_solenoidal(cfg.grid, 2, cfg.synthetic_seed, cfg.synthetic_amplitude, 0.0);
}

Trajectory synthetic_control(const RunConfig& cfg) {
  Trajectory f(cfg.grid, cfg.time, Role::control_f);
  const SpectralField w = synthetic_profile(cfg);
  for (int n = 0; n <= cfg.time.steps(); ++n) {
    f[n] = std::cos(0.5 * std::numbers::pi * cfg.time.t(n) / cfg.time.T()) * w;
  }
  return f;
}

Trajectory build_target(const RunConfig& cfg) {
  if (!cfg.target_file.empty()) {
    Trajectory t = read_trajectory(cfg.resolve(cfg.target_file));
    if (!(t.grid().modes() == cfg.grid.modes()) || t.grid().length() != cfg.grid.length() ||
        t.steps() != cfg.time.steps()) {
      throw ConfigError("paths.target_file", "target trajectory does not match grid/time settings");
    }
    std::vector<SpectralField> snaps;
    for (std::size_t n = 0; n < t.size(); ++n) snaps.push_back(t[n]);
    return Trajectory(cfg.time, Role::target_vd, std::move(snaps));
  }
  if (cfg.synthetic_amplitude != 0.0) {
    const Trajectory f = synthetic_control(cfg);
    const Trajectory z(cfg.grid, cfg.time, Role::noise_z);
    return solve_state(initial_state(cfg), f, z, cfg.fluid, cfg.noise.theta, false).u.relabeled(Role::target_vd);
  }
  return Trajectory(cfg.grid, cfg.time, Role::target_vd);
}

ControlProblem build_problem(const RunConfig& cfg) {
  ControlProblem p;
  p.params = cfg.fluid;
  p.noise = cfg.noise;
  p.v0 = initial_state(cfg);
  p.target = build_target(cfg);
  p.lambda = cfg.lambda;
  p.radius = cfg.radius;
  p.samples = cfg.samples;
  return p;
}

namespace {

template <class T>
void put(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.insert(out.end(), bits.begin(), bits.end());
}

template <class T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  std::array<unsigned char, sizeof(T)> bits{};
  std::memcpy(bits.data(), in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<unsigned char> encode_trajectory(const Trajectory& t) {
  const TorusGrid& g = t.grid();
  const int N = g.modes();
  std::vector<unsigned char> out;
  out.reserve(kTrajectoryHeaderBytes + t.size() * g.file_mode_count() * 32);
  for (const char c : {'T', 'G', 'F', '3'}) out.push_back(static_cast<unsigned char>(c));
  put<std::uint32_t>(out, kTrajectoryVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(N));
  put<std::uint32_t>(out, 2u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.steps()));
  put<double>(out, t.time().dt());
  put<double>(out, g.length());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.role()));
  for (std::size_t n = 0; n < t.size(); ++n) {
    const SpectralField& f = t[n];
    for (int k1 = -N / 2 + 1; k1 <= N / 2; ++k1) {
      for (int k2 = -N / 2 + 1; k2 <= N / 2; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        for (int c = 0; c < 2; ++c) {
          const cplx z = f.mode(c, k1, k2);
          put<double>(out, z.real());
          put<double>(out, z.imag());
        }
      }
    }
  }
  return out;
}

Trajectory decode_trajectory(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kTrajectoryHeaderBytes) throw std::runtime_error("trajectory file: truncated header");
  if (std::memcmp(bytes.data(), "TGF3", 4) != 0) throw std::runtime_error("trajectory file: bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kTrajectoryVersion) {
    throw std::runtime_error("trajectory file: unsupported version " + std::to_string(version));
  }
  const auto N = get<std::uint32_t>(bytes, pos);
  const auto comps = get<std::uint32_t>(bytes, pos);
  const auto steps = get<std::uint32_t>(bytes, pos);
  const auto dt = get<double>(bytes, pos);
  const auto L = get<double>(bytes, pos);
  const auto role = get<std::uint32_t>(bytes, pos);
  if (comps != 2) throw std::runtime_error("trajectory file: expected 2 components");
  if (role > static_cast<std::uint32_t>(Role::control_f)) throw std::runtime_error("trajectory file: bad role");
  if (N < 4 || N % 2 != 0 || N > 4096) throw std::runtime_error("trajectory file: bad mode count");
  if (steps == 0 || steps > 100000000u) throw std::runtime_error("trajectory file: bad step count");
  const TorusGrid g(L, static_cast<int>(N));
  const std::size_t expect =
      kTrajectoryHeaderBytes + (static_cast<std::size_t>(steps) + 1) * g.file_mode_count() * 2 * 16;
  if (bytes.size() != expect) throw std::runtime_error("trajectory file: size does not match header");
  const int n2 = static_cast<int>(N) / 2;
  std::vector<SpectralField> snaps;
  snaps.reserve(static_cast<std::size_t>(steps) + 1);
  for (std::uint32_t n = 0; n <= steps; ++n) {
    SpectralField f(g, 2);
    for (int k1 = -n2 + 1; k1 <= n2; ++k1) {
      for (int k2 = -n2 + 1; k2 <= n2; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        for (int c = 0; c < 2; ++c) {
          const double re = get<double>(bytes, pos);
          const double im = get<double>(bytes, pos);
          f.mode(c, k1, k2) = cplx(re, im);
        }
      }
    }
    snaps.push_back(std::move(f));
  }
  return Trajectory(TimeGrid::from_step(dt, static_cast<int>(steps)), static_cast<Role>(role), std::move(snaps));
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& t) {
  const auto bytes = encode_trajectory(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_trajectory(bytes);
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

void write_report_csv(const std::filesystem::path& path, const StateRunReport& r) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "step,t,u_l2sq,u_grad_l2sq,Au_l2sq,A32u_l2sq,Av_L4_4,energy_residual\n";
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    out << n << ',' << format_double(r.t[n]) << ',' << format_double(r.u_l2sq[n]) << ','
        << format_double(r.u_grad_l2sq[n]) << ',' << format_double(r.Au_l2sq[n]) << ','
        << format_double(r.A32u_l2sq[n]) << ',' << format_double(r.Av_L4_4[n]) << ','
        << format_double(r.energy_residual[n]) << '\n';
  }
}

void write_history_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& h) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iter,J,stderr,grad_norm,residual,step,wall_time\n";
  for (const auto& rec : h) {
    out << rec.iter << ',' << format_double(rec.J) << ',' << format_double(rec.stderr_J) << ','
        << format_double(rec.grad_norm) << ',' << format_double(rec.residual) << ',' << format_double(rec.step)
        << ',' << format_double(rec.wall_time) << '\n';
  }
}

}  // namespace tgf
