#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "tgf/io.hpp"
#include "tgf/random_fields.hpp"

namespace {

const std::string kBase =
    R"("grid": {"L": 6.283185307179586, "N": 8}, "time": {"T": 0.5, "steps": 10},
       "fluid": {"nu": 0.1, "alpha1": 0.2, "alpha2": 0.1872983346207417, "beta": 0.1})";

std::string config_error_key(const std::string& text) {
  try {
    (void)tgf::parse_config(text);
  } catch (const tgf::ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

tgf::Trajectory sample_trajectory() {
  const tgf::TorusGrid g(3.0, 8);
  const tgf::TimeGrid tg(0.3, 3);
  tgf::Trajectory t(g, tg, tgf::Role::adjoint_p);
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = tgf::random_solenoidal(g, 3, 60 + n);
  return t;
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("minimal config parses with defaults") {
    const tgf::RunConfig c = tgf::parse_config("{" + kBase + "}");
    CHECK(c.grid.modes() == 8);
    CHECK(c.time.steps() == 10);
    CHECK(c.noise.sigma == 0.0);
    CHECK(c.lambda == 1.0);
    CHECK(c.samples == 1);
    CHECK(c.optimizer.max_iters == 200);
  }

  TEST_CASE("config errors name the offending key") {
    CHECK(config_error_key("{}") == "grid");
    CHECK(config_error_key("{" + kBase + R"(, "noise": {"sigma": -1})" + "}") == "noise.sigma");
    CHECK(config_error_key("{" + kBase + R"(, "noise": {"s": 2.0})" + "}") == "noise.s");
    CHECK(config_error_key("{" + kBase + R"(, "control": {"lambda": 0})" + "}") == "control.lambda");
    CHECK(config_error_key("{" + kBase + R"(, "control": {"samples": 2.5})" + "}") == "control.samples");
    CHECK(config_error_key("{" + kBase + R"(, "extra": 1)" + "}") == "extra");
    CHECK(config_error_key("{" + kBase + R"(, "noise": {"sigmaa": 1})" + "}") == "noise.sigmaa");
    CHECK(config_error_key(R"({"grid": {"L": 1, "N": 7}, "time": {"T": 1, "steps": 1},
                              "fluid": {"nu": 0, "alpha1": 0, "alpha2": 0, "beta": 0}})") == "grid.N");
    CHECK(config_error_key(R"({"grid": {"L": 1, "N": 8}, "time": {"T": 1, "steps": 1},
                              "fluid": {"nu": 0.1, "alpha1": 0.2, "alpha2": 1.0, "beta": 0.1}})") == "fluid.alpha2");
    CHECK(config_error_key("{not json") == "<document>");
  }

  TEST_CASE("c_hat raises theta above the admissible bound") {
    const tgf::RunConfig c =
        tgf::parse_config("{" + kBase + R"(, "noise": {"sigma": 3.0, "theta": 0.01, "c_hat": 0.5})" + "}");
    CHECK(c.noise.theta > tgf::min_admissible_theta(c.noise, c.grid, 0.5));
  }

  TEST_CASE("trajectory files round trip bit for bit") {
    const tgf::Trajectory t = sample_trajectory();
    const std::vector<unsigned char> bytes = tgf::encode_trajectory(t);
    CHECK(bytes.size() == tgf::kTrajectoryHeaderBytes + t.size() * (8 * 8 - 1) * 4 * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "TGF3");
    const tgf::Trajectory back = tgf::decode_trajectory(bytes);
    CHECK(back == t);
    CHECK(back.role() == tgf::Role::adjoint_p);

    const auto path = std::filesystem::temp_directory_path() / "tgf_unit_roundtrip.tgf";
    tgf::write_trajectory(path, t);
    CHECK(tgf::read_trajectory(path) == t);
    std::filesystem::remove(path);
  }

  TEST_CASE("malformed trajectory files are rejected") {
    std::vector<unsigned char> bytes = tgf::encode_trajectory(sample_trajectory());
    std::vector<unsigned char> bad = bytes;
    bad[4] = 2;  // version
    CHECK_THROWS(tgf::decode_trajectory(bad));
    bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS(tgf::decode_trajectory(bad));
    bad = bytes;
    bad.pop_back();
    CHECK_THROWS(tgf::decode_trajectory(bad));
    bad = bytes;
    bad[36] = 42;  // role
    CHECK_THROWS(tgf::decode_trajectory(bad));
  }

  TEST_CASE("shortest double formatting round trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
      CHECK(std::stod(tgf::format_double(x)) == x);
    }
    CHECK(tgf::format_double(0.1) == "0.1");
  }

  TEST_CASE("CSV writers emit the documented columns") {
    const auto dir = std::filesystem::temp_directory_path();
    tgf::StateRunReport r;
    r.t = {0.0};
    r.u_l2sq = r.u_grad_l2sq = r.Au_l2sq = r.A32u_l2sq = r.Av_L4_4 = r.energy_residual = {1.0};
    tgf::write_report_csv(dir / "tgf_unit_report.csv", r);
    std::ifstream in(dir / "tgf_unit_report.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,t,u_l2sq,u_grad_l2sq,Au_l2sq,A32u_l2sq,Av_L4_4,energy_residual");
    tgf::write_history_csv(dir / "tgf_unit_history.csv", {tgf::IterationRecord{}});
    std::ifstream h(dir / "tgf_unit_history.csv");
    std::getline(h, header);
    CHECK(header == "iter,J,stderr,grad_norm,residual,step,wall_time");
  }

  TEST_CASE("synthetic target and initial states") {
    tgf::RunConfig c = tgf::parse_config(
        "{" + kBase + R"(, "control": {"synthetic_amplitude": 1.0}, "initial": {"kind": "shear", "amplitude": 0.4})" +
        "}");
    const tgf::SpectralField v0 = tgf::initial_state(c);
    CHECK(std::abs(v0.mode(0, 0, 1) - tgf::cplx(0.0, -0.2)) < 1e-15);
    const tgf::Trajectory f = tgf::synthetic_control(c);
    CHECK(f[f.size() - 1].max_abs() < 1e-15 * f[0].max_abs() + 1e-15);
    const tgf::Trajectory vd = tgf::build_target(c);
    CHECK(vd.role() == tgf::Role::target_vd);
    CHECK(vd.all_finite());
  }
}
