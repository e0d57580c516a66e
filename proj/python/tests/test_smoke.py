import json
import math

import numpy as np
import pytest

import tgf

FLUID = {"nu": 0.1, "alpha1": 0.2, "alpha2": 0.1872983346207417, "beta": 0.1}


def config(**extra):
    doc = {
        "grid": {"L": 2 * math.pi, "N": 8},
        "time": {"T": 0.2, "steps": 40},
        "fluid": FLUID,
    }
    doc.update(extra)
    return tgf.parse_config(json.dumps(doc))


def test_field_array_round_trip():
    grid = tgf.TorusGrid(2 * math.pi, 8)
    v = tgf.random_solenoidal(grid, 3, 1)
    arr = v.to_array()
    assert arr.shape == (2, 8, 8)
    back = tgf.SpectralField.from_array(grid, arr)
    assert np.array_equal(back.to_array(), arr)
    assert v.divergence_residual() < 1e-12


def test_operator_identities():
    grid = tgf.TorusGrid(2 * math.pi, 8)
    u = tgf.random_solenoidal(grid, 3, 2)
    v = tgf.random_solenoidal(grid, 3, 3)
    assert abs(tgf.trilinear_b(u, v, v)) < 1e-12
    a4 = tgf.rivlin_l4_pow4(v)
    assert tgf.inner(tgf.op_K(v), v) == pytest.approx(0.5 * a4, rel=1e-10)


def test_state_and_duality():
    cfg = config(noise={"sigma": 0.05, "master_seed": 3},
                 initial={"kind": "random", "amplitude": 0.4, "seed": 1, "band": 3})
    z = tgf.noise_trajectory(cfg.noise, cfg.fluid.alpha1, cfg.grid, cfg.time, 0)
    f = tgf.Trajectory(cfg.grid, cfg.time, tgf.Role.control_f)
    sol = tgf.solve_state(tgf.initial_state(cfg), f, z, cfg.fluid, cfg.noise.theta)
    assert len(sol.u) == 41
    assert len(sol.report.energy_residual) == 41
    v = tgf.reconstruct_v(sol.u, z)
    psi = tgf.Trajectory.from_array(cfg.grid, cfg.time, tgf.Role.control_f, v.to_array())
    d = tgf.duality_residual(v, cfg.fluid, psi, psi)
    assert d.rel_residual < 1e-3


def test_optimizer_decreases_cost():
    cfg = config(control={"lambda": 1e-3, "synthetic_amplitude": 1.0},
                 initial={"kind": "random", "amplitude": 0.5, "seed": 3, "band": 2},
                 optimizer={"max_iters": 3})
    problem = tgf.build_problem(cfg)
    f0 = tgf.Trajectory(cfg.grid, cfg.time, tgf.Role.control_f)
    state = tgf.optimize(problem, f0, cfg.optimizer)
    js = [r.J for r in state.history]
    assert len(js) == 4
    assert all(b <= a for a, b in zip(js, js[1:]))


def test_trajectory_file_round_trip(tmp_path):
    cfg = config()
    f = tgf.synthetic_control(config(control={"synthetic_amplitude": 1.0}))
    path = tmp_path / "f.tgf"
    tgf.write_trajectory(path, f)
    back = tgf.read_trajectory(path)
    assert np.array_equal(back.to_array(), f.to_array())
    assert back.role == tgf.Role.control_f
    assert cfg.grid == back.grid


def test_config_error_names_key():
    with pytest.raises(tgf.ConfigError, match="noise.sigma"):
        config(noise={"sigma": -1.0})


def test_invariant_suite():
    results = tgf.check_invariants(config(), 3)
    assert all(r.passed for r in results)
