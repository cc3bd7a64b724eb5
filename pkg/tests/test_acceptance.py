"""Acceptance gate: seven release criteria, one test each.

Every test pins end-to-end quantities (closed-form integrals, thresholds,
asymptotic constants, property suites) at fixed tolerances. The pytest -v
output gives one pass/fail line per criterion; each test also prints an
[ACCEPTANCE] line (visible with -s or on failure) naming the quantities it
pinned.
"""

import math

import numpy as np
import pytest

import hammerline as hl
from hardy_cases import CASES

from conftest import grid_times


def test_criterion_1_closed_form_kernel_functionals(space, system_c2,
                                                    problem_c2, report_c2):
    quad = hl.QuadratureConfig(tol=1e-12, rel_tol=1e-13)
    kern = problem_c2.kernel

    worst = 0.0
    for s in np.linspace(0.125, 8.0, 64):
        got = hl.eval_functional_raw(system_c2.lower,
                                     lambda t: float(kern.fn(t, s)),
                                     space, quad, kinks=(s,))
        worst = max(worst, abs(got - math.exp(-s)))
    assert worst <= 1e-8

    lower_int = report_c2.scalars["lower_profile_integral"]
    assert abs(lower_int - 1.0) <= 1e-8

    profile = hl.c3_bound_profile(problem_c2, r=1.0, quad=quad)
    modulus = profile.scalars["modulus_dominator_integral"]
    assert abs(modulus - 5.0) <= 1e-6

    upper_int = report_c2.scalars["upper_profile_integral"]
    assert upper_int <= math.exp(-1.0) + 1e-8

    print(f"[ACCEPTANCE] criterion 1: slice worst |diff| {worst:.3e}, "
          f"lower integral {lower_int:.12f}, modulus {modulus:.9f}, "
          f"upper integral {upper_int:.12f}")


def test_criterion_2_image_bound_profile_identity(space, problem_c2):
    quad = hl.QuadratureConfig(tol=1e-12, rel_tol=1e-13)
    profile = hl.c3_bound_profile(problem_c2, r=1.0, quad=quad)
    assert profile.ok

    def closed(t: float) -> float:
        return (2.0 * t - 3.0 + math.exp(-t) * (t + 3.0)) / (t + 1.0)

    worst = 0.0
    for t, value in zip(space.grid.t, profile.values):
        reference = 2.0 if math.isinf(t) else closed(t)
        worst = max(worst, abs(value - reference))
    assert worst <= 1e-7
    print(f"[ACCEPTANCE] criterion 2: profile worst |diff| {worst:.3e} "
          f"over {space.m} nodes")


def test_criterion_3_index_threshold_reproduction(report_c2):
    assert not hl.check_index_one(report_c2, 0.5).holds
    assert hl.check_index_one(report_c2, 0.6).holds
    lo, hi = hl.locate_index_one_flip(report_c2, 0.5, 0.6)
    assert 0.58 <= lo < hi <= 0.584
    reference = 1.0 / (math.e - 1.0)
    assert lo <= reference <= hi

    assert hl.check_index_zero(report_c2, 0.9).holds
    assert not hl.check_index_zero(report_c2, 1.1).holds
    print(f"[ACCEPTANCE] criterion 3: flip bracket [{lo:.6f}, {hi:.6f}] "
          f"around {reference:.6f}")


def test_criterion_4_window_certification(report_c2, report_c3):
    windows = hl.find_solution_windows(report_c2, rho_values=[0.7, 0.9])
    s1 = [w for w in windows if w.pattern == "S1"]
    assert len(s1) >= 1
    for w in s1:
        rho1, rho2 = w.radii
        assert rho2 > rho1 / 2.0

    assert report_c3.certified is False
    assert report_c3.entries["C5"].status == "fail"
    print(f"[ACCEPTANCE] criterion 4: {len(s1)} S1 window(s) at c=2; "
          f"C5 {report_c3.entries['C5'].status} at c=3")


def test_criterion_5_solver_oracle_equivalence(problem_c2, solution_c2,
                                               system_c2):
    assert solution_c2.converged
    assert solution_c2.residual <= 1e-8

    comparison, _ = hl.compare_with_oracle(problem_c2, solution_c2.u,
                                           T_max=20.0)
    assert comparison.max_rel_diff <= 1e-4

    alpha = hl.eval_functional(system_c2.cone, solution_c2.u)
    assert alpha >= -1e-10
    print(f"[ACCEPTANCE] criterion 5: residual {solution_c2.residual:.3e}, "
          f"oracle rel sup {comparison.max_rel_diff:.3e}, "
          f"cone value {alpha:.6f}")


def test_criterion_6_launch_asymptotics():
    g, R = 1.0, 1.0

    def rhs(t, y):
        return -g * R * R / (y + R) ** 2

    traj_fast = hl.ode_oracle(rhs, v0=2.0, T_max=1e4)
    slope = hl.asymptotic_slope(traj_fast).value
    v_inf = math.sqrt(2.0)
    assert abs(slope - v_inf) / v_inf <= 0.01

    v_s = math.sqrt(2.0 * g * R)
    traj_slow = hl.ode_oracle(rhs, v0=v_s, T_max=1e6)
    ratio = traj_slow.u_at(1e6) / 1e6 ** (2.0 / 3.0)
    constant = (1.5) ** (2.0 / 3.0) * (2.0 * g * R * R) ** (1.0 / 3.0)
    assert abs(ratio - constant) / constant <= 0.02
    assert abs(ratio - 1.65107) / 1.65107 <= 0.02

    drift_fast = hl.gravity_energy_drift(traj_fast, g, R, 2.0)
    drift_slow = hl.gravity_energy_drift(traj_slow, g, R, v_s)
    assert drift_fast <= 1e-7
    assert drift_slow <= 1e-7
    print(f"[ACCEPTANCE] criterion 6: slope {slope:.9f} (target {v_inf:.9f}), "
          f"two-thirds ratio {ratio:.6f} (target {constant:.6f}), "
          f"energy drift {max(drift_fast, drift_slow):.3e}")


def test_criterion_7_property_suites(space, system_c2, report_c2, report_L4,
                                     space_L4):
    # isometry, bit-exact on 1000 sample vectors
    rng = np.random.default_rng(7)
    for _ in range(1000):
        vec = rng.standard_normal(space.m)
        assert hl.lift(space, vec).norm() == float(np.max(np.abs(vec)))

    # superadditivity / homogeneity of the cone functional on 200 pairs
    props = hl.check_functional_properties(system_c2.cone, space,
                                           n_pairs=200, seed=11,
                                           tolerance=1e-10)
    assert props.passed
    assert props.p1_worst <= 1e-10
    assert props.p2_worst <= 1e-10
    assert props.p3_counterexamples == 0

    # growth-rate classifier on the labeled corpus
    hits = 0
    for case in CASES:
        rel = hl.classify_asymptotic(case.f, case.g, case.cmap, side=case.side)
        assert rel.tag == case.expected, case.name
        hits += 1
    assert hits == 20

    # compact-map round trips
    worst_rt = 0.0
    for cmap in (hl.CompactMap.half_line(a=0.0, L=1.0),
                 hl.CompactMap.full_line(L=1.0)):
        for x in np.linspace(-0.999, 0.999, 201):
            worst_rt = max(worst_rt,
                           abs(cmap.to_compact(cmap.from_compact(x)) - x))
    assert worst_rt <= 1e-12

    # scale invariance: the L=4 run certifies and reproduces the scalars
    # within 10x the base tolerances
    assert report_L4.certified
    for key in ("lower_profile_integral", "upper_profile_integral",
                "cone_of_forcing", "upper_of_forcing", "lower_of_forcing"):
        assert report_L4.scalars[key] == pytest.approx(
            report_c2.scalars[key], abs=1e-7), key
    lo, hi = hl.locate_index_one_flip(report_L4, 0.5, 0.6)
    assert 0.58 <= lo < hi <= 0.584

    print(f"[ACCEPTANCE] criterion 7: isometry 1000/1000, "
          f"P1 worst {props.p1_worst:.3e}, P2 worst {props.p2_worst:.3e}, "
          f"classifier {hits}/20, round trip {worst_rt:.3e}, "
          f"L=4 flip [{lo:.6f}, {hi:.6f}]")
