import math

import numpy as np
import pytest
import scipy.linalg

from conftest import random_poset, random_system
from posetsys import _linalg as la
from posetsys.blockmat import BlockMatrix, is_incident
from posetsys.corpus import load_corpus_system
from posetsys.errors import DimensionMismatch, NonFinite
from posetsys.reachability import reachable
from posetsys.sim import (
    InputSignal,
    expm,
    simulate,
    verify_trajectory_decomposition,
)
from posetsys.system import derived


def test_expm_zero_and_diagonal():
    assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))
    d = np.diag([1.0, -2.0, 0.5])
    assert np.allclose(expm(d), np.diag(np.exp([1.0, -2.0, 0.5])), rtol=1e-13)


def test_expm_nilpotent_exact():
    n = np.array([[0.0, 3.0], [0.0, 0.0]])
    assert np.allclose(expm(n), np.eye(2) + n, rtol=0, atol=1e-15)


def test_expm_rotation_closed_form():
    t = 1.234
    m = np.array([[0.0, -t], [t, 0.0]])
    want = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    assert np.allclose(expm(m), want, rtol=1e-12)


def test_expm_matches_scipy(rng):
    for _ in range(10):
        n = rng.randint(1, 6)
        m = np.array([[rng.uniform(-3, 3) for _ in range(n)] for _ in range(n)])
        ours = expm(m)
        ref = scipy.linalg.expm(m)
        assert np.allclose(ours, ref, rtol=1e-10, atol=1e-12)


def test_expm_semigroup(rng):
    for _ in range(5):
        n = rng.randint(1, 4)
        m = np.array([[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)])
        s, t = rng.uniform(0.1, 1.5), rng.uniform(0.1, 1.5)
        lhs = expm(m * (s + t))
        rhs = expm(m * s) @ expm(m * t)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_expm_rejects_nonfinite():
    with pytest.raises(NonFinite):
        expm(np.array([[np.nan, 0.0], [0.0, 0.0]]))


def test_expm_of_structured_matrix_keeps_pattern(rng):
    for _ in range(8):
        poset = random_poset(rng, rng.randint(1, 5))
        sys = random_system(rng, poset)
        e = expm(la.mat_to_float(sys.A.entries) * 0.37)
        cleaned = la.fmat([[0 if abs(v) < 1e-12 else 1 for v in row] for row in e])
        assert is_incident(BlockMatrix(cleaned, sys.n, sys.n), poset)


def test_simulate_zero_everything():
    sys = load_corpus_system("exLargeEx")
    u = InputSignal(step=0.1, values=np.zeros((5, sys.input_dim)))
    traj = simulate(sys, None, u)
    assert np.allclose(traj.states, 0) and np.allclose(traj.outputs, 0)
    assert traj.states.shape == (6, sys.state_dim)


def test_simulate_pure_integrator():
    from posetsys.poset import build_poset
    from posetsys.system import PosetCausalSystem

    poset = build_poset(1, [])
    sys = PosetCausalSystem(
        poset=poset, n=(2,), m=(2,), r=(2,),
        A=la.zeros(2, 2), B=la.eye(2), C=la.eye(2), D=la.zeros(2, 2),
    )
    h, steps, c = 0.05, 40, np.array([0.3, -0.7])
    u = InputSignal(step=h, values=np.tile(c, (steps, 1)))
    traj = simulate(sys, None, u)
    assert np.allclose(traj.states[-1], steps * h * c, rtol=1e-12)


def test_simulate_dimension_checks():
    sys = load_corpus_system("exLargeEx")
    with pytest.raises(DimensionMismatch):
        simulate(sys, None, InputSignal(step=0.1, values=np.zeros((4, 3))))
    with pytest.raises(DimensionMismatch):
        simulate(sys, [1.0], InputSignal(step=0.1, values=np.zeros((4, sys.input_dim))))


def test_simulate_derived_models():
    sys = load_corpus_system("exLargeEx")
    down = derived(sys, "downstream", 1)
    u = InputSignal(step=0.01, values=np.ones((20, down.input_dim)))
    traj = simulate(down, None, u)
    assert traj.states.shape == (21, down.state_dim)


def test_final_state_lies_in_reachable_space(rng):
    sys = load_corpus_system("exLargeEx")
    space = reachable(sys)
    basis = la.mat_to_float(space.basis)
    q, _ = np.linalg.qr(basis)
    u = InputSignal(
        step=0.01,
        values=np.array([[rng.uniform(-1, 1) for _ in range(sys.input_dim)] for _ in range(100)]),
    )
    traj = simulate(sys, None, u)
    x = traj.states[-1]
    residual = x - q @ (q.T @ x)
    assert np.max(np.abs(residual)) < 1e-8


def test_trajectory_decomposition_zero_case():
    sys = load_corpus_system("exLargeEx")
    u = InputSignal(step=0.01, values=np.zeros((10, sys.input_dim)))
    rep = verify_trajectory_decomposition(sys, None, u, tolerance=1e-14)
    assert rep.ok, rep.describe()


def test_trajectory_decomposition_randomized(rng):
    for _ in range(5):
        poset = random_poset(rng, rng.randint(1, 4))
        sys = random_system(rng, poset, allow_zero_blocks=False)
        u = InputSignal(
            step=0.01,
            values=np.array(
                [[rng.uniform(-1, 1) for _ in range(sys.input_dim)] for _ in range(60)]
            ),
        )
        x0 = [rng.uniform(-1, 1) for _ in range(sys.state_dim)]
        rep = verify_trajectory_decomposition(sys, x0, u, tolerance=1e-8)
        assert rep.ok, rep.describe()
