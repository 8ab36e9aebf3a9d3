"""Floating-point trajectory simulation and trajectory-decomposition checks.

Inputs are piecewise constant on a uniform grid, so each step is propagated
exactly (up to rounding) through one matrix exponential of the augmented
matrix [[A, B], [0, 0]]; no ODE-solver truncation error enters the identity
checks. Exact rational system matrices are converted to double precision at
this boundary only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .errors import DimensionMismatch, NonFinite
from .poset import derived_set
from .system import DerivedSystem, PosetCausalSystem, derived, require_valid

__all__ = [
    "expm",
    "InputSignal",
    "Trajectory",
    "simulate",
    "DecompositionReport",
    "verify_trajectory_decomposition",
]

# [13/13] Pade coefficients and the matching scaling threshold
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a degree-13 Pade core."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix exponential needs a square matrix")
    if a.size and not np.isfinite(a).all():
        raise NonFinite("matrix has NaN or infinite entries")
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    norm = np.linalg.norm(a, 1)
    squarings = 0
    if norm > _THETA13:
        squarings = max(0, int(math.ceil(math.log2(norm / _THETA13))))
        a = a / (2.0**squarings)
    ident = np.eye(n)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    b = _PADE13
    u = a @ (
        a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
        + b[7] * a6
        + b[5] * a4
        + b[3] * a2
        + b[1] * ident
    )
    v = (
        a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
        + b[6] * a6
        + b[4] * a4
        + b[2] * a2
        + b[0] * ident
    )
    result = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        result = result @ result
    return result


@dataclass(frozen=True)
class InputSignal:
    """Piecewise-constant input: values[k] is held on [k*step, (k+1)*step)."""

    step: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.ndim != 2:
            raise DimensionMismatch("input values must form a (steps, width) array")
        object.__setattr__(self, "values", vals)
        if self.step <= 0:
            raise DimensionMismatch("step size must be positive")

    @property
    def steps(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def restrict(self, columns) -> "InputSignal":
        cols = list(columns)
        picked = (
            self.values[:, cols] if cols else np.zeros((self.values.shape[0], 0))
        )
        return InputSignal(step=self.step, values=picked)


@dataclass(frozen=True)
class Trajectory:
    """Grid samples of one simulation; row k is time k*step.

    The output at the final grid point holds the last input value.
    """

    times: np.ndarray
    states: np.ndarray
    outputs: np.ndarray


def _float_matrices(model):
    if isinstance(model, PosetCausalSystem):
        return (
            la.mat_to_float(model.A.entries),
            la.mat_to_float(model.B.entries),
            la.mat_to_float(model.C.entries),
            la.mat_to_float(model.D.entries),
        )
    if isinstance(model, DerivedSystem):
        return tuple(la.mat_to_float(getattr(model, k)) for k in "ABCD")
    raise DimensionMismatch(f"cannot simulate object of type {type(model).__name__}")


def simulate(model, x0, u: InputSignal) -> Trajectory:
    """Propagate the model exactly per step under the piecewise-constant input."""
    a, b, c, d = _float_matrices(model)
    n = a.shape[0]
    m = b.shape[1]
    if u.width != m:
        raise DimensionMismatch(f"input has width {u.width}, model expects {m}")
    if x0 is None:
        state = np.zeros(n)
    else:
        state = np.asarray(
            [float(x) for x in (x0.flat if isinstance(x0, np.ndarray) else x0)], dtype=float
        )
    if state.shape != (n,):
        raise DimensionMismatch(f"initial state has {state.size} entries, model expects {n}")
    steps = u.steps
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = a
    aug[:n, n:] = b
    big = expm(aug * u.step)
    stepper = big[:n, :n]
    in_gain = big[:n, n:]
    states = np.zeros((steps + 1, n))
    outputs = np.zeros((steps + 1, c.shape[0]))
    states[0] = state
    for k in range(steps):
        uk = u.values[k]
        outputs[k] = c @ states[k] + d @ uk
        states[k + 1] = stepper @ states[k] + in_gain @ uk
    last = u.values[steps - 1] if steps else np.zeros(m)
    outputs[steps] = c @ states[steps] + d @ last
    times = np.arange(steps + 1) * u.step
    return Trajectory(times=times, states=states, outputs=outputs)


@dataclass(frozen=True)
class DecompositionReport:
    """Max deviations of the trajectory-decomposition identities on the grid."""

    deviations: dict = field(default_factory=dict)
    tolerance: float = 0.0

    @property
    def ok(self) -> bool:
        return all(v <= self.tolerance for v in self.deviations.values())

    def describe(self) -> str:
        lines = [
            f"{name}: max deviation {value:.3e} ({'ok' if value <= self.tolerance else 'FAIL'})"
            for name, value in sorted(self.deviations.items())
        ]
        lines.append(f"tolerance {self.tolerance:.3e}")
        return "\n".join(lines)


def _restriction_indices(partition, nodes):
    return [k for j in sorted(nodes) for k in partition.block_range(j)]


def verify_trajectory_decomposition(
    sys: PosetCausalSystem, x0, u: InputSignal, tolerance: float = 1e-8
) -> DecompositionReport:
    """Check that the global trajectory decomposes through the derived models.

    Three families of identities are evaluated at every grid point: the global
    state/output as a sum of embedded downstream trajectories, the agreement of
    each downstream trajectory's own-node component with the local model, and
    the per-node split of the global trajectory into the local contribution
    plus strictly-upstream downstream contributions. Upstream models are also
    checked to be restrictions of the global trajectory.
    """
    require_valid(sys)
    poset = sys.poset
    n, m, r = sys.n, sys.m, sys.r
    x0vec = (
        np.zeros(n.total)
        if x0 is None
        else np.asarray([float(v) for v in (x0.flat if isinstance(x0, np.ndarray) else x0)])
    )
    if x0vec.shape != (n.total,):
        raise DimensionMismatch("initial state has the wrong dimension")
    if u.width != m.total:
        raise DimensionMismatch("input signal has the wrong width")

    global_traj = simulate(sys, x0vec, u)
    down = {i: derived(sys, "downstream", i) for i in poset.nodes}
    local = {i: derived(sys, "local", i) for i in poset.nodes}

    down_embedded = {}
    down_local_init = {}
    for i in poset.nodes:
        sub = down[i]
        ui = u.restrict(_restriction_indices(m, (i,)))
        down_nodes = sub.state_nodes
        seed = np.zeros(sum(n.size(j) for j in down_nodes))
        offset = 0
        for j in down_nodes:
            if j == i:
                seed[offset : offset + n.size(j)] = x0vec[list(n.block_range(i))]
            offset += n.size(j)
        traj = simulate(sub, seed, ui)
        emb_x = la.mat_to_float(sub.state_embedding())
        emb_y = la.mat_to_float(sub.output_embedding())
        down_embedded[i] = (traj.states @ emb_x.T, traj.outputs @ emb_y.T)
        down_local_init[i] = traj

    sum_states = sum(down_embedded[i][0] for i in poset.nodes)
    sum_outputs = sum(down_embedded[i][1] for i in poset.nodes)
    dev_sum_x = float(np.max(np.abs(global_traj.states - sum_states), initial=0.0))
    dev_sum_y = float(np.max(np.abs(global_traj.outputs - sum_outputs), initial=0.0))

    dev_local_x = 0.0
    dev_local_y = 0.0
    for i in poset.nodes:
        sub = down[i]
        ui = u.restrict(_restriction_indices(m, (i,)))
        full_seed = x0vec[_restriction_indices(n, sub.state_nodes)]
        traj_full = simulate(sub, full_seed, ui)
        loc_traj = simulate(local[i], x0vec[list(n.block_range(i))], ui)
        pos = 0
        for j in sub.state_nodes:
            if j == i:
                break
            pos += n.size(j)
        comp_x = traj_full.states[:, pos : pos + n.size(i)]
        ypos = 0
        for j in sub.output_nodes:
            if j == i:
                break
            ypos += r.size(j)
        comp_y = traj_full.outputs[:, ypos : ypos + r.size(i)]
        dev_local_x = max(dev_local_x, float(np.max(np.abs(comp_x - loc_traj.states), initial=0.0)))
        dev_local_y = max(dev_local_y, float(np.max(np.abs(comp_y - loc_traj.outputs), initial=0.0)))

    dev_split_x = 0.0
    dev_split_y = 0.0
    for i in poset.nodes:
        ui = u.restrict(_restriction_indices(m, (i,)))
        loc_traj = simulate(local[i], x0vec[list(n.block_range(i))], ui)
        acc_x = loc_traj.states.copy()
        acc_y = loc_traj.outputs.copy()
        for j in sorted(derived_set(poset, {i}, "strict_up")):
            contrib_x, contrib_y = down_embedded[j]
            acc_x = acc_x + contrib_x[:, list(n.block_range(i))]
            acc_y = acc_y + contrib_y[:, list(r.block_range(i))]
        dev_split_x = max(
            dev_split_x,
            float(np.max(np.abs(global_traj.states[:, list(n.block_range(i))] - acc_x), initial=0.0)),
        )
        dev_split_y = max(
            dev_split_y,
            float(np.max(np.abs(global_traj.outputs[:, list(r.block_range(i))] - acc_y), initial=0.0)),
        )

    dev_up = 0.0
    for i in poset.nodes:
        sub = derived(sys, "upstream", i)
        cols = _restriction_indices(m, sub.input_nodes)
        seed = x0vec[_restriction_indices(n, sub.state_nodes)]
        traj = simulate(sub, seed, u.restrict(cols))
        restr = global_traj.states[:, _restriction_indices(n, sub.state_nodes)]
        dev_up = max(dev_up, float(np.max(np.abs(traj.states - restr), initial=0.0)))
        yglob = global_traj.outputs[:, list(r.block_range(i))]
        dev_up = max(dev_up, float(np.max(np.abs(traj.outputs - yglob), initial=0.0)))

    return DecompositionReport(
        deviations={
            "downstream_sum_states": dev_sum_x,
            "downstream_sum_outputs": dev_sum_y,
            "downstream_local_component_states": dev_local_x,
            "downstream_local_component_outputs": dev_local_y,
            "per_node_split_states": dev_split_x,
            "per_node_split_outputs": dev_split_y,
            "upstream_restriction": dev_up,
        },
        tolerance=tolerance,
    )
