"""Kalman-style exact reductions, classical and structure-preserving.

Compressions use the Gram-matrix formula A' = (V^T V)^-1 V^T A V for a
rational basis V, which keeps every compressed system exactly rational (an
orthonormal basis would generally need irrational entries).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .blockmat import Partition
from .errors import DimensionMismatch, InclusionViolation, StructureViolation
from .observability import profile as obs_profile
from .observability import unobservable
from .reachability import coordinate_subspace
from .reachability import profile as reach_profile
from .reachability import reachable
from .subspace import Subspace
from .system import PosetCausalSystem, require_valid

__all__ = [
    "KalmanDecomposition",
    "kalman",
    "CompressedTriple",
    "generalized_reduce",
    "ReducedSystem",
    "poset_reduce",
    "moments_equal",
    "REDUCTION_VARIANTS",
]

REDUCTION_VARIANTS = ("primal", "dual_tilde", "dual_circ")


@dataclass(frozen=True)
class KalmanDecomposition:
    """The four classical Kalman subspaces of one system.

    ``reach_obs`` and ``unreach_unobs`` are computed along two independent
    routes (set difference and projection) which must agree. ``reach_obs`` and
    ``unreach_unobs`` need not be orthogonal to each other; all listed sum
    decompositions are exact.
    """

    reach_obs: Subspace
    reach_unobs: Subspace
    unreach_obs: Subspace
    unreach_unobs: Subspace


def kalman(sys: PosetCausalSystem) -> KalmanDecomposition:
    """Classical Kalman decomposition (ignores the poset structure)."""
    reach = reachable(sys)
    unobs = unobservable(sys)
    both = reach.intersect(unobs)
    reach_obs = reach.ominus(both)
    if not reach_obs.equals(unobs.complement().project_onto(reach)):
        raise StructureViolation("the two formulas for the reachable-observable part differ")
    unreach_unobs = unobs.ominus(both)
    if not unreach_unobs.equals(reach.complement().project_onto(unobs)):
        raise StructureViolation("the two formulas for the unreachable-unobservable part differ")
    return KalmanDecomposition(
        reach_obs=reach_obs,
        reach_unobs=both,
        unreach_obs=reach.sum(unobs).complement(),
        unreach_unobs=unreach_unobs,
    )


@dataclass(frozen=True)
class CompressedTriple:
    """Compression of (A, B, C) to a subspace, with its rational basis."""

    subspace: Subspace
    basis: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


def _compress_to(sys: PosetCausalSystem, basis: np.ndarray) -> tuple:
    gram_inv = la.inverse(la.mdot(basis.T, basis))
    lift = la.mdot(gram_inv, basis.T)
    a = la.mdot(lift, la.mdot(sys.A.entries, basis))
    b = la.mdot(lift, sys.B.entries)
    c = la.mdot(sys.C.entries, basis)
    return a, b, c


def _moments_match(sys: PosetCausalSystem, a, b, c, k_max: int) -> bool:
    lhs_state = sys.B.entries
    rhs_state = b
    for _ in range(k_max + 1):
        if not np.array_equal(la.mdot(sys.C.entries, lhs_state), la.mdot(c, rhs_state)):
            return False
        lhs_state = la.mdot(sys.A.entries, lhs_state)
        rhs_state = la.mdot(a, rhs_state)
    return True


def generalized_reduce(
    sys: PosetCausalSystem,
    inner_reach: Subspace,
    outer_reach: Subspace,
    inner_unobs: Subspace,
) -> CompressedTriple:
    """Compress to outer_reach minus (inner_reach intersect inner_unobs).

    Requires inner_reach <= reachable <= outer_reach and
    inner_unobs <= unobservable; the compressed triple reproduces every moment
    C A^k B, which is verified exactly before returning.
    """
    require_valid(sys)
    reach = reachable(sys)
    unobs = unobservable(sys)
    if not reach.contains(inner_reach):
        raise InclusionViolation("inner_reach is not contained in the reachable set")
    if not outer_reach.contains(reach):
        raise InclusionViolation("outer_reach does not contain the reachable set")
    if not unobs.contains(inner_unobs):
        raise InclusionViolation("inner_unobs is not contained in the unobservable set")
    target = outer_reach.ominus(inner_reach.intersect(inner_unobs))
    kal = kalman(sys)
    if not target.contains(kal.reach_obs):
        raise StructureViolation("reduction subspace misses the reachable-observable part")
    basis = target.basis
    a, b, c = _compress_to(sys, basis)
    horizon = sys.state_dim + target.dim - 1 if sys.state_dim + target.dim else 0
    if not _moments_match(sys, a, b, c, horizon):
        raise StructureViolation("compression failed to preserve the moments (internal bug)")
    return CompressedTriple(subspace=target, basis=basis, A=a, B=b, C=c)


@dataclass(frozen=True)
class ReducedSystem:
    """A structure-preserving reduction onto a block-decomposed subspace.

    ``basis`` stacks the per-block bases in node order, so it is block
    diagonal as a map from the reduced to the original state space.
    """

    variant: str
    subspace: Subspace
    block_dims: tuple
    basis: np.ndarray
    source_partition: Partition
    system: PosetCausalSystem
    moment_horizon: int
    optimal_hypothesis: bool

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    def block_basis(self, j: int) -> np.ndarray:
        """Basis of block j's retained subspace in that block's local coordinates."""
        col0 = sum(self.block_dims[: j - 1])
        cols = self.basis[:, col0 : col0 + self.block_dims[j - 1]]
        rows = self.source_partition.block_range(j)
        return cols[rows.start : rows.stop, :]


def poset_reduce(sys: PosetCausalSystem, variant: str = "primal") -> ReducedSystem:
    """Compress to a structured subspace while preserving pattern and moments.

    Blockwise subspace per variant (reachability bounds R*, unobservability
    bounds N* of the profiles):

    * ``primal``:     ceiling_j of R minus (independent_j of R cap floor_j of N)
    * ``dual_tilde``: block complement of N floor_j, minus the intersection of
      the block complements of N independent_j and R ceiling_j
    * ``dual_circ``:  same with the complement of N ceiling_j in the
      intersection instead of the N independent complement

    The dual variants are the primal construction applied to the dual system,
    rewritten through the complement identities, so all three preserve moments;
    this is verified exactly. The reduced system lives over the same poset.
    """
    require_valid(sys)
    if variant not in REDUCTION_VARIANTS:
        raise ValueError(f"variant must be one of {REDUCTION_VARIANTS}")
    rp = reach_profile(sys)
    op = obs_profile(sys)
    poset = sys.poset
    n = sys.n
    blocks = {j: coordinate_subspace(n, (j,)) for j in poset.nodes}

    per_block = {}
    for j in poset.nodes:
        if variant == "primal":
            lead = rp.node_ceiling[j]
            cut = rp.node_independent[j].intersect(op.node_floor[j])
        elif variant == "dual_tilde":
            lead = blocks[j].ominus(op.node_floor[j])
            cut = blocks[j].ominus(op.node_independent[j]).intersect(
                blocks[j].ominus(rp.node_ceiling[j])
            )
        else:  # dual_circ
            lead = blocks[j].ominus(op.node_floor[j])
            cut = blocks[j].ominus(op.node_ceiling[j]).intersect(
                blocks[j].ominus(rp.node_ceiling[j])
            )
        per_block[j] = lead.ominus(cut)

    subspace = Subspace.zero(n.total)
    bases = []
    dims = []
    for j in poset.nodes:
        subspace = subspace.sum(per_block[j])
        bases.append(per_block[j].basis)
        dims.append(per_block[j].dim)
    basis = np.hstack(bases) if bases else la.zeros(n.total, 0)

    a, b, c = _compress_to(sys, basis) if basis.shape[1] else (
        la.zeros(0, 0),
        la.zeros(0, sys.input_dim),
        la.zeros(sys.output_dim, 0),
    )
    reduced = PosetCausalSystem(
        poset=poset,
        n=tuple(dims),
        m=sys.m,
        r=sys.r,
        A=a,
        B=b,
        C=c,
        D=sys.D.entries,
    )
    require_valid(reduced)
    horizon = sys.state_dim + reduced.state_dim - 1 if sys.state_dim + reduced.state_dim else 0
    if not moments_equal(sys, reduced, horizon):
        raise StructureViolation("structured reduction failed to preserve the moments")

    kal = kalman(sys)
    hypothesis = all(
        subspace.coordinate_project(n, (j,)).equals(kal.reach_obs.coordinate_project(n, (j,)))
        for j in poset.nodes
    )
    return ReducedSystem(
        variant=variant,
        subspace=subspace,
        block_dims=tuple(dims),
        basis=basis,
        source_partition=n,
        system=reduced,
        moment_horizon=horizon,
        optimal_hypothesis=hypothesis,
    )


def moments_equal(sys1: PosetCausalSystem, sys2: PosetCausalSystem, k_max: int | None = None) -> bool:
    """Exact equality of C A^k B for k = 0..k_max (default n1 + n2 - 1)."""
    if sys1.input_dim != sys2.input_dim or sys1.output_dim != sys2.output_dim:
        raise DimensionMismatch("systems must share input and output dimensions")
    if k_max is None:
        k_max = sys1.state_dim + sys2.state_dim - 1
        k_max = max(k_max, 0)
    lhs_state = sys1.B.entries
    rhs_state = sys2.B.entries
    for _ in range(k_max + 1):
        lhs = la.mdot(sys1.C.entries, lhs_state)
        rhs = la.mdot(sys2.C.entries, rhs_state)
        if not (lhs.shape == rhs.shape and all(x == y for x, y in zip(lhs.flat, rhs.flat))):
            return False
        lhs_state = la.mdot(sys1.A.entries, lhs_state)
        rhs_state = la.mdot(sys2.A.entries, rhs_state)
    return True
