"""Unobservable subspaces, their structured bounds, and the dual route.

Everything mirrors the reachability side through the dual system: the
upstream model at node i yields the states indistinguishable from zero when
only output i is watched. Structured bounds:

* ``independent`` - block intersections of projected indistinguishable sets
  (independently observable <=> equals {0}),
* ``floor``       - the largest structured subspace inside the unobservable
  set (weakly downstream observable <=> equals {0}),
* ``ceiling``     - the smallest structured subspace containing it.

``profile`` computes these directly; ``profile_via_duality`` recomputes them
from the reachability profile of the dual system. The two must agree exactly,
which is the strongest self-check this package has.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureViolation
from .poset import derived_set
from .reachability import coordinate_subspace, ctrb_matrix
from .reachability import profile as reach_profile
from .subspace import Subspace, kernel
from .system import PosetCausalSystem, derived, dual_system, require_valid

__all__ = [
    "ObservabilityProfile",
    "obsv_matrix",
    "unobservable",
    "upstream_indistinguishable",
    "profile",
    "profile_via_duality",
]


def obsv_matrix(c: np.ndarray, a: np.ndarray) -> np.ndarray:
    """[C; CA; ...; C A^(n-1)], the transposed controllability construction."""
    return ctrb_matrix(a.T, c.T).T


def unobservable(sys: PosetCausalSystem) -> Subspace:
    """Kernel of the observability matrix of the global model."""
    return kernel(obsv_matrix(sys.C.entries, sys.A.entries))


def upstream_indistinguishable(sys: PosetCausalSystem, i: int) -> Subspace:
    """States of the upstream model at i invisible in output i, globally embedded."""
    sub = derived(sys, "upstream", i)
    local = kernel(obsv_matrix(sub.C, sub.A))
    return local.apply(sub.state_embedding())


@dataclass(frozen=True)
class ObservabilityProfile:
    """All observability subspaces of one system, in global coordinates.

    ``confined[(i, j)]`` intersects ``upstream[i]`` with coordinate block j and
    ``projected[(i, j)]`` projects it there (for j in the up-set of i).
    """

    unobservable: Subspace
    upstream: dict
    confined: dict
    projected: dict
    node_independent: dict
    node_floor: dict
    node_ceiling: dict
    independent: Subspace
    floor: Subspace
    ceiling: Subspace
    observable: bool
    independently_observable: bool
    weakly_downstream_observable: bool
    weakly_locally_observable: bool

    def equals(self, other: "ObservabilityProfile") -> bool:
        scalar = (
            self.observable == other.observable
            and self.independently_observable == other.independently_observable
            and self.weakly_downstream_observable == other.weakly_downstream_observable
            and self.weakly_locally_observable == other.weakly_locally_observable
        )
        return (
            scalar
            and self.unobservable.equals(other.unobservable)
            and _dict_equal(self.upstream, other.upstream)
            and _dict_equal(self.confined, other.confined)
            and _dict_equal(self.projected, other.projected)
            and _dict_equal(self.node_independent, other.node_independent)
            and _dict_equal(self.node_floor, other.node_floor)
            and _dict_equal(self.node_ceiling, other.node_ceiling)
            and self.independent.equals(other.independent)
            and self.floor.equals(other.floor)
            and self.ceiling.equals(other.ceiling)
        )


def _dict_equal(a: dict, b: dict) -> bool:
    return a.keys() == b.keys() and all(a[k].equals(b[k]) for k in a)


def profile(sys: PosetCausalSystem) -> ObservabilityProfile:
    """Compute every observability subspace and flag by direct kernel computations."""
    require_valid(sys)
    poset = sys.poset
    n = sys.n
    total = n.total
    unobs = unobservable(sys)
    upstream = {i: upstream_indistinguishable(sys, i) for i in poset.nodes}

    blocks = {j: coordinate_subspace(n, (j,)) for j in poset.nodes}
    confined = {}
    projected = {}
    for i in poset.nodes:
        for j in sorted(derived_set(poset, {i}, "up")):
            confined[(i, j)] = upstream[i].intersect(blocks[j])
            projected[(i, j)] = upstream[i].coordinate_project(n, (j,))

    node_floor = {}
    node_independent = {}
    node_ceiling = {}
    for j in poset.nodes:
        downs = sorted(derived_set(poset, {j}, "down"))
        floor_j = None
        indep_j = None
        for i in downs:
            floor_j = confined[(i, j)] if floor_j is None else floor_j.intersect(confined[(i, j)])
            indep_j = projected[(i, j)] if indep_j is None else indep_j.intersect(projected[(i, j)])
        node_floor[j] = floor_j
        node_independent[j] = indep_j
        node_ceiling[j] = unobs.coordinate_project(n, (j,))
        if not floor_j.equals(blocks[j].intersect(unobs)):
            raise StructureViolation(
                f"floor at node {j} disagrees with the confined unobservable set (internal bug)"
            )

    cut = None
    for i in poset.nodes:
        rest = [j for j in poset.nodes if j not in derived_set(poset, {i}, "up")]
        piece = upstream[i].sum(coordinate_subspace(n, rest))
        cut = piece if cut is None else cut.intersect(piece)
    if not cut.equals(unobs):
        raise StructureViolation(
            "unobservable set is not the intersection of the embedded upstream sets (internal bug)"
        )

    floor = _block_sum(node_floor, total)
    independent = _block_sum(node_independent, total)
    ceiling = _block_sum(node_ceiling, total)
    wlo = all(confined[(i, i)].is_zero() for i in poset.nodes)
    return ObservabilityProfile(
        unobservable=unobs,
        upstream=upstream,
        confined=confined,
        projected=projected,
        node_independent=node_independent,
        node_floor=node_floor,
        node_ceiling=node_ceiling,
        independent=independent,
        floor=floor,
        ceiling=ceiling,
        observable=unobs.is_zero(),
        independently_observable=independent.is_zero(),
        weakly_downstream_observable=floor.is_zero(),
        weakly_locally_observable=wlo,
    )


def _block_sum(parts: dict, total: int) -> Subspace:
    out = Subspace.zero(total)
    for j in sorted(parts):
        out = out.sum(parts[j])
    return out


def profile_via_duality(sys: PosetCausalSystem) -> ObservabilityProfile:
    """Recover the observability profile from the dual system's reachability.

    Every space comes out as a block complement of the corresponding dual
    reachability space; no kernel is ever computed.
    """
    require_valid(sys)
    dual = dual_system(sys)
    rp = reach_profile(dual)
    poset = sys.poset
    n = sys.n
    total = n.total

    unobs = rp.reachable.complement()
    upstream = {}
    for i in poset.nodes:
        ups = sorted(derived_set(poset, {i}, "up"))
        upstream[i] = coordinate_subspace(n, ups).ominus(rp.downstream[i])

    blocks = {j: coordinate_subspace(n, (j,)) for j in poset.nodes}
    confined = {}
    projected = {}
    for i in poset.nodes:
        for j in sorted(derived_set(poset, {i}, "up")):
            confined[(i, j)] = blocks[j].ominus(rp.projected[(j, i)])
            projected[(i, j)] = blocks[j].ominus(rp.exclusive[(j, i)])

    node_floor = {}
    node_independent = {}
    node_ceiling = {}
    for j in poset.nodes:
        node_floor[j] = blocks[j].ominus(rp.node_ceiling[j])
        node_independent[j] = blocks[j].ominus(rp.node_independent[j])
        node_ceiling[j] = blocks[j].ominus(rp.node_floor[j])

    floor = _block_sum(node_floor, total)
    independent = _block_sum(node_independent, total)
    ceiling = _block_sum(node_ceiling, total)
    wlo = all(confined[(i, i)].is_zero() for i in poset.nodes)
    return ObservabilityProfile(
        unobservable=unobs,
        upstream=upstream,
        confined=confined,
        projected=projected,
        node_independent=node_independent,
        node_floor=node_floor,
        node_ceiling=node_ceiling,
        independent=independent,
        floor=floor,
        ceiling=ceiling,
        observable=unobs.is_zero(),
        independently_observable=independent.is_zero(),
        weakly_downstream_observable=floor.is_zero(),
        weakly_locally_observable=wlo,
    )
