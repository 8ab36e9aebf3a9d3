"""Reachable subspaces, their structured bounds, and structured pole placement.

For each node j the downstream model at j yields a reachable set; intersecting
or projecting it against single coordinate blocks produces three structured
approximations of the global reachable space:

* ``independent``  - block sums of states reachable without disturbing
  the other downstream blocks (independently controllable <=> equals X),
* ``floor``        - the largest structured subspace inside the reachable set,
* ``ceiling``      - the smallest structured subspace containing it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .blockmat import BlockMatrix, Partition
from .errors import (
    NotWeaklyLocallyControllable,
    ShapeMismatch,
    StructureViolation,
)
from .poset import Poset, derived_set
from .subspace import Subspace, image
from .system import PosetCausalSystem, derived, require_valid

__all__ = [
    "ReachabilityProfile",
    "ctrb_matrix",
    "reachable",
    "downstream_reachable",
    "coordinate_subspace",
    "profile",
    "weakly_locally_controllable",
    "CharPolyFactorization",
    "char_poly_factored",
    "pole_place",
]


def ctrb_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[B, AB, ..., A^(n-1) B] with n the state dimension."""
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeMismatch("state matrix must be square")
    if b.shape[0] != n:
        raise ShapeMismatch("input matrix has wrong row count")
    if n == 0:
        return la.zeros(0, 0)
    blocks = [b]
    cur = b
    for _ in range(n - 1):
        cur = la.mdot(a, cur)
        blocks.append(cur)
    return np.hstack(blocks)


def reachable(sys: PosetCausalSystem) -> Subspace:
    """Column space of the controllability matrix of the global model."""
    return image(ctrb_matrix(sys.A.entries, sys.B.entries))


def downstream_reachable(sys: PosetCausalSystem, i: int) -> Subspace:
    """Reachable set of the downstream model at node i, in global coordinates."""
    sub = derived(sys, "downstream", i)
    local = image(ctrb_matrix(sub.A, sub.B))
    return local.apply(sub.state_embedding())


def coordinate_subspace(partition: Partition, nodes) -> Subspace:
    """The coordinate block subspace spanned by the blocks in ``nodes``."""
    cols = []
    total = partition.total
    for j in sorted(set(nodes)):
        for k in partition.block_range(j):
            cols.append([Fraction(1) if r == k else Fraction(0) for r in range(total)])
    return Subspace.from_columns(total, cols)


@dataclass(frozen=True)
class ReachabilityProfile:
    """All reachability subspaces of one system, in global coordinates.

    ``exclusive[(i, j)]`` and ``projected[(i, j)]`` refine ``downstream[j]``
    against the coordinate block i (for i in the down-set of j); the per-node
    and aggregate spaces are assembled from them as described in the module
    docstring. ``local_hull`` collects the per-node projections
    ``projected[(i, i)]`` and is not comparable with the reachable set.
    """

    reachable: Subspace
    downstream: dict
    exclusive: dict
    projected: dict
    node_independent: dict
    node_floor: dict
    node_ceiling: dict
    independent: Subspace
    floor: Subspace
    ceiling: Subspace
    local_hull: Subspace
    controllable: bool
    independently_controllable: bool
    weakly_upstream_controllable: bool
    weakly_locally_controllable: bool


def profile(sys: PosetCausalSystem) -> ReachabilityProfile:
    """Compute every reachability subspace and classification flag at once."""
    require_valid(sys)
    poset = sys.poset
    n = sys.n
    total = n.total
    reach = reachable(sys)
    down = {j: downstream_reachable(sys, j) for j in poset.nodes}

    blocks = {j: coordinate_subspace(n, (j,)) for j in poset.nodes}
    exclusive = {}
    projected = {}
    for j in poset.nodes:
        for i in sorted(derived_set(poset, {j}, "down")):
            exclusive[(i, j)] = blocks[i].intersect(down[j])
            projected[(i, j)] = down[j].coordinate_project(n, (i,))

    node_independent = {}
    node_ceiling = {}
    node_floor = {}
    for j in poset.nodes:
        ups = sorted(derived_set(poset, {j}, "up"))
        indep = Subspace.zero(total)
        ceil = Subspace.zero(total)
        for i in ups:
            indep = indep.sum(exclusive[(j, i)])
            ceil = ceil.sum(projected[(j, i)])
        node_independent[j] = indep
        node_ceiling[j] = ceil
        node_floor[j] = blocks[j].intersect(reach)
        if not ceil.equals(reach.coordinate_project(n, (j,))):
            raise StructureViolation(
                f"ceiling at node {j} disagrees with the projected reachable set (internal bug)"
            )

    summed = Subspace.zero(total)
    for j in poset.nodes:
        summed = summed.sum(down[j])
    if not summed.equals(reach):
        raise StructureViolation(
            "reachable set is not the sum of the downstream reachable sets (internal bug)"
        )

    independent = _block_sum(node_independent, total)
    floor = _block_sum(node_floor, total)
    ceiling = _block_sum(node_ceiling, total)
    local_hull = Subspace.zero(total)
    for j in poset.nodes:
        local_hull = local_hull.sum(projected[(j, j)])

    wlc = all(projected[(j, j)].dim == n.size(j) for j in poset.nodes)
    return ReachabilityProfile(
        reachable=reach,
        downstream=down,
        exclusive=exclusive,
        projected=projected,
        node_independent=node_independent,
        node_floor=node_floor,
        node_ceiling=node_ceiling,
        independent=independent,
        floor=floor,
        ceiling=ceiling,
        local_hull=local_hull,
        controllable=reach.dim == total,
        independently_controllable=independent.dim == total,
        weakly_upstream_controllable=ceiling.dim == total,
        weakly_locally_controllable=wlc,
    )


def _block_sum(parts: dict, total: int) -> Subspace:
    out = Subspace.zero(total)
    for j in sorted(parts):
        out = out.sum(parts[j])
    return out


def weakly_locally_controllable(sys: PosetCausalSystem):
    """(flag, per-node detail): every local pair must be controllable."""
    require_valid(sys)
    detail = {}
    for i in sys.poset.nodes:
        loc = derived(sys, "local", i)
        detail[i] = la.rank(ctrb_matrix(loc.A, loc.B)) == sys.n.size(i)
    return all(detail.values()), detail


@dataclass(frozen=True)
class CharPolyFactorization:
    """Characteristic polynomial of a pattern-respecting matrix, block by block."""

    blocks: dict
    product: list

    def eval_at(self, x) -> Fraction:
        return la.poly_eval(self.product, Fraction(x))


def char_poly_factored(a: BlockMatrix, poset: Poset) -> CharPolyFactorization:
    """Per-block characteristic polynomials whose product is the full one.

    The product is verified exactly against the characteristic polynomial of
    the whole matrix.
    """
    from .blockmat import is_incident

    if a.row_partition != a.col_partition:
        raise ShapeMismatch("characteristic polynomial needs a square block matrix")
    if not is_incident(a, poset):
        raise StructureViolation("matrix does not respect the poset pattern")
    blocks = {j: la.char_poly(a.block(j, j)) for j in poset.nodes}
    product = [Fraction(1)]
    for j in poset.nodes:
        product = la.poly_mul(product, blocks[j])
    if product != la.char_poly(a.entries):
        raise StructureViolation("block factorization disagrees with the full matrix (internal bug)")
    return CharPolyFactorization(blocks=blocks, product=product)


def _ackermann(a: np.ndarray, b: np.ndarray, target: list) -> np.ndarray:
    """Single-input feedback row f with char(A + b f) = target (b is n x 1)."""
    n = a.shape[0]
    ctrb = ctrb_matrix(a, b)
    inv = la.inverse(ctrb)
    last = inv[n - 1 : n, :]
    poly_a = la.poly_eval_matrix(target, a)
    return -la.mdot(last, poly_a)


def _check_target(target, size: int):
    target = [Fraction(c) for c in target]
    if len(target) != size + 1 or target[-1] != 1:
        raise ShapeMismatch(f"target must be a monic polynomial of degree {size}")
    return target


def pole_place(sys: PosetCausalSystem, targets, seed: int = 0) -> BlockMatrix:
    """Block-diagonal feedback giving each local closed loop a prescribed polynomial.

    ``targets`` maps node -> monic coefficient list (low degree first, length
    n_j + 1). Multi-input blocks are reduced to a single input through a
    randomized preliminary feedback, then placed by the companion-matrix
    formula; the per-block and global characteristic polynomials are verified
    exactly before returning.
    """
    require_valid(sys)
    ok, detail = weakly_locally_controllable(sys)
    if not ok:
        witness = min(j for j, good in detail.items() if not good)
        raise NotWeaklyLocallyControllable(witness)
    if not isinstance(targets, dict):
        targets = {j: t for j, t in zip(sys.poset.nodes, targets)}
    rng = random.Random(seed)
    f = la.zeros(sys.m.total, sys.n.total)
    wanted = [Fraction(1)]
    for j in sys.poset.nodes:
        nj = sys.n.size(j)
        target = _check_target(targets[j], nj)
        wanted = la.poly_mul(wanted, target)
        block = _place_block(sys.A.block(j, j), sys.B.block(j, j), target, rng)
        rows = sys.m.block_range(j)
        cols = sys.n.block_range(j)
        f[rows.start : rows.stop, cols.start : cols.stop] = block
    feedback = BlockMatrix(f, sys.m, sys.n)
    closed = sys.A.entries + la.mdot(sys.B.entries, feedback.entries)
    if la.char_poly(closed) != wanted:
        raise StructureViolation("feedback verification failed (internal bug)")
    return feedback


def _place_block(a: np.ndarray, b: np.ndarray, target: list, rng: random.Random) -> np.ndarray:
    n = a.shape[0]
    m = b.shape[1]
    if n == 0:
        return la.zeros(m, 0)
    if m == 1:
        block = _ackermann(a, b, target)
    else:
        block = None
        for _ in range(200):
            pre = la.fmat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
            mix = la.fmat([[rng.randint(-3, 3)] for _ in range(m)])
            shifted = a + la.mdot(b, pre)
            single = la.mdot(b, mix)
            if la.rank(ctrb_matrix(shifted, single)) != n:
                continue
            row = _ackermann(shifted, single, target)
            block = pre + la.mdot(mix, row)
            break
        if block is None:
            raise StructureViolation("single-input reduction failed to converge (internal bug)")
    if la.char_poly(a + la.mdot(b, block)) != target:
        raise StructureViolation("local placement verification failed (internal bug)")
    return block
