"""State-space systems whose matrices respect a common poset pattern."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .blockmat import BlockMatrix, Partition, compress, incidence_violations, is_incident
from .errors import (
    IndexOutOfRange,
    ShapeMismatch,
    SingularMatrix,
    SingularResolvent,
    StructureViolation,
    ValidationError,
)
from .poset import Poset, derived_set

__all__ = [
    "PosetCausalSystem",
    "DerivedSystem",
    "ValidationReport",
    "validate",
    "require_valid",
    "dual_system",
    "derived",
    "transfer_eval",
]


class PosetCausalSystem:
    """(A, B, C, D) over a poset with state/input/output partitions n, m, r."""

    def __init__(self, poset: Poset, n, m, r, A, B, C, D, x0=None):
        self.poset = poset
        self.n = n if isinstance(n, Partition) else Partition(n)
        self.m = m if isinstance(m, Partition) else Partition(m)
        self.r = r if isinstance(r, Partition) else Partition(r)
        for name, part in (("n", self.n), ("m", self.m), ("r", self.r)):
            if part.count != poset.p:
                raise ShapeMismatch(f"partition {name} has {part.count} parts, poset has {poset.p}")
        self.A = _as_block(A, self.n, self.n)
        self.B = _as_block(B, self.n, self.m)
        self.C = _as_block(C, self.r, self.n)
        self.D = _as_block(D, self.r, self.m)
        if x0 is None:
            self.x0 = None
        else:
            vec = la.fvec(x0) if not isinstance(x0, np.ndarray) else x0.reshape(-1, 1)
            if vec.shape[0] != self.n.total:
                raise ShapeMismatch(f"x0 has {vec.shape[0]} entries, expected {self.n.total}")
            vec = vec.copy()
            vec.flags.writeable = False
            self.x0 = vec

    @property
    def state_dim(self) -> int:
        return self.n.total

    @property
    def input_dim(self) -> int:
        return self.m.total

    @property
    def output_dim(self) -> int:
        return self.r.total

    def initial_state(self) -> np.ndarray:
        return self.x0 if self.x0 is not None else la.zeros(self.state_dim, 1)

    def __repr__(self) -> str:
        return (
            f"PosetCausalSystem(p={self.poset.p}, n={self.n.sizes}, "
            f"m={self.m.sizes}, r={self.r.sizes})"
        )


def _as_block(mat, rows: Partition, cols: Partition) -> BlockMatrix:
    if isinstance(mat, BlockMatrix):
        if mat.row_partition != rows or mat.col_partition != cols:
            raise ShapeMismatch("block matrix partitions disagree with the system's")
        return mat
    return BlockMatrix(mat, rows, cols)


@dataclass(frozen=True)
class ValidationReport:
    """Per-matrix lists of blocks that break the required zero pattern."""

    violations: dict

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def describe(self) -> str:
        if self.ok:
            return "all system matrices respect the poset pattern"
        lines = []
        for name in sorted(self.violations):
            for i, j in self.violations[name]:
                lines.append(f"{name}: block ({i},{j}) must vanish (node {j} is not above {i})")
        return "\n".join(lines)


def validate(sys: PosetCausalSystem) -> ValidationReport:
    """Check the four incidence conditions; reports every violating block."""
    out = {}
    for name in ("A", "B", "C", "D"):
        out[name] = incidence_violations(getattr(sys, name), sys.poset)
    return ValidationReport(violations=out)


def require_valid(sys: PosetCausalSystem) -> None:
    report = validate(sys)
    if not report.ok:
        raise ValidationError(report.describe())


def dual_system(sys: PosetCausalSystem) -> PosetCausalSystem:
    """Transpose all matrices and reverse the order; inputs and outputs swap."""
    from .poset import dual_poset

    return PosetCausalSystem(
        poset=dual_poset(sys.poset),
        n=sys.n,
        m=sys.r,
        r=sys.m,
        A=sys.A.transpose(),
        B=sys.C.transpose(),
        C=sys.B.transpose(),
        D=sys.D.transpose(),
        x0=sys.x0,
    )


@dataclass(frozen=True)
class DerivedSystem:
    """A compressed model attached to one node (or the whole system).

    Matrices are plain dense rational arrays; the ``*_nodes`` tuples record
    which global blocks each compressed axis ranges over, so results can be
    embedded back into global coordinates.
    """

    kind: str
    node: int | None
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    state_nodes: tuple
    input_nodes: tuple
    output_nodes: tuple
    state_partition: Partition
    output_partition: Partition

    @property
    def state_dim(self) -> int:
        return self.A.shape[0]

    @property
    def input_dim(self) -> int:
        return self.B.shape[1]

    @property
    def output_dim(self) -> int:
        return self.C.shape[0]

    def state_embedding(self) -> np.ndarray:
        """Global-state matrix of the inclusion of the compressed state space."""
        from .blockmat import embed

        return embed(self.state_partition, self.state_nodes).entries

    def output_embedding(self) -> np.ndarray:
        from .blockmat import embed

        return embed(self.output_partition, self.output_nodes).entries


def derived(sys: PosetCausalSystem, kind: str, i: int | None = None) -> DerivedSystem:
    """The global, local(i), downstream(i) or upstream(i) model of the system."""
    if kind == "global":
        nodes = tuple(sys.poset.nodes)
        return DerivedSystem(
            kind="global",
            node=None,
            A=sys.A.entries,
            B=sys.B.entries,
            C=sys.C.entries,
            D=sys.D.entries,
            state_nodes=nodes,
            input_nodes=nodes,
            output_nodes=nodes,
            state_partition=sys.n,
            output_partition=sys.r,
        )
    if i is None:
        raise IndexOutOfRange(f"derived kind {kind!r} needs a node index")
    sys.poset.check_node(i)
    if kind == "local":
        sel = (i,)
        return DerivedSystem(
            kind="local",
            node=i,
            A=sys.A.block(i, i),
            B=sys.B.block(i, i),
            C=sys.C.block(i, i),
            D=sys.D.block(i, i),
            state_nodes=sel,
            input_nodes=sel,
            output_nodes=sel,
            state_partition=sys.n,
            output_partition=sys.r,
        )
    if kind == "downstream":
        down = tuple(sorted(derived_set(sys.poset, {i}, "down")))
        return DerivedSystem(
            kind="downstream",
            node=i,
            A=compress(sys.A, down, down).entries,
            B=compress(sys.B, down, (i,)).entries,
            C=compress(sys.C, down, down).entries,
            D=compress(sys.D, down, (i,)).entries,
            state_nodes=down,
            input_nodes=(i,),
            output_nodes=down,
            state_partition=sys.n,
            output_partition=sys.r,
        )
    if kind == "upstream":
        up = tuple(sorted(derived_set(sys.poset, {i}, "up")))
        return DerivedSystem(
            kind="upstream",
            node=i,
            A=compress(sys.A, up, up).entries,
            B=compress(sys.B, up, up).entries,
            C=compress(sys.C, (i,), up).entries,
            D=compress(sys.D, (i,), up).entries,
            state_nodes=up,
            input_nodes=up,
            output_nodes=(i,),
            state_partition=sys.n,
            output_partition=sys.r,
        )
    raise ValueError(f"unknown derived kind {kind!r}")


def transfer_eval(sys: PosetCausalSystem, s) -> BlockMatrix:
    """Exact D + C (sI - A)^-1 B; the result respects the poset pattern."""
    s = Fraction(s)
    n = sys.state_dim
    resolvent_arg = la.eye(n)
    for idx in range(n):
        resolvent_arg[idx, idx] = s
    resolvent_arg = resolvent_arg - sys.A.entries
    try:
        res = la.inverse(resolvent_arg)
    except SingularMatrix as exc:
        raise SingularResolvent(f"{s} is an eigenvalue of A") from exc
    f = sys.D.entries + la.mdot(sys.C.entries, la.mdot(res, sys.B.entries))
    out = BlockMatrix(f, sys.r, sys.m)
    if not is_incident(out, sys.poset):
        raise StructureViolation("transfer function left the incidence space (internal bug)")
    return out
