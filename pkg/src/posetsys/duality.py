"""Explicit verification of the reachability/observability duality identities.

Both sides of every identity are computed independently: reachability and
observability profiles of the system and of its dual, with no shared
intermediate results. Failures are collected, never raised; a failing entry
means an implementation bug somewhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .observability import ObservabilityProfile
from .observability import profile as obs_profile
from .poset import derived_set
from .reachability import ReachabilityProfile, coordinate_subspace
from .reachability import profile as reach_profile
from .subspace import Subspace
from .system import PosetCausalSystem, dual_system, require_valid

__all__ = ["DualityReport", "IdentityCheck", "verify_duality"]


@dataclass(frozen=True)
class IdentityCheck:
    """One verified identity; bases are kept only for failures."""

    name: str
    scope: str
    ok: bool
    lhs: list | None = None
    rhs: list | None = None


@dataclass(frozen=True)
class DualityReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def describe(self) -> str:
        if self.ok:
            return f"all {len(self.checks)} duality identities hold"
        lines = [f"{len(self.failures)} of {len(self.checks)} duality identities FAILED:"]
        for c in self.failures:
            lines.append(f"  {c.name} [{c.scope}] lhs={c.lhs} rhs={c.rhs}")
        return "\n".join(lines)


def _check(name: str, scope: str, lhs: Subspace, rhs: Subspace) -> IdentityCheck:
    if lhs.equals(rhs):
        return IdentityCheck(name=name, scope=scope, ok=True)
    return IdentityCheck(
        name=name,
        scope=scope,
        ok=False,
        lhs=[[str(x) for x in v] for v in lhs.vectors()],
        rhs=[[str(x) for x in v] for v in rhs.vectors()],
    )


def _flag(name: str, scope: str, lhs: bool, rhs: bool) -> IdentityCheck:
    return IdentityCheck(name=name, scope=scope, ok=lhs == rhs, lhs=lhs, rhs=rhs)


def verify_duality(sys: PosetCausalSystem) -> DualityReport:
    """Check every aggregate, per-node and per-pair duality identity exactly."""
    require_valid(sys)
    dual = dual_system(sys)
    rp: ReachabilityProfile = reach_profile(sys)
    op: ObservabilityProfile = obs_profile(sys)
    rpd: ReachabilityProfile = reach_profile(dual)
    opd: ObservabilityProfile = obs_profile(dual)
    poset = sys.poset
    n = sys.n
    blocks = {j: coordinate_subspace(n, (j,)) for j in poset.nodes}
    checks: list[IdentityCheck] = []

    # aggregate identities: dual reachability bounds are complements of
    # primal observability bounds, and vice versa
    checks.append(_check("dual independent = independent^perp", "aggregate",
                         rpd.independent, op.independent.complement()))
    checks.append(_check("dual floor = ceiling^perp", "aggregate",
                         rpd.floor, op.ceiling.complement()))
    checks.append(_check("dual ceiling = floor^perp", "aggregate",
                         rpd.ceiling, op.floor.complement()))
    checks.append(_check("dual unobs floor = ceiling^perp", "aggregate",
                         opd.floor, rp.ceiling.complement()))
    checks.append(_check("dual unobs ceiling = floor^perp", "aggregate",
                         opd.ceiling, rp.floor.complement()))
    checks.append(_check("dual unobs independent = independent^perp", "aggregate",
                         opd.independent, rp.independent.complement()))

    # per-node: the downstream reachable and upstream indistinguishable sets
    # of system and dual are block complements of one another
    for i in poset.nodes:
        ups = coordinate_subspace(n, derived_set(poset, {i}, "up"))
        downs = coordinate_subspace(n, derived_set(poset, {i}, "down"))
        checks.append(_check("upblock - dual downstream = upstream set", f"node {i}",
                             ups.ominus(rpd.downstream[i]), op.upstream[i]))
        checks.append(_check("downblock - dual upstream = downstream set", f"node {i}",
                             downs.ominus(opd.upstream[i]), rp.downstream[i]))

    # per-pair identities
    for j in poset.nodes:
        for i in sorted(derived_set(poset, {j}, "down")):
            checks.append(_check("dual proj unobs = block - exclusive", f"pair ({i},{j})",
                                 opd.projected[(j, i)], blocks[i].ominus(rp.exclusive[(i, j)])))
            checks.append(_check("dual confined unobs = block - projected", f"pair ({i},{j})",
                                 opd.confined[(j, i)], blocks[i].ominus(rp.projected[(i, j)])))
        for i in sorted(derived_set(poset, {j}, "up")):
            checks.append(_check("dual proj reach = block - confined", f"pair ({i},{j})",
                                 rpd.projected[(i, j)], blocks[i].ominus(op.confined[(j, i)])))
            checks.append(_check("dual excl reach = block - projected unobs", f"pair ({i},{j})",
                                 rpd.exclusive[(i, j)], blocks[i].ominus(op.projected[(j, i)])))

    # per-node structured bounds
    for j in poset.nodes:
        checks.append(_check("dual node independent = block - independent", f"node {j}",
                             rpd.node_independent[j], blocks[j].ominus(op.node_independent[j])))
        checks.append(_check("dual node floor = block - ceiling", f"node {j}",
                             rpd.node_floor[j], blocks[j].ominus(op.node_ceiling[j])))
        checks.append(_check("dual node ceiling = block - floor", f"node {j}",
                             rpd.node_ceiling[j], blocks[j].ominus(op.node_floor[j])))
        checks.append(_check("dual unobs node floor = block - ceiling", f"node {j}",
                             opd.node_floor[j], blocks[j].ominus(rp.node_ceiling[j])))
        checks.append(_check("dual unobs node ceiling = block - floor", f"node {j}",
                             opd.node_ceiling[j], blocks[j].ominus(rp.node_floor[j])))
        checks.append(_check("dual unobs node independent = block - independent", f"node {j}",
                             opd.node_independent[j], blocks[j].ominus(rp.node_independent[j])))

    # classification equivalences
    checks.append(_flag("controllable <-> dual observable", "flags",
                        rp.controllable, opd.observable))
    checks.append(_flag("observable <-> dual controllable", "flags",
                        op.observable, rpd.controllable))
    checks.append(_flag("weakly locally controllable <-> dual weakly locally observable",
                        "flags", rp.weakly_locally_controllable, opd.weakly_locally_observable))
    checks.append(_flag("weakly locally observable <-> dual weakly locally controllable",
                        "flags", op.weakly_locally_observable, rpd.weakly_locally_controllable))
    checks.append(_flag("independently controllable <-> dual independently observable",
                        "flags", rp.independently_controllable, opd.independently_observable))
    checks.append(_flag("weakly upstream controllable <-> dual weakly downstream observable",
                        "flags", rp.weakly_upstream_controllable, opd.weakly_downstream_observable))
    return DualityReport(checks=checks)
