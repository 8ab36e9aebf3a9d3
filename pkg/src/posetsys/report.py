"""Analysis report assembly and rendering (structured JSON and plain text).

The structured form is deterministic: identical systems produce byte-identical
JSON because every subspace is serialized through its canonical basis and all
keys are emitted in a fixed order.
"""

from __future__ import annotations

import json

from .duality import DualityReport, verify_duality
from .errors import StructureViolation
from .fileio import format_rational
from .observability import profile as obs_profile
from .observability import profile_via_duality
from .reachability import profile as reach_profile
from .reduction import REDUCTION_VARIANTS, poset_reduce
from .subspace import Subspace
from .system import PosetCausalSystem, validate

__all__ = ["analyze", "render_json", "render_text"]


def _space(sub: Subspace) -> dict:
    return {
        "dim": sub.dim,
        "basis": [[format_rational(x) for x in vec] for vec in sub.vectors()],
    }


def _pair_key(key) -> str:
    return f"{key[0]},{key[1]}"


def _space_map(d: dict) -> dict:
    return {str(k) if isinstance(k, int) else _pair_key(k): _space(v) for k, v in sorted(d.items())}


def analyze(sys: PosetCausalSystem, skip_duality: bool = False) -> dict:
    """Full analysis of a validated system as a JSON-ready dictionary."""
    report: dict = {}
    vrep = validate(sys)
    report["system"] = {
        "p": sys.poset.p,
        "partitions": {"n": list(sys.n.sizes), "m": list(sys.m.sizes), "r": list(sys.r.sizes)},
        "state_dim": sys.state_dim,
        "valid": vrep.ok,
    }
    rp = reach_profile(sys)
    report["reachability"] = {
        "reachable": _space(rp.reachable),
        "downstream": _space_map(rp.downstream),
        "exclusive": _space_map(rp.exclusive),
        "projected": _space_map(rp.projected),
        "node_independent": _space_map(rp.node_independent),
        "node_floor": _space_map(rp.node_floor),
        "node_ceiling": _space_map(rp.node_ceiling),
        "independent": _space(rp.independent),
        "floor": _space(rp.floor),
        "ceiling": _space(rp.ceiling),
        "local_hull": _space(rp.local_hull),
        "flags": {
            "controllable": rp.controllable,
            "independently_controllable": rp.independently_controllable,
            "weakly_upstream_controllable": rp.weakly_upstream_controllable,
            "weakly_locally_controllable": rp.weakly_locally_controllable,
        },
    }
    op = obs_profile(sys)
    od = profile_via_duality(sys)
    if not op.equals(od):
        raise StructureViolation("direct and duality observability routes disagree (internal bug)")
    report["observability"] = {
        "unobservable": _space(op.unobservable),
        "upstream": _space_map(op.upstream),
        "confined": _space_map(op.confined),
        "projected": _space_map(op.projected),
        "node_independent": _space_map(op.node_independent),
        "node_floor": _space_map(op.node_floor),
        "node_ceiling": _space_map(op.node_ceiling),
        "independent": _space(op.independent),
        "floor": _space(op.floor),
        "ceiling": _space(op.ceiling),
        "duality_route_agrees": True,
        "flags": {
            "observable": op.observable,
            "independently_observable": op.independently_observable,
            "weakly_downstream_observable": op.weakly_downstream_observable,
            "weakly_locally_observable": op.weakly_locally_observable,
        },
    }
    if not skip_duality:
        drep: DualityReport = verify_duality(sys)
        report["duality"] = {
            "ok": drep.ok,
            "checks": len(drep.checks),
            "failures": [
                {"name": c.name, "scope": c.scope, "lhs": c.lhs, "rhs": c.rhs}
                for c in drep.failures
            ],
        }
    report["reduction"] = {}
    for variant in REDUCTION_VARIANTS:
        red = poset_reduce(sys, variant)
        report["reduction"][variant] = {
            "block_dims": list(red.block_dims),
            "total_dim": red.total_dim,
            "moment_horizon": red.moment_horizon,
            "moments_match": True,
            "optimal_hypothesis": red.optimal_hypothesis,
            "subspace": _space(red.subspace),
        }
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _chain(dims) -> str:
    return " <= ".join(str(d) for d in dims)


def render_text(report: dict) -> str:
    lines = []
    sysinfo = report["system"]
    lines.append(f"system: p={sysinfo['p']} state_dim={sysinfo['state_dim']} "
                 f"valid={'yes' if sysinfo['valid'] else 'NO'}")
    lines.append(f"  partitions n={sysinfo['partitions']['n']} "
                 f"m={sysinfo['partitions']['m']} r={sysinfo['partitions']['r']}")
    rp = report["reachability"]
    lines.append("reachability:")
    lines.append(
        "  dims independent/floor/reachable/ceiling: "
        + _chain([rp["independent"]["dim"], rp["floor"]["dim"],
                  rp["reachable"]["dim"], rp["ceiling"]["dim"]])
        + f" (state_dim {sysinfo['state_dim']})"
    )
    for name, value in rp["flags"].items():
        lines.append(f"  {name}: {'yes' if value else 'no'}")
    op = report["observability"]
    lines.append("observability:")
    lines.append(
        "  dims floor/unobservable/ceiling/independent: "
        + _chain([op["floor"]["dim"], op["unobservable"]["dim"],
                  op["ceiling"]["dim"], op["independent"]["dim"]])
    )
    for name, value in op["flags"].items():
        lines.append(f"  {name}: {'yes' if value else 'no'}")
    lines.append(f"  duality route agrees: {'yes' if op['duality_route_agrees'] else 'NO'}")
    if "duality" in report:
        dd = report["duality"]
        lines.append(f"duality: {dd['checks']} identities, "
                     f"{'all hold' if dd['ok'] else str(len(dd['failures'])) + ' FAILED'}")
    lines.append("reduction:")
    for variant, info in report["reduction"].items():
        lines.append(
            f"  {variant}: block dims {info['block_dims']} total {info['total_dim']}"
            f" moments ok to k={info['moment_horizon']}"
            f"{' (projection-optimal)' if info['optimal_hypothesis'] else ''}"
        )
    return "\n".join(lines) + "\n"
