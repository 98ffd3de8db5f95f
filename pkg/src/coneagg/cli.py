"""Command-line interface: scenario ingestion and certificate-bearing reports.

The machine-readable report goes to standard output as JSON (rationals as
strings, fully deterministic: no timestamps, sorted keys); a short human
summary goes to standard error.  Exit codes: 0 success, 2 axiom or
precondition failure (the report is still emitted), 1 usage or schema
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .aggregate import (
    AffineSolution,
    DRRequiredError,
    common_space,
    representation_iso,
    solve_affine,
    synthesize,
)
from .cones import UnsupportedConeError
from .linalg import vec
from .pareto import AxiomFailedError, check_axioms
from .pooling import cube_profile, lyapunov_gap, pool
from .profiles import Point, compare, check_DR, check_weak_DR
from .serialize import (
    SchemaError,
    Scenario,
    dumps,
    encode,
    load_scenario,
    parse_rational,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

MAX_CONVEXIFIED_ATOMS = 10


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coneagg",
        description="Exact aggregation of incomplete preorders: axioms, synthesis, pooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, scenario_required=True):
        p = sub.add_parser(name, help=help_text)
        if scenario_required:
            p.add_argument("scenario", help="path to a scenario JSON file")
        else:
            p.add_argument("scenario", nargs="?", help="path to a scenario JSON file")
        return p

    add("validate", "validate a scenario file against the schema")

    p = add("compare", "classify one pair under one representation")
    p.add_argument("--x", required=True, help="JSON: weights (profile) or atom names (pooling)")
    p.add_argument("--y", required=True, help="JSON: weights (profile) or atom names (pooling)")
    p.add_argument("--rep", default="0", help="0 for the social relation, k for individual k")

    add("axioms", "decide P1-P4 plus the domain-richness conditions")

    p = add("synthesize", "build a representing space and map at a level")
    p.add_argument("--level", default="P4", choices=["P1", "P2", "P3", "P4"])

    add("solve", "recover the affine decomposition of the social map")

    p = add("common-space", "rebase everyone into one space with summation")
    p.add_argument("--dr-form", action="store_true", help="require the richness form")

    p = add("iso", "order isomorphism between two representations")
    p.add_argument("--a", required=True, help="representation selector (0 social, k individual)")
    p.add_argument("--b", required=True, help="representation selector (0 social, k individual)")

    add("pool", "aggregate likelihood measures through convexification")

    p = add("lyapunov", "range-convexity gap of discretized measures", scenario_required=False)
    p.add_argument("--n", type=int, default=None, help="uniform single-measure demo size")

    return parser


def _select_rep(profile, selector: str):
    try:
        idx = int(selector)
    except ValueError:
        raise SchemaError("/rep", f"selector must be an integer, got {selector!r}")
    if idx == 0:
        return profile.social, "social"
    if 1 <= idx <= len(profile.individuals):
        return profile.individuals[idx - 1], f"individual {idx}"
    raise SchemaError("/rep", f"no representation {idx} (profile has {len(profile.individuals)})")


def _parse_point(profile, raw: str, flag: str) -> Point:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"/{flag}", f"invalid JSON: {exc}")
    weights = [parse_rational(w, f"/{flag}/{i}") for i, w in enumerate(data)]
    if len(weights) != profile.domain.vertex_count:
        raise SchemaError(
            f"/{flag}",
            f"expected {profile.domain.vertex_count} weights, got {len(weights)}",
        )
    try:
        return Point(vec(weights))
    except ValueError as exc:
        raise SchemaError(f"/{flag}", str(exc))


def _parse_event(raw: str, flag: str):
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"/{flag}", f"invalid JSON: {exc}")
    if not isinstance(data, list) or not all(isinstance(a, str) for a in data):
        raise SchemaError(f"/{flag}", "expected an array of atom names")
    return data


def _profile_of(scn: Scenario):
    if scn.kind == "profile":
        return scn.payload
    algebra, measures, social = scn.payload
    if len(algebra.atoms) > MAX_CONVEXIFIED_ATOMS:
        raise SchemaError(
            "/atoms",
            f"convexified commands support at most {MAX_CONVEXIFIED_ATOMS} atoms",
        )
    return cube_profile(algebra, measures, social)


def _cmd_validate(scn: Scenario, args) -> tuple[dict, str, int]:
    results = {"valid": True, "kind": scn.kind}
    if scn.kind == "profile":
        results["individuals"] = len(scn.payload.individuals)
        results["vertices"] = scn.payload.domain.vertex_count
    else:
        algebra, measures, _ = scn.payload
        results["atoms"] = list(algebra.atoms)
        results["measures"] = len(measures)
    return results, "ok", EXIT_OK


def _cmd_compare(scn: Scenario, args) -> tuple[dict, str, int]:
    if scn.kind == "profile":
        profile = scn.payload
        rep, label = _select_rep(profile, args.rep)
        x = _parse_point(profile, args.x, "x")
        y = _parse_point(profile, args.y, "y")
        res = compare(profile.domain, rep, x, y)
    else:
        from .pooling import likelihood_compare

        algebra, measures, social = scn.payload
        try:
            idx = int(args.rep)
        except ValueError:
            raise SchemaError("/rep", "selector must be an integer")
        if idx == 0:
            vm, label = social, "social"
        elif 1 <= idx <= len(measures):
            vm, label = measures[idx - 1], f"individual {idx}"
        else:
            raise SchemaError("/rep", f"no measure {idx}")
        res = likelihood_compare(vm, _parse_event(args.x, "x"), _parse_event(args.y, "y"))
    results = {
        "representation": label,
        "relation": res.relation.value,
        "forward": encode(res.forward),
        "backward": encode(res.backward),
    }
    return results, "ok", EXIT_OK


def _cmd_axioms(scn: Scenario, args) -> tuple[dict, str, int]:
    profile = _profile_of(scn)
    reports = check_axioms(profile)
    results = {name: encode(r) for name, r in reports.items()}
    results["DR"] = check_DR(profile)
    try:
        weak = check_weak_DR(profile)
        results["weak_DR"] = encode(weak)
    except UnsupportedConeError as exc:
        results["weak_DR"] = {"error": str(exc)}
    return results, "ok", EXIT_OK


def _cmd_synthesize(scn: Scenario, args) -> tuple[dict, str, int]:
    profile = _profile_of(scn)
    try:
        res = synthesize(profile, args.level)
    except AxiomFailedError as exc:
        return {"failed_axiom": encode(exc.report)}, "axiom_failed", EXIT_FAILED
    return encode(res), "ok", EXIT_OK


def _cmd_solve(scn: Scenario, args) -> tuple[dict, str, int]:
    profile = _profile_of(scn)
    out = solve_affine(profile)
    if isinstance(out, AffineSolution):
        return encode(out), "ok", EXIT_OK
    return {"no_p1": encode(out)}, "axiom_failed", EXIT_FAILED


def _cmd_common_space(scn: Scenario, args) -> tuple[dict, str, int]:
    profile = _profile_of(scn)
    try:
        res = common_space(profile, use_dr_form=args.dr_form)
    except AxiomFailedError as exc:
        return {"failed_axiom": encode(exc.report)}, "axiom_failed", EXIT_FAILED
    except DRRequiredError as exc:
        return {"error": str(exc)}, "precondition_failed", EXIT_FAILED
    return encode(res), "ok", EXIT_OK


def _cmd_iso(scn: Scenario, args) -> tuple[dict, str, int]:
    profile = _profile_of(scn)
    rep_a, label_a = _select_rep(profile, args.a)
    rep_b, label_b = _select_rep(profile, args.b)
    res = representation_iso(profile.domain, rep_a, rep_b)
    results = {"a": label_a, "b": label_b, **encode(res)}
    if res.status == "iso":
        return results, "ok", EXIT_OK
    return results, "precondition_failed", EXIT_FAILED


def _cmd_pool(scn: Scenario, args) -> tuple[dict, str, int]:
    if scn.kind != "pooling":
        raise SchemaError("/kind", "pool needs a pooling scenario")
    algebra, measures, social = scn.payload
    if len(algebra.atoms) > MAX_CONVEXIFIED_ATOMS:
        raise SchemaError("/atoms", "too many atoms for convexification")
    try:
        report = pool(algebra, measures, social)
    except AxiomFailedError as exc:
        return {"failed_axiom": encode(exc.report)}, "axiom_failed", EXIT_FAILED
    results = {
        "synthesis": encode(report.synthesis),
        "dr_holds": report.dr_holds,
        "affine": encode(report.affine) if report.affine is not None else None,
    }
    return results, "ok", EXIT_OK


def _cmd_lyapunov(scn: Optional[Scenario], args) -> tuple[dict, str, int]:
    if scn is None:
        n = args.n
        if n is None or n < 1:
            raise SchemaError("/n", "without a scenario, --n >= 1 is required")
        measures = [[Fraction(1, n)] * n]
    else:
        if scn.kind != "pooling":
            raise SchemaError("/kind", "lyapunov needs a pooling scenario")
        algebra, vms, social = scn.payload
        n = len(algebra.atoms)
        measures = []
        for vm in list(vms) + [social]:
            for coord in range(vm.space.dim):
                measures.append([vm.atom_values[j][coord] for j in range(n)])
    res = lyapunov_gap(n, measures)
    return encode(res), "ok", EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "compare": _cmd_compare,
    "axioms": _cmd_axioms,
    "synthesize": _cmd_synthesize,
    "solve": _cmd_solve,
    "common-space": _cmd_common_space,
    "iso": _cmd_iso,
    "pool": _cmd_pool,
    "lyapunov": _cmd_lyapunov,
}


def _summarize(command: str, status: str, results: dict) -> str:
    if command == "axioms" and status == "ok":
        held = [k for k in ("P1", "P2", "P3", "P4") if results[k]["holds"]]
        return f"axioms holding: {', '.join(held) or 'none'}; DR={results['DR']}"
    if command == "compare" and status == "ok":
        return f"relation: {results['relation']} ({results['representation']})"
    return f"{command}: {status}"


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command

    scn: Optional[Scenario] = None
    try:
        if getattr(args, "scenario", None):
            scn = load_scenario(args.scenario)
        elif command != "lyapunov":
            parser.error("a scenario file is required")
        results, status, code = _COMMANDS[command](scn, args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = {
        "command": command,
        "scenario": (scn.name or getattr(args, "scenario", "")) if scn else "",
        "status": status,
        "exit_code": code,
        "results": results,
    }
    print(dumps(report))
    print(_summarize(command, status, results), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
