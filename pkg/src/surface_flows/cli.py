"""Command-line interface: ``surface-flows <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors (bad files, failed
checks, exceeded budgets) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .characters import (
    CharacterError,
    ClassFunction,
    character_table,
    class_indicator,
    regular_character,
)
from .duality import (
    DualityError,
    build_covering,
    colorings_from_tension,
    covering_tension_to_flow,
    dual_labeling,
    flow_to_proper_coloring,
    is_flow,
    is_global_tension,
    is_local_tension,
    random_flows,
)
from .embedding import GraphError, dual_graph, euler_genus, is_connected, to_dot, trace_faces
from .groups import FiniteGroup, GroupError, build_group
from .partition import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CountResult,
    EdgeLabeling,
    count_flows,
    count_nowhere_identity,
    enumerate_flows,
    format_number,
    frobenius_count,
    partition_brute,
    partition_closed,
    partition_multiplicative,
)

VERIFY_BUDGET = 10**6
VERIFY_SAMPLE = 1000

DOMAIN_ERRORS = (
    GraphError,
    GroupError,
    CharacterError,
    BudgetExceeded,
    DualityError,
    ArithmeticError,
    FileNotFoundError,
    ValueError,
    IndexError,
    KeyError,
)


def _complex_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def parse_class_function(spec: str, group: FiniteGroup, table) -> ClassFunction:
    """``regular | indicator:<class> | irreducible:<i> | values:<json list>``."""
    if spec == "regular":
        return regular_character(group)
    kind, _, arg = spec.partition(":")
    if kind == "indicator":
        return class_indicator(group, int(arg))
    if kind == "irreducible":
        i = int(arg)
        if not 0 <= i < len(table):
            raise IndexError(f"irreducible index {i} out of range 0..{len(table) - 1}")
        return table.characters[i]
    if kind == "values":
        raw = json.loads(arg)
        vals = [complex(*v) if isinstance(v, list) else complex(v) for v in raw]
        return ClassFunction(group, np.array(vals))
    raise ValueError(f"unknown class function spec {spec!r}")


def _emit(args, text: str, data) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(io.dumps(data))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _emit_count(args, result: CountResult) -> None:
    _emit(args, str(result), result.to_json())


def _require_group(args) -> FiniteGroup:
    if not args.group:
        raise ValueError("--group is required for this subcommand")
    return build_group(args.group)


# -- subcommands -------------------------------------------------------------


def cmd_group_show(args) -> int:
    g = build_group(args.spec)
    table = character_table(g)
    cls = g.classes
    doc = {
        "order": g.order,
        "elements": list(g.names),
        "cayley": g.table.tolist(),
        "classes": [
            {
                "representative": rep,
                "size": size,
                "members": list(members),
                "inverse": inv,
            }
            for rep, size, members, inv in zip(cls.representatives, cls.sizes, cls.members, cls.inverse_class)
        ],
        "characters": [[_complex_json(v) for v in c.values] for c in table.characters],
        "dimensions": list(table.dimensions),
    }
    lines = [f"group {g.spec}: order {g.order}", "elements:"]
    lines += [f"  {i}: {name}" for i, name in enumerate(g.names)]
    lines.append("cayley table (indices):")
    for row in g.table:
        lines.append("  " + " ".join(f"{x:>{len(str(g.order - 1))}}" for x in row))
    lines.append("conjugacy classes:")
    for i, members in enumerate(cls.members):
        names = ", ".join(g.names[m] for m in members)
        lines.append(f"  C{i} (size {cls.sizes[i]}, inverse C{cls.inverse_class[i]}): {names}")
    lines.append(f"character table ({table.method}):")
    for i, c in enumerate(table.characters):
        vals = "  ".join(format_number(_clean(v)) for v in c.values)
        lines.append(f"  chi{i} (dim {table.dimensions[i]}): {vals}")
    _emit(args, "\n".join(lines), doc)
    return 0


def _clean(v: complex):
    r = round(v.real)
    if abs(v - r) < 1e-9:
        return int(r)
    return complex(round(v.real, 12), round(v.imag, 12))


def cmd_faces(args) -> int:
    g = io.load_graph(args.graph)
    faces = trace_faces(g)
    genera = euler_genus(g)
    doc = io.faces_to_dict(g, faces)
    doc["genus"] = genera
    text = f"faces: {len(faces)}, genus: {','.join(map(str, genera))}"
    _emit(args, text, doc)
    return 0


def cmd_genus(args) -> int:
    g = io.load_graph(args.graph)
    genera = euler_genus(g)
    _emit(args, f"genus: {','.join(map(str, genera))}", {"genus": genera})
    return 0


def cmd_dual(args) -> int:
    g = io.load_graph(args.graph)
    d = dual_graph(g)
    if args.dot:
        sys.stdout.write(to_dot(d.graph, "dual"))
        return 0
    doc = io.dual_to_dict(d)
    text = (
        f"dual: {len(d.graph.vertices)} vertices, {len(d.graph.edges)} edges, "
        f"genus: {','.join(map(str, euler_genus(d.graph)))}"
    )
    _emit(args, text, doc)
    return 0


def cmd_partition(args) -> int:
    g = io.load_graph(args.graph)
    group = _require_group(args)
    table = character_table(group)
    chi = parse_class_function(args.class_function, group, table)
    method = args.method or "closed"
    if method == "brute":
        result = partition_brute(g, group, chi, budget=args.budget or DEFAULT_BUDGET)
    elif method in ("closed", "formula"):
        if is_connected(g):
            result = partition_closed(g, group, chi, table)
        else:
            result = partition_multiplicative(g, group, chi, table)
    else:
        raise ValueError(f"unknown method {method!r}")
    _emit_count(args, result)
    return 0


def cmd_count_flows(args) -> int:
    g = io.load_graph(args.graph)
    group = _require_group(args)
    method = args.method or ("formula" if args.nowhere_identity else "closed")
    kwargs = {"budget": args.budget} if args.budget else {}
    if args.nowhere_identity:
        result = count_nowhere_identity(g, group, "brute" if method == "brute" else "formula", **kwargs)
    else:
        result = count_flows(g, group, "brute" if method == "brute" else "closed", **kwargs)
    _emit_count(args, result)
    return 0


def cmd_frobenius(args) -> int:
    group = _require_group(args)
    if args.genus is None or args.class_id is None:
        raise ValueError("frobenius needs --genus and --class")
    method = "brute" if args.method == "brute" else "formula"
    kwargs = {"budget": args.budget} if args.budget else {}
    result = frobenius_count(group, args.class_id, args.genus, method, **kwargs)
    _emit_count(args, result)
    return 0


def _load_labeling(args, graph) -> EdgeLabeling:
    if not args.labels:
        raise ValueError("--labels FILE is required")
    spec, values = io.parse_labels(Path(args.labels).read_text())
    spec = args.group or spec
    if not spec:
        raise ValueError("labeling file has no group; pass --group")
    return EdgeLabeling(graph, build_group(spec), values)


def cmd_tension_check(args) -> int:
    g = io.load_graph(args.graph)
    psi = _load_labeling(args, g)
    report = {
        "flow": is_flow(psi),
        "nowhere_identity": psi.nowhere_identity,
        "local_tension": is_local_tension(psi),
        "global_tension": is_global_tension(psi) if is_connected(g) else None,
    }
    text = "\n".join(f"{k}: {'n/a' if v is None else str(v).lower()}" for k, v in report.items())
    _emit(args, text, report)
    return 0


def cmd_cover(args) -> int:
    g = io.load_graph(args.graph)
    psi = _load_labeling(args, g)
    cov = build_covering(g, psi)
    doc = io.covering_to_dict(cov)
    doc["labels"] = cov.lift(psi).values
    text = f"sheets: {cov.n_sheets}, vertices: {len(cov.total.vertices)}, edges: {len(cov.total.edges)}"
    _emit(args, text, doc)
    return 0


def _check(lines, name, ok, detail=""):
    lines.append((name, bool(ok), detail))


def verify_duality(graph, group, *, budget: int = VERIFY_BUDGET, seed: int = 0) -> list[tuple[str, bool, str]]:
    """Run every correspondence check on one graph and group; returns (name, ok, detail) rows."""
    checks: list[tuple[str, bool, str]] = []
    if not is_connected(graph):
        raise GraphError("duality verify needs a connected graph")
    genus = euler_genus(graph)[0]
    dual = dual_graph(graph)
    _check(checks, "dual preserves |E| and genus",
           len(dual.graph.edges) == len(graph.edges) and euler_genus(dual.graph)[0] == genus,
           f"genus {genus}")

    n, e = group.order, len(graph.edges)
    if n**e <= budget:
        labelings = [EdgeLabeling.from_sequence(graph, group, row)
                     for row in np.ndindex(*(n,) * e)] if e else [EdgeLabeling(graph, group, {})]
        scope = "all"
    else:
        rng = np.random.default_rng(seed)
        labelings = [EdgeLabeling.from_sequence(graph, group, rng.integers(0, n, e).tolist())
                     for _ in range(VERIFY_SAMPLE)]
        scope = f"{VERIFY_SAMPLE} sampled"
    mismatched = sum(is_flow(p) != is_local_tension(dual_labeling(dual, p)) for p in labelings)
    _check(checks, "flow <=> dual local tension", mismatched == 0, f"{scope} labelings, {mismatched} mismatches")

    formula = count_nowhere_identity(graph, group).value
    if (n - 1) ** e <= budget:
        flows = enumerate_flows(graph, group, nowhere_identity=True, budget=budget)
        _check(checks, "nowhere-identity count: formula = brute", len(flows) == formula,
               f"formula {formula}, enumerated {len(flows)}")
        exhaustive = True
    else:
        flows = random_flows(graph, group, VERIFY_SAMPLE, seed=seed)
        _check(checks, "sampled flows are nowhere-identity flows",
               all(is_flow(p) and p.nowhere_identity for p in flows), f"{len(flows)} sampled")
        exhaustive = False

    failures = {"proper": 0, "covering": 0, "global": 0, "roundtrip": 0, "translates": 0}
    sheets = set()
    colorings = set()
    for psi in flows:
        try:
            result = flow_to_proper_coloring(graph, psi)
        except (AssertionError, DualityError):
            failures["proper"] += 1
            continue
        cov = result.covering
        sheets.add(cov.n_sheets)
        if cov.validate():
            failures["covering"] += 1
        if not is_global_tension(result.tension.labeling):
            failures["global"] += 1
        if covering_tension_to_flow(result.tension, result.dual).as_tuple() != psi.as_tuple():
            failures["roundtrip"] += 1
        fiber = colorings_from_tension(result.tension.labeling)
        if len({k.as_tuple() for k in fiber}) != n or not all(k.is_proper for k in fiber):
            failures["translates"] += 1
        if genus == 0:
            proj = cov.projection.vertex_map
            for k in fiber:
                colorings.add(tuple(sorted((proj[v], c) for v, c in k.values.items())))
    _check(checks, "pipeline yields proper colorings", failures["proper"] == 0, f"{len(flows)} flows")
    _check(checks, "covering map is a covering", failures["covering"] == 0)
    _check(checks, "lifted dual tension is global", failures["global"] == 0)
    _check(checks, "covering tension -> flow round trip", failures["roundtrip"] == 0)
    _check(checks, "|G| distinct proper colorings per covering tension", failures["translates"] == 0)
    _check(checks, "sheet counts divide |G|", all(n % s == 0 for s in sheets),
           "sheets " + ",".join(map(str, sorted(sheets))))
    if genus == 0:
        _check(checks, "planar coverings are 1-sheeted", sheets <= {1})
        if exhaustive:
            _check(checks, "proper colorings of H* = |G| x nowhere-identity flows",
                   len(colorings) == n * formula, f"{len(colorings)} vs {n} x {formula}")
    return checks


def cmd_duality_verify(args) -> int:
    g = io.load_graph(args.graph)
    group = _require_group(args)
    checks = verify_duality(g, group, budget=args.budget or VERIFY_BUDGET, seed=args.seed)
    ok = all(c[1] for c in checks)
    doc = {"ok": ok, "checks": [{"name": c[0], "ok": c[1], "detail": c[2]} for c in checks]}
    text = "\n".join(f"{'PASS' if c[1] else 'FAIL'} {c[0]}" + (f" ({c[2]})" if c[2] else "") for c in checks)
    _emit(args, text, doc)
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------


def _common(p, *, graph=True):
    if graph:
        p.add_argument("graph", help="graph JSON file (or bundled graph name)")
    p.add_argument("--group", help="group spec, e.g. symmetric:3")
    p.add_argument("--class-function", default="regular")
    p.add_argument("--method", choices=["brute", "closed", "formula"])
    p.add_argument("--budget", type=int)
    p.add_argument("--nowhere-identity", action="store_true")
    p.add_argument("--genus", type=int)
    p.add_argument("--class", dest="class_id", type=int)
    p.add_argument("--labels")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surface-flows",
        description="Partition functions, G-flows and coloring-flow duality on embedded graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group", help="inspect a finite group")
    gsub = group.add_subparsers(dest="action", required=True)
    show = gsub.add_parser("show")
    show.add_argument("spec")
    show.add_argument("--json", action="store_true")
    show.set_defaults(func=cmd_group_show)

    for name, func, helptext in [
        ("faces", cmd_faces, "trace faces and report genus"),
        ("genus", cmd_genus, "genus of each component"),
        ("partition", cmd_partition, "partition function P_chi(H)"),
        ("count-flows", cmd_count_flows, "count (nowhere-identity) G-flows"),
        ("cover", cmd_cover, "covering graph of a local tension"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("dual", help="dual graph")
    _common(p)
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON/text")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("frobenius", help="generalized Frobenius count A_g(G, C)")
    p.add_argument("graph", nargs="?", help="ignored; accepted for a uniform grammar")
    _common(p, graph=False)
    p.set_defaults(func=cmd_frobenius)

    tension = sub.add_parser("tension", help="labeling predicates")
    tsub = tension.add_subparsers(dest="action", required=True)
    p = tsub.add_parser("check")
    _common(p)
    p.set_defaults(func=cmd_tension_check)

    duality = sub.add_parser("duality", help="coloring-flow duality checks")
    dsub = duality.add_subparsers(dest="action", required=True)
    p = dsub.add_parser("verify")
    _common(p)
    p.set_defaults(func=cmd_duality_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
