"""Command-line entry point.

Exit codes: 0 when the checked property holds (or the requested outcome was
reached), 1 when it is violated, 2 for usage and input errors.  Reports go to
standard output as canonical JSON; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import _config, curvature, geometry, isbell, reports, tilings
from .coloring import Coloring, ColoringError, is_nice_coloring, search_nice_coloring
from .generators import icosahedral_subdivision
from .mesh import MeshError, mesh_from_dict, mesh_to_dict

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Missing files, malformed JSON and documents that fail validation."""


# -- input helpers ---------------------------------------------------------------------

def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _parse_json(path: str, raw: bytes):
    try:
        return json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text (byte {exc.start})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _load_mesh(path: str):
    raw = _read(path)
    doc = _parse_json(path, raw)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: a mesh document must be a JSON object")
    try:
        return mesh_from_dict(doc), raw
    except MeshError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_tiling(path: str):
    raw = _read(path)
    doc = _parse_json(path, raw)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: a tiling document must be a JSON object")
    try:
        return tilings.TilingDoc.from_dict(doc), raw
    except (tilings.TilingError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_coloring(path: str):
    raw = _read(path)
    doc = _parse_json(path, raw)
    try:
        return Coloring.from_dict(doc), raw
    except ColoringError as exc:
        raise InputError(f"{path}: {exc}") from None


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"parameter {item!r} is not KEY=VALUE")
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = float(value)
            except ValueError:
                raise InputError(f"parameter {key} needs a number, got {value!r}") from None
    return out


# -- commands --------------------------------------------------------------------------
# each returns (command name, status, metrics, witnesses, input blobs, artifact or None)

def cmd_verify_isbell1(args):
    rep = isbell.verify_isbell_uniqueness(timeout=args.timeout)
    metrics = {"solutions": rep["fixed_count"], "unrestricted": rep["unrestricted_count"],
               "expected_unrestricted": rep["expected_unrestricted"],
               "all_unrestricted_are_isbell": rep["all_unrestricted_are_isbell"], "nodes": rep["nodes"]}
    return "verify isbell1", "pass" if rep["ok"] else "fail", metrics, {"completions": rep["completions"]}, ()


def cmd_verify_isbell2(args):
    rep = isbell.verify_isbell_extension()
    ok = rep.pop("ok")
    return "verify isbell2", "pass" if ok else "fail", rep, None, ()


def cmd_verify_curvature(args):
    if args.freq < 1 or args.cycles < 0:
        raise InputError("--freq must be >= 1 and --cycles >= 0")
    m = icosahedral_subdivision(args.freq)
    rep = curvature.curvature_census(m, args.cycles, np.random.default_rng(args.seed))
    metrics = {"frequency": args.freq, "samples": rep["samples"], "mismatches": len(rep["mismatches"]),
               "contraction_failures": len(rep["contraction_failures"]), "seed": args.seed}
    witnesses = {"mismatches": rep["mismatches"][:5], "contraction_failures": rep["contraction_failures"][:5]}
    return "verify curvature", "pass" if rep["ok"] else "fail", metrics, witnesses, ()


def cmd_verify_premises(args):
    m, raw = _load_mesh(args.mesh)
    if m.embedding is None:
        raise InputError(f"{args.mesh}: mesh has no embedding block")
    rep = geometry.verify_graph_premises(m, args.d1, args.d2)
    return "verify premises", "pass" if rep["ok"] else "fail", rep["checks"], None, (raw,)


def cmd_verify_tiling(args):
    doc, raw = _load_tiling(args.doc)
    try:
        rep = tilings.verify_nice_tiling(doc)
    except tilings.TilingError as exc:
        return "verify tiling", "fail", {"error": str(exc)}, None, (raw,)
    metrics = rep.to_dict()
    witnesses = {"diameter_tile": metrics.pop("diameter_witness"),
                 "closest_same_color_pair": metrics.pop("distance_witness")}
    if args.adjacency:
        adj = tilings.adjacency_graph(doc)
        metrics["adjacency"] = adj.to_dict()
        if adj.fully_triangulated:
            ok, clash = is_nice_coloring(adj.mesh, [t.color for t in doc.tiles], doc.k)
            metrics["adjacency"]["induced_coloring_nice"] = ok
            witnesses["induced_clash"] = clash
    return "verify tiling", "pass" if rep.passed else "fail", metrics, witnesses, (raw,)


def cmd_verify_euler(args):
    m, raw = _load_mesh(args.mesh)
    rep = tilings.euler_obstruction(m)
    return "verify euler", "pass", rep.to_dict(), None, (raw,)


def cmd_color(args):
    m, raw = _load_mesh(args.mesh)
    blobs = [raw]
    fixed = None
    if args.fixed:
        fixed, fraw = _load_coloring(args.fixed)
        blobs.append(fraw)
        if len(fixed.colors) != m.vertex_count:
            raise InputError(f"{args.fixed}: colouring length does not match the mesh")
    mode = {"find": "find", "enumerate": "enumerate", "unsat": "prove_unsat"}[args.mode]
    try:
        out = search_nice_coloring(m, args.k, mode=mode, fixed=fixed, timeout=args.timeout)
    except ColoringError as exc:
        raise InputError(str(exc)) from None
    metrics = {"k": args.k, "mode": args.mode, "vertices": m.vertex_count, "nodes": out.stats.nodes,
               "symmetry_breaking": out.stats.symmetry_breaking}
    witnesses = None
    if out.status == "sat":
        ok, bad = is_nice_coloring(m, out.coloring.colors, args.k)
        metrics["witness_checked"] = ok
        witnesses = out.coloring.to_dict()
        status = "sat"
    elif out.status == "unsat":
        status = "unsat"
    elif out.status == "enumerated":
        status = "pass"
        metrics["count"] = out.count
    else:
        status = "indeterminate"
        if out.count is not None:
            metrics["count_so_far"] = out.count
    return "color", status, metrics, witnesses, tuple(blobs)


def cmd_gen_sphere(args):
    if args.freq < 1 or not args.radius > 0:
        raise InputError("--freq must be >= 1 and --radius positive")
    m = icosahedral_subdivision(args.freq, args.radius)
    doc = mesh_to_dict(m)
    metrics = {"frequency": args.freq, "radius": args.radius, "vertices": m.vertex_count,
               "edges": len(m.edges), "faces": len(m.triangles)}
    return "gen sphere", "pass", metrics, None, (), doc


def cmd_gen_construction(args):
    params = _parse_params(args.param)
    try:
        obj = tilings.builtin_construction(args.name, **params)
    except tilings.TilingError as exc:
        raise InputError(str(exc)) from None
    doc = obj.to_dict()
    metrics = {"name": args.name, "params": params}
    if isinstance(obj, tilings.TilingDoc):
        metrics["tiles"] = len(obj.tiles)
        metrics["domain"] = obj.domain.to_dict()
    else:
        metrics["points"] = len(obj.points)
        metrics["unit_pairs"] = len(obj.unit_pairs())
    return "gen construction", "pass", metrics, None, (), doc


def cmd_case_classify(args):
    m, raw = _load_mesh(args.mesh)
    h = curvature.proximity_graph(m)
    try:
        case = curvature.classify_case(h)
    except curvature.CurvatureError as exc:
        raise InputError(f"{args.mesh}: {exc}") from None
    metrics = {"case": case, "proximity_graph": h.to_dict()}
    witnesses = None
    if case == "Case2":
        comp = h.components[0]
        c = curvature.separating_cycle(m, comp)
        total, lcs = curvature.cycle_curvature(m, c)
        metrics["separating_cycle_curvature"] = total
        metrics["curvature_mod6"] = total % 6
        witnesses = {"component": list(comp), "separating_cycle": list(c), "local_curvatures": lcs}
    else:
        tp = curvature.case1_trees(m, h)
        metrics["trees"] = {"t1_edges": tp.t1.edge_count, "t2_edges": tp.t2.edge_count,
                            "shared_vertex": tp.shared,
                            "steiner_edges": tp.t0.edge_count if tp.t0 is not None else None}
        witnesses = {"t1": tp.t1.to_dict(), "t2": tp.t2.to_dict()}
    return "case classify", "pass", metrics, witnesses, (raw,)


def cmd_sweep(args):
    m, raw = _load_mesh(args.mesh)
    h = curvature.proximity_graph(m)
    try:
        case = curvature.classify_case(h)
        if case == "Case2":
            raise InputError(f"{args.mesh}: the sweep needs a Case 1 mesh, this one is Case 2")
        tp = curvature.case1_trees(m, h)
        cm = curvature.cut_along_trees(m, tp)
        tr = curvature.sweep_cycles(cm)
    except curvature.CurvatureError as exc:
        return "sweep", "fail", {"error": str(exc)}, None, (raw,)
    d = tr.to_dict()
    cycles = d.pop("cycles")
    ends = curvature._same_undirected(tr.cycles[-1], cm.boundaries[1])
    metrics = {"case": case, "t1_edges": tp.t1.edge_count, "t2_edges": tp.t2.edge_count,
               "steiner_edges": tp.t0.edge_count if tp.t0 is not None else None,
               "length_bound": curvature.SWEEP_LENGTH_BOUND, "ends_at_t2": ends, **d}
    status = "pass" if tr.ok and ends else "fail"
    return "sweep", status, metrics, {"cycles": cycles}, (raw,)


def _export_dot(m, coloring) -> str:
    lines = ["graph mesh {"]
    for v in range(m.vertex_count):
        label = f' [label="{v}:{coloring.colors[v]}"]' if coloring else ""
        lines.append(f"  {v}{label};")
    for a, b in m.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_obj(m) -> str:
    pts = m.embedding.points()
    lines = [f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in pts]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in m.triangles]
    return "\n".join(lines) + "\n"


def cmd_export(args):
    m, raw = _load_mesh(args.mesh)
    blobs = [raw]
    coloring = None
    if args.coloring:
        coloring, craw = _load_coloring(args.coloring)
        blobs.append(craw)
        if len(coloring.colors) != m.vertex_count:
            raise InputError(f"{args.coloring}: colouring length does not match the mesh")
    if args.format == "dot":
        text = _export_dot(m, coloring)
    elif args.format == "obj":
        if m.embedding is None:
            raise InputError(f"{args.mesh}: OBJ export needs an embedding block")
        text = _export_obj(m)
    else:
        doc = mesh_to_dict(m)
        if coloring:
            doc["coloring"] = coloring.to_dict()
        text = reports.dumps(doc)
    metrics = {"format": args.format, "vertices": m.vertex_count, "bytes": len(text.encode())}
    return f"export {args.format}", "pass", metrics, None, tuple(blobs), text


# -- parser ----------------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    # leaves repeat the flags with suppressed defaults so they may follow the subcommand
    def d(value):
        return argparse.SUPPRESS if suppress else value
    p.add_argument("--tolerance", type=float, default=d(None), help="geometric tolerance override")
    p.add_argument("--out", metavar="FILE", default=d(None),
                   help="write the report (or generated document) atomically")
    p.add_argument("--timing", action="store_true", default=d(False),
                   help="record wall-clock time in the report")
    p.add_argument("--seed", type=int, default=d(0), help="random seed for sampled checks")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spherecolor", description=__doc__.splitlines()[0])
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="group", required=True)

    v = sub.add_parser("verify", help="machine checks").add_subparsers(dest="what", required=True)
    s = v.add_parser("isbell1", parents=[common])
    s.add_argument("--timeout", type=float, default=None)
    s.set_defaults(func=cmd_verify_isbell1)
    v.add_parser("isbell2", parents=[common]).set_defaults(func=cmd_verify_isbell2)
    s = v.add_parser("curvature", parents=[common])
    s.add_argument("--freq", type=int, required=True)
    s.add_argument("--cycles", type=int, required=True)
    s.set_defaults(func=cmd_verify_curvature)
    s = v.add_parser("premises", parents=[common])
    s.add_argument("--mesh", required=True)
    s.add_argument("--d1", type=float, required=True)
    s.add_argument("--d2", type=float, required=True)
    s.set_defaults(func=cmd_verify_premises)
    s = v.add_parser("tiling", parents=[common])
    s.add_argument("--doc", required=True)
    s.add_argument("--adjacency", action="store_true",
                   help="also extract the adjacency graph and check the induced colouring")
    s.set_defaults(func=cmd_verify_tiling)
    s = v.add_parser("euler", parents=[common])
    s.add_argument("--mesh", required=True)
    s.set_defaults(func=cmd_verify_euler)

    s = sub.add_parser("color", parents=[common], help="exact nice-colouring search")
    s.add_argument("--mesh", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mode", choices=("find", "enumerate", "unsat"), default="find")
    s.add_argument("--fixed", help="partial colouring JSON to extend")
    s.add_argument("--timeout", type=float, default=None)
    s.set_defaults(func=cmd_color)

    g = sub.add_parser("gen", help="generate meshes and constructions").add_subparsers(dest="what", required=True)
    s = g.add_parser("sphere", parents=[common])
    s.add_argument("--freq", type=int, required=True)
    s.add_argument("--radius", type=float, default=1.0)
    s.set_defaults(func=cmd_gen_sphere)
    s = g.add_parser("construction", parents=[common])
    s.add_argument("name", choices=tilings.BUILTINS)
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.set_defaults(func=cmd_gen_construction)

    c = sub.add_parser("case", help="case analysis").add_subparsers(dest="what", required=True)
    s = c.add_parser("classify", parents=[common])
    s.add_argument("--mesh", required=True)
    s.set_defaults(func=cmd_case_classify)

    s = sub.add_parser("sweep", parents=[common], help="cycle sweep between the two trees")
    s.add_argument("--mesh", required=True)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("export", parents=[common], help="write a mesh as DOT, JSON or OBJ")
    s.add_argument("format", choices=("dot", "json", "obj"))
    s.add_argument("--mesh", required=True)
    s.add_argument("--coloring")
    s.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.tolerance is not None:
            _config.set_tolerance(args.tolerance)
        start = time.perf_counter()
        result = args.func(args)
        elapsed = time.perf_counter() - start if args.timing else None
        name, status, metrics, witnesses, blobs = result[:5]
        artifact = result[5] if len(result) > 5 else None
        rep = reports.make_report(name, status, metrics, witnesses, blobs, elapsed)
    except (InputError, ValueError) as exc:
        print(f"spherecolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report_text = reports.dumps(rep)
    if artifact is not None:
        text = artifact if isinstance(artifact, str) else reports.dumps(artifact)
        if args.out:
            reports.write_atomic(args.out, text)
            sys.stdout.write(report_text)
        else:
            sys.stdout.write(text)
    else:
        if args.out:
            reports.write_atomic(args.out, report_text)
        sys.stdout.write(report_text)

    if status in ("pass", "sat") and not (name == "color" and args.mode == "unsat"):
        return EXIT_OK
    if status == "unsat" and name == "color" and args.mode == "unsat":
        return EXIT_OK
    return EXIT_VIOLATED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
