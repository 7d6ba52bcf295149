"""Command-line front end: deterministic JSON reports on stdout.

Exit codes: 0 when the computation ran and the checked property holds
(onto / unisolvent / equal / assumption true / counterexample verified),
1 when the computation ran and the property fails, 2 on usage or input
errors.  Identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Optional

from . import __version__
from .bubble import ContinuityVector, enumerate_bubble
from .dofs import unisolvency_check
from .exact import rational_str
from .extend import (check_a1, check_a2, restriction_onto, verify_witness,
                     witness_k_rd, witness_rd_rs)
from .simplicial import (BUILTIN_MESH_NAMES, MeshError, Triangulation,
                         builtin_mesh, reference_mesh)
from .spaces import (assemble_fe_space, assemble_superspline, n_local,
                     vector_blocks)


def _mesh_hash(T: Triangulation) -> str:
    return hashlib.sha256(T.dumps().encode()).hexdigest()[:16]


def _load_mesh(path: str) -> tuple[Triangulation, Optional[list]]:
    """Accepts a bare mesh object or a wrapped report from `mesh builtin`."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MeshError(f"cannot read mesh file {path}: {exc}") from exc
    if isinstance(obj, dict) and isinstance(obj.get("result"), dict):
        obj = obj["result"]
    sub_cells = None
    if isinstance(obj, dict) and "mesh" in obj:
        sub_cells = obj.get("sub_cells")
        obj = obj["mesh"]
    if not isinstance(obj, dict):
        raise MeshError(f"mesh file {path} does not hold a mesh object")
    return Triangulation.from_json_dict(obj), sub_cells


def _parse_sub(text: str, n_cells: int) -> list[int]:
    try:
        indices = sorted({int(part) for part in text.split(",")})
    except ValueError as exc:
        raise MeshError(f"bad cell index list {text!r}") from exc
    if any(i < 0 or i >= n_cells for i in indices):
        raise MeshError(f"cell index out of range in {text!r}")
    return indices


def _witness_json(T: Triangulation, k: int, vec) -> list[dict]:
    return [p.to_json_dict() for p in vector_blocks(T, k, vec)]


def _emit(command: str, parameters: dict, result: dict, matrices: list,
          pretty: bool) -> None:
    report = {
        "command": command,
        "parameters": parameters,
        "result": result,
        "matrix_sizes": matrices,
        "tool_version": __version__,
    }
    if pretty:
        text = json.dumps(report, sort_keys=True, indent=2)
    else:
        text = json.dumps(report, sort_keys=True, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def _threads() -> int:
    # Upper cap on internal parallelism; the pipeline is sequential, which
    # always satisfies the cap and keeps reports reproducible.
    try:
        return max(1, int(os.environ.get("SRK_THREADS", "1")))
    except ValueError:
        return 1


def _cmd_mesh_builtin(args) -> int:
    T, Tsub = builtin_mesh(args.name, args.d)
    sub_cells = sorted(T.cell_index(c) for c in Tsub.cells)
    result = {
        "name": args.name,
        "d": args.d,
        "mesh": T.to_json_dict(),
        "sub_cells": sub_cells,
    }
    params = {"name": args.name, "d": args.d, "mesh_hash": _mesh_hash(T)}
    _emit("mesh builtin", params, result, [], args.pretty)
    return 0


def _cmd_bubble(args) -> int:
    r = ContinuityVector.parse(args.r)
    space = enumerate_bubble(args.d, args.s, r, args.k, args.n)
    params = {"d": args.d, "s": args.s, "r": list(r.values), "k": args.k, "n": args.n}
    result = {"indices": [list(sigma) for sigma in space.indices], "dim": space.dim}
    _emit("bubble", params, result, [], args.pretty)
    return 0


def _cmd_unisolvency(args) -> int:
    r = ContinuityVector.parse(args.r)
    T = reference_mesh(args.d)
    verdict = unisolvency_check(T.cells[0], T, r, args.k)
    params = {"d": args.d, "r": list(r.values), "k": args.k}
    result = {
        "verdict": verdict.status,
        "dof_count": verdict.dof_count,
        "dim_pk": verdict.dim_pk,
        "rank": verdict.rank,
        "per_face_breakdown": {str(dim): cnt
                               for dim, cnt in sorted(verdict.per_face_dim.items())},
    }
    matrices = [{"name": "dof_matrix", "rows": verdict.dof_count,
                 "cols": verdict.dim_pk}]
    _emit("unisolvency", params, result, matrices, args.pretty)
    return 0 if verdict.unisolvent else 1


def _cmd_dim(args) -> int:
    T, _ = _load_mesh(args.mesh)
    r = ContinuityVector.parse(args.r)
    assemble = assemble_fe_space if args.space == "fe" else assemble_superspline
    basis = assemble(T, r, args.k)
    params = {"d": T.dim, "r": list(r.values), "k": args.k,
              "mesh_hash": _mesh_hash(T), "space": args.space}
    result = {"dim": basis.dim, "n_constraints": basis.n_constraints,
              "n_unknowns": basis.n_unknowns, "rank": basis.rank}
    if basis.local_status is not None:
        result["local_unisolvency"] = basis.local_status
    matrices = [{"name": "constraints", "rows": basis.n_constraints,
                 "cols": basis.n_unknowns}]
    _emit("dim", params, result, matrices, args.pretty)
    return 0


def _cmd_equal_spaces(args) -> int:
    from .spaces import spaces_equal

    T, _ = _load_mesh(args.mesh)
    r = ContinuityVector.parse(args.r)
    fe = assemble_fe_space(T, r, args.k)
    spline = assemble_superspline(T, r, args.k)
    equal = spaces_equal(fe, spline)
    params = {"d": T.dim, "r": list(r.values), "k": args.k,
              "mesh_hash": _mesh_hash(T)}
    result = {"equal": equal, "dim_fe": fe.dim, "dim_spline": spline.dim,
              "n_unknowns": fe.n_unknowns,
              "local_unisolvency": fe.local_status}
    matrices = [
        {"name": "fe_constraints", "rows": fe.n_constraints, "cols": fe.n_unknowns},
        {"name": "spline_constraints", "rows": spline.n_constraints,
         "cols": spline.n_unknowns},
    ]
    _emit("equal-spaces", params, result, matrices, args.pretty)
    return 0 if equal else 1


def _cmd_extend(args) -> int:
    T, embedded_sub = _load_mesh(args.mesh)
    r = ContinuityVector.parse(args.r)
    if args.sub is not None:
        sub_cells = _parse_sub(args.sub, len(T.cells))
    elif embedded_sub is not None:
        sub_cells = sorted(int(i) for i in embedded_sub)
    else:
        raise MeshError("no subtriangulation: pass --sub or use a catalog file")
    Tsub = T.subcomplex(sub_cells)
    verdict = restriction_onto(T, Tsub, r, args.k, kind=args.space)
    params = {"d": T.dim, "r": list(r.values), "k": args.k,
              "mesh_hash": _mesh_hash(T), "space": args.space,
              "sub_cells": sub_cells}
    result = {
        "onto": verdict.onto,
        "dim_sub": verdict.dim_sub,
        "image_rank": verdict.image_rank,
        "dim_full": verdict.dim_full,
        "witness": None if verdict.witness is None
        else _witness_json(Tsub, args.k, verdict.witness),
    }
    matrices = [{"name": "restriction_image", "rows": verdict.dim_full,
                 "cols": n_local(T.dim, args.k) * len(Tsub.cells)}]
    _emit("extend", params, result, matrices, args.pretty)
    return 0 if verdict.onto else 1


def _cmd_assumptions(args) -> int:
    r = ContinuityVector.parse(args.r)
    a2 = check_a2(r)
    a1 = check_a1(r, args.k) if args.k is not None else None
    params = {"d": r.d, "r": list(r.values)}
    if args.k is not None:
        params["k"] = args.k
    result = {"a1": a1, "a2": a2}
    _emit("assumptions", params, result, [], args.pretty)
    holds = a1 if a1 is not None else a2
    return 0 if holds else 1


def _cmd_counterexample(args) -> int:
    r = ContinuityVector.parse(args.r)
    d = args.d
    if args.case == "k_rd":
        k = args.k if args.k is not None else 2 * r.order(r.d)
        w = witness_k_rd(d, r, k)
    else:
        s = r.d if args.case == "rd" else args.s
        if s is None:
            raise MeshError("--s is required for --case rs")
        w = witness_rd_rs(d, s, r, k=args.k)
    report = verify_witness(w.triangulation, w.sub, w.r, w.k, w.vector)
    T = w.triangulation
    sub_cells = sorted(T.cell_index(c) for c in w.sub.cells)
    params = {"case": args.case, "d": d, "r": list(r.values), "k": w.k,
              "mesh_hash": _mesh_hash(T)}
    if args.case == "rs":
        params["s"] = args.s
    result = {
        "mesh": T.to_json_dict(),
        "sub_cells": sub_cells,
        "witness": _witness_json(w.sub, w.k, w.vector),
        "member_of_sub": report.member_of_sub,
        "extendable": report.extendable,
    }
    _emit("counterexample", params, result, [], args.pretty)
    return 0 if (report.member_of_sub and not report.extendable) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srk",
        description="Exact toolkit for C^r finite element and superspline spaces",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--pretty", action="store_true",
                       help="indent the JSON report")

    mesh = sub.add_parser("mesh", help="mesh catalog operations")
    mesh_sub = mesh.add_subparsers(dest="mesh_command", required=True)
    mb = mesh_sub.add_parser("builtin", help="emit a catalog mesh with its sub-mesh")
    mb.add_argument("--name", required=True, choices=BUILTIN_MESH_NAMES)
    mb.add_argument("--d", type=int, required=True)
    common(mb)
    mb.set_defaults(func=_cmd_mesh_builtin)

    bub = sub.add_parser("bubble", help="enumerate bubble weight exponents")
    bub.add_argument("--d", type=int, required=True)
    bub.add_argument("--s", type=int, required=True)
    bub.add_argument("--r", required=True)
    bub.add_argument("--k", type=int, required=True)
    bub.add_argument("--n", type=int, required=True)
    common(bub)
    bub.set_defaults(func=_cmd_bubble)

    uni = sub.add_parser("unisolvency", help="count-and-rank test on a reference cell")
    uni.add_argument("--d", type=int, required=True)
    uni.add_argument("--r", required=True)
    uni.add_argument("--k", type=int, required=True)
    common(uni)
    uni.set_defaults(func=_cmd_unisolvency)

    dim = sub.add_parser("dim", help="dimension of a global space on a mesh")
    dim.add_argument("--mesh", required=True)
    dim.add_argument("--r", required=True)
    dim.add_argument("--k", type=int, required=True)
    dim.add_argument("--space", choices=("fe", "spline"), default="spline")
    common(dim)
    dim.set_defaults(func=_cmd_dim)

    eq = sub.add_parser("equal-spaces", help="compare the two spaces on a mesh")
    eq.add_argument("--mesh", required=True)
    eq.add_argument("--r", required=True)
    eq.add_argument("--k", type=int, required=True)
    common(eq)
    eq.set_defaults(func=_cmd_equal_spaces)

    ext = sub.add_parser("extend", help="is restriction onto a sub-mesh surjective")
    ext.add_argument("--mesh", required=True)
    ext.add_argument("--sub", help="comma-separated cell indices of the sub-mesh")
    ext.add_argument("--r", required=True)
    ext.add_argument("--k", type=int, required=True)
    ext.add_argument("--space", choices=("fe", "spline"), default="spline")
    common(ext)
    ext.set_defaults(func=_cmd_extend)

    ass = sub.add_parser("assumptions", help="admissibility checks for (r, k)")
    ass.add_argument("--r", required=True)
    ass.add_argument("--k", type=int)
    common(ass)
    ass.set_defaults(func=_cmd_assumptions)

    ce = sub.add_parser("counterexample", help="build and verify a witness")
    ce.add_argument("--case", required=True, choices=("k_rd", "rd", "rs"))
    ce.add_argument("--d", type=int, required=True)
    ce.add_argument("--s", type=int)
    ce.add_argument("--r", required=True)
    ce.add_argument("--k", type=int)
    common(ce)
    ce.set_defaults(func=_cmd_counterexample)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _threads()
    try:
        return args.func(args)
    except (MeshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
