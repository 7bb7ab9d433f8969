"""Command-line front end: ``hqft <command> WORKSPACE [options]``.

Every command builds a small result object holding text lines and a
structured payload, so text and ``--format=json-like`` output come from the
same data.  Exit codes: 0 pass, 1 mathematical failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from .algebras import (IllDefinedAction, algebra_to_functor, check_algebra_axioms, check_dga,
                       check_perp_commutativity, check_theory_functor, constant_diagram, free_einfty,
                       functor_to_algebra, homology_obstruction, pointwise_lan, same_theory, tensoring_free)
from .chain import DegreeWindow, homology
from .hoinv import HoranAlgebra, horan_object, verify_horan_axioms
from .operads import (QftOperad, is_weak_equivalence_operads, profiles_up_to, resolution_map)
from .orthcat import validate as validate_orthogonality
from .simplicial import boundary_simplex, groupoid_cohomology
from .workspace import Workspace, WorkspaceError, load, show_morphism

PASS, FAIL, INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class Result:
    lines: List[str] = field(default_factory=list)
    data: Dict = field(default_factory=dict)
    code: int = PASS

    def say(self, line: str = ""):
        self.lines.append(line)

    def fail(self, line: str):
        self.code = FAIL
        self.lines.append(line)


# ---------------------------------------------------------------- formatting

def fmt(x) -> str:
    """Deterministic short rendering of labels, morphisms and rationals."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "id":
        return show_morphism(x)
    if isinstance(x, tuple):
        return "(" + ",".join(fmt(y) for y in x) + ")"
    if isinstance(x, list):
        return "[" + ", ".join(fmt(y) for y in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{fmt(k)}: {fmt(x[k])}" for k in _sorted_keys(x)) + "}"
    return str(x)


def _sorted_keys(d: Dict) -> List:
    try:
        return sorted(d)
    except TypeError:
        return sorted(d, key=repr)


def fmt_perm(sigma) -> str:
    if tuple(sigma) == tuple(range(1, len(sigma) + 1)):
        return "e"
    return "(" + ",".join(map(str, sigma)) + ")"


def fmt_profile(prof) -> str:
    return f"{','.join(map(str, prof[0]))}->{prof[1]}"


def fmt_class(label) -> str:
    sigma, fs, _ = label
    return f"[{fmt_perm(sigma)}|({','.join(show_morphism(f) for f in fs)})]"


def jsonable(x):
    if isinstance(x, dict):
        return {fmt(k) if not isinstance(k, str) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return fmt(x)


def homology_rows(H, cohomological: bool) -> List[Dict]:
    rows = []
    for n, r, trusted in H.as_rows():
        rows.append({"degree": -n if cohomological else n, "rank": r, "trusted": trusted})
    return sorted(rows, key=lambda row: row["degree"])


def render_rows(res: Result, rows: List[Dict], indent: str = "  "):
    for row in rows:
        flag = "" if row["trusted"] else "  (untrusted)"
        res.say(f"{indent}H[{row['degree']}] = {row['rank']}{flag}")


def parallel_map(fn: Callable, items: Sequence, threads: int) -> List:
    """Ordered map; results come back in input order whatever the thread count."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- argument helpers

def window(args) -> DegreeWindow:
    if args.window is None:
        raise InputError("--window LO HI is required for this command")
    lo, hi = args.window
    if lo > hi:
        raise InputError(f"--window: lower end {lo} exceeds upper end {hi}")
    return DegreeWindow(lo, hi)


def parse_profile(ws: Workspace, text: str):
    """'a,b->t' (or '->t' for arity zero)."""
    if "->" not in text:
        raise InputError(f"--profile {text!r}: expected 'c1,...,cn->t'")
    left, t = (s.strip() for s in text.split("->", 1))
    ins = tuple(s.strip() for s in left.split(",")) if left else ()
    for c in ins + (t,):
        if c not in ws.category.objects:
            raise InputError(f"--profile: unknown object {c!r}")
    return ins, t


def need(ws: Workspace, attr: str, what: str):
    v = getattr(ws, attr)
    if v is None:
        raise InputError(f"workspace {ws.name!r} has no {what} section")
    return v


# ---------------------------------------------------------------- commands

def cmd_validate(ws: Workspace, args) -> Result:
    res = Result(data={"workspace": ws.name, "violations": []})
    res.say(f"workspace: {ws.name}")

    def report(section, items):
        for v in items:
            res.data["violations"].append({"section": section, **{k: fmt(x) for k, x in v.items()}})
            detail = " ".join(f"{k}={fmt(x)}" for k, x in v.items() if k != "kind")
            res.fail(f"  violation [{section}] {v.get('kind', '')}: {detail}")

    if ws.category is not None:
        C = ws.category
        res.say(f"category: {len(C.objects)} objects, {len(C.morphisms)} morphisms")
        report("category", C.validate())
    if ws.orth is not None:
        res.say(f"orthogonality: {len(ws.orth.rel)} pairs")
        report("orthogonality", validate_orthogonality(ws.orth))
    for name in sorted(ws.algebras):
        r = check_dga(ws.algebras[name])
        res.say(f"algebra {name}: {r.checked} identities checked")
        report(f"algebra {name}", r.failures)
    if ws.theory is not None:
        r = check_theory_functor(ws.theory)
        res.say(f"theory: {r.checked} identities checked")
        report("theory", r.failures)
        if ws.orth is not None:
            dec = check_perp_commutativity(ws.theory, ws.orth)
            res.say(f"perp-commutativity: {'; '.join(dec.notes)}")
            if not dec.ok:
                report("perp-commutativity", [{"kind": "products do not commute", **dec.witness}])
    if ws.presheaf is not None:
        bad = ws.presheaf.validate()
        res.say(f"presheaf: {len(ws.presheaf.fibers)} fibers")
        report("presheaf", bad)
    if ws.total_theory is not None:
        r = check_theory_functor(ws.total_theory)
        res.say(f"total theory: {r.checked} identities checked")
        report("total theory", r.failures)
    for name in sorted(ws.complexes):
        res.say(f"complex {name}: dims {fmt(ws.complexes[name].dims())}")
    res.data["result"] = "PASS" if res.code == PASS else "FAIL"
    res.say(res.data["result"])
    return res


def cmd_operad(ws: Workspace, args) -> Result:
    OC = need(ws, "orth", "orthogonality")
    Q = QftOperad(OC)
    prof = parse_profile(ws, args.profile)
    labels = Q.basis(prof, 0)
    res = Result(data={"workspace": ws.name, "profile": [list(prof[0]), prof[1]], "dim": len(labels),
                       "classes": [fmt_class(l) for l in labels]})
    res.say(f"dim = {len(labels)}; classes: " + ", ".join(fmt_class(l) for l in labels))
    if args.members:
        res.data["members"] = {}
        for l in labels:
            mem = [fmt_perm(s) for s in Q.class_members(l)]
            res.data["members"][fmt_class(l)] = mem
            res.say(f"  {fmt_class(l)}: {' '.join(mem)}")
    return res


def cmd_check_qft(ws: Workspace, args) -> Result:
    T = need(ws, "theory", "theory")
    OC = need(ws, "orth", "orthogonality")
    res = Result(data={"workspace": ws.name})
    r = check_theory_functor(T)
    res.data["functor"] = {"ok": r.ok, "checked": r.checked}
    if not r.ok:
        res.fail(f"theory functor: FAIL {fmt(r.failures[0])}")
        res.data["result"] = "FAIL"
        res.say("FAIL")
        return res
    res.say(f"theory functor: ok ({r.checked} identities)")
    dec = check_perp_commutativity(T, OC)
    res.data["perp_commutativity"] = {"ok": dec.ok, "witness": jsonable(dec.witness)}
    if dec.ok:
        res.say(f"perp-commutativity: ok ({'; '.join(dec.notes)})")
    else:
        res.fail(f"perp-commutativity: FAIL pair={fmt(dec.witness['pair'])} x={dec.witness['x']} "
                 f"y={dec.witness['y']} commutator={fmt(dec.witness['commutator'])}")
    try:
        A = functor_to_algebra(T, OC)
    except IllDefinedAction as e:
        w = e.witness
        res.data["action"] = {"ok": False, "witness": jsonable(w)}
        res.fail(f"operad action: ill-defined, witness {fmt(w)}")
        res.data["result"] = "FAIL"
        res.say("FAIL")
        return res
    r = check_algebra_axioms(A, max_arity=args.max_arity, samples=args.samples, seed=args.seed)
    res.data["axioms"] = {"ok": r.ok, "checked": r.checked, "skipped": r.skipped,
                          "max_arity": args.max_arity, "samples": args.samples, "seed": args.seed}
    if r.ok:
        res.say(f"algebra axioms (arity <= {args.max_arity}): ok ({r.checked} checks)")
    else:
        res.fail(f"algebra axioms: FAIL {fmt(r.failures[0])}")
    rt = same_theory(algebra_to_functor(A, OC), T)
    res.data["roundtrip"] = rt
    if rt:
        res.say("roundtrip: ok")
    else:
        res.fail("roundtrip: FAIL")
    res.data["result"] = "PASS" if res.code == PASS else "FAIL"
    res.say(res.data["result"])
    return res


def cmd_resolve_check(ws: Workspace, args) -> Result:
    OC = need(ws, "orth", "orthogonality")
    win = window(args)
    w = resolution_map(OC)
    profs = list(profiles_up_to(OC.cat.objects, args.max_arity))
    decs = parallel_map(lambda p: is_weak_equivalence_operads(w, [p], win), profs, args.threads)
    res = Result(data={"workspace": ws.name, "window": [win.lo, win.hi], "max_arity": args.max_arity,
                       "profiles": len(profs)})
    res.say(f"resolution map on {len(profs)} profiles, arity <= {args.max_arity}, window [{win.lo},{win.hi}]")
    failed = [(p, d) for p, d in zip(profs, decs) if not d.ok]
    if args.verbose:
        for p, d in zip(profs, decs):
            res.say(f"  {fmt_profile(p)}: {d.notes[0].split(': ', 1)[1]}")
    if failed:
        p, d = failed[0]
        res.data["witness"] = jsonable(d.witness)
        res.fail(f"not a quasi-isomorphism at profile {fmt_profile(p)}: {fmt(d.witness)}")
    res.data["result"] = "PASS" if res.code == PASS else "FAIL"
    res.say(res.data["result"])
    return res


def cmd_horan(ws: Workspace, args) -> Result:
    G = need(ws, "total", "presheaf/total_theory")
    T = ws.total_theory
    win = window(args)
    base = ws.presheaf.base.cat
    objs = [args.object] if args.object else list(base.objects)
    for c in objs:
        if c not in base.objects:
            raise InputError(f"--object: unknown object {c!r}")
    H = HoranAlgebra(G, T, win)
    ends = parallel_map(lambda c: horan_object(G, T, c, win), objs, args.threads)
    for c, E in zip(objs, ends):
        H.ends[c] = E
    res = Result(data={"workspace": ws.name, "window": [win.lo, win.hi], "objects": {}})
    for c, E in zip(objs, ends):
        rows = homology_rows(E.homology(), args.cohomological)
        dims = {(-n if args.cohomological else n): d for n, d in sorted(E.complex.dims().items())}
        res.data["objects"][str(c)] = {"dims": {str(k): v for k, v in sorted(dims.items())}, "homology": rows}
        res.say(f"object {c}: end dims {fmt(dims)}")
        render_rows(res, rows)
    if args.trace:
        c = objs[0]
        E = H.end(c)
        zero = [l for l in E.complex.basis.get(0, [])]
        if not zero:
            res.say(f"trace: no degree-0 end elements at {c}")
        else:
            C = base
            p = H.base.canonical((1, 2), (C.id(c), C.id(c)), c)
            e = ((1, 2),)
            z = {zero[0]: Fraction(1)}
            trace: List = []
            out = H.act(p, e, [z, z], trace)
            res.say(f"trace: {fmt_class(p)} x {fmt(e)} on ({fmt(zero[0])}, {fmt(zero[0])}) at {c}")
            steps = []
            for wit in trace:
                step = {"y": fmt(wit.y), "simplex": fmt(wit.simplex), "coaction": fmt(wit.coaction),
                        "pushed": fmt(wit.pushed), "evaluated": fmt(wit.evaluated)}
                steps.append(step)
                res.say("  " + "; ".join(f"{k}={v}" for k, v in step.items()))
            res.say(f"  output = {fmt(out)}")
            res.data["trace"] = {"steps": steps, "output": fmt(out)}
    if args.verify:
        r = verify_horan_axioms(G, T, win, max_arity=args.max_arity, samples=args.samples, seed=args.seed,
                                algebra=H)
        res.data["axioms"] = {"ok": r.ok, "checked": r.checked, "skipped": r.skipped}
        if r.ok:
            res.say(f"axioms (arity <= {args.max_arity}): ok ({r.checked} checks, {r.skipped} outside window)")
        else:
            res.fail(f"axioms: FAIL {fmt(r.failures[0])}")
        res.data["result"] = "PASS" if r.ok else "FAIL"
        res.say(res.data["result"])
    return res


def cmd_groupoid_cohomology(ws: Workspace, args) -> Result:
    win = window(args)
    names = [args.groupoid] if args.groupoid else sorted(ws.groupoids)
    if not names:
        raise InputError(f"workspace {ws.name!r} has no groupoids section")
    for n in names:
        if n not in ws.groupoids:
            raise InputError(f"--groupoid: unknown groupoid {n!r}")
    # cochains sit in non-positive homological degrees, so the window is read homologically
    Hs = parallel_map(lambda n: groupoid_cohomology(ws.groupoids[n], win), names, args.threads)
    res = Result(data={"workspace": ws.name, "window": [win.lo, win.hi], "groupoids": {}})
    for n, H in zip(names, Hs):
        rows = homology_rows(H, args.cohomological)
        res.data["groupoids"][n] = rows
        res.say(f"groupoid {n}:")
        render_rows(res, rows)
    return res


def cmd_homology(ws: Workspace, args) -> Result:
    names = [args.complex] if args.complex else sorted(ws.complexes)
    if not names:
        raise InputError(f"workspace {ws.name!r} has no complexes section")
    win = window(args) if args.window is not None else None
    res = Result(data={"workspace": ws.name, "complexes": {}})
    for n in names:
        if n not in ws.complexes:
            raise InputError(f"--complex: unknown complex {n!r}")
        rows = homology_rows(homology(ws.complexes[n], win), args.cohomological)
        res.data["complexes"][n] = rows
        res.say(f"complex {n}:")
        render_rows(res, rows)
    return res


def cmd_extend(ws: Workspace, args) -> Result:
    spec = ws.extension
    if not isinstance(spec, dict):
        raise InputError(f"workspace {ws.name!r} has no extension section")
    C = need(ws, "category", "category")
    sub = [str(x) for x in spec.get("subcategory") or []]
    for d in sub:
        if d not in C.objects:
            raise WorkspaceError("extension.subcategory", f"unknown object {d!r}")
    V = ws.complexes.get(str(spec.get("complex")))
    if V is None:
        raise WorkspaceError("extension.complex", f"unknown complex {spec.get('complex')!r}")
    t = args.target
    if t not in C.objects:
        raise InputError(f"--target: unknown object {t!r}")
    values, maps = constant_diagram(C, sub, V)
    L = pointwise_lan(C, sub, values, maps, t)
    rows = homology_rows(homology(L), args.cohomological)
    res = Result(data={"workspace": ws.name, "target": t, "dims": {str(k): v for k, v in sorted(L.dims().items())},
                       "homology": rows})
    res.say(f"pointwise extension at {t}: dims {fmt(L.dims())}")
    render_rows(res, rows)
    cmp = spec.get("compare_with")
    if cmp is not None:
        win = window(args)
        n = cmp.get("boundary_simplex")
        W = ws.complexes.get(str(cmp.get("generators")))
        if not isinstance(n, int) or W is None:
            raise WorkspaceError("extension.compare_with", "needs boundary_simplex: n and generators: complex")
        F = tensoring_free(boundary_simplex(n), free_einfty(W), win)
        frows = homology_rows(homology(F.generators, win), args.cohomological)
        dec = homology_obstruction(L, F.generators, win)
        res.data["tensoring"] = {"homology": frows, "quasi_isomorphic_possible": dec.ok,
                                 "witness": jsonable(dec.witness)}
        res.say(f"tensoring with the boundary of the {n}-simplex, generator homology:")
        render_rows(res, frows)
        if dec.ok:
            res.say("homology ranks agree in the window")
        else:
            w = dec.witness
            res.say(f"not quasi-isomorphic: degree {w['degree']} has rank {w['rank_source']} "
                    f"versus {w['rank_target']}")
    return res


COMMANDS = {
    "validate": cmd_validate,
    "operad": cmd_operad,
    "check-qft": cmd_check_qft,
    "resolve-check": cmd_resolve_check,
    "horan": cmd_horan,
    "groupoid-cohomology": cmd_groupoid_cohomology,
    "homology": cmd_homology,
    "extend": cmd_extend,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", help="YAML workspace file")
    common.add_argument("--format", choices=["text", "json-like"], default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    common.add_argument("--cohomological", action="store_true", help="display degrees negated")

    p = argparse.ArgumentParser(prog="hqft", description="Homotopy QFT operads and algebras, exact over Q.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a workspace's structures")
    s = sub.add_parser("operad", parents=[common], help="a QFT operad component")
    s.add_argument("--profile", required=True, help="'c1,...,cn->t'")
    s.add_argument("--members", action="store_true", help="list the permutations in each class")
    s = sub.add_parser("check-qft", parents=[common], help="theory functor versus operad algebra")
    s.add_argument("--max-arity", type=int, default=2)
    s.add_argument("--samples", type=int, default=None)
    s = sub.add_parser("resolve-check", parents=[common], help="the resolution map is a quasi-isomorphism")
    s.add_argument("--max-arity", type=int, required=True)
    s.add_argument("--verbose", action="store_true")
    s = sub.add_parser("horan", parents=[common], help="homotopy invariants of a total theory")
    s.add_argument("--object", default=None)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--max-arity", type=int, default=2)
    s.add_argument("--samples", type=int, default=None)
    s = sub.add_parser("groupoid-cohomology", parents=[common], help="cohomology of workspace groupoids")
    s.add_argument("--groupoid", default=None)
    s = sub.add_parser("homology", parents=[common], help="homology of workspace complexes")
    s.add_argument("--complex", default=None)
    s = sub.add_parser("extend", parents=[common], help="pointwise left Kan extension of a constant diagram")
    s.add_argument("--target", required=True)
    return p


def emit(res: Result, fmt_name: str, out) -> None:
    if fmt_name == "json-like":
        payload = dict(jsonable(res.data))
        payload["exit_code"] = res.code
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(res.lines) + "\n")


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return INPUT
    try:
        ws = load(args.workspace)
        res = COMMANDS[args.command](ws, args)
    except WorkspaceError as e:
        print(f"error: {args.workspace}: {e}", file=sys.stderr)
        return INPUT
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT
    emit(res, args.format, out)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
