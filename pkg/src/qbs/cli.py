"""Command line front end: ``qbs <verb> <file> [options]``."""
from __future__ import annotations

import argparse
import itertools
import math
import sys
from pathlib import Path

from . import io
from .catalog import quiver_classes, setting_from_indices
from .cofree_classifier import is_cofree
from .errors import BudgetExceeded, QBSError
from .fiber_model import fiber_description, nullcone_components
from .flat_locus import (
    AZUMAYA,
    FLAT_NON_AZUMAYA,
    classify_point,
    is_flat_local_setting,
    singular_shape_check,
)
from .quiver_core import (
    QuiverSetting,
    count_quasiprimitive_cycles_through,
    is_connected,
    is_strongly_connected,
    node_limit,
)
from .rep_theory import (
    DecompositionType,
    LocalQuiverData,
    enumerate_decompositions,
    has_simple_reps,
    is_reduced,
    local_quiver,
    simplicity_verdict,
)
from .toric_geometry import (
    build_fan,
    connecting_subquivers,
    extend,
    minimal_connecting_subquivers,
    toric_model,
)
from . import oracles

VERBS = ("check-simple", "check-reduced", "check-cofree", "decompositions", "local-quiver",
         "flat-locus", "fibers", "oracle")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _gamma_override(raw: str | None, S: QuiverSetting):
    if raw is None:
        return None
    raw = raw.strip()
    if raw.startswith("{"):
        data = io.loads(raw)
    else:
        data = {}
        for part in raw.split(","):
            key, _, value = part.partition("=")
            if not value:
                raise UsageError(f"bad --gamma entry {part!r}; expected vertex=int")
            data[key.strip()] = int(value)
    missing = [v for v in S.vertices if v not in data]
    if missing:
        raise UsageError(f"--gamma is missing vertices {missing}")
    return {v: int(data[v]) for v in S.vertices}


def _decomposition(raw: str | None, S: QuiverSetting) -> DecompositionType | None:
    if raw is None:
        return None
    if raw == "trivial":
        return DecompositionType.trivial(S)
    if raw == "finest":
        return DecompositionType.finest(S)
    if raw.isdigit():
        found = enumerate_decompositions(S)
        k = int(raw)
        if not 0 <= k < len(found):
            raise UsageError(f"decomposition index {k} out of range 0..{len(found) - 1}")
        return found[k]
    path = Path(raw)
    data = io.load(path) if path.exists() else io.loads(raw)
    return DecompositionType.from_json(S, data)


def _dec_text(S, D) -> str:
    parts = []
    for beta, m in D.summands:
        vec = "(" + ",".join(str(b) for b in beta) + ")"
        parts.append(vec if m == 1 else f"{m}*{vec}")
    return " + ".join(parts)


# verbs -----------------------------------------------------------------------

def cmd_check_simple(S, gamma, args):
    v = simplicity_verdict(S)
    data = {"simple": v.simple, "case": v.case, "violated": v.violated}
    if v.simple:
        extra = ", α=1" if v.case in ("cyclic", "one-loop", "point") else ""
        text = f"simple: true (family: {v.case}{extra})"
    else:
        text = f"simple: false (violated: {v.violated})"
    return data, text, EXIT_OK if v.simple else EXIT_NEGATIVE


def cmd_check_reduced(S, gamma, args):
    ok = is_reduced(S)
    return {"reduced": ok}, f"reduced: {str(ok).lower()}", EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check_cofree(S, gamma, args):
    v = is_cofree(S)
    lines = [f"cofree: {str(v.cofree).lower()}"]
    for step in v.reduction_trace:
        lines.append(f"  reduce at {step.vertex} (dim {step.dim}) into {step.out_arrow[1]}")
    for i, P in enumerate(v.components):
        lines.append(f"  component {i}: {list(P.vertices)} family {v.family_tags[i]}")
    return v.to_json(), "\n".join(lines), EXIT_OK if v.cofree else EXIT_NEGATIVE


def cmd_decompositions(S, gamma, args):
    found = enumerate_decompositions(S)
    data = {"count": len(found), "decompositions": [D.to_json(S) for D in found]}
    lines = [f"decompositions: {len(found)}"]
    lines += [f"  [{i}] {_dec_text(S, D)}" for i, D in enumerate(found)]
    return data, "\n".join(lines), EXIT_OK


def _local_text(L: LocalQuiverData) -> list[str]:
    S = L.setting
    lines = [f"local quiver: {len(S.vertices)} vertices, n={L.n}"]
    loops = L.loops()
    for v, d, beta in itertools.zip_longest(S.vertices, S.dims, L.blocks):
        g = "" if L.gamma is None else f" gamma={L.gamma[v]}"
        b = "" if beta is None else f" beta={beta}"
        lines.append(f"  {v}: dim={d} loops={loops[v]}{g}{b}")
    others = [f"{t}->{h}" for t, h in S.arrows if t != h]
    lines.append("  arrows: " + (" ".join(others) if others else "none"))
    return lines


def cmd_local_quiver(S, gamma, args):
    D = _decomposition(args.decomposition, S) or DecompositionType.finest(S)
    L = local_quiver(S, D, gamma)
    data = io.local_to_json(L)
    data["blocks"] = [list(b) for b in L.blocks]
    return data, "\n".join(_local_text(L)), EXIT_OK


def cmd_flat_locus(S, gamma, args):
    points = []
    lines = []
    decs = [_decomposition(args.decomposition, S)] if args.decomposition else enumerate_decompositions(S)
    for D in decs:
        pc = classify_point(S, gamma, D)
        points.append({"decomposition": D.to_json(S), **pc.to_json()})
        dim = "unknown" if pc.fiber_dim is None else pc.fiber_dim
        lines.append(f"  {_dec_text(S, D)}: {pc.kind} fiber_dim={dim}"
                     + (f" family={pc.family}" if pc.family else ""))
    counts = {k: sum(1 for p in points if p["kind"] == k)
              for k in (AZUMAYA, FLAT_NON_AZUMAYA, "NonFlat")}
    data = {"points": points, "counts": counts}
    head = [f"points: {len(points)} ({', '.join(f'{k}={v}' for k, v in counts.items())})"]
    if len(S.vertices) >= 2 and is_strongly_connected(S.quiver) and is_reduced(S):
        ok, w = singular_shape_check(S)
        data["singular_shape"] = {"found": ok, "witness": w.to_json() if w else None}
        head.append(f"singular shape: {str(ok).lower()}"
                    + (f" ({len(w.blobs)} blobs)" if w else ""))
    return data, "\n".join(head + lines), EXIT_OK


def _local_for_fibers(S, gamma, args) -> LocalQuiverData:
    if args.decomposition:
        D = _decomposition(args.decomposition, S)
        return local_quiver(S, D, gamma or {v: 1 for v in S.vertices})
    return LocalQuiverData(S, gamma or {v: 1 for v in S.vertices})


def cmd_fibers(S, gamma, args):
    L = _local_for_fibers(S, gamma, args)
    desc = fiber_description(L)
    comps = []
    lines = [f"fiber over n={L.n}: {len(desc.components)} components, dimension {desc.dimension}"]
    for i, cf in enumerate(desc.components):
        model = toric_model(cf.component)
        entry = cf.to_json()
        entry["toric"] = model.to_json()
        entry["betti"] = list(model.betti)
        comps.append(entry)
        zeroed = [list(L.setting.arrows[a]) for a in cf.component.zeroed_arrows]
        lines.append(f"  [{i}] zeroed {zeroed} roots {list(cf.component.roots)} "
                     f"dim {cf.dimension} rank {model.fan.rank} betti {list(model.betti)}")
        lines.append(f"      H* = {model.cohomology}")
    data = {"n": L.n, "dimension": desc.dimension, "components": comps}
    return data, "\n".join(lines), EXIT_OK


# oracle ------------------------------------------------------------------------

def _oracle_setting(S: QuiverSetting, gamma, limit) -> list[dict]:
    checks = []

    def record(name, fast, slow):
        checks.append({"check": name, "fast": fast, "oracle": slow, "ok": fast == slow})

    record("strongly-connected", is_strongly_connected(S.quiver),
           oracles.strongly_connected_bruteforce(S.quiver))
    if any(S.dims):
        record("simple", has_simple_reps(S), oracles.simplicity_rule(S))
    for v in S.vertices:
        record(f"quasiprimitive:{v}", count_quasiprimitive_cycles_through(S, v, limit),
               len(oracles.quasiprimitive_cycles_bruteforce(S, v, limit)))
    L = LocalQuiverData(S, gamma or {v: 1 for v in S.vertices}) if all(S.dims) else None
    try:
        comps = nullcone_components(L) if L is not None else []
    except QBSError:
        comps = []
    for k, T in enumerate(comps):
        E = extend(T, T.gamma, T.n)
        fast = sorted(map(sorted, connecting_subquivers(E, limit)))
        slow_all = oracles.connecting_subquivers_bruteforce(E.quiver, E.source, limit)
        record(f"connecting:{k}", fast, sorted(map(sorted, slow_all)))
        minimal = sorted(map(sorted, minimal_connecting_subquivers(E)))
        record(f"minimal-connecting:{k}", minimal,
               sorted(map(sorted, oracles.minimal_elements(slow_all))))
        model = toric_model(T)
        record(f"betti-sum:{k}", sum(model.betti),
               math.prod(E.indegree(w) for w in E.quiver.vertices if w != E.source))
    return checks


def _oracle_catalog(max_vertices: int, max_dim: int, max_arrows: int, limit) -> list[dict]:
    checks = []
    bad = []
    count = 0
    for nv in range(1, max_vertices + 1):
        for arrows in quiver_classes(nv, max_arrows):
            base = setting_from_indices((1,) * nv, arrows)
            sc = is_strongly_connected(base.quiver)
            if sc != oracles.strongly_connected_bruteforce(base.quiver):
                bad.append(("strongly-connected", arrows))
            for dims in itertools.product(range(1, max_dim + 1), repeat=nv):
                S = setting_from_indices(dims, arrows)
                count += 1
                if count > limit:
                    raise BudgetExceeded(f"oracle catalog exceeded {limit} settings",
                                         partial=count - 1)
                if has_simple_reps(S) != oracles.simplicity_rule(S):
                    bad.append(("simple", dims, arrows))
                if sc:
                    for v in S.vertices:
                        if (count_quasiprimitive_cycles_through(S, v)
                                != len(oracles.quasiprimitive_cycles_bruteforce(S, v))):
                            bad.append(("quasiprimitive", dims, arrows, v))
                    if is_connected(S.quiver) and has_simple_reps(S):
                        if bool(is_cofree(S)) != is_flat_local_setting(S)[0]:
                            bad.append(("cofree-vs-flat", dims, arrows))
    checks.append({"check": "catalog", "settings": count, "mismatches": [list(map(str, b)) for b in bad],
                   "ok": not bad})
    return checks


def cmd_oracle(S, gamma, args):
    limit = node_limit(args.budget)
    if limit <= 0:
        raise BudgetExceeded("oracle budget is 0")
    if S is None:
        checks = _oracle_catalog(args.max_vertices, args.max_dim, args.max_arrows, limit)
    else:
        checks = _oracle_setting(S, gamma, limit)
    ok = all(c["ok"] for c in checks)
    lines = [f"oracle: {'pass' if ok else 'FAIL'} ({len(checks)} checks)"]
    for c in checks:
        if "settings" in c:
            lines.append(f"  catalog: {c['settings']} settings, {len(c['mismatches'])} mismatches")
        else:
            fast = c["fast"] if not isinstance(c["fast"], list) else len(c["fast"])
            slow = c["oracle"] if not isinstance(c["oracle"], list) else len(c["oracle"])
            lines.append(f"  {c['check']}: {fast} vs {slow} {'ok' if c['ok'] else 'MISMATCH'}")
    return {"ok": ok, "checks": checks}, "\n".join(lines), EXIT_OK if ok else EXIT_NEGATIVE


HANDLERS = {
    "check-simple": cmd_check_simple,
    "check-reduced": cmd_check_reduced,
    "check-cofree": cmd_check_cofree,
    "decompositions": cmd_decompositions,
    "local-quiver": cmd_local_quiver,
    "flat-locus": cmd_flat_locus,
    "fibers": cmd_fibers,
    "oracle": cmd_oracle,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbs", description="Flat loci and fibers of Brauer-Severi fibrations "
                                        "for quiver settings.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("path", nargs="?", help="quiver setting JSON file")
    p.add_argument("--decomposition", help="'finest', 'trivial', an index into the "
                                           "decompositions list, or JSON (inline or a file)")
    p.add_argument("--gamma", help="vertex=int,... or a JSON object")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget", type=int, help="enumeration budget (default: QBS_BUDGET or 10^6)")
    p.add_argument("--max-vertices", type=int, default=4, help="oracle catalog size")
    p.add_argument("--max-dim", type=int, default=2, help="oracle catalog dimension bound")
    p.add_argument("--max-arrows", type=int, default=4, help="oracle catalog arrow bound")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"qbs: usage error: {exc}", file=err)
        return EXIT_USAGE
    try:
        if args.path is None:
            if args.verb != "oracle":
                raise UsageError(f"{args.verb} needs an input file")
            S, gamma = None, None
        else:
            S, gamma = io.read_setting(args.path)
            gamma = _gamma_override(args.gamma, S) or gamma
        data, text, code = HANDLERS[args.verb](S, gamma, args)
    except FileNotFoundError as exc:
        print(f"qbs: file not found: {exc.filename}", file=err)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"qbs: usage error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        note = "" if exc.partial is None else f" (partial result: {exc.partial})"
        print(f"qbs: budget exceeded: {exc}{note}", file=err)
        return EXIT_USAGE
    except (QBSError, ValueError) as exc:
        print(f"qbs: {type(exc).__name__}: {exc}", file=err)
        return EXIT_USAGE
    if args.format == "json":
        out.write(io.dumps({"schema": io.SCHEMA, "verb": args.verb, "result": data}))
    else:
        print(text, file=out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
