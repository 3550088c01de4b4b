"""Command-line front end.

Every subcommand reads a field (``--field`` minimal polynomial in ``x`` plus an
optional ``--root`` selector) and most read a ``--vector`` of comma-separated
expressions in ``y``.  Options may also come from an INI-style config file::

    [job]
    field = x^3 - 2
    vector = 1, y, y^2
    algorithm = jpa
    budget = 500

Command-line flags override config values.  Exit status is 0 on success, 2 on
invalid input or a violated constraint, and 1 on an unexpected failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import candidates as cand
from .algorithms import Algorithm
from .errors import ParseError, RepetendError
from .expansion import (
    DEFAULT_BUDGET,
    analyse,
    expand,
    expansion_to_json,
    expansion_to_text,
    pure_exclusion,
    repetend_matrix,
)
from .linalg import ExactMatrix, fraction_str, parse_matrix
from .multmatrix import (
    cubic_norm_ratios,
    cubic_predicates,
    eigen_element,
    make_basis,
    t_matrix,
    q_tuple,
    qtuple_text,
)
from .realfield import NumberField, make_field, parse_element

CONFIG_KEYS = {
    "field", "root", "vector", "algorithm", "budget", "units", "bound", "format",
    "lam", "matrix", "match", "primitive", "keep_rejected", "s", "t", "f", "r", "m",
    "literal", "verify", "scan", "workers", "max_t", "max_r", "max_m", "pivot",
}


# input parsing


def split_top(text: str, seps: str = ",") -> list[tuple[int, str]]:
    """Split on separators outside parentheses, keeping each piece's offset."""
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0:
            out.append((start, text[start:i]))
            start = i + 1
    out.append((start, text[start:]))
    return out


def parse_vector(field: NumberField, text: str):
    """Comma-separated elements, optionally wrapped in one pair of parentheses."""
    inner, shift = text, 0
    body = text.strip()
    if body.startswith("(") and body.endswith(")") and _balanced(body[1:-1]):
        shift = text.index("(") + 1
        inner = body[1:-1]
    out = []
    for offset, piece in split_top(inner):
        try:
            out.append(parse_element(field, piece))
        except ParseError as exc:
            if exc.pos is None:
                raise
            base = str(exc.args[0]).split(" at position")[0]
            raise ParseError(base, text, exc.pos + offset + shift) from None
    return out


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def parse_units(field: NumberField, text: str):
    return [parse_element(field, piece) for _, piece in split_top(text, ",;") if piece.strip()]


def load_field(args) -> NumberField:
    if not args.field:
        raise ParseError("--field is required")
    root = args.root
    if root is not None:
        root = root.strip()
        try:
            root = int(root)
        except ValueError:
            pass
    return make_field(args.field, root)


def load_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    if not parser.has_section("job"):
        raise ParseError(f"config {path} has no [job] section")
    values = {}
    for key, value in parser.items("job"):
        name = key.replace("-", "_")
        if name == "lambda":
            name = "lam"
        if name not in CONFIG_KEYS:
            raise ParseError(f"unknown config key {key!r} in {path}")
        values[name] = value
    return values


# subcommands


def cmd_expand(args) -> tuple[dict, str]:
    field = load_field(args)
    vector = parse_vector(field, _need(args, "vector"))
    e = expand(field, vector, Algorithm.parse(args.algorithm or "jpa"), int(args.budget))
    report = analyse(e)
    return expansion_to_json(report), expansion_to_text(report)


def cmd_check_pure(args) -> tuple[dict, str]:
    field = load_field(args)
    vector = parse_vector(field, _need(args, "vector"))
    rep = pure_exclusion(field, vector)
    doc = {"field": field.describe(), "vector": [x.to_json() for x in vector], **rep.to_json()}
    lines = [f"field: {field}", f"vector: ({', '.join(map(str, vector))})"]
    if rep.totally_positive_conjugate is not None:
        lines.append(f"real conjugate #{rep.totally_positive_conjugate} is totally positive")
    if rep.norm_test_applicable:
        lines.append(f"sign N(y) = {rep.norm_sign:+d}, required {(-1) ** (field.degree - 1):+d}")
    lines.append("pure periodicity excluded" if rep.excluded else "no obstruction to pure periodicity found")
    return doc, "\n".join(lines)


def cmd_tmatrix(args) -> tuple[dict, str]:
    field = load_field(args)
    basis = make_basis(parse_vector(field, _need(args, "vector")))
    doc: dict = {"field": field.describe(), "basis": [x.to_json() for x in basis.elements]}
    lines = [f"field: {field}", f"basis: ({', '.join(map(str, basis.elements))})"]
    if args.lam:
        lam = parse_element(field, args.lam)
        m = t_matrix(basis, lam)
        ok = m.apply(basis.elements) == tuple(lam * v for v in basis.elements)
        doc.update({"lambda": lam.to_json(), "matrix": m.to_json(), "eigen_verified": ok})
        lines += [f"lambda: {lam}", "T^T:", m.render(), f"M v = lambda v: {'verified' if ok else 'FAILED'}"]
    if args.matrix:
        m = parse_matrix(args.matrix)
        lam = eigen_element(m, basis)
        doc.update({"input_matrix": m.to_json(), "eigen_element": lam.to_json()})
        lines += [f"eigen element of the given matrix: {lam}"]
    if not args.lam and not args.matrix:
        raise ParseError("tmatrix needs --lambda or --matrix")
    return doc, "\n".join(lines)


def cmd_qmap(args) -> tuple[dict, str]:
    field = load_field(args)
    basis = make_basis(parse_vector(field, _need(args, "vector")))
    n = basis.dim
    pivots = [int(args.pivot)] if args.pivot else list(range(1, n + 1))
    tuples = [q_tuple(basis, ell) for ell in pivots]
    doc: dict = {
        "field": field.describe(),
        "basis": [x.to_json() for x in basis.elements],
        "qtuples": [q.to_json() for q in tuples],
    }
    lines = [f"field: {field}", f"basis: ({', '.join(map(str, basis.elements))})"]
    lines += [qtuple_text(q) for q in tuples]
    if n == 3 and not args.pivot:
        ratios = cubic_norm_ratios(*tuples)
        doc["norm_ratios"] = [fraction_str(r) for r in ratios]
        lines.append("|N(y)/N(1)|, |N(1)/N(x)|, |N(x)/N(y)| = " + ", ".join(fraction_str(r) for r in ratios))
        complex_cubic = field.signature == (1, 1)
        doc["complex_cubic"] = complex_cubic
        if complex_cubic:
            preds = cubic_predicates(*tuples)
            doc["predicates"] = {"y_lt_1": preds[0], "x_gt_1": preds[1], "x_lt_y": preds[2]}
            lines.append(f"y < 1: {preds[0]}, x > 1: {preds[1]}, x < y: {preds[2]}")
        else:
            doc["predicates"] = None
            lines.append("comparison predicates need a complex cubic field; skipped")
    return doc, "\n".join(lines)


def cmd_candidates(args) -> tuple[dict, str]:
    field = load_field(args)
    basis = make_basis(parse_vector(field, _need(args, "vector")))
    units = cand.verify_units(field, parse_units(field, _need(args, "units")))
    bound = int(args.bound)
    doc: dict = {
        "field": field.describe(),
        "basis": [x.to_json() for x in basis.elements],
        "units": [u.to_json() for u in units.units],
        "bound": str(bound),
        "raw_count": str(cand.raw_candidate_count(units.rank, bound)),
    }
    lines = [f"field: {field}", f"units: {', '.join(map(str, units.units))} (rank {units.rank})"]
    if args.match or args.algorithm:
        if args.match:
            m = parse_matrix(args.match)
            source = "given"
        else:
            e = expand(field, basis.elements, Algorithm.parse(args.algorithm), int(args.budget))
            m = repetend_matrix(e).conjugated
            source = f"{e.algorithm.value} expansion {e.notation()}"
        hit = cand.match_repetend(m, basis, units, bound)
        doc["match"] = {"matrix": m.to_json(), "source": source, "result": None if hit is None else hit.to_json()}
        lines += [f"matrix ({source}):", m.render()]
        if hit is None:
            lines.append(f"no match within bound {bound}")
        else:
            exps = ", ".join(str(x) for x in hit.exponents)
            lines.append(f"match: sign {'+' if hit.sign > 0 else '-'}, exponents ({exps}) via {hit.method}")
    else:
        found = cand.enumerate_candidates(
            basis, units, bound,
            require_primitive=_flag(args.primitive),
            keep_rejected=_flag(args.keep_rejected),
        )
        doc["candidates"] = [c.to_json() for c in found]
        lines.append(f"{len(found)} candidates listed ({doc['raw_count']} before filtering)")
        for c in found:
            exps = ", ".join(str(x) for x in c.exponents)
            verdict = "" if c.accepted else "  (rejected)"
            lines.append(f"{'+' if c.sign > 0 else '-'} ({exps}){verdict}")
            lines.extend("    " + row for row in c.matrix.render().splitlines())
    return doc, "\n".join(lines)


def _family_instance(kind: str, params: dict) -> cand.FamilyInstance:
    if kind == "tamura":
        return cand.tamura_vector(params["m"], params.get("literal", False))
    return cand.ajpa_family(params["s"], params["t"], params.get("f", 0), params.get("r", 0))


def _family_job(job: tuple) -> dict:
    kind, params, budget = job
    inst = _family_instance(kind, params)
    return cand.verify_family(inst, budget).to_json()


def _scan_jobs(args) -> list[tuple]:
    budget = int(args.budget)
    jobs = []
    if args.kind == "tamura":
        for m in range(1, int(args.max_m or 5) + 1):
            jobs.append(("tamura", {"m": m, "literal": _flag(args.literal)}, budget))
        return jobs
    max_t = int(args.max_t or 6)
    max_r = int(args.max_r or 2)
    for s in range(1, max_t):
        for t in range(s + 1, max_t + 1):
            if 4 * t <= s * s:
                continue
            for f in [0] + cand.admissible_f(s, t, f_max=max_t * 4):
                for r in range(0, max_r + 1):
                    jobs.append(("ajpa", {"s": s, "t": t, "f": f, "r": r}, budget))
    return jobs


def cmd_family(args) -> tuple[dict, str]:
    if _flag(args.scan):
        jobs = _scan_jobs(args)
        workers = int(args.workers or 1)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_family_job, jobs))
        else:
            results = [_family_job(j) for j in jobs]
        passed = sum(r["result"] == "PASS" for r in results)
        doc = {"family": args.kind, "runs": results, "passed": str(passed), "total": str(len(results))}
        lines = [f"{r['result']}  {r['params']}  {r['predicted']}" for r in results]
        lines.append(f"{passed}/{len(results)} verified")
        return doc, "\n".join(lines)
    if args.kind == "tamura":
        params: dict = {"m": _int(args.m, "m"), "literal": _flag(args.literal)}
    else:
        params = {"s": _int(args.s, "s"), "t": _int(args.t, "t"), "f": _int(args.f or 0, "f"), "r": _int(args.r or 0, "r")}
    inst = _family_instance(args.kind, params)
    doc = {
        "family": args.kind,
        "params": {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in sorted(params.items())},
        "field": inst.field.describe(),
        "vector": [x.to_json() for x in inst.vector],
        "vector_text": [str(x) for x in inst.vector],
        "predicted": inst.notation(),
        "predicted_preperiod": str(len(inst.preperiod)),
        "predicted_period": str(len(inst.repetend)),
    }
    lines = [
        f"field: {inst.field}",
        f"vector: ({', '.join(map(str, inst.vector))})",
        f"predicted: {inst.notation()}",
        f"predicted period: {len(inst.repetend)}",
    ]
    if _flag(args.verify):
        check = cand.verify_family(inst, int(args.budget))
        doc["verification"] = check.to_json()
        lines.append(f"observed: {check.expansion.notation(compress=False)}")
        lines.append(f"verification: {'PASS' if check.passed else 'FAIL'}")
    return doc, "\n".join(lines)


def _need(args, name: str) -> str:
    value = getattr(args, name, None)
    if not value:
        raise ParseError(f"--{name} is required")
    return value


def _flag(value) -> bool:
    if isinstance(value, bool) or value is None:
        return bool(value)
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ParseError(f"cannot read {value!r} as a boolean")


def _int(value, name: str) -> int:
    if value is None:
        raise ParseError(f"--{name} is required")
    try:
        return int(str(value).strip())
    except ValueError:
        raise ParseError(f"--{name} must be an integer, got {value!r}") from None


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="repetend", description="Exact multidimensional continued fraction expansions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, vector: bool = True) -> None:
        sp.add_argument("--config", help="INI file with a [job] section; flags override it")
        sp.add_argument("--format", choices=("json", "text"), default=None)
        sp.add_argument("--field", help="monic minimal polynomial in x, e.g. 'x^3 - 2'")
        sp.add_argument("--root", help="root selector: index, 'positive', 'largest' or 'lo,hi'")
        if vector:
            sp.add_argument("--vector", help="comma-separated expressions in y, e.g. '1, y, y^2'")
        sp.add_argument("--budget", default=None, help=f"step budget (default {DEFAULT_BUDGET})")

    sp = sub.add_parser("expand", help="expand a vector")
    common(sp)
    sp.add_argument("--algorithm", choices=[a.value for a in Algorithm])
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("candidates", help="candidate matrices of repetend from units")
    common(sp)
    sp.add_argument("--units", help="fundamental units in y, separated by ';'")
    sp.add_argument("--bound", default=None, help="exponent bound (default 10)")
    sp.add_argument("--primitive", action="store_true", default=None, help="also require primitivity")
    sp.add_argument("--keep-rejected", dest="keep_rejected", action="store_true", default=None)
    sp.add_argument("--match", help="match this matrix ('a b c; d e f; g h i') instead of listing")
    sp.add_argument("--algorithm", choices=[a.value for a in Algorithm], help="expand, then match its repetend")
    sp.set_defaults(func=cmd_candidates)

    sp = sub.add_parser("check-pure", help="necessary conditions for a purely periodic expansion")
    common(sp)
    sp.set_defaults(func=cmd_check_pure)

    sp = sub.add_parser("qmap", help="column-reconstruction tuples of a basis")
    common(sp)
    sp.add_argument("--pivot", help="single pivot (default: all)")
    sp.set_defaults(func=cmd_qmap)

    sp = sub.add_parser("tmatrix", help="transposed multiplication matrix in a basis")
    common(sp)
    sp.add_argument("--lambda", dest="lam", help="element whose matrix is wanted")
    sp.add_argument("--matrix", help="recover the eigen element of this matrix")
    sp.set_defaults(func=cmd_tmatrix)

    sp = sub.add_parser("family", help="AJPA periodic families")
    sp.add_argument("kind", choices=("ajpa", "tamura"))
    sp.add_argument("--config")
    sp.add_argument("--format", choices=("json", "text"), default=None)
    for name in ("s", "t", "f", "r", "m"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--literal", action="store_true", default=None, help="tamura: use (y^2 + 2my, y, 1)")
    sp.add_argument("--verify", action="store_true", default=None, help="run the expansion and compare")
    sp.add_argument("--scan", action="store_true", default=None, help="verify a whole parameter range")
    sp.add_argument("--workers", default=None, help="processes for --scan")
    sp.add_argument("--max-t", dest="max_t")
    sp.add_argument("--max-r", dest="max_r")
    sp.add_argument("--max-m", dest="max_m")
    sp.add_argument("--budget", default=None)
    sp.set_defaults(func=cmd_family)
    return p


DEFAULTS = {"budget": str(DEFAULT_BUDGET), "bound": "10", "format": "text"}


def _merge_config(args) -> None:
    values = load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in values.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.format not in ("json", "text"):
        raise ParseError(f"format must be json or text, got {args.format!r}")


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_config(args)
        doc, text = args.func(args)
    except (RepetendError, OSError, configparser.Error) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return 1
    out.write(render_json(doc) + "\n" if args.format == "json" else text + "\n")
    return 0


def main() -> None:
    sys.exit(run())
