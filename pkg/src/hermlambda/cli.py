"""Command-line batch interface.

A job is a JSON document::

    {
      "algebra": {"kind": "quaternion", "a": -1, "b": -1, "involution": "canonical"},
      "forms": [[1, 1], ["1/2", [0, 0, 1, 0]]],
      "d": 2
    }

``algebra.kind`` is ``"quaternion"`` (``a``, ``b``, ``involution`` one of
``canonical``/``orthogonal``, ``u`` a pure quaternion for ``orthogonal``) or
``"matrix"`` (``n``, ``involution`` one of ``transpose`` or
``{"adjoint": [b_1, ..., b_n]}`` / ``{"adjoint": [[...], ...]}`` for the
adjoint involution of a symmetric or skew Gram matrix).  Each form is a list
of diagonal entries: a rational scalar or the coordinate list of an algebra
element.  Command-line flags override the job's ``d``, ``truncation``,
``samples`` and ``seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from .algebra import (Algebra, InvalidAlgebra, goldman_checks, involution_type, make_matrix_algebra,
                      make_quaternion)
from .hermitian import FormError, TraceForms, diagonal_form
from .lambdaring import (AxiomReport, IntegerInstance, MixedInstance, MonoidRingInstance, WittInstance,
                         check_lambda_axioms, contraction_check, decidable_hermitian, det_involution,
                         determinant_class, herm, lam, multiply, quad, quad_gram)
from .linalg import InputError, MatrixQ
from .qform import gram_invariants
from .tensor import ResourceCapError

COMMANDS = ("lambda", "det", "trace-form", "invariants", "check-axioms", "goldman")
DEFAULT_SEED = 20240601
EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class JobError(InputError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool):
        raise JobError(path, "expected a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise JobError(path, f"{x!r} is not a rational number") from None
    if isinstance(x, float):
        raise JobError(path, "floats are not exact; write the number as a string such as \"1/3\"")
    raise JobError(path, "expected a rational number")


def _int(x, path: str, lo: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise JobError(path, "expected an integer")
    if lo is not None and x < lo:
        raise JobError(path, f"must be >= {lo}")
    return x


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise JobError(f"{path}.{key}" if path else key, "missing field")
    return obj[key]


def parse_algebra(doc, path: str = "algebra") -> Algebra:
    if not isinstance(doc, dict):
        raise JobError(path, "expected an object")
    kind = _get(doc, "kind", path)
    try:
        if kind == "quaternion":
            allowed = {"kind", "a", "b", "involution", "u"}
            _no_extra(doc, allowed, path)
            a = _rational(_get(doc, "a", path), f"{path}.a")
            b = _rational(_get(doc, "b", path), f"{path}.b")
            inv = doc.get("involution", "canonical")
            if inv not in ("canonical", "orthogonal"):
                raise JobError(f"{path}.involution", "must be 'canonical' or 'orthogonal'")
            u = None
            if inv == "orthogonal":
                raw = _get(doc, "u", path)
                if not isinstance(raw, list) or len(raw) != 4:
                    raise JobError(f"{path}.u", "expected 4 coordinates")
                u = [_rational(x, f"{path}.u[{i}]") for i, x in enumerate(raw)]
                if u[0]:
                    raise JobError(f"{path}.u", "u must be a pure quaternion")
            elif "u" in doc:
                raise JobError(f"{path}.u", "only the orthogonal involution takes u")
            try:
                label = f"({a},{b})" if u is None else f"({a},{b})[Int({','.join(str(x) for x in u)})]"
                return make_quaternion(a, b, inv, u, name=label)
            except InvalidAlgebra as e:
                raise JobError(f"{path}.u" if u is not None else path, str(e)) from None
        if kind == "matrix":
            _no_extra(doc, {"kind", "n", "involution"}, path)
            n = _int(_get(doc, "n", path), f"{path}.n", 1)
            if n > 4:
                raise JobError(f"{path}.n", "matrix size above 4 is outside the supported range")
            inv = doc.get("involution", "transpose")
            if inv == "transpose":
                return make_matrix_algebra(n, "transpose")
            if isinstance(inv, dict) and set(inv) == {"adjoint"}:
                gram = _gram(inv["adjoint"], n, f"{path}.involution.adjoint")
                try:
                    diag = all(not gram[i, j] for i in range(n) for j in range(n) if i != j)
                    label = (",".join(str(gram[i, i]) for i in range(n)) if diag
                             else ";".join(",".join(str(x) for x in gram.row(i)) for i in range(n)))
                    return make_matrix_algebra(n, "conjugate", gram.inverse(), name=f"M{n}[adj<{label}>]")
                except InvalidAlgebra as e:
                    raise JobError(f"{path}.involution.adjoint", str(e)) from None
            raise JobError(f"{path}.involution", "must be 'transpose' or {\"adjoint\": ...}")
    except ArithmeticError as e:
        raise JobError(path, str(e)) from None
    raise JobError(f"{path}.kind", f"unknown algebra kind {kind!r}")


def _no_extra(doc: dict, allowed: set, path: str) -> None:
    for k in doc:
        if k not in allowed:
            raise JobError(f"{path}.{k}" if path else k, "unknown field")


def _gram(raw, n: int, path: str) -> MatrixQ:
    if not isinstance(raw, list) or len(raw) != n:
        raise JobError(path, f"expected {n} diagonal entries or an {n}x{n} matrix")
    if all(not isinstance(r, list) for r in raw):
        vals = [_rational(x, f"{path}[{i}]") for i, x in enumerate(raw)]
        m = MatrixQ.diag(vals)
    else:
        rows = []
        for i, r in enumerate(raw):
            if not isinstance(r, list) or len(r) != n:
                raise JobError(f"{path}[{i}]", f"expected {n} entries")
            rows.append([_rational(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)])
        m = MatrixQ.from_rows(rows, n)
    if m.det() == 0:
        raise JobError(path, "Gram matrix is singular")
    if m.T != m and m.T != -m:
        raise JobError(path, "Gram matrix is neither symmetric nor skew-symmetric")
    return m


def parse_forms(raw, a: Algebra, path: str = "forms") -> list:
    if not isinstance(raw, list):
        raise JobError(path, "expected a list of forms")
    out = []
    for i, f in enumerate(raw):
        p = f"{path}[{i}]"
        if isinstance(f, dict):
            f = _get(f, "entries", p)
            p = f"{p}.entries"
        if not isinstance(f, list):
            raise JobError(p, "expected a list of diagonal entries")
        entries = []
        for j, x in enumerate(f):
            if isinstance(x, list):
                if len(x) != a.dim:
                    raise JobError(f"{p}[{j}]", f"expected {a.dim} coordinates")
                entries.append(a.elt([_rational(c, f"{p}[{j}][{k}]") for k, c in enumerate(x)]))
            else:
                entries.append(a.scalar(_rational(x, f"{p}[{j}]")))
        try:
            out.append(diagonal_form(a, entries))
        except FormError as e:
            raise JobError(p, str(e)) from None
    return out


class Job:
    def __init__(self, algebra: Algebra, forms: list, params: dict, raw: dict):
        self.algebra = algebra
        self.forms = forms
        self.params = params
        self.raw = raw


def parse_job(text: str, overrides: dict | None = None) -> Job:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise JobError(f"line {e.lineno} column {e.colno}", f"invalid JSON: {e.msg}") from None
    if not isinstance(raw, dict):
        raise JobError("(document)", "expected a JSON object")
    _no_extra(raw, {"algebra", "forms", "command", "d", "truncation", "samples", "seed", "name"}, "")
    if "command" in raw and raw["command"] not in COMMANDS:
        raise JobError("command", f"unknown command {raw['command']!r}")
    a = parse_algebra(_get(raw, "algebra", ""))
    forms = parse_forms(raw.get("forms", []), a)
    params = {"d": 2, "truncation": None, "samples": 10, "seed": DEFAULT_SEED}
    for k, lo in (("d", 0), ("truncation", 0), ("samples", 1), ("seed", 0)):
        if k in raw:
            params[k] = _int(raw[k], k, lo)
    for k, v in (overrides or {}).items():
        if v is not None:
            params[k] = v
    return Job(a, forms, params, raw)


# commands


def _frac(x) -> str:
    return str(Fraction(x))


def _gram_rows(m: MatrixQ) -> list[list[str]]:
    return [[_frac(x) for x in m.row(i)] for i in range(m.rows)]


def _class_record(c, emit_gram: bool) -> dict:
    rec: dict[str, Any] = {"kind": c.kind, "eps": c.eps, "dim": c.dim, "rdim": _frac(c.rdim),
                           "class": c.text()}
    if emit_gram:
        if c.kind == "quadratic":
            rec["gram"] = _gram_rows(c.rep)
        else:
            rec["trace_gram"] = _gram_rows(c.rep.trace_gram())
    return rec


def _form_label(h) -> str:
    a = h.algebra
    ents = []
    for r in range(h.rank):
        x = h.matrix[r][r]
        i = next(k for k, c in enumerate(a.one) if c)
        c = x[i] / a.one[i]
        if x == a.scalar(c):
            ents.append(_frac(c))
        else:
            ents.append("(" + ",".join(_frac(c) for c in x) + ")")
    return "<" + ",".join(ents) + ">"


def algebra_record(a: Algebra) -> dict:
    return {"name": a.name, "dim": a.dim, "degree": a.degree,
            "type": involution_type(a).name.lower(), "epsilon": a.epsilon}


def cmd_lambda(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    a = job.algebra
    forms = job.forms or [diagonal_form(a, [a.one])]
    top = job.params["truncation"]
    degrees = list(range(top + 1)) if top is not None else [job.params["d"]]
    out, lines = [], []
    for h in forms:
        x = herm(h)
        rec = {"form": _form_label(h), "eps": h.eps, "powers": []}
        for d in degrees:
            c = lam(d, x)
            rec["powers"].append({"d": d, **_class_record(c, emit_gram)})
            lines.append(f"lambda^{d} {_form_label(h)}_sigma : {c.text()}")
        out.append(rec)
    return {"lambda": out}, lines, True


def cmd_det(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    a = job.algebra
    ds = det_involution(a)
    lines = [f"det(sigma) : {ds.text()}"]
    rec: dict[str, Any] = {"det_involution": _class_record(ds, emit_gram), "forms": []}
    for h in job.forms:
        c = determinant_class(herm(h))
        lines.append(f"det {_form_label(h)}_sigma : {c.text()}")
        rec["forms"].append({"form": _form_label(h), **_class_record(c, emit_gram)})
    return rec, lines, True


def cmd_trace_form(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    tf = TraceForms(job.algebra)
    rec: dict[str, Any] = {}
    lines = []
    for name, m in (("T", tf.full), ("T+", tf.plus), ("T-", tf.minus)):
        r = {"dim": m.rows, "invariants": gram_invariants(m).text() if m.rows else "zero"}
        if emit_gram:
            r["gram"] = _gram_rows(m)
        rec[name] = r
        lines.append(f"{name:3s}: {r['invariants']}")
    split = tf.adapted() == _block(tf.plus, tf.minus)
    rec["orthogonal_split"] = split
    lines.append(f"T = T+ _|_ T- : {'yes' if split else 'NO'}")
    return rec, lines, split


def _block(a: MatrixQ, b: MatrixQ) -> MatrixQ:
    n = a.rows + b.rows
    rows = [list(a.row(i)) + [0] * b.rows for i in range(a.rows)]
    rows += [[0] * a.rows + list(b.row(i)) for i in range(b.rows)]
    return MatrixQ.from_rows(rows, n)


def invariant_table(a: Algebra) -> tuple[dict, list[str], bool]:
    """The standard invariant table of an algebra with involution."""
    tf = TraceForms(a)
    one = herm(diagonal_form(a, [a.one]))
    eps = a.epsilon
    l2 = lam(2, one)
    expected = multiply(quad([2]), quad_gram(tf.part(-eps)))
    sq = multiply(one, one)
    t_full = quad_gram(tf.full)
    ds = det_involution(a)
    rows = [
        ("algebra", a.name),
        ("dim", str(a.dim)),
        ("degree", str(a.degree)),
        ("type", involution_type(a).name.lower()),
        ("T", t_full.text()),
        ("T+", quad_gram(tf.plus).text() if tf.plus.rows else "zero"),
        ("T-", quad_gram(tf.minus).text() if tf.minus.rows else "zero"),
        ("<1>^2", sq.text()),
        ("lambda2(<1>)", l2.text()),
        ("<2>T^(-eps)", expected.text()),
        ("det(sigma)", ds.text()),
    ]
    checks = {"lambda2_matches": l2.same(expected), "square_is_trace_form": sq.same(t_full)}
    lines = [f"{k:14s} {v}" for k, v in rows]
    lines += [f"{k:14s} {'pass' if v else 'FAIL'}" for k, v in checks.items()]
    rec = {k: v for k, v in rows}
    rec["checks"] = checks
    return rec, lines, all(checks.values())


def cmd_invariants(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    rec, lines, ok = invariant_table(job.algebra)
    forms = []
    for h in job.forms:
        c = herm(h)
        forms.append({"form": _form_label(h), **_class_record(c, emit_gram)})
        lines.append(f"form {_form_label(h)}_sigma : {c.text()}")
    rec["forms"] = forms
    return rec, lines, ok


def cmd_check_axioms(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    seed = job.params["seed"]
    n = job.params["samples"]
    top = job.params["truncation"]
    reports: list[AxiomReport] = [
        check_lambda_axioms(IntegerInstance(), seed),
        check_lambda_axioms(MonoidRingInstance(), seed),
        check_lambda_axioms(WittInstance(count=n), seed),
        check_lambda_axioms(MixedInstance(job.algebra, count=n), seed),
    ]
    lines = []
    rec: dict[str, Any] = {"seed": seed, "reports": []}
    ok = True
    for r in reports:
        lines.extend(r.text().splitlines())
        rec["reports"].append({"instance": r.instance, "checks": len(r.lines), "failures": len(r.failures),
                               "failed": [ln.text() for ln in r.failures]})
        ok &= r.ok
    if top is not None and decidable_hermitian(job.algebra, 1):
        cl = contraction_check(top, algebra=job.algebra)
        lines.append(f"# contraction D={top}: {len(cl)} checks, {sum(not c.ok for c in cl)} failures")
        lines.extend(sorted(c.text() for c in cl))
        rec["contraction"] = {"checks": len(cl), "failures": sum(not c.ok for c in cl)}
        ok &= all(c.ok for c in cl)
    return rec, lines, ok


def cmd_goldman(job: Job, emit_gram: bool) -> tuple[dict, list[str], bool]:
    a = job.algebra
    g = a.goldman()
    checks = goldman_checks(a)
    lines = [f"{k:16s} {'pass' if v else 'FAIL'}" for k, v in checks.items()]
    rec: dict[str, Any] = {"checks": checks}
    if emit_gram:
        rec["coefficients"] = {f"{a.labels[i]}*{a.labels[j]}": _frac(c)
                               for (i, j), c in sorted(g.coeffs.items())}
        lines += [f"g[{k}] = {v}" for k, v in rec["coefficients"].items()]
    return rec, lines, all(checks.values())


HANDLERS = {"lambda": cmd_lambda, "det": cmd_det, "trace-form": cmd_trace_form,
            "invariants": cmd_invariants, "check-axioms": cmd_check_axioms, "goldman": cmd_goldman}


def run_job(command: str, job: Job, emit_gram: bool = False) -> tuple[dict, list[str], bool]:
    rec, lines, ok = HANDLERS[command](job, emit_gram)
    doc = {"command": command, "algebra": algebra_record(job.algebra), "result": rec, "ok": ok}
    head = [f"# hermlambda {command} on {job.algebra.name} ({algebra_record(job.algebra)['type']})"]
    return doc, head + lines, ok


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermlambda",
                                description="Exact lambda-operations on hermitian forms over algebras with involution.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="JSON job document")
    p.add_argument("--d", type=int, help="lambda degree")
    p.add_argument("--truncation", type=int, help="series truncation / top tensor degree")
    p.add_argument("--samples", type=int, help="random samples per component")
    p.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--out", help="write a JSON report to this file")
    p.add_argument("--emit-gram", action="store_true", help="include Gram tables")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    for k in ("d", "truncation", "samples", "seed"):
        v = getattr(args, k)
        if v is not None and v < (1 if k == "samples" else 0):
            print(f"error: --{k}: must be >= {1 if k == 'samples' else 0}", file=sys.stderr)
            return EXIT_INPUT
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: --input: {e.strerror}: {args.input}", file=sys.stderr)
        return EXIT_INPUT
    try:
        job = parse_job(text, {"d": args.d, "truncation": args.truncation, "samples": args.samples,
                               "seed": args.seed})
        if "command" in job.raw and job.raw["command"] != args.command:
            raise JobError("command", f"job is for {job.raw['command']!r}, not {args.command!r}")
        doc, lines, ok = run_job(args.command, job, args.emit_gram)
    except ResourceCapError as e:
        print(f"error: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
