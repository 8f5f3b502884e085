"""Command-line front end: ``newton-invariants <command> INPUT... [options]``.

Inputs are either monomial text such as ``"x1^2 + x2^3"`` (``x, y, z, w``
are accepted as ``x1..x4``), or structured JSON ``{"n": 2, "rows": [[2, 0],
[0, 3]]}``, given inline or as a file path.  Complete-intersection commands
take several inputs (or one JSON object with a ``"supports"`` list);
``zeta-mero`` and ``proper-containment`` take the pair ``P Q``.

Exit codes: 0 success, 2 precondition failure, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .equivariant_hodge import MODES, UNDETERMINED, EHodgeTable
from .errors import InconsistencyError, PreconditionError
from .jordan_spectrum import (
    INFINITY,
    LOCAL,
    JordanTable,
    Spectrum,
    all_faces_prime,
    assemble_infinity,
    assemble_local,
    assemble_local_parts,
    check_symmetry,
    consistency_identity_holds,
    jordan_blocks,
    jordan_prime_path,
    jordan_top_sizes,
    relevant_lambdas,
    spectrum_from_table,
    spectrum_infinity,
)
from .newton import Support, atypical_faces, gamma_infinity, polynomial_like_sufficient, properly_contained
from .stapledon import direct_hstar_on_base, equivariant_E, jordan_full, mixed_hstar, subdivision_from_newton, trim
from .zeta import (
    CharPoly,
    ZetaFunction,
    charpoly_and_multiplicity,
    milnor_data,
    milnor_data_infinity,
    zeta_infinity,
    zeta_infinity_ci,
    zeta_local,
    zeta_local_ci,
    zeta_mero,
)

EXIT_OK, EXIT_PRECONDITION, EXIT_INCONSISTENT = 0, 2, 3

_VAR = re.compile(r"^(?:x(\d+)|([xyzw]))(?:\^(\d+))?$")
_ALIASES = {"x": 1, "y": 2, "z": 3, "w": 4}


# ---- input ------------------------------------------------------------------------


def _split_terms(text: str) -> list[str]:
    terms, cur = [], ""
    for ch in text.replace(" ", ""):
        if ch in "+-" and cur and cur[-1] not in "^*":
            terms.append(cur)
            cur = ""
        cur += ch
    if cur:
        terms.append(cur)
    return [t for t in terms if t not in ("+", "")]


def parse_polynomial(text: str, n: int | None = None) -> Support:
    """Support of a polynomial written as a sum of monomials."""
    monos: list[tuple[dict[int, int], str]] = []
    for term in _split_terms(text):
        sign = "-" if term.startswith("-") else ""
        coeff, exps = "", {}
        for i, factor in enumerate(term.lstrip("+-").split("*")):
            if "^-" in factor:
                raise PreconditionError(f"negative exponent in {factor!r}")
            m = _VAR.match(factor)
            if m is None:
                if i == 0 and re.fullmatch(r"\d+(?:\.\d+)?(?:/\d+)?", factor):
                    coeff = factor
                    continue
                raise PreconditionError(f"cannot read the factor {factor!r}")
            var = int(m.group(1)) if m.group(1) else _ALIASES[m.group(2)]
            if var < 1:
                raise PreconditionError("variables are numbered from 1")
            exps[var] = exps.get(var, 0) + int(m.group(3) or 1)
        coeff = sign + (coeff or "1")
        monos.append((exps, coeff))
    if not monos:
        raise PreconditionError("empty input")
    top = max((max(e) for e, _ in monos if e), default=1)
    n = top if n is None else n
    if top > n:
        raise PreconditionError(f"a variable index exceeds the dimension {n}")
    rows = [tuple(e.get(i + 1, 0) for i in range(n)) for e, _ in monos]
    return _support(n, rows, [c for _, c in monos])


def _support(n: int, rows: Sequence[Sequence[int]], coefficients: Sequence[str] | None = None) -> Support:
    if not rows:
        raise PreconditionError("empty input")
    for r in rows:
        if len(r) != n:
            raise PreconditionError(f"row {list(r)} does not have {n} entries")
    seen: dict[tuple[int, ...], str] = {}
    for i, r in enumerate(rows):
        key = tuple(int(x) for x in r)
        if key not in seen:
            seen[key] = coefficients[i] if coefficients else ""
    pts = sorted(seen)
    coeffs = tuple(seen[p] for p in pts) if coefficients else None
    return Support(n, tuple(pts), coeffs)


def _from_structured(obj: dict, n: int | None) -> list[Support]:
    dim = obj.get("n", n)
    if dim is None:
        raise PreconditionError("structured input needs the dimension n")
    if "supports" in obj:
        return [_support(dim, rows) for rows in obj["supports"]]
    if "rows" not in obj:
        raise PreconditionError("structured input needs rows")
    return [_support(dim, obj["rows"], obj.get("coefficients"))]


def parse_input(text: str, n: int | None = None) -> list[Support]:
    """Supports from inline text, inline JSON, or a file containing either."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    text = text.strip()
    if not text:
        raise PreconditionError("empty input")
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"malformed structured input: {exc}") from None
        return _from_structured(obj, n)
    return [parse_polynomial(text, n)]


# ---- serialization ----------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _value(v) -> Any:
    return "undetermined" if v is UNDETERMINED else v


def encode_support(s: Support) -> dict:
    out: dict[str, Any] = {"n": s.n, "rows": [list(p) for p in s.exponents]}
    if s.coefficients:
        out["coefficients"] = list(s.coefficients)
    return out


def encode_zeta(z: ZetaFunction) -> dict:
    return {"factors": {str(d): e for d, e in z.factors}}


def encode_charpoly(c: CharPoly) -> list[dict]:
    return [{"lambda": _frac(l), "multiplicity": m} for l, m in c.multiplicities]


def encode_spectrum(sp: Spectrum) -> dict:
    return {"terms": [{"exp": _frac(e), "coeff": c} for e, c in sp.items()]}


def encode_jordan(j: JordanTable) -> list[dict]:
    items = sorted(j.counts.items(), key=lambda kv: (kv[0][1], -kv[0][0]))
    return [{"lambda": _frac(l), "size": s, "count": _value(c)} for (s, l), c in items]


def encode_table(t: EHodgeTable) -> dict:
    return {"n": t.n, "entries": [{"p": p, "q": q, "lambda": _frac(l), "value": _value(v)}
                                  for (p, q, l), v in t.sorted_items()]}


# ---- jobs and reports -------------------------------------------------------------------


@dataclass
class JobSpec:
    command: str
    supports: list[Support]
    lam: Fraction | None = None
    context: str = LOCAL
    mode: str = "auto"
    plain: bool = False


@dataclass
class Report:
    command: str
    result: Any
    hypotheses: list[str] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    ok: bool = True

    def as_dict(self) -> dict:
        return {"command": self.command, "hypotheses": self.hypotheses,
                "checks": self.checks, "ok": self.ok, "result": self.result}


NONDEG_LOCAL = "non-degenerate at the origin (asserted by the caller)"
NONDEG_INF = "non-degenerate at infinity (asserted by the caller)"
ISOLATED = "isolated singularity at the origin"
TAME = "tame at infinity"
POLY_LIKE = "polynomial-like pair (asserted by the caller)"


def _one(job: JobSpec) -> Support:
    if len(job.supports) != 1:
        raise PreconditionError(f"{job.command} takes exactly one support")
    return job.supports[0]


def _pair(job: JobSpec) -> tuple[Support, Support]:
    if len(job.supports) != 2:
        raise PreconditionError(f"{job.command} takes a pair P Q")
    p, q = job.supports
    if p.n != q.n:
        raise PreconditionError("P and Q must have the same number of variables")
    return p, q


def _lams(job: JobSpec, available: Sequence[Fraction]) -> list[Fraction]:
    return [job.lam] if job.lam is not None else list(available)


def _filter(j: JordanTable, lam: Fraction | None) -> JordanTable:
    if lam is None:
        return j
    return JordanTable({k: v for k, v in j.counts.items() if k[1] == lam})


def _cmd_zeta_local(job):
    s = _one(job)
    return Report(job.command, encode_zeta(zeta_local(s)), [NONDEG_LOCAL],
                  {"convenient": s.is_convenient()})


def _cmd_zeta_infinity(job):
    s = _one(job)
    return Report(job.command, encode_zeta(zeta_infinity(s)), [NONDEG_INF],
                  {"convenient": s.is_convenient()})


def _cmd_zeta_ci_local(job):
    return Report(job.command, encode_zeta(zeta_local_ci(job.supports)), [NONDEG_LOCAL],
                  {"convenient": all(s.is_convenient() for s in job.supports)})


def _cmd_zeta_ci_infinity(job):
    return Report(job.command, encode_zeta(zeta_infinity_ci(job.supports)), [NONDEG_INF],
                  {"convenient": all(s.is_convenient() for s in job.supports)})


def _cmd_zeta_mero(job):
    p, q = _pair(job)
    checks = {"properly_contained": properly_contained(p, q),
              "polynomial_like_sufficient": polynomial_like_sufficient(p, q)}
    return Report(job.command, encode_zeta(zeta_mero(p, q)), [NONDEG_LOCAL, POLY_LIKE], checks)


def _cmd_milnor(job):
    s = _one(job)
    if job.context == INFINITY:
        data, z, hyp = milnor_data_infinity(s), zeta_infinity(s), [NONDEG_INF, TAME]
        ctx = "infinity-tame"
    else:
        data, z, hyp = milnor_data(s), zeta_local(s), [NONDEG_LOCAL, ISOLATED]
        ctx = "local-isolated"
    result: dict[str, Any] = {"chi": data.chi, "mu": data.mu}
    if data.mu is not None:
        result["charpoly"] = encode_charpoly(charpoly_and_multiplicity(z, s.n, ctx))
    return Report(job.command, result, hyp, {"convenient": s.is_convenient()})


def _cmd_jordan(job, context):
    s = _one(job)
    table = assemble_local(s, job.mode) if context == LOCAL else assemble_infinity(s, job.mode)
    lams = sorted(set(table.lambdas()) | set(relevant_lambdas(s, context)) | {Fraction(0)})
    j = jordan_blocks(table, s.n, context, _lams(job, lams))
    hyp = [NONDEG_LOCAL, ISOLATED] if context == LOCAL else [NONDEG_INF, TAME]
    return Report(job.command, encode_jordan(_filter(j, job.lam)), hyp,
                  {"convenient": s.is_convenient(), "determined": table.is_determined()})


def _cmd_spectrum(job):
    s = _one(job)
    return Report(job.command, encode_spectrum(spectrum_infinity(s)), [NONDEG_INF, TAME],
                  {"convenient": s.is_convenient()})


def _cmd_hodge_table(job):
    s = _one(job)
    table = assemble_local(s, job.mode) if job.context == LOCAL else assemble_infinity(s, job.mode)
    if job.lam is not None:
        table = EHodgeTable(table.n, {k: v for k, v in table.entries.items() if k[2] == job.lam})
    hyp = [NONDEG_LOCAL] if job.context == LOCAL else [NONDEG_INF]
    return Report(job.command, encode_table(table), hyp,
                  {"convenient": s.is_convenient(), "determined": table.is_determined()})


def _cmd_atypical(job):
    s = _one(job)
    faces = atypical_faces(gamma_infinity(s), coordinate_condition=not job.plain)
    return Report(job.command, {"faces": [[list(v) for v in f] for f in faces]}, [],
                  {"coordinate_condition": not job.plain})


def _cmd_proper(job):
    p, q = _pair(job)
    result = {"properly_contained": properly_contained(p, q),
              "polynomial_like_sufficient": polynomial_like_sufficient(p, q)}
    return Report(job.command, result)


# ---- crosscheck -------------------------------------------------------------------------


def crosscheck(s: Support, mode: str = "auto") -> list[dict]:
    """Run every redundant path available for ``s``; one entry per comparison."""
    out: list[dict] = []

    def check(name: str, fn: Callable[[], tuple[bool, str]]) -> None:
        try:
            ok, detail = fn()
            out.append({"name": name, "status": "pass" if ok else "fail", "detail": detail})
        except PreconditionError as exc:
            out.append({"name": name, "status": "skipped", "detail": str(exc)})
        except InconsistencyError as exc:
            out.append({"name": name, "status": "fail", "detail": str(exc)})

    n = s.n
    local_ok = s.is_convenient() and tuple([0] * n) not in s.exponents

    def chi_local():
        z, d = zeta_local(s), milnor_data(s)
        return z.degree == d.chi, f"deg ζ = {z.degree}, χ = {d.chi}"

    def chi_infinity():
        z, d = zeta_infinity(s), milnor_data_infinity(s)
        return z.degree == d.chi, f"deg ζ∞ = {z.degree}, χ∞ = {d.chi}"

    check("euler-characteristic-local", chi_local)
    check("euler-characteristic-infinity", chi_infinity)
    if not s.is_convenient():
        return out

    def jordan_paths(context):
        def run():
            z = zeta_local(s) if context == LOCAL else zeta_infinity(s)
            cp = charpoly_and_multiplicity(z, n, "local-isolated" if context == LOCAL else "infinity-tame")
            table = assemble_local(s, mode) if context == LOCAL else assemble_infinity(s, mode)
            lams = [l for l in relevant_lambdas(s, context) if l != 0]
            blocks = jordan_blocks(table, n, context, lams)
            top = jordan_top_sizes(s, context, lams)
            bad = []
            for lam in lams:
                if table.is_determined() and blocks.total(lam) != cp[lam]:
                    bad.append(f"Σ k·J at {lam}")
                for size in (n, n - 1):
                    if size >= 1 and top.get(size, lam) != blocks.get(size, lam) \
                            and blocks.get(size, lam) is not UNDETERMINED:
                        bad.append(f"top size {size} at {lam}")
            if all_faces_prime(s, context):
                prime = jordan_prime_path(s, context, lams)
                for lam in lams:
                    if table.is_determined() and prime.for_lambda(lam) != blocks.for_lambda(lam):
                        bad.append(f"prime path at {lam}")
            return not bad, "; ".join(bad) or "table, closed formulas and multiplicities agree"
        return run

    def symmetry(context):
        def run():
            table = assemble_local(s, mode) if context == LOCAL else assemble_infinity(s, mode)
            v = check_symmetry(table, n, context)
            return not v, "; ".join(v) or "symmetric"
        return run

    def spectra():
        a = spectrum_infinity(s)
        b = spectrum_from_table(assemble_infinity(s, mode), n)
        return a.items() == b.items(), "Poincaré series and table routes"

    check("jordan-infinity", jordan_paths(INFINITY))
    check("symmetry-infinity", symmetry(INFINITY))
    check("spectrum-infinity", spectra)
    if not local_ok:
        return out

    def identity():
        return consistency_identity_holds(assemble_local_parts(s, mode), n), "first sum vs total shifted"

    def stapledon():
        sub = subdivision_from_newton(s)
        table = assemble_local(s, mode)
        lams = [l for l in relevant_lambdas(s, LOCAL) if l != 0]
        full = jordan_full(s, lams, sub)
        blocks = jordan_blocks(table, n, LOCAL, lams)
        bad = []
        for lam in lams:
            if table.is_determined() and full[lam] != blocks.for_lambda(lam):
                bad.append(f"Jordan counts at {lam}")
            e = equivariant_E(s, lam, sub)
            for p in range(n + 1):
                for q in range(n + 1):
                    v = table.get(p, q, lam)
                    if v is not UNDETERMINED and v != e.get((p, q), 0):
                        bad.append(f"E at ({p},{q}) for {lam}")
            spec = {}
            for (i, _), c in mixed_hstar(sub, lam).items():
                spec[i] = spec.get(i, 0) + c
            if trim([spec.get(i, 0) for i in range(n + 2)]) != direct_hstar_on_base(sub, lam):
                bad.append(f"mixed h* specialization at {lam}")
        return not bad, "; ".join(bad) or "subdivision route agrees with the table route"

    check("jordan-local", jordan_paths(LOCAL))
    check("symmetry-local", symmetry(LOCAL))
    check("local-identity", identity)
    check("subdivision-route", stapledon)
    return out


def _cmd_crosscheck(job):
    s = _one(job)
    checks = crosscheck(s, job.mode)
    ok = all(c["status"] != "fail" for c in checks)
    return Report(job.command, {"checks": checks}, [NONDEG_LOCAL, NONDEG_INF],
                  {"convenient": s.is_convenient()}, ok)


COMMANDS: dict[str, Callable[[JobSpec], Report]] = {
    "zeta-local": _cmd_zeta_local,
    "zeta-infinity": _cmd_zeta_infinity,
    "zeta-ci-local": _cmd_zeta_ci_local,
    "zeta-ci-infinity": _cmd_zeta_ci_infinity,
    "zeta-mero": _cmd_zeta_mero,
    "milnor": _cmd_milnor,
    "jordan-local": lambda job: _cmd_jordan(job, LOCAL),
    "jordan-infinity": lambda job: _cmd_jordan(job, INFINITY),
    "spectrum-infinity": _cmd_spectrum,
    "hodge-table": _cmd_hodge_table,
    "atypical-faces": _cmd_atypical,
    "proper-containment": _cmd_proper,
    "crosscheck": _cmd_crosscheck,
}


def run(job: JobSpec) -> Report:
    if job.command not in COMMANDS:
        raise PreconditionError(f"unknown command {job.command!r}")
    return COMMANDS[job.command](job)


def _text(result: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(result, dict):
        lines = []
        for k, v in result.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
        return lines
    if isinstance(result, list):
        lines = []
        for item in result:
            if isinstance(item, dict):
                lines.append(pad + "- " + ", ".join(f"{k}={v}" for k, v in item.items()))
            else:
                lines.append(f"{pad}- {json.dumps(item, ensure_ascii=False)}")
        return lines
    return [f"{pad}{result}"]


def emit_report(report: Report, fmt: str = "structured") -> bytes:
    if fmt == "structured":
        return (json.dumps(report.as_dict(), ensure_ascii=False) + "\n").encode("utf-8")
    lines = [f"{report.command}: {'ok' if report.ok else 'FAILED'}"]
    if report.hypotheses:
        lines.append("relies on: " + "; ".join(report.hypotheses))
    for k, v in report.checks.items():
        lines.append(f"check {k}: {v}")
    lines.extend(_text(report.result))
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="newton-invariants", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("inputs", nargs="+", help="polynomial text, structured JSON, or a file path")
    ap.add_argument("--lambda", dest="lam", help="eigenvalue class a/d, meaning exp(2πi a/d)")
    ap.add_argument("--context", choices=[LOCAL, INFINITY], default=LOCAL)
    ap.add_argument("--mode", choices=list(MODES), default="auto")
    ap.add_argument("--format", choices=["text", "structured"], default="structured")
    ap.add_argument("--n", type=int, help="number of variables (default: largest index used)")
    ap.add_argument("--plain", action="store_true",
                    help="atypical faces without the coordinate-subspace condition")
    ap.add_argument("--output", help="write the report here instead of stdout")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        supports = [s for text in args.inputs for s in parse_input(text, args.n)]
        if len({s.n for s in supports}) > 1:
            raise PreconditionError("all supports must have the same number of variables")
        lam = None
        if args.lam is not None:
            try:
                lam = Fraction(args.lam) % 1
            except (ValueError, ZeroDivisionError):
                raise PreconditionError(f"cannot read the eigenvalue class {args.lam!r}") from None
        job = JobSpec(args.command, supports, lam, args.context, args.mode, args.plain)
        report = run(job)
        code = EXIT_OK if report.ok else EXIT_INCONSISTENT
    except PreconditionError as exc:
        report = Report(args.command, {"error": str(exc)}, ok=False)
        code = EXIT_PRECONDITION
    except InconsistencyError as exc:
        report = Report(args.command, {"error": str(exc)}, ok=False)
        code = EXIT_INCONSISTENT
    data = emit_report(report, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return code
