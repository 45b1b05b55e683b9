"""Command-line front end.

Every command builds a job (a plain dict, the same shape as a JSON job file
accepted by ``lapinv run``), runs it and prints a JSON report. Reports are
deterministic for a fixed job and seed except for the ``timing`` field.

Exit codes: 0 verdict reached, 2 input error, 3 budget exhausted or
indeterminate verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from lapinv import __version__
from lapinv.errors import IndeterminateError, LapinvError, ParseError
from lapinv.grammar import format_polynomial, parse_polynomial
from lapinv.harmonic import harmonic_decompose, schur_ratios
from lapinv.laplacian import (
    DEFAULT_STAGE_BUDGET,
    INDETERMINATE,
    is_laplacian_system,
    laplacian_closure,
    separating_generates_verdict,
)
from lapinv._scalar import scalar_str

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3

COMMANDS = (
    "check-laplacian",
    "closure",
    "separating-generates",
    "decompose-harmonic",
    "membership",
    "polarize",
    "homogeneity",
    "quadratic-homogeneity",
    "clifford",
    "finite-group-invariants",
    "iit",
    "kns",
    "orbit-sep",
    "schur-ratios",
)


class JobError(LapinvError, ValueError):
    code = "invalid_job"


# job helpers


def _polys(job: dict, key: str = "polynomials") -> list:
    texts = job.get(key)
    if not texts:
        raise JobError(f"job needs a non-empty {key!r} list")
    if isinstance(texts, str):
        texts = [texts]
    nvars = job.get("nvars")
    parsed = [parse_polynomial(t, nvars) for t in texts]
    if nvars is None:
        nvars = max(p.nvars for p in parsed)
        parsed = [p if p.nvars == nvars else p.embed(nvars) for p in parsed]
    return parsed


def _int(job: dict, key: str, default=None, minimum: int | None = None):
    v = job.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise JobError(f"{key!r} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise JobError(f"{key!r} must be at least {minimum}, got {v}")
    return v


def trials_or(job, default=5):
    return _int(job, "trials", default, 1)


def _group(job: dict):
    from lapinv.groups import group_closure

    gens = job.get("group")
    if not gens:
        raise JobError("job needs a 'group' list of generator matrices")
    return group_closure(gens, _int(job, "cap", 10**4, 1))


def _fmt_all(polys) -> list[str]:
    return [format_polynomial(p) for p in polys]


# commands; each returns (result dict, is_budget_failure)


def cmd_check_laplacian(job):
    rep = is_laplacian_system(_polys(job), job.get("nvars"))
    return rep.to_dict(), rep.verdict == INDETERMINATE


def cmd_closure(job):
    polys = _polys(job)
    trace = laplacian_closure(polys, _int(job, "stage_budget", DEFAULT_STAGE_BUDGET, 1), polys[0].nvars)
    out = trace.to_dict()
    out["verdict"] = "STABILIZED" if trace.stabilized else "NOT_STABILIZED"
    if trace.stabilized:
        out["final_check"] = is_laplacian_system(trace.final, polys[0].nvars).verdict
    return out, not trace.stabilized


def cmd_separating_generates(job):
    rep = separating_generates_verdict(_polys(job), bool(job.get("separating_asserted", False)), job.get("nvars"))
    return rep.to_dict(), rep.verdict == INDETERMINATE


def cmd_decompose_harmonic(job):
    (p,) = _polys(job)[:1]
    split = harmonic_decompose(p, _int(job, "degree"))
    return {
        "degree": split.degree,
        "components": [format_polynomial(h) for h in split.components],
        "component_degrees": [split.degree - 2 * i for i in range(len(split.components))],
    }, False


def cmd_membership(job):
    from lapinv.subalgebra import SubalgebraPresentation

    gens = _polys(job)
    nvars = gens[0].nvars
    query = job.get("query")
    if not isinstance(query, str):
        raise JobError("membership job needs a 'query' polynomial")
    q = parse_polynomial(query, nvars)
    B = SubalgebraPresentation(gens, nvars)
    res = B.membership(q, job.get("method", "auto"))
    out = {"verdict": res.verdict, "query": format_polynomial(q), "generators": {f"y{i + 1}": s for i, s in enumerate(_fmt_all(gens))}}
    if res.witness is not None:
        out["witness"] = res.witness_str()
    return out, False


def cmd_polarize(job):
    from lapinv.polarization import classical_polarizations

    (f,) = _polys(job)[:1]
    fam = classical_polarizations(f, _int(job, "k", 2, 1))
    names = fam.layout.names()
    return {
        "k": fam.layout.k,
        "variables": names,
        "polarizations": {
            ",".join(map(str, a)): format_polynomial(p, names) for a, p in fam.family.items()
        },
    }, False


def cmd_homogeneity(job):
    from lapinv.polarization import homogeneity_compare

    rep = homogeneity_compare(
        _polys(job),
        _int(job, "k", 2, 2),
        _int(job, "degree_bound", 4, 2),
        _int(job, "stage_budget", DEFAULT_STAGE_BUDGET, 1),
        kns_trials=trials_or(job),
        seed=_int(job, "seed", 0),
    )
    return rep.to_dict(), False


def _matrices(job):
    from lapinv.jordan import clifford_system, matrix

    if "clifford" in job:
        C = clifford_system(_int(job, "clifford", minimum=0), _int(job, "size"))
        return list(C.matrices)
    mats = job.get("matrices")
    if not mats:
        raise JobError("job needs 'matrices' (list of square matrices) or 'clifford' (m)")
    return [matrix(M) for M in mats]


def cmd_quadratic_homogeneity(job):
    from lapinv.jordan import quadratic_homogeneity_test

    return quadratic_homogeneity_test(_matrices(job)).to_dict(), False


def cmd_clifford(job):
    from lapinv.jordan import clifford_foliation_generators, clifford_system, matrix_to_json

    C = clifford_system(_int(job, "m", minimum=0), _int(job, "size"))
    gens = clifford_foliation_generators(C)
    return {
        "m": C.m,
        "size": C.size,
        "matrices": [matrix_to_json(P) for P in C.matrices],
        "relations": "verified",
        "generators": _fmt_all(gens),
        "laplacian": is_laplacian_system(gens).verdict,
    }, False


def cmd_finite_group_invariants(job):
    from lapinv.groups import reynolds_invariant_basis

    G = _group(job)
    gens = reynolds_invariant_basis(G, _int(job, "degree_bound", None, 1))
    return {"group_order": G.order, "n": G.n, "invariants": _fmt_all(gens)}, False


def cmd_iit(job):
    from lapinv.groups import iit_pipeline

    G = _group(job)
    rep = iit_pipeline(G, _int(job, "degree_bound", None, 1), trials_or(job), _int(job, "seed", 0))
    return rep.to_dict(), rep.laplacian.verdict == INDETERMINATE


def cmd_kns(job):
    from lapinv.groups import kns_check

    rep = kns_check(_polys(job), _int(job, "k", 1, 1), trials_or(job), _int(job, "seed", 0))
    return rep.to_dict(), False


def cmd_orbit_sep(job):
    from lapinv.groups import orbit_separation_sample

    G = _group(job)
    polys = _polys(job)
    rep = orbit_separation_sample(G, polys, trials_or(job, 2000), _int(job, "seed", 0))
    return rep.to_dict(), False


def cmd_schur_ratios(job):
    d = _int(job, "degree", minimum=0)
    n = _int(job, "nvars", minimum=2)
    if d is None or n is None:
        raise JobError("schur-ratios needs 'degree' and 'nvars'")
    r = schur_ratios(d, n)
    return {"degree": d, "nvars": n, "ratios": [scalar_str(c) for c in r.ratios]}, False


DISPATCH = {
    "check-laplacian": cmd_check_laplacian,
    "closure": cmd_closure,
    "separating-generates": cmd_separating_generates,
    "decompose-harmonic": cmd_decompose_harmonic,
    "membership": cmd_membership,
    "polarize": cmd_polarize,
    "homogeneity": cmd_homogeneity,
    "quadratic-homogeneity": cmd_quadratic_homogeneity,
    "clifford": cmd_clifford,
    "finite-group-invariants": cmd_finite_group_invariants,
    "iit": cmd_iit,
    "kns": cmd_kns,
    "orbit-sep": cmd_orbit_sep,
    "schur-ratios": cmd_schur_ratios,
}


def run(job: dict) -> tuple[dict, int]:
    """Run one job; return the report and the process exit code."""
    command = job.get("command")
    report = {"tool": "lapinv", "version": __version__, "command": command, "seed": job.get("seed", 0)}
    report["job"] = {k: v for k, v in sorted(job.items()) if k != "command"}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        if command not in DISPATCH:
            raise JobError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        result, budget_hit = DISPATCH[command](job)
        report["result"] = result
        if budget_hit:
            code = EXIT_BUDGET
    except IndeterminateError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_BUDGET
    except ParseError as exc:
        report["error"] = {"code": exc.code, "message": str(exc), "line": exc.line, "column": exc.column, "position": exc.position}
        code = EXIT_INPUT
    except (LapinvError, ValueError, TypeError, IndexError, KeyError) as exc:
        report["error"] = {"code": getattr(exc, "code", "invalid_input"), "message": str(exc)}
        code = EXIT_INPUT
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report, code


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lapinv", description="Laplacian algebra and invariant theory verdicts over exact rationals.")
    p.add_argument("--version", action="version", version=f"lapinv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--nvars", type=int, help="ambient variable count (default: largest index used)")
        sp.add_argument("--degree-bound", type=int)
        sp.add_argument("--stage-budget", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--k", type=int)
        sp.add_argument("--json-out", metavar="PATH", help="also write the report to PATH")
        sp.add_argument("--separating-asserted", action="store_true")

    r = sub.add_parser("run", help="run a JSON job file")
    r.add_argument("job_file")
    r.add_argument("--json-out", metavar="PATH")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name in ("quadratic-homogeneity",):
            sp.add_argument("--matrices", help="JSON list of square matrices")
            sp.add_argument("--clifford", type=int, metavar="M", help="use the built-in Clifford system P_0..P_M")
            sp.add_argument("--size", type=int)
        elif name == "clifford":
            sp.add_argument("m", type=int)
            sp.add_argument("--size", type=int)
        elif name == "schur-ratios":
            sp.add_argument("--degree", type=int, required=True)
        elif name in ("finite-group-invariants", "iit"):
            sp.add_argument("--group", required=True, help="JSON list of generator matrices, or @FILE")
        else:
            if name == "membership":
                sp.add_argument("query")
            if name == "orbit-sep":
                sp.add_argument("--group", required=True, help="JSON list of generator matrices, or @FILE")
            if name == "decompose-harmonic":
                sp.add_argument("--degree", type=int)
            sp.add_argument("polynomials", nargs="+")
    return p


def _load_json_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"invalid JSON: {exc}") from exc


def job_from_args(ns: argparse.Namespace) -> dict:
    job: dict = {"command": ns.command}
    mapping = {
        "polynomials": "polynomials",
        "query": "query",
        "nvars": "nvars",
        "degree_bound": "degree_bound",
        "stage_budget": "stage_budget",
        "trials": "trials",
        "k": "k",
        "m": "m",
        "size": "size",
        "degree": "degree",
        "clifford": "clifford",
    }
    for attr, key in mapping.items():
        v = getattr(ns, attr, None)
        if v is not None:
            job[key] = v
    job["seed"] = ns.seed
    if getattr(ns, "separating_asserted", False):
        job["separating_asserted"] = True
    for attr in ("group", "matrices"):
        v = getattr(ns, attr, None)
        if v is not None:
            job[attr] = _load_json_arg(v)
    return job


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "run":
            job = json.loads(Path(ns.job_file).read_text())
            if not isinstance(job, dict):
                raise JobError("a job file holds one JSON object")
        else:
            job = job_from_args(ns)
    except (OSError, json.JSONDecodeError, JobError) as exc:
        report = {"tool": "lapinv", "version": __version__, "error": {"code": "invalid_job", "message": str(exc)}, "exit_code": EXIT_INPUT}
        sys.stdout.write(dumps(report))
        return EXIT_INPUT
    report, code = run(job)
    text = dumps(report)
    sys.stdout.write(text)
    if ns.json_out:
        Path(ns.json_out).write_text(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
