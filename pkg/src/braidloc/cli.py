"""Command-line front end. Every command prints a versioned JSON report."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .braid_rep import BraidWord, eval_word, probe_image, rep_from_r
from .builtins import PREFIX, load_matrix
from .cyclo import DEFAULT_TOL, CycNum, format_literal, parse_literal, root_of_unity_order, zeta
from .fusion import (
    PASSES,
    FusionRing,
    bratteli,
    catalog,
    fpdim,
    localization_obstruction,
    period_and_blocks,
    sl2_level,
    so_level2_odd,
)
from .gaussian import (
    check_es_relations,
    es_rep,
    gaussian_rep,
    local_r,
    local_u,
    local_u_ops,
    split_by_full_twist,
    trace_criterion,
)
from .matrix import APPROX, EXACT, SqMatrix, annihilator_check, is_unitary, spectrum_multiplicities
from .temperley_lieb import (
    Infeasible,
    check_tl_relations,
    jones_wenzl,
    multiplicity_solve,
    simple_dims,
    tl_from_r,
)
from .yang_baxter import ExceedsBound, Finite, RMatrixSpec, check_gybe, check_ybe, projective_order

SCHEMA = 1
PASS, FAIL, BOUNDED = "pass", "fail", "bounded"


class UsageError(Exception):
    pass


def _jsonable(x: Any) -> Any:
    if isinstance(x, CycNum):
        return format_literal(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (Finite, ExceedsBound)):
        return {"status": type(x).__name__, **x.__dict__}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return x.tolist()
    if hasattr(x, "item"):
        return x.item()
    return x


class Report:
    def __init__(self, command: str, backend: str):
        self.command = command
        self.backend = backend
        self.checks: list[dict] = []
        self.data: dict[str, Any] = {}
        self.inputs: list[str] = []

    def check(self, name: str, ok: bool | None, bounded: bool = False, **details) -> bool:
        status = BOUNDED if bounded and ok else (PASS if ok else FAIL)
        self.checks.append({"name": name, "status": status, "details": _jsonable(details)})
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c["status"] != FAIL for c in self.checks)

    def to_json(self, argv: Sequence[str], wall_time: float | None) -> dict:
        h = hashlib.sha256()
        h.update(json.dumps(list(argv)).encode())
        for ref in self.inputs:
            if not ref.startswith(PREFIX) and Path(ref).is_file():
                h.update(Path(ref).read_bytes())
        return {
            "schema": SCHEMA,
            "version": __version__,
            "command": self.command,
            "inputs_digest": h.hexdigest(),
            "backend": self.backend,
            "checks": self.checks,
            "data": _jsonable(self.data),
            "wall_time": wall_time,
        }


def _load(ref: str, args, report: Report) -> SqMatrix:
    report.inputs.append(ref)
    try:
        M = load_matrix(ref, args.tol)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot load matrix {ref!r}: {exc}") from exc
    if args.backend == APPROX and M.is_exact:
        M = M.to_approx(args.tol)
    if args.backend == EXACT and not M.is_exact:
        raise UsageError("approximate matrix given with --backend exact")
    return M


def _local_dim(M: SqMatrix, d: int | None) -> int:
    if d is not None:
        return d
    r = int(round(M.dim ** 0.5))
    if r * r != M.dim:
        raise UsageError("cannot infer --d: matrix dimension is not a square")
    return r


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_ybe_check(args, report: Report):
    M = _load(args.matrix, args, report)
    d = _local_dim(M, args.d)
    if args.gybe:
        k, m = args.gybe
        gybe, far = check_gybe(M, d, k, m)
        report.check("gybe", gybe, k=k, m=m)
        report.data["far_commutation"] = far
    else:
        report.check("ybe", check_ybe(RMatrixSpec(d, M, check=False)))
    report.data["unitary"] = is_unitary(M)
    if args.require_unitary:
        report.check("unitary", report.data["unitary"])
    if args.order_bound:
        res = projective_order(M, args.order_bound)
        report.data["projective_order"] = res


def cmd_rep_probe(args, report: Report):
    M = _load(args.r, args, report)
    if not M.is_exact:
        raise UsageError("rep probe needs the exact backend")
    rep = rep_from_r(RMatrixSpec(_local_dim(M, args.d), M), args.n)
    res = probe_image(rep, args.bound)
    report.check("probe", True, bounded=res.status == "ExceedsBound",
                 status=res.status, order=res.order, elements_explored=res.elements_explored)


def cmd_rep_eval(args, report: Report):
    M = _load(args.r, args, report)
    rep = rep_from_r(RMatrixSpec(_local_dim(M, args.d), M, check=False), args.n, check=False)
    w = BraidWord.parse(args.n, args.word)
    out = eval_word(rep, w)
    report.data["word"] = list(w.letters)
    report.data["matrix"] = out.to_json()
    report.data["is_scalar"] = out.is_scalar()


def cmd_tl_verify(args, report: Report):
    M = _load(args.r, args, report)
    d = _local_dim(M, args.d)
    q = parse_literal(args.q)
    q_ev = q * q
    ell = root_of_unity_order(q_ev, limit=1000)
    report.data["q_ev"] = q_ev
    roots = [CycNum.rational(-1), q_ev]
    if M.is_exact:
        ann = annihilator_check(M, roots)
        report.check("annihilator", ann)
        if ann:
            report.data["spectrum_multiplicities"] = spectrum_multiplicities(M, roots)
    tl = tl_from_r(RMatrixSpec(d, M, check=False), args.n, q_ev)
    report.data["delta_inv_sq"] = tl.delta_inv_sq
    report.check("relations", check_tl_relations(tl), n=args.n)
    nonzero, zero = [], []
    for k in range(1, (args.jw or 0) + 1):
        p = jones_wenzl(tl, k)
        (zero if p.matrix.is_zero() else nonzero).append(k)
    report.data["jw_nonzero"] = nonzero
    report.data["jw_zero"] = zero
    if args.expect_jw_zero is not None:
        report.check("jw_vanishing_level", zero[:1] == [args.expect_jw_zero], jw_zero=zero)
    if ell is not None and ell >= 3:
        report.data["ell"] = ell
        report.data["dims"] = simple_dims(ell, args.n)
        mu = multiplicity_solve(ell, args.n, d)
        report.data["multiplicities"] = mu.reason if isinstance(mu, Infeasible) else mu


def _ring_from_args(args, report: Report) -> FusionRing:
    if args.ring:
        report.inputs.append(args.ring)
        try:
            return FusionRing.load(args.ring)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot load ring {args.ring!r}: {exc}") from exc
    params = [x for x in (args.k, args.N) if x is not None]
    try:
        return catalog(args.catalog, *params)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_fusion_analyze(args, report: Report):
    ring = _ring_from_args(args, report)
    rep = localization_obstruction(ring, args.object, args.depth)
    report.data["report"] = rep.to_json()
    brat = bratteli(ring, args.object, args.depth)
    report.data["bratteli"] = {"levels": brat.levels, "dims": [list(map(int, d)) for d in brat.dims],
                               "period": brat.period, "depth": brat.depth}
    if args.expect:
        want = PASSES if args.expect == "pass" else "Obstructed"
        report.check("verdict", rep.verdict == want, verdict=rep.verdict, expected=want)


def cmd_gaussian_build(args, report: Report):
    es = es_rep(args.p, args.n, args.omega_exponent)
    report.check("es_relations_regular", all(es.relations().values()), **es.relations())
    rep = gaussian_rep(es)
    report.check("gaussian_generators_unitary", all(is_unitary(g) for g in rep.generators))
    report.data["zeta_convention"] = "conj(gauss_sum)/p"
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(rep.generators, start=1):
            (out_dir / f"gamma_sigma{i}.json").write_text(json.dumps(g.to_json()))
    if args.localize:
        rel = check_es_relations(local_u_ops(args.p, max(args.n, 4), args.omega_exponent),
                                 args.p, args.omega_exponent)
        report.check("es_relations_local", all(rel.values()), **rel)
        R = local_r(args.p, omega_exponent=args.omega_exponent)
        report.check("local_r_ybe_unitary", check_ybe(R) and is_unitary(R.matrix))
        report.check("trace_criterion", trace_criterion(args.p, args.omega_exponent))
        if out_dir:
            (out_dir / "local_R.json").write_text(json.dumps(R.matrix.to_json()))
            (out_dir / "local_U.json").write_text(json.dumps(local_u(args.p, args.omega_exponent).to_json()))


# ---------------------------------------------------------------------------
# acceptance suite
# ---------------------------------------------------------------------------

def _timed(report: Report, name: str, limit: float, fn: Callable[[], None]):
    t0 = time.perf_counter()
    fn()
    elapsed = time.perf_counter() - t0
    report.check(f"{name}_runtime", elapsed < limit, limit_seconds=limit)
    return elapsed


def _suite_1(report: Report):
    mats = {n: load_matrix(PREFIX + n) for n in ("dye4", "inf9", "loc6")}
    for name, M in mats.items():
        report.check(f"c1_{name}_ybe_unitary", check_ybe(M) and is_unitary(M))
    for p in (3, 5, 7):
        R = local_r(p)
        report.check(f"c1_local_r{p}_ybe_unitary", check_ybe(R) and is_unitary(R.matrix))


def _suite_2(report: Report):
    R = load_matrix(PREFIX + "loc6")
    q = zeta(6, -1)
    report.check("c2_annihilator", annihilator_check(R, [-1, q]))
    report.check("c2_multiplicities", spectrum_multiplicities(R, [-1, q]) == [6, 3])
    tl4 = tl_from_r(R, 4, q)
    report.check("c2_tl_relations_n4", check_tl_relations(tl4) and tl4.delta_inv_sq == Fraction(1, 3))
    tl5 = tl_from_r(R, 5, q)
    zero = [k for k in range(2, 6) if jones_wenzl(tl5, k).matrix.is_zero()]
    report.check("c2_jw_levels", zero == [5], vanishing=zero, dim=3 ** 5)


def _suite_3(report: Report):
    ok = True
    for n in range(1, 10):
        dims = simple_dims(6, n)
        if n % 2:
            e = (n - 1) // 2
            want = {"V1": (3 ** e + 1) // 2, "V3": (3 ** e - 1) // 2}
        else:
            e = (n - 2) // 2
            want = {"V0": (3 ** e + 1) // 2, "V2": 3 ** e, "V4": (3 ** e - 1) // 2}
        want = {k: v for k, v in want.items() if v}
        ok &= dims == want
    report.check("c3_dimension_formulas", ok, n_max=9)


def _suite_4(report: Report):
    ok = True
    for k in range(1, 5):
        for n, want in ((2 * k, {"V0": 3 ** k, "V2": 2 * 3 ** k, "V4": 3 ** k}),
                        (2 * k - 1, {"V1": 3 ** k, "V3": 3 ** k})):
            dims = simple_dims(6, n)
            mu = multiplicity_solve(6, n, 3)
            ok &= mu == {w: v for w, v in want.items() if w in dims}
            ok &= sum(mu[w] * dims[w] for w in dims) == 3 ** n
    report.check("c4_multiplicities", ok, k_range=[1, 4])


def _suite_5(report: Report):
    passing = [ell for ell in range(3, 13)
               if localization_obstruction(sl2_level(ell - 2), "X").verdict == PASSES]
    report.check("c5_sweep", passing == [3, 4, 6], passing=passing)
    fib = fpdim(sl2_level(3), "X")
    report.check("c5_fibonacci", abs(fib.value - 1.6180340) < 1e-6 and not fib.square_integer,
                 fpdim=fib.value)


def _suite_6(report: Report):
    report.check("c6_period_sl2_4", period_and_blocks(sl2_level(4), "X").period == 2)
    for N in (3, 5, 7):
        ring = so_level2_odd(N)
        fp = fpdim(ring, "eps")
        report.check(f"c6_so2_{N}", period_and_blocks(ring, "eps").period == 2
                     and fp.square_integer and fp.square == N)


def _suite_7(report: Report):
    for p in (3, 5, 7):
        reg = es_rep(p, 4).relations()
        loc = check_es_relations(local_u_ops(p, 4), p, 1)
        u_ok = (local_u(p) ** p).is_identity()
        report.check(f"c7_es_relations_p{p}", all(reg.values()) and all(loc.values()) and u_ok)
        report.check(f"c7_trace_criterion_p{p}", trace_criterion(p))


def _suite_8(report: Report):
    rep = gaussian_rep(es_rep(3, 3))
    res = probe_image(rep, 1000)
    summands = [probe_image(r, 1000).order for r in split_by_full_twist(rep)]
    report.check("c8_gamma3_projective_order", res.order == 12, observed=res.order, expected=12,
                 weil_summand_orders=summands)
    inf = projective_order(load_matrix(PREFIX + "inf9"), 10_000)
    report.check("c8_inf9_order", isinstance(inf, ExceedsBound), bounded=True, bound=10_000)
    M = load_matrix(PREFIX + "uqsl2_m")
    probe = probe_image(rep_from_r(M, 3), 20_000)
    report.check("c8_uqsl2_m_probe", probe.status == "ExceedsBound", bounded=True, bound=20_000)


def cmd_acceptance_suite(args, report: Report):
    if args.backend != EXACT:
        raise UsageError("paper-suite runs on the exact backend")
    _timed(report, "c1", 10, lambda: _suite_1(report))
    _timed(report, "c2", 60, lambda: _suite_2(report))
    _suite_3(report)
    _suite_4(report)
    _suite_5(report)
    _suite_6(report)
    _suite_7(report)
    _timed(report, "c8", 300, lambda: _suite_8(report))
    if not args.quick:
        for n in (2, 3):
            rep = rep_from_r(load_matrix(PREFIX + "level2"), n)
            res = probe_image(rep, 1000)
            report.check(f"level2_probe_n{n}", res.status == "Finite", order=res.order)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braidloc", description=__doc__)
    ap.add_argument("--backend", choices=[EXACT, APPROX], default=EXACT)
    ap.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ap.add_argument("--timing", action="store_true", help="include wall time in the report")
    ap.add_argument("--out", help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="group", required=True)

    ybe = sub.add_parser("ybe").add_subparsers(dest="action", required=True)
    c = ybe.add_parser("check")
    c.add_argument("matrix")
    c.add_argument("--d", type=int)
    c.add_argument("--gybe", type=int, nargs=2, metavar=("K", "M"))
    c.add_argument("--order-bound", type=int)
    c.add_argument("--require-unitary", action="store_true")
    c.set_defaults(func=cmd_ybe_check)

    rep = sub.add_parser("rep").add_subparsers(dest="action", required=True)
    c = rep.add_parser("probe")
    c.add_argument("--r", required=True)
    c.add_argument("--d", type=int)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--bound", type=int, default=20_000)
    c.set_defaults(func=cmd_rep_probe)
    c = rep.add_parser("eval")
    c.add_argument("--r", required=True)
    c.add_argument("--d", type=int)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--word", required=True)
    c.set_defaults(func=cmd_rep_eval)

    tl = sub.add_parser("tl").add_subparsers(dest="action", required=True)
    c = tl.add_parser("verify")
    c.add_argument("--r", required=True)
    c.add_argument("--d", type=int)
    c.add_argument("--q", required=True, help="TL parameter q; R has eigenvalues -1 and q^2")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--jw", type=int)
    c.add_argument("--expect-jw-zero", type=int)
    c.set_defaults(func=cmd_tl_verify)

    fu = sub.add_parser("fusion").add_subparsers(dest="action", required=True)
    c = fu.add_parser("analyze")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog")
    src.add_argument("--ring", help="JSON file {labels, unit, N}")
    c.add_argument("--k", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--object", default="X")
    c.add_argument("--depth", type=int, default=12)
    c.add_argument("--expect", choices=["pass", "obstructed"])
    c.set_defaults(func=cmd_fusion_analyze)

    ga = sub.add_parser("gaussian").add_subparsers(dest="action", required=True)
    c = ga.add_parser("build")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--omega-exponent", type=int, default=1)
    c.add_argument("--localize", action="store_true")
    c.add_argument("--out-dir")
    c.set_defaults(func=cmd_gaussian_build)

    c = sub.add_parser("paper-suite")
    c.add_argument("--quick", action="store_true")
    c.set_defaults(func=cmd_acceptance_suite)
    return ap


def run(argv: Sequence[str]) -> tuple[int, dict | None]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    command = " ".join(x for x in (args.group, getattr(args, "action", None)) if x)
    report = Report(command, args.backend)
    t0 = time.perf_counter()
    try:
        args.func(args, report)
    except UsageError as exc:
        print(f"braidloc: error: {exc}", file=sys.stderr)
        return 2, None
    wall = round(time.perf_counter() - t0, 3) if args.timing else None
    out = report.to_json(argv, wall)
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return (0 if report.ok else 1), out


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else list(argv))
    return code


if __name__ == "__main__":
    sys.exit(main())
