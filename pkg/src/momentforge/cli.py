"""Batch command-line frontend with machine-readable JSON/CSV output.

Every run writes its result to stdout (or ``--out``) and a one-line run
manifest to stderr; re-running with the manifest's parameters reproduces
byte-identical results.  Exit codes: 0 success, 1 usage error, 2
validation failure (e.g. a fit that misses a verification point).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

import click
import mpmath

import momentforge.families as families
from momentforge import __version__
from momentforge.errors import FitVerificationError, MomentForgeError
from momentforge.families import boolean, domino, invmaj, schur
from momentforge.families.common import SYMBOL_LEGEND
from momentforge.fitter import FitSpec, fit_quasi_polynomial
from momentforge.moment_algebra import normality_report
from momentforge.poly_series import Polynomial
from momentforge import oracle as oracle_mod

DEFAULT_THREADS = int(os.environ.get("MOMENTFORGE_THREADS", "1") or 1)


class ValidationFailure(MomentForgeError):
    """Computation completed but an internal consistency check failed."""


def _rat(x: Fraction) -> str:
    return str(x)


def _emit(ctx_params: dict, subcommand: str, result: dict, csv_text: str, started: float) -> None:
    fmt = ctx_params["format"]
    out_path = ctx_params["out"]
    if fmt == "json":
        payload = {"subcommand": subcommand, "result": result}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = csv_text
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    manifest = {
        "subcommand": subcommand,
        "parameters": {
            k: v for k, v in sorted(ctx_params.items()) if k not in ("out", "format") and v is not None
        },
        "format": fmt,
        "seed": ctx_params.get("seed"),
        "tool_version": __version__,
        "output": out_path or "stdout",
        "wall_time_s": round(time.monotonic() - started, 6),
    }
    sys.stderr.write(json.dumps(manifest, sort_keys=True) + "\n")


def _csv_table(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _family_params(family: str, n, c, m, k) -> dict:
    try:
        families.validate_family(family)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    given = {"n": n, "c": c, "m": m, "k": k}
    wanted = families.FAMILY_PARAMS[family]
    params = {}
    for name in wanted:
        value = given.get(name)
        if value is None:
            if family == "boolean" and name == "k":
                value = 0
            elif family == "domino" and name == "m":
                value = 1
            elif family == "schur" and name == "c":
                value = 2
            else:
                raise click.UsageError(
                    f"family {family!r} needs --{name}; required parameters: "
                    + ", ".join(f"--{w}" for w in wanted)
                )
        params[name] = int(value)
    return params


def _common_options(fn):
    fn = click.option("--format", "format", type=click.Choice(["json", "csv"]), default="json", show_default=True, help="Output format.")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the result to this path instead of stdout.")(fn)
    fn = click.option("--threads", type=int, default=DEFAULT_THREADS, show_default="MOMENTFORGE_THREADS or 1", help="Worker cap for parallelizable steps.")(fn)
    return fn


@click.group(name="momentforge")
@click.version_option(__version__)
def cli():
    """Exact moments of combinatorial statistics, with oracles and fits."""


def _moment_command(kind: str, subcommand: str):
    @click.option("--family", required=True, help="schur | invmaj | boolean | domino")
    @click.option("--n", type=int, required=True)
    @click.option("--c", type=int, default=None, help="schur colors (default 2)")
    @click.option("--m", type=int, default=None, help="domino rows (default 1)")
    @click.option("--k", type=int, default=None, help="boolean cube dimension (default 0)")
    @click.option("--r", "--r-max", "r_max", type=int, default=4, show_default=True, help="Highest moment order.")
    @_common_options
    def command(family, n, c, m, k, r_max, format, out, threads):
        started = time.monotonic()
        params = _family_params(family, n, c, m, k)
        try:
            vec, closed_forms = families.moment_vector(family, kind, r_max, params)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
        result = {
            "family": family,
            "params": params,
            "kind": vec.kind,
            "about_mean": vec.about_mean,
            "entries": [_rat(e) for e in vec.entries],
        }
        if closed_forms:
            result["closed_forms"] = closed_forms
            result["symbols"] = {
                s: SYMBOL_LEGEND[s] for s in ("n", "W", "w", "mu") if any(s in t for t in closed_forms)
            }
        if kind == "raw":
            space = families.sample_space_size(family, params)
            result["sample_space_size"] = str(space)
            result["scaled_entries"] = [_rat(e * space) for e in vec.entries]
        rows = [[r, _rat(e)] for r, e in enumerate(vec.entries)]
        _emit(
            {"format": format, "out": out, "family": family, **params, "r_max": r_max,
             "threads": threads},
            subcommand,
            result,
            _csv_table(["r", "value"], rows),
            started,
        )

    command.__name__ = subcommand.replace("-", "_")
    return command


cli.command(name="moments")(_moment_command("raw", "moments"))
cli.command(name="central")(_moment_command("central", "central"))
cli.command(name="binomial-moments")(_moment_command("binomial", "binomial-moments"))


@cli.command(name="pgf")
@click.option("--family", required=True)
@click.option("--n", type=int, required=True)
@click.option("--c", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--k", type=int, default=None)
@_common_options
def pgf_cmd(family, n, c, m, k, format, out, threads):
    """Exact probability generating function in canonical text."""
    started = time.monotonic()
    params = _family_params(family, n, c, m, k)
    try:
        poly, source = _pgf_polynomial(family, params)
    except (ValueError, MomentForgeError) as exc:
        raise click.UsageError(str(exc)) from exc
    coeffs = [_rat(poly.coefficient(d)) for d in range(max(poly.degree, 0) + 1)] if poly else ["0"]
    result = {
        "family": family,
        "params": params,
        "polynomial": poly.to_text(),
        "coefficients": coeffs,
        "source": source,
    }
    rows = [[d, v] for d, v in enumerate(coeffs)]
    _emit(
        {"format": format, "out": out, "family": family, **params, "threads": threads},
        "pgf",
        result,
        _csv_table(["degree", "coefficient"], rows),
        started,
    )


def _pgf_polynomial(family: str, params: dict) -> tuple[Polynomial, str]:
    n = params["n"]
    if family == "invmaj":
        return invmaj.pgf(n), "closed-form"
    if family == "domino" and params.get("m", 1) == 1:
        # ((1+q)/2)^(n-1)
        base = Polynomial("q", (Fraction(1, 2), Fraction(1, 2)))
        return base ** max(n - 1, 0), "closed-form"
    if family == "boolean" and params.get("k", 0) == 0:
        if n > 12:
            raise ValueError("boolean k=0 pgf supported for n <= 12 (2^n + 1 coefficients)")
        base = Polynomial("q", (Fraction(1, 2), Fraction(1, 2)))
        return base ** (2**n), "closed-form"
    # remaining cases go through the exhaustive oracle (guards apply)
    if family == "schur":
        hist = oracle_mod.enumerate_schur(n, params["c"])
    elif family == "boolean":
        hist = oracle_mod.enumerate_boolean(n, params["k"])
    elif family == "domino":
        hist = oracle_mod.enumerate_boards(params["m"], n)
    else:
        raise ValueError(f"no pgf route for family {family!r}")
    return hist.pgf(), "oracle"


@cli.command(name="normality")
@click.option("--family", required=True, help="invmaj | domino | boolean (k=0)")
@click.option("--n-grid", required=True, help="Comma-separated ascending n values, e.g. 11,101,1001")
@click.option("--m", type=int, default=None, help="domino rows (default 1)")
@click.option("--k", type=int, default=None, help="boolean cube dimension (must be 0)")
@click.option("--r-max", type=int, default=8, show_default=True)
@click.option("--threshold", type=float, default=0.05, show_default=True)
@click.option("--precision", type=int, default=50, show_default=True, help="Significant digits.")
@_common_options
def normality_cmd(family, n_grid, m, k, r_max, threshold, precision, format, out, threads):
    """Normalized moments vs Gaussian targets along an n-grid."""
    started = time.monotonic()
    try:
        ns = [int(x) for x in n_grid.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"bad --n-grid {n_grid!r}: {exc}") from exc
    params = {}
    if family == "domino":
        params["m"] = m if m is not None else 1
    if family == "boolean":
        params["k"] = k if k is not None else 0
    try:
        grid = [(n, families.central_moments_at(family, n, r_max, params)) for n in ns]
        report = normality_report(family, params, grid, r_max, threshold=threshold, dps=precision)
    except (ValueError, MomentForgeError) as exc:
        raise click.UsageError(str(exc)) from exc
    _emit(
        {"format": format, "out": out, "family": family, "n_grid": n_grid, **params,
         "r_max": r_max, "threshold": threshold, "precision": precision, "threads": threads},
        "normality",
        report.to_json_dict(),
        report.to_csv_text(),
        started,
    )


@cli.command(name="mgf-limit")
@click.option("--family", type=click.Choice(["invmaj", "board1n"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--t-min", type=float, default=-2.0, show_default=True)
@click.option("--t-max", type=float, default=2.0, show_default=True)
@click.option("--t-steps", type=int, default=17, show_default=True)
@click.option("--precision", type=int, default=50, show_default=True, help="Significant digits.")
@_common_options
def mgf_limit_cmd(family, n, t_min, t_max, t_steps, precision, format, out, threads):
    """Deviation of G_n(e^{t/sigma}) from e^{t^2/2} on a t grid."""
    started = time.monotonic()
    if t_steps < 2 or t_max <= t_min:
        raise click.UsageError("need t-min < t-max and at least 2 steps")
    lo, hi = Fraction(t_min).limit_denominator(10**6), Fraction(t_max).limit_denominator(10**6)
    ts = [lo + (hi - lo) * i / (t_steps - 1) for i in range(t_steps)]
    try:
        if family == "invmaj":
            sup, rows = invmaj.mgf_deviation(n, ts, dps=precision)
        else:
            sup, rows = domino.mgf_deviation_1n(n, ts, dps=precision)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    with mpmath.workdps(max(precision, 50)):
        row_dicts = [
            {"t": mpmath.nstr(t, 17), "deviation": mpmath.nstr(d, 17)} for t, d in rows
        ]
        result = {
            "family": family,
            "n": n,
            "precision_digits": max(precision, 50),
            "sup_deviation": mpmath.nstr(sup, 17),
            "rows": row_dicts,
        }
    _emit(
        {"format": format, "out": out, "family": family, "n": n, "t_min": t_min,
         "t_max": t_max, "t_steps": t_steps, "precision": precision, "threads": threads},
        "mgf-limit",
        result,
        _csv_table(["t", "deviation"], [[r["t"], r["deviation"]] for r in row_dicts]),
        started,
    )


@cli.command(name="oracle")
@click.option("--family", required=True)
@click.option("--n", type=int, required=True)
@click.option("--c", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--r-max", type=int, default=4, show_default=True)
@click.option("--samples", type=int, default=None, help="Boolean family: draw this many samples instead of exhausting.")
@click.option("--seed", type=int, default=None, help="PRNG seed for sampling mode (Mersenne Twister).")
@_common_options
def oracle_cmd(family, n, c, m, k, r_max, samples, seed, format, out, threads):
    """Exhaustive (or seeded-sample) histogram plus exact moments."""
    started = time.monotonic()
    params = _family_params(family, n, c, m, k)
    mode = "exhaustive"
    joint = None
    try:
        if family == "schur":
            hist = oracle_mod.enumerate_schur(n, params["c"], parts=max(1, threads))
        elif family == "invmaj":
            jh = oracle_mod.enumerate_permutations(n)
            hist = jh.marginal_inv()
            joint = {f"{a},{b}": cnt for (a, b), cnt in sorted(jh.counts.items())}
        elif family == "boolean":
            if samples is not None:
                if seed is None:
                    raise click.UsageError("sampling mode needs --seed for reproducibility")
                hist = oracle_mod.sample_boolean(n, params["k"], samples, seed)
                mode = "sample"
            else:
                hist = oracle_mod.enumerate_boolean(n, params["k"])
        else:
            hist = oracle_mod.enumerate_boards(params["m"], n, parts=max(1, threads))
    except MomentForgeError as exc:
        raise click.UsageError(str(exc)) from exc
    moments = oracle_mod.histogram_moments(hist, r_max)
    result = {
        "family": family,
        "params": params,
        "mode": mode,
        "seed": seed,
        "samples": samples,
        "total": str(hist.total),
        "histogram": {str(v): cnt for v, cnt in hist.to_csv_rows()},
        "moments": [_rat(e) for e in moments.entries],
    }
    if joint is not None:
        result["joint"] = joint
    _emit(
        {"format": format, "out": out, "family": family, **params, "r_max": r_max,
         "samples": samples, "seed": seed, "threads": threads},
        "oracle",
        result,
        _csv_table(["value", "count"], hist.to_csv_rows()),
        started,
    )


@cli.command(name="fit")
@click.option("--family", type=click.Choice(["schur"]), default="schur", show_default=True)
@click.option("--r", type=click.IntRange(1, 2), default=2, show_default=True, help="Moment order to fit (schur: 1 or 2).")
@click.option("--c", type=int, default=2, show_default=True)
@click.option("--period", type=int, required=True)
@click.option("--degree", type=int, required=True)
@click.option("--n-min", type=int, required=True)
@click.option("--n-max", type=int, required=True)
@click.option("--verify", type=int, default=3, show_default=True, help="Held-out points per residue class.")
@_common_options
def fit_cmd(family, r, c, period, degree, n_min, n_max, verify, format, out, threads):
    """Fit a quasi-polynomial to enumerated moment data and verify exactly."""
    started = time.monotonic()
    if n_min < 1 or n_max < n_min:
        raise click.UsageError("need 1 <= n-min <= n-max")
    ns = range(n_min, n_max + 1)
    if r == 2:
        data = schur.second_moment_grid(ns, c, workers=threads if threads > 1 else None)
    else:
        data = [(n, schur.first_moment(n, c)) for n in ns]
    try:
        res = fit_quasi_polynomial(
            FitSpec(period=period, degree=degree, samples=tuple(data), verify_count=verify)
        )
    except FitVerificationError as exc:
        raise ValidationFailure(str(exc)) from exc
    except MomentForgeError as exc:
        raise click.UsageError(str(exc)) from exc
    quasi = res.quasi
    result = {
        "family": family,
        "params": {"r": r, "c": c},
        "quasi_polynomial": quasi.to_text(),
        "branches": [
            {"residue": j, "polynomial": b.to_text()} for j, b in enumerate(quasi.branches)
        ],
        "provenance": res.provenance,
    }
    rows = [[j, b.to_text()] for j, b in enumerate(quasi.branches)]
    _emit(
        {"format": format, "out": out, "family": family, "r": r, "c": c, "period": period,
         "degree": degree, "n_min": n_min, "n_max": n_max, "verify": verify, "threads": threads},
        "fit",
        result,
        _csv_table(["residue", "polynomial"], rows),
        started,
    )


@cli.command(name="identities")
@click.option("--r-max", type=int, default=10, show_default=True)
@_common_options
def identities_cmd(r_max, format, out, threads):
    """Check the central-coefficient identity battery for the 0-cube count."""
    started = time.monotonic()
    rows = []
    all_ok = True
    for r in range(r_max + 1):
        for t in range(r + 1):
            if r % 2 == 1 or t < r // 2:
                expected = Fraction(0)
            elif r % 2 == 0 and t == r // 2:
                kk = r // 2
                expected = Fraction(math.factorial(2 * kk), 8**kk * math.factorial(kk))
            else:
                continue  # nonzero generic coefficients are not identity rows
            value = boolean.central_coefficient(r, t)
            ok = value == expected
            all_ok = all_ok and ok
            rows.append({"r": r, "t": t, "value": _rat(value), "expected": _rat(expected), "ok": ok})
    result = {"r_max": r_max, "rows": rows, "all_ok": all_ok}
    _emit(
        {"format": format, "out": out, "r_max": r_max, "threads": threads},
        "identities",
        result,
        _csv_table(
            ["r", "t", "value", "expected", "ok"],
            [[w["r"], w["t"], w["value"], w["expected"], w["ok"]] for w in rows],
        ),
        started,
    )
    if not all_ok:
        raise ValidationFailure("identity battery found a mismatch (see output rows)")


@cli.command(name="approx-h")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--with-polynomial", is_flag=True, help="Include the full H_n(q) polynomial (small n only).")
@_common_options
def approx_h_cmd(n, k, with_polynomial, format, out, threads):
    """Independence approximation H_n(q): exact moments, optional polynomial."""
    started = time.monotonic()
    try:
        moments = boolean.h_moments(n, k)
        p = boolean.h_probability(n, k)
        exact_mean = families.moment_vector("boolean", "raw", 1, {"n": n, "k": k})[0].entries[1]
    except (ValueError, MomentForgeError) as exc:
        raise click.UsageError(str(exc)) from exc
    result = {
        "n": n,
        "k": k,
        "p": _rat(p),
        "mean": _rat(moments["mean"]),
        "mean_closed_form": _rat(boolean.h_mean_closed_form(n, k)),
        "second_factorial": _rat(moments["second_factorial"]),
        "variance": _rat(moments["variance"]),
        "exact_mean": _rat(exact_mean),
    }
    rows = [[key, result[key]] for key in
            ("p", "mean", "mean_closed_form", "second_factorial", "variance", "exact_mean")]
    if with_polynomial:
        try:
            poly = boolean.h_polynomial(n, k)
        except MomentForgeError as exc:
            raise click.UsageError(str(exc)) from exc
        probs = [_rat(poly.coefficient(d)) for d in range(max(poly.degree, 0) + 1)]
        result["polynomial"] = poly.to_text()
        result["probabilities"] = probs
        rows += [[f"q^{d}", v] for d, v in enumerate(probs)]
    _emit(
        {"format": format, "out": out, "n": n, "k": k, "with_polynomial": with_polynomial,
         "threads": threads},
        "approx-h",
        result,
        _csv_table(["key", "value"], rows),
        started,
    )


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        hint = f" (try: momentforge {exc.ctx.info_name} --help)" if exc.ctx else ""
        sys.stderr.write(f"usage error: {exc.format_message()}{hint}\n")
        return 1
    except click.ClickException as exc:
        sys.stderr.write(f"error: {exc.format_message()}\n")
        return 1
    except click.exceptions.Abort:
        sys.stderr.write("aborted\n")
        return 1
    except ValidationFailure as exc:
        sys.stderr.write(f"validation failure: {exc}\n")
        return 2
    except MomentForgeError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
