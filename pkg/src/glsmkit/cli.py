"""Command-line surface.

Subcommands: validate, sectors, effective, ifun, glsm-ifun, dz, check-ct,
specialize {fjrw|hybrid|ci}, compare, render-latex.  Artifacts go to stdout
or --out; errors to stderr.  Exit codes: 0 success, 1 validation failure,
2 input error, 3 internal assertion.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import ENGINE_VERSION
from .cache import cache_get, cache_put, job_key
from .latexout import render_latex
from .model import GLSMModel, InputError, InternalError, parse_model, parse_monomial_expression
from .multipoly import Monomial
from .rationallp import LPInternalError
from .rings import RingMismatchError
from .scalars import format_rational, parse_rational
from .sectors import DegenerateStabilityError, effective_degrees, inertia_sectors, theta_degree
from .series import (
    GradedSeries,
    HypothesisError,
    Insertion,
    big_i_function,
    compact_type_report,
    glsm_i_function,
    series_compare,
    series_from_json,
    series_to_dict,
    series_to_json,
    z_partial,
)
from .specialize import (
    ci_ambient_series,
    ci_build,
    ci_compare,
    fjrw_build,
    fjrw_crosscheck,
    fjrw_direct_series,
    hybrid_build,
    hybrid_crosscheck,
    hybrid_direct_series,
    specialization_from_model_file,
)
from .validate import BudgetExceededError, validate_model

EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class ValidationFailure(RuntimeError):
    pass


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _parse_rho_list(model: GLSMModel, text: str) -> list[tuple[int, ...]]:
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        if item.startswith("rho"):
            idx = int(item[3:]) - 1
            if not 0 <= idx < model.r:
                raise InputError(f"rho index out of range in {item!r}")
            out.append(model.column(idx))
        else:
            out.append(tuple(int(x) for x in item.split(",")))
    for vec in out:
        if len(vec) != model.k:
            raise InputError("character vectors must have length k")
    return out


def _parse_insertions(model: GLSMModel, specs: tuple[str, ...]):
    """--insert NAME=POLY with POLY over rho1..rhoR; returns (etas, insertions)."""
    names = [f"rho{i + 1}" for i in range(model.r)]
    parsed = []
    etas: list[tuple[int, ...]] = []
    for spec in specs:
        if "=" not in spec:
            raise InputError(f"--insert expects NAME=POLY, got {spec!r}")
        name, poly_text = spec.split("=", 1)
        terms = parse_monomial_expression(poly_text, names)
        parsed.append((name.strip(), terms))
        for exps in terms:
            for i, e in enumerate(exps):
                if e and model.column(i) not in etas:
                    etas.append(model.column(i))
    insertions = []
    for name, terms in parsed:
        mapped: dict[Monomial, Fraction] = {}
        for exps, coeff in terms.items():
            key = [0] * len(etas)
            for i, e in enumerate(exps):
                if e:
                    key[etas.index(model.column(i))] += e
            mk = tuple(key)
            mapped[mk] = mapped.get(mk, Fraction(0)) + coeff
        insertions.append(Insertion.from_terms(name, mapped))
    return tuple(etas), tuple(insertions)


def _series_output(series: GradedSeries, fmt: str) -> str:
    if fmt == "latex":
        return render_latex(series) + "\n"
    if fmt == "text":
        lines = [f"state={series.state} terms={len(series.terms)} vanished={len(series.vanished)}"]
        for (d, alpha) in series.sorted_keys():
            td = format_rational(theta_degree(series.model, d))
            lines.append(f"  theta-degree {td} degree {[format_rational(x) for x in d]} t={list(alpha)}")
        return "\n".join(lines) + "\n"
    return series_to_json(series)


common_out = click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the artifact to a file")
common_fmt = click.option("--format", "fmt", type=click.Choice(["json", "latex", "text"]), default="json")
common_nocache = click.option("--no-cache", is_flag=True, default=False, help="bypass the result cache")


@click.group()
@click.version_option(ENGINE_VERSION, prog_name="glsmkit")
def cli():
    """Exact computations for torus gauged linear sigma models."""


@cli.command()
@click.argument("file", type=click.Path())
@common_out
@common_fmt
def validate(file, out, fmt):
    """Check every axiom of the model definition; exit 1 on failure."""
    model = parse_model(_read_file(file))
    report = validate_model(model)
    payload = report.to_dict()
    if fmt == "text":
        lines = [f"overall: {payload['overall']}"]
        for c in payload["checks"]:
            lines.append(f"  [{c['status']}] {c['name']}: {c['detail']}")
        _emit("\n".join(lines) + "\n", out)
    else:
        _emit(_dump(payload), out)
    if not report.overall:
        raise ValidationFailure("model failed validation")


@cli.command()
@click.argument("file", type=click.Path())
@common_out
@common_fmt
def sectors(file, out, fmt):
    """List the inertia sectors of the model."""
    model = parse_model(_read_file(file))
    secs = inertia_sectors(model)
    payload = {
        "sectors": [
            {
                "lambda": [format_rational(x) for x in g.lam],
                "action": [format_rational(x) for x in g.action],
                "fixed_coordinates": sorted(i + 1 for i in g.fixed_support),
            }
            for g in secs
        ]
    }
    if fmt == "text":
        lines = [f"({', '.join(format_rational(x) for x in g.lam)})" for g in secs]
        _emit("\n".join(lines) + "\n", out)
    else:
        _emit(_dump(payload), out)


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--qbound", required=True, help="maximal theta-degree (rational)")
@common_out
@common_fmt
def effective(file, qbound, out, fmt):
    """Enumerate criterion-effective degrees up to the theta-degree bound."""
    model = parse_model(_read_file(file))
    degs = effective_degrees(model, parse_rational(qbound))
    payload = {
        "effectivity": "criterion",
        "degrees": [
            {
                "d": [format_rational(x) for x in d],
                "theta_degree": format_rational(theta_degree(model, d)),
            }
            for d in degs
        ],
    }
    if fmt == "text":
        _emit("\n".join(str([format_rational(x) for x in d]) for d in degs) + "\n", out)
    else:
        _emit(_dump(payload), out)


def _series_command(mode: str, file, qbound, torder, insert, out, fmt, no_cache):
    model = parse_model(_read_file(file))
    etas, insertions = _parse_insertions(model, insert)
    q_bound = parse_rational(qbound)
    key = job_key(
        model,
        mode,
        {"q_bound": format_rational(q_bound), "t_order": torder},
        {"insertions": [list(spec) for spec in insert]},
    )
    if not no_cache:
        hit = cache_get(key)
        if hit is not None:
            _emit(hit if fmt == "json" else _series_output(series_from_json(hit), fmt), out)
            return
    fn = big_i_function if mode == "ifun" else glsm_i_function
    series = fn(model, etas, insertions, q_bound, torder)
    text = series_to_json(series)
    if not no_cache:
        cache_put(key, text)
    _emit(text if fmt == "json" else _series_output(series, fmt), out)


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--qbound", required=True)
@click.option("--torder", type=int, default=0)
@click.option("--insert", multiple=True, help="NAME=POLY with POLY over rho1..rhoR")
@common_out
@common_fmt
@common_nocache
def ifun(file, qbound, torder, insert, out, fmt, no_cache):
    """Truncated big I-function (ambient state space)."""
    _series_command("ifun", file, qbound, torder, insert, out, fmt, no_cache)


@cli.command("glsm-ifun")
@click.argument("file", type=click.Path())
@click.option("--qbound", required=True)
@click.option("--torder", type=int, default=0)
@click.option("--insert", multiple=True)
@common_out
@common_fmt
@common_nocache
def glsm_ifun(file, qbound, torder, insert, out, fmt, no_cache):
    """Truncated I-function of the model with potential (glsm state space)."""
    _series_command("glsm-ifun", file, qbound, torder, insert, out, fmt, no_cache)


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--rho", required=True, help="semicolon-separated characters: rhoI or comma-separated integers")
@click.option("--qbound", required=True)
@click.option("--torder", type=int, default=0)
@click.option("--insert", multiple=True)
@click.option("--method", type=click.Choice(["by_multiplication", "by_insertion", "verify"]), default="verify")
@common_out
@common_fmt
@common_nocache
def dz(file, rho, qbound, torder, insert, method, out, fmt, no_cache):
    """z-shifted derivative of the cached big I-function along characters."""
    model = parse_model(_read_file(file))
    etas, insertions = _parse_insertions(model, insert)
    q_bound = parse_rational(qbound)
    rho_list = _parse_rho_list(model, rho)
    base_key = job_key(
        model,
        "ifun",
        {"q_bound": format_rational(q_bound), "t_order": torder},
        {"insertions": [list(spec) for spec in insert]},
    )
    series = None
    if not no_cache:
        hit = cache_get(base_key)
        if hit is not None:
            series = series_from_json(hit)
    if series is None:
        series = big_i_function(model, etas, insertions, q_bound, torder)
        if not no_cache:
            cache_put(base_key, series_to_json(series))
    result = z_partial(series, rho_list, method)
    key = job_key(
        model,
        "dz",
        {"q_bound": format_rational(q_bound), "t_order": torder},
        {"insertions": [list(spec) for spec in insert], "rho": [list(r) for r in rho_list], "method": method},
    )
    text = series_to_json(result)
    if not no_cache:
        cache_put(key, text)
    _emit(text if fmt == "json" else _series_output(result, fmt), out)


@cli.command("check-ct")
@click.argument("series_file", type=click.Path())
@common_out
@common_fmt
def check_ct(series_file, out, fmt):
    """Compact-type report of a stored series; exit 1 on violations."""
    series = series_from_json(_read_file(series_file))
    report = compact_type_report(series, series.model)
    _emit(_dump(report), out)
    if not report["hypothesis_holds"] or report["violations"]:
        raise ValidationFailure("compact-type check failed")


@cli.command()
@click.argument("kind", type=click.Choice(["fjrw", "hybrid", "ci"]))
@click.argument("file", type=click.Path())
@click.option("--qbound", required=True)
@click.option("--torder", type=int, default=0)
@click.option("--crosscheck/--no-crosscheck", default=True)
@common_out
@common_fmt
def specialize(kind, file, qbound, torder, crosscheck, out, fmt):
    """Build a family model, its direct series, and the engine cross-check."""
    spec = specialization_from_model_file(_read_file(file))
    q_bound = parse_rational(qbound)
    from .model import model_to_dict

    if kind == "fjrw":
        model = fjrw_build(spec)
        series = fjrw_direct_series(spec, q_bound, torder)
        report = fjrw_crosscheck(spec, q_bound, torder) if crosscheck else None
    elif kind == "hybrid":
        model = hybrid_build(spec)
        series = hybrid_direct_series(spec, q_bound, torder)
        report = hybrid_crosscheck(spec, q_bound, torder) if crosscheck else None
    else:
        model = ci_build(spec)
        series = ci_ambient_series(spec, q_bound, torder)
        report = ci_compare(spec, q_bound, torder) if crosscheck else None
    payload = {
        "model": model_to_dict(model),
        "series": series_to_dict(series),
        "crosscheck": report,
    }
    if fmt == "latex":
        _emit(render_latex(series) + "\n", out)
    else:
        _emit(_dump(payload), out)
    if report is not None and not report["equal"]:
        raise ValidationFailure("cross-check found differences")


@cli.command()
@click.argument("series_a", type=click.Path())
@click.argument("series_b", type=click.Path())
@click.option("--map", "subst", default=None, help="rename insertion variables: old=new,old2=new2")
@common_out
@common_fmt
def compare(series_a, series_b, subst, out, fmt):
    """Exact comparison of two stored series; exit 1 when they differ."""
    a = series_from_json(_read_file(series_a))
    b = series_from_json(_read_file(series_b))
    variable_map = None
    if subst:
        variable_map = {"rename_insertions": dict(pair.split("=", 1) for pair in subst.split(","))}
    diff = series_compare(a, b, variable_map)
    if fmt == "text":
        _emit(("equal on common truncation\n" if not diff else f"{len(diff)} differences\n"), out)
    else:
        _emit(_dump({"equal": not diff, "diff": diff}), out)
    if diff:
        raise ValidationFailure("series differ")


@cli.command("render-latex")
@click.argument("series_file", type=click.Path())
@common_out
def render_latex_cmd(series_file, out):
    """LaTeX view of a stored series."""
    series = series_from_json(_read_file(series_file))
    _emit(render_latex(series) + "\n", out)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except ValidationFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (HypothesisError, DegenerateStabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InputError, BudgetExceededError, click.UsageError, click.BadParameter) as e:
        message = getattr(e, "format_message", lambda: str(e))()
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return EXIT_INPUT
    except (InternalError, LPInternalError, RingMismatchError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
