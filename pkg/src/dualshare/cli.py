"""Command-line entry point for all experiment pipelines.

Every run is fully determined by (command, parameters, seed); the resolved
configuration and tool version are echoed into every output file, outputs are
written atomically, and repeated runs are byte-identical.  Exit codes:
0 success, 2 usage/validation error, 3 a certified mathematical property
failed on the instance (so CI can separate math regressions from bad
invocations).
"""

from __future__ import annotations

import functools
import json
import math
import os
import sys
from fractions import Fraction

import click

from . import __version__
from .approxlab import (
    MinimaxInstance,
    RampParams,
    approx_degree,
    consolidate_and,
    finite_n_ramp,
    l2_tail_bound,
    minimax_lp,
    ramp_advantage,
    ramp_advantage_proof_constant,
)
from .boolcube import (
    WeightVector,
    kwise_indistinguishable,
    project_symmetric,
    stat_distance_symmetric,
)
from .dualand import (
    DualAndParams,
    ShareSampler,
    build_witness,
    epsilon_of,
    verify_witness,
)
from .errors import PropertyViolation
from .serialize import (
    dist_from_json,
    dist_to_json,
    load_json,
    poly_to_json,
    rat_to_str,
    witness_to_json,
    write_csv,
    write_json,
)
from .symcheb import (
    AmplificationParams,
    bounded_check,
    circle_identity_check,
    exact_weight_test,
    indistinguishability_bound,
    reflection_check,
    shifted_product_check,
    truncated_approximant,
)
from .weightdeg import SymmetricSpec, low_weight_approximant, weight_lower_bound

EXIT_PROPERTY_VIOLATION = 3


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("DUALSHARE_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def common_options(fn):
    @click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
    @click.option("--out", type=str, default=None, help="Output file (default: stdout).")
    @click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
    )
    @click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=1,
        show_default=True,
        help="Accepted for interface compatibility; computations are single-process.",
    )
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PropertyViolation as exc:
            click.echo(f"property violated: {exc}", err=True)
            sys.exit(EXIT_PROPERTY_VIOLATION)

    return wrapper


def _emit(command: str, config: dict, result: dict, out: str | None, fmt: str,
          csv_table: tuple[list[str], list[list]] | None = None) -> None:
    payload = {
        "tool": "dualshare",
        "version": __version__,
        "command": command,
        "config": config,
        "result": result,
    }
    out = _resolve_out(out)
    if fmt == "json":
        if out:
            write_json(out, payload)
            click.echo(out)
        else:
            click.echo(json.dumps(payload, indent=2, sort_keys=True))
        return
    header, rows = csv_table if csv_table else _flatten_csv(result)
    meta = ["# " + json.dumps({"command": command, "config": config,
                               "tool": "dualshare", "version": __version__},
                              sort_keys=True)]
    if out:
        write_csv(out, header, rows)
        click.echo(out)
    else:
        click.echo(meta[0])
        click.echo(",".join(header))
        for row in rows:
            click.echo(",".join(str(v) for v in row))


def _flatten_csv(result: dict) -> tuple[list[str], list[list]]:
    return ["key", "value"], [[k, json.dumps(v) if isinstance(v, (list, dict)) else v]
                              for k, v in sorted(result.items())]


def _parse_rational(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"not a rational: {value!r}") from exc


@click.group(invoke_without_command=True)
@click.option("--list-commands", is_flag=True, help="Emit the command schema as JSON.")
@click.version_option(version=__version__, prog_name="dualshare")
@click.pass_context
def cli(ctx, list_commands):
    """Exact dual witnesses, symmetric secret sharing, and truncation bounds."""
    if list_commands:
        schema = {}
        for name, cmd in sorted(cli.commands.items()):
            schema[name] = {
                "help": cmd.help or "",
                "params": [
                    {
                        "name": p.name,
                        "required": bool(p.required),
                        "type": getattr(p.type, "name", str(p.type)),
                        "default": None if callable(p.default) else
                        (str(p.default) if p.default is not None else None),
                    }
                    for p in cmd.params
                ],
            }
        click.echo(json.dumps(schema, indent=2, sort_keys=True))
        ctx.exit(0)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command("dual-and")
@click.option("--n", type=int, required=True)
@click.option("--weights", type=str, default=None,
              help="Comma-separated rationals; default uniform weights 1.")
@click.option("--d", "d_str", type=str, required=True, help="Degree threshold (rational).")
@click.option("--emit", "emit_path", type=str, default=None,
              help="Alias for --out (witness JSON).")
@common_options
def dual_and_cmd(n, weights, d_str, emit_path, seed, out, fmt, threads):
    """Build the AND dual witness, verify it, and emit it as JSON."""
    d = _parse_rational(d_str)
    if weights:
        w = WeightVector.of([_parse_rational(x) for x in weights.split(",")])
        if w.n != n:
            raise click.BadParameter("weights length must equal n")
    else:
        w = WeightVector.uniform(n)
    try:
        params = DualAndParams(n, w, d)
        wit = build_witness(params)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    eps = epsilon_of(params)
    from .dualand import and_cube

    report = verify_witness(wit.witness, and_cube(n), d, w)
    if not (report.pure_high_degree and report.l1_norm == 1
            and report.correlation == wit.epsilon == eps):
        raise PropertyViolation(
            f"witness conditions failed: pure={report.pure_high_degree}, "
            f"l1={report.l1_norm}, corr={report.correlation}, eps={eps}"
        )
    config = {"n": n, "weights": [rat_to_str(x) for x in w.entries],
              "d": rat_to_str(d), "seed": seed, "threads": threads}
    result = {
        "H_size": wit.H_size,
        "Z": rat_to_str(wit.Z),
        "epsilon": rat_to_str(wit.epsilon),
        "correlation": rat_to_str(report.correlation),
        "l1_norm": rat_to_str(report.l1_norm),
        "pure_high_degree_strictly_below_d": report.pure_high_degree,
        "witness": witness_to_json(wit.witness),
    }
    _emit("dual-and", config, result, emit_path or out, fmt)


@cli.command("sample-shares")
@click.option("--witness", "witness_path", type=click.Path(exists=True), required=True,
              help="Witness JSON produced by dual-and.")
@click.option("--secret", type=click.Choice(["+1", "-1"]), required=True)
@click.option("--count", type=click.IntRange(min=1), default=1, show_default=True)
@common_options
def sample_shares_cmd(witness_path, secret, count, seed, out, fmt, threads):
    """Draw share vectors for a secret; CSV columns bit_1..bit_n hold +-1 values."""
    doc = load_json(witness_path)
    cfg = doc.get("config", {})
    try:
        n = int(cfg["n"])
        w = WeightVector.of([Fraction(x) for x in cfg["weights"]])
        d = Fraction(cfg["d"])
    except (KeyError, ValueError) as exc:
        raise click.UsageError(f"witness file lacks a usable config: {exc}")
    wit = build_witness(DualAndParams(n, w, d))
    sampler = ShareSampler(wit, 1 if secret == "+1" else -1, seed)
    rows = []
    for _ in range(count):
        bits = sampler.sample()
        rows.append([1 - 2 * b for b in bits])  # emit +-1 share values
    header = [f"bit_{i + 1}" for i in range(n)]
    config = {"witness": witness_path, "secret": secret, "count": count,
              "seed": seed, "threads": threads}
    if fmt == "json":
        _emit("sample-shares", config, {"shares": rows}, out, fmt)
    else:
        _emit("sample-shares", config, {"shares": rows}, out, fmt, (header, rows))


@cli.group("symcheb")
def symcheb_group():
    """Symmetrised exact-weight test polynomials and their certified checks."""


@symcheb_group.command("pw")
@click.option("--n", type=int, required=True)
@click.option("--K", "big_k", type=int, required=True)
@click.option("--w", type=int, required=True)
@click.option("--check",
              type=click.Choice(["bounded", "truncation", "circle", "product-cap"]),
              default=None)
@click.option("--k", "trunc_k", type=int, default=None,
              help="Truncation index for --check truncation.")
@click.option("--eps", type=str, default="1/10", show_default=True,
              help="Amplification epsilon for --check circle, shift for product-cap.")
@click.option("--json", "json_out", type=str, default=None, help="Alias for --out.")
@common_options
def symcheb_pw(n, big_k, w, check, trunc_k, eps, json_out, seed, out, fmt, threads):
    """Build the exact-weight test polynomial and optionally run a named check."""
    try:
        test = exact_weight_test(n, big_k, w)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    expansion = test.cheb()
    result = {
        "scale": rat_to_str(test.scale),
        "zeros": [rat_to_str(z) for z in test.zeros],
        "poly": poly_to_json(test.poly),
        "cheb_half_coeffs": [rat_to_str(c) for c in expansion.half_coeffs],
        "reflection_identity": reflection_check(test),
    }
    if check == "bounded":
        result["grid_max_float"] = bounded_check(test)
        result["bounded_by_2"] = True
    elif check == "truncation":
        if trunc_k is None:
            raise click.UsageError("--check truncation needs --k")
        q, bound, err = truncated_approximant(test, trunc_k)
        result.update({
            "k": trunc_k,
            "q": poly_to_json(q),
            "error_bound_float": bound,
            "certified_error_float": err,
        })
    elif check == "circle":
        params = AmplificationParams.with_grid(_parse_rational(eps))
        result["circle_max_rel_error_float"] = circle_identity_check(test, params)
        if result["circle_max_rel_error_float"] >= 1e-8:
            raise PropertyViolation("circle-identity two-route discrepancy >= 1e-8")
    elif check == "product-cap":
        delta = _parse_rational(eps)
        grid = [Fraction(i, 500) for i in range(-500, 501)]
        ok = shifted_product_check(test, delta, grid)
        result["product_cap_holds"] = ok
        if not ok:
            raise PropertyViolation("shifted-product cap failed on the grid")
    config = {"n": n, "K": big_k, "w": w, "check": check, "k": trunc_k,
              "eps": eps, "seed": seed, "threads": threads}
    _emit("symcheb-pw", config, result, json_out or out, fmt)


def _named_predicate(name: str, n: int) -> list[int]:
    if name == "and":
        return [1 if h == n else 0 for h in range(n + 1)]
    if name == "or":
        return [0 if h == 0 else 1 for h in range(n + 1)]
    if name == "maj":
        return [1 if 2 * h > n else 0 for h in range(n + 1)]
    if name == "parity":
        return [h & 1 for h in range(n + 1)]
    if name == "exact-half":
        if n % 2:
            raise click.UsageError("exact-half needs even n")
        return [1 if h == n // 2 else 0 for h in range(n + 1)]
    raise click.UsageError(f"unknown predicate {name!r}")


def _load_predicate(f: str, n: int | None) -> tuple[int, list[int]]:
    if f.endswith(".json"):
        doc = load_json(f)
        return int(doc["n"]), [int(v) for v in doc["values"]]
    if n is None:
        raise click.UsageError("--n is required for named predicates")
    return n, _named_predicate(f, n)


@cli.command("approx-degree")
@click.option("--f", "f_name", type=str, required=True,
              help="and|or|maj|parity|exact-half or a custom .json predicate.")
@click.option("--n", type=int, default=None)
@click.option("--eps", type=str, default="1/3", show_default=True)
@common_options
def approx_degree_cmd(f_name, n, eps, seed, out, fmt, threads):
    """Exact epsilon-approximate degree of a symmetric function via the LP."""
    n, values = _load_predicate(f_name, n)
    epsilon = _parse_rational(eps)
    k = approx_degree(values, epsilon)
    _, err, _ = minimax_lp(MinimaxInstance.on_weight_grid(values, k))
    config = {"f": f_name, "n": n, "eps": eps, "seed": seed, "threads": threads}
    result = {"approx_degree": k, "minimax_error_at_degree": rat_to_str(err)}
    _emit("approx-degree", config, result, out, fmt)


@cli.command("ramp")
@click.option("--k", type=int, required=True)
@click.option("--K", "big_k", type=int, required=True)
@click.option("--n", type=int, default=None)
@click.option("--finite", is_flag=True, help="Also build the finite-n LP pair.")
@common_options
def ramp_cmd(k, big_k, n, finite, seed, out, fmt, threads):
    """The ramp reconstruction-advantage formulas, exact radicands included."""
    try:
        params = RampParams(k, big_k, n or 0)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    radicand, value = ramp_advantage(params)
    proof_radicand, proof_value = ramp_advantage_proof_constant(params)
    result = {
        "radicand": rat_to_str(radicand),
        "value_float": value,
        "proof_radicand": rat_to_str(proof_radicand),
        "proof_value_float": proof_value,
        "l2_tail_bound": rat_to_str(l2_tail_bound(big_k, k)),
    }
    if finite:
        if not n:
            raise click.UsageError("--finite needs --n")
        mu, nu, advantage = finite_n_ramp(params)
        result.update({
            "finite_n": n,
            "mu": dist_to_json(mu),
            "nu": dist_to_json(nu),
            "advantage": rat_to_str(advantage),
            "advantage_float": float(advantage),
            "advantage_over_limit_float": float(advantage) / value,
            "kwise_indistinguishable": kwise_indistinguishable(mu, nu, k),
        })
    config = {"k": k, "K": big_k, "n": n, "finite": finite, "seed": seed,
              "threads": threads}
    _emit("ramp", config, result, out, fmt)


@cli.command("weight-bound")
@click.option("--f", "f_name", type=str, required=True)
@click.option("--n", type=int, default=None)
@click.option("--K", "big_k", type=int, required=True)
@click.option("--eps", type=str, default="1/3", show_default=True)
@click.option("--construct/--no-construct", default=True, show_default=True)
@click.option("--lower/--no-lower", default=True, show_default=True)
@common_options
def weight_bound_cmd(f_name, n, big_k, eps, construct, lower, seed, out, fmt, threads):
    """Constructive weight upper bound and dual lower bound, side by side."""
    n, values = _load_predicate(f_name, n)
    epsilon = _parse_rational(eps)
    result: dict = {}
    if construct:
        spec = SymmetricSpec(n, tuple(values))
        poly, report = low_weight_approximant(spec, big_k, epsilon)
        result["construct"] = {
            "degree": report.degree,
            "weight": rat_to_str(report.weight),
            "weight_float": float(report.weight),
            "certified_error": rat_to_str(report.error),
            "bound_exponent_float": report.bound_exponent,
            "k_f": spec.k_f,
        }
    if lower:
        deg = approx_degree(values, epsilon)
        cert_degree = max(deg - 1, 0)
        _, cert_eps, cert = minimax_lp(
            MinimaxInstance.on_weight_grid(values, cert_degree)
        )
        bound = weight_lower_bound(cert, big_k, epsilon)
        result["lower"] = {
            "certificate_degree": cert_degree,
            "certificate_error": rat_to_str(cert_eps),
            "weight_lower_bound": "inf" if bound == math.inf else rat_to_str(bound),
            "weight_lower_bound_float": float(bound) if bound != math.inf else None,
        }
    if construct and lower and result["lower"]["weight_lower_bound"] != "inf":
        lo = Fraction(result["lower"]["weight_lower_bound"])
        hi = Fraction(result["construct"]["weight"])
        if hi < lo:
            raise PropertyViolation(
                f"constructive weight {hi} fell below the certified floor {lo}"
            )
    config = {"f": f_name, "n": n, "K": big_k, "eps": eps, "construct": construct,
              "lower": lower, "seed": seed, "threads": threads}
    _emit("weight-bound", config, result, out, fmt)


@cli.command("consolidate")
@click.option("--dist", "dist_path", type=click.Path(exists=True), required=True)
@click.option("--t", type=int, required=True, help="Block size.")
@common_options
def consolidate_cmd(dist_path, t, seed, out, fmt, threads):
    """AND-consolidate blocks of t shares into single bits."""
    d = dist_from_json(load_json(dist_path))
    try:
        consolidated = consolidate_and(d, t)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    config = {"dist": dist_path, "t": t, "seed": seed, "threads": threads}
    _emit("consolidate", config, {"consolidated": dist_to_json(consolidated)},
          out, fmt)


@cli.command("indist-check")
@click.option("--dist1", type=click.Path(exists=True), required=True)
@click.option("--dist2", type=click.Path(exists=True), required=True)
@click.option("--k", type=int, required=True,
              help="Claimed perfect indistinguishability level.")
@click.option("--K", "big_ks", type=str, default=None,
              help="Comma-separated projection sizes; default all K <= n/64 with K > k.")
@common_options
def indist_check_cmd(dist1, dist2, k, big_ks, seed, out, fmt, threads):
    """Verify perfect k-wise indistinguishability and the projected-distance bound."""
    d1 = dist_from_json(load_json(dist1))
    d2 = dist_from_json(load_json(dist2))
    if d1.n != d2.n:
        raise click.UsageError("distributions live on different n")
    n = d1.n
    perfect = kwise_indistinguishable(d1, d2, k)
    if not perfect:
        raise PropertyViolation(f"distributions are not perfectly {k}-wise indistinguishable")
    if big_ks:
        ks = [int(x) for x in big_ks.split(",")]
    else:
        ks = [K for K in range(k + 1, n // 64 + 1)]
    rows = []
    for K in ks:
        if not k < K <= n:
            raise click.UsageError(f"projection size {K} out of range")
        dist = stat_distance_symmetric(project_symmetric(d1, K), project_symmetric(d2, K))
        bound = indistinguishability_bound(k, K)
        rows.append({
            "K": K,
            "projected_distance": rat_to_str(dist),
            "projected_distance_float": float(dist),
            "bound_float": bound,
            "within_bound": float(dist) <= bound,
        })
        if float(dist) > bound:
            raise PropertyViolation(
                f"projected distance {float(dist)} exceeds the bound {bound} at K={K}"
            )
    config = {"dist1": dist1, "dist2": dist2, "k": k, "K": big_ks,
              "seed": seed, "threads": threads}
    csv_rows = ([*rows[0].keys()], [[r[c] for c in rows[0].keys()] for r in rows]) if rows else None
    _emit("indist-check", config, {"perfectly_k_wise": perfect, "projections": rows},
          out, fmt, csv_rows)


def main():
    cli(prog_name="dualshare")


if __name__ == "__main__":
    main()
