"""Command-line entry points: gen | explain | audit | experiment {ejr,recover}.

Exit codes: 0 success, 1 axiom failure, 2 usage, 3 strict-skip, 4 I/O.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

import click

from . import io as pkio
from .axioms.report import AXIOM_IDS, run_audit
from .core import ensure_committee
from .experiments import (
    ExperimentConfig,
    run_experiment,
    summary_lines,
)
from .gen import gen_euclidean_vcr, gen_resampling_random_params, substream
from .rational import format_rational
from .rules import get_rule

EXIT_AXIOM_FAIL = 1
EXIT_USAGE = 2
EXIT_STRICT_SKIP = 3
EXIT_IO = 4


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        click.echo(f"cannot write {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"bad fraction {text!r}") from exc


@click.group()
def main() -> None:
    """Price-system explanations for approval-based committees."""


@main.command("gen")
@click.option("--model", type=click.Choice(["euclidean-vcr", "resampling"]), required=True)
@click.option("--n-range", nargs=2, type=int, default=(10, 100), show_default=True)
@click.option("--m-range", nargs=2, type=int, default=(10, 100), show_default=True)
@click.option("--k-frac", default="1/2", show_default=True,
              help="committee size as a fraction of m (used by experiments)")
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--on-invalid", type=click.Choice(["resample", "drop"]),
              default="resample", show_default=True,
              help="spatial draws violating the support assumptions")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def gen_command(model, n_range, m_range, k_frac, count, seed, on_invalid, out_dir):
    """Write COUNT profile JSON files plus a manifest."""
    k_fraction = _parse_fraction(k_frac)
    files = []
    for index in range(count):
        rng = substream(seed, index)
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        if model == "euclidean-vcr":
            inst = gen_euclidean_vcr(n, m, rng, on_invalid=on_invalid)
            text = pkio.write_profile(
                inst.profile,
                points={"voters": inst.voter_points, "candidates": inst.candidate_points},
                radius=inst.radius,
                seed=f"{seed}:{index}",
            )
        else:
            profile = gen_resampling_random_params(n, m, rng)
            text = pkio.write_profile(profile, seed=f"{seed}:{index}")
        name = f"profile_{index:05d}.json"
        _write(out_dir / name, text)
        files.append(name)
    manifest = {
        "model": model,
        "count": count,
        "seed": seed,
        "on_invalid": on_invalid,
        "n_range": list(n_range),
        "m_range": list(m_range),
        "k_frac": str(k_fraction),
        "files": files,
    }
    _write(out_dir / "manifest.json", json.dumps(manifest, indent=2))
    click.echo(f"wrote {count} profiles to {out_dir}")


def _parse_committee(profile, text: str):
    try:
        members = [int(x) for x in text.split(",") if x.strip() != ""]
        return ensure_committee(profile, members)
    except ValueError as exc:
        raise click.BadParameter(f"bad committee {text!r}: {exc}") from exc


@main.command("explain")
@click.option("--rule", "rule_id",
              type=click.Choice(["cont-phragmen", "equal-split", "approx-price"]),
              required=True)
@click.option("--profile", "profile_path", type=click.Path(path_type=Path), required=True)
@click.option("--committee", required=True, help="comma-separated candidate indices")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
def explain_command(rule_id, profile_path, committee, out_path):
    """Run an explanation rule and write the price system plus a summary."""
    profile, _ = pkio.read_profile(_read(profile_path))
    members = _parse_committee(profile, committee)
    ps = get_rule(rule_id)(profile, members)
    _write(out_path, pkio.write_price_system(ps))
    budgets = ps.budgets()
    click.echo(f"rule: {rule_id}")
    click.echo(f"committee: {sorted(members)}")
    click.echo("budgets: " + " ".join(format_rational(b) for b in budgets))
    click.echo("residuals: " + " ".join(format_rational(r) for r in ps.residuals))
    for c in sorted(members):
        paying = sorted(
            ((v, i) for (i, d), v in ps.payments.items() if d == c and v > 0), reverse=True
        )
        top = ", ".join(f"voter {i}: {format_rational(v)}" for v, i in paying[:5])
        click.echo(f"candidate {c} top payments: {top}")
    click.echo(f"price system written to {out_path}")


@main.command("audit")
@click.option("--profile", "profile_path", type=click.Path(path_type=Path), required=True)
@click.option("--ps", "ps_path", type=click.Path(path_type=Path), required=True)
@click.option("--axiom", "axioms", multiple=True,
              type=click.Choice(AXIOM_IDS), help="repeatable; default: all")
@click.option("--strict", is_flag=True, help="exit 3 when a guard skipped an axiom")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
def audit_command(profile_path, ps_path, axioms, strict, out_path):
    """Audit a price system against the axiom suite."""
    profile, _ = pkio.read_profile(_read(profile_path))
    ps = pkio.read_price_system(_read(ps_path))
    records = run_audit(profile, ps, list(axioms) if axioms else None)
    for record in records:
        line = f"{record.axiom}: {record.verdict}"
        if record.witness:
            line += f"  {record.witness}"
        click.echo(line)
    if out_path is not None:
        _write(out_path, json.dumps([r.to_json() for r in records], indent=2))
    if any(r.verdict == "fail" for r in records):
        sys.exit(EXIT_AXIOM_FAIL)
    if strict and any(r.verdict == "skipped-too-large" for r in records):
        sys.exit(EXIT_STRICT_SKIP)


@main.group("experiment")
def experiment_group() -> None:
    """Batch experiments writing the harness CSV."""


def _experiment_options(fn):
    fn = click.option("--model", type=click.Choice(["euclidean-vcr", "resampling"]),
                      default="euclidean-vcr", show_default=True)(fn)
    fn = click.option("--count", type=int, default=200, show_default=True)(fn)
    fn = click.option("--n-range", nargs=2, type=int, default=(10, 100), show_default=True)(fn)
    fn = click.option("--m-range", nargs=2, type=int, default=(10, 100), show_default=True)(fn)
    fn = click.option("--k-frac", default="1/2", show_default=True)(fn)
    fn = click.option("--k", type=int, default=None)(fn)
    fn = click.option("--rules", default="cont-phragmen,equal-split,approx-price",
                      show_default=True)(fn)
    fn = click.option("--seed", type=int, default=1, show_default=True)(fn)
    fn = click.option("--workers", type=int, default=None,
                      help="defaults to cpu count, capped by PRICEKIT_THREADS")(fn)
    fn = click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)(fn)
    fn = click.option("--sidecar", "sidecar_path", type=click.Path(path_type=Path),
                      default=None, help="exact rational values as JSON")(fn)
    return fn


def _run_experiment_command(kind, model, count, n_range, m_range, k_frac, k, rules,
                            seed, workers, out_path, sidecar_path):
    fraction = _parse_fraction(k_frac)
    config = ExperimentConfig(
        kind=kind,
        model=model,
        count=count,
        n_range=tuple(n_range),
        m_range=tuple(m_range),
        k_frac=(fraction.numerator, fraction.denominator),
        k=k,
        rules=tuple(r.strip() for r in rules.split(",") if r.strip()),
        seed=seed,
    )
    result = run_experiment(config, workers)
    _write(out_path, result.csv_text())
    if sidecar_path is not None:
        _write(sidecar_path, json.dumps(result.sidecar(), indent=2))
    if result.failures:
        click.echo(f"{len(result.failures)} instances failed", err=True)
        for index, error in result.failures[:10]:
            click.echo(f"  instance {index}: {error}", err=True)
    for line in summary_lines(result.summary):
        click.echo(line)
    click.echo(f"wrote {len(result.rows)} rows to {out_path}")


@experiment_group.command("ejr")
@_experiment_options
def experiment_ejr(**kwargs):
    """EJR+ alpha versus minimum budget fraction on random committees."""
    _run_experiment_command("ejr", **kwargs)


@experiment_group.command("recover")
@_experiment_options
def experiment_recover(**kwargs):
    """Voter-weight recovery via weighted equal shares committees."""
    _run_experiment_command("recover", **kwargs)


if __name__ == "__main__":
    main()
