"""Command line interface: ``htype rep gen``, ``aut dim``, ``table verify``, ``classify``, ``iso demo-17-71``.

Exit codes: 0 success/match, 1 mismatch or failed check, 2 invalid input.
JSON output is canonical (sorted keys, fixed iteration order) so repeated
runs with the same inputs produce identical bytes.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click

from . import __version__
from .algebra import aut0_dimension_report, build_htype
from .cache import ENV_VAR, cached_minimal_module, default_cache_dir
from .catalog import (AlgebraSpec, CatalogError, classify_pair, expected_group, filled_cells,
                      minimal_dim, multiplicity_grid, real_dimension)
from .clifford import CliffordError, Signature
from .linalg import DEFAULT_SEED, choose_primes
from .representations import (ModuleSpec, RepresentationError, direct_sum, direct_sum_of,
                              volume_action)

REPORT_SCHEMA = "htype.table-verify/1"
EXACT_SPOT_MAX_DIM = 32
INPUT_ERRORS = (CatalogError, CliffordError, RepresentationError, ValueError)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _fail_input(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


def _cache_root(ctx: click.Context) -> Optional[Path]:
    return ctx.obj.get("cache_dir")


format_option = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text",
                             show_default=True, help="Output format.")


@click.group()
@click.version_option(__version__, prog_name="htype")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help=f"Module cache directory (default ${ENV_VAR} or ~/.cache/htype).")
@click.option("--no-cache", is_flag=True, help="Build every module from scratch.")
@click.pass_context
def main(ctx: click.Context, cache_dir: Optional[Path], no_cache: bool) -> None:
    """Admissible Clifford modules and pseudo H-type algebras."""
    ctx.ensure_object(dict)
    ctx.obj["cache_dir"] = None if no_cache else (cache_dir or default_cache_dir())


# rep ------------------------------------------------------------------------------------

@main.group()
def rep() -> None:
    """Representations of Cl(r,s)."""


@rep.command("gen")
@click.option("--r", "r", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--variant", type=click.Choice(["plus", "minus"]), default=None)
@click.option("--copies", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the representation JSON here instead of stdout.")
@format_option
@click.pass_context
def rep_gen(ctx, r, s, variant, copies, out, fmt):
    """Minimal admissible module (or COPIES copies of it) as integer matrices."""
    if copies < 1:
        _fail_input("--copies must be at least 1")
    try:
        base = cached_minimal_module(r, s, variant, _cache_root(ctx))
    except INPUT_ERRORS as exc:
        _fail_input(str(exc))
    module = base if copies == 1 else direct_sum_of([base] * copies)
    text = module.dumps()
    if out is not None:
        out.write_text(text + "\n", encoding="utf-8")
    summary = {"r": r, "s": s, "dim": module.dim, "variant": base.variant,
               "volume": volume_action(module), "copies": copies,
               "out": str(out) if out is not None else None}
    if fmt == "json":
        click.echo(_dump(summary) if out is not None else text)
    else:
        click.echo(f"Cl({r},{s}) module: dim {module.dim}, variant {base.variant}, "
                   f"volume {summary['volume']}" + (f" -> {out}" if out else ""))
        if out is None:
            click.echo(text)


# aut ------------------------------------------------------------------------------------

@main.group()
def aut() -> None:
    """Automorphism groups of n_{r,s}(U)."""


def _aut_case(r: int, s: int, p: int, q: int, mode: str, seed: Optional[int],
              cache_root: Optional[Path], exact_max_dim: int = 0) -> dict:
    """One (r,s,p,q) comparison; pure apart from cache writes."""
    t0 = time.perf_counter()
    group = expected_group(r, s, p, q)
    expected = real_dimension(group)
    base = cached_minimal_module(r, s, None, cache_root)
    module = direct_sum(ModuleSpec(Signature(r, s), p, q, flip="metric"), base)
    alg = build_htype(module)
    rep = aut0_dimension_report(alg, mode, seed)
    record = {
        "r": r, "s": s, "p": p, "q": q,
        "module_dim": module.dim,
        "computed_dim": rep.dimension,
        "mode": mode,
        "primes_agree": rep.agree,
        "expected_group": str(group),
        "expected_dim": expected,
    }
    ok = rep.agree and rep.dimension == expected
    if exact_max_dim and module.dim <= exact_max_dim and mode != "exact":
        exact = aut0_dimension_report(alg, "exact").dimension
        record["exact_dim"] = exact
        ok = ok and exact == expected
    if (r, s) == (0, 2):
        record["note"] = "table prints Sp(2,C); compared with Sp(2p,C)"
    record["status"] = "match" if ok else "mismatch"
    record["_seconds"] = round(time.perf_counter() - t0, 4)
    return record


@aut.command("dim")
@click.option("--r", "r", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--p", "p", type=int, default=1, show_default=True)
@click.option("--q", "q", type=int, default=0, show_default=True)
@click.option("--mode", type=click.Choice(["modular", "exact", "graph"]), default="modular", show_default=True)
@click.option("--seed", type=int, default=None, help="Seed for the modular primes.")
@format_option
@click.pass_context
def aut_dim(ctx, r, s, p, q, mode, seed, fmt):
    """Dimension of Aut^0 against the catalogued group."""
    try:
        rec = _aut_case(r, s, p, q, mode, seed, _cache_root(ctx))
    except INPUT_ERRORS as exc:
        _fail_input(str(exc))
    rec.pop("_seconds")
    if mode == "modular":
        rec["primes"] = choose_primes(2, seed)
    if fmt == "json":
        click.echo(_dump(rec))
    else:
        click.echo(f"{rec['computed_dim']}, {rec['expected_group']} (dim {rec['expected_dim']}), {rec['status']}")
    sys.exit(0 if rec["status"] == "match" else 1)


# table ----------------------------------------------------------------------------------

@main.group()
def table() -> None:
    """Batch verification of the automorphism group table."""


def _parse_cells(values: Tuple[str, ...]) -> Optional[List[Tuple[int, int]]]:
    if not values:
        return None
    out = []
    for v in values:
        parts = v.split(",")
        if len(parts) != 2:
            raise ValueError(f"cell must look like R,S: {v!r}")
        out.append((int(parts[0]), int(parts[1])))
    return out


def _worker(args) -> dict:
    return _aut_case(*args)


def verify_table(cells: Optional[List[Tuple[int, int]]] = None, max_dim: Optional[int] = None,
                 seed: Optional[int] = None, workers: int = 1, cache_root: Optional[Path] = None,
                 mode: str = "modular", exact_max_dim: int = EXACT_SPOT_MAX_DIM) -> dict:
    """Run every filled cell over its multiplicity grid and assemble the report."""
    known = filled_cells()
    if cells is None:
        cells = known
    else:
        for c in cells:
            if c not in known:
                raise CatalogError(f"({c[0]},{c[1]}) is not a filled table cell")
    jobs, records = [], []
    for r, s in cells:
        for p, q in multiplicity_grid(r, s):
            dim = (p + q) * minimal_dim(r, s)
            if max_dim is not None and dim > max_dim:
                records.append({"r": r, "s": s, "p": p, "q": q, "module_dim": dim,
                                "status": "skipped", "reason": f"module dim {dim} > max-dim {max_dim}"})
                continue
            jobs.append((r, s, p, q, mode, seed, cache_root, exact_max_dim))
    t0 = time.perf_counter()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]
    wall = time.perf_counter() - t0
    timings = {}
    for rec in results:
        timings[f"{rec['r']},{rec['s']},{rec['p']},{rec['q']}"] = rec.pop("_seconds")
    records.extend(results)
    records.sort(key=lambda x: (x["s"], x["r"], x["p"] + x["q"], -x["p"]))
    counts = {k: sum(1 for x in records if x["status"] == k) for k in ("match", "mismatch", "skipped")}
    return {
        "schema": REPORT_SCHEMA,
        "cases": records,
        "summary": dict(counts, total=len(records)),
        "toolchain": {
            "htype": __version__,
            "mode": mode,
            "seed": DEFAULT_SEED if seed is None else seed,
            "primes": choose_primes(2, seed) if mode == "modular" else [],
            "exact_spot_max_dim": exact_max_dim,
        },
        "_timings": {"wall_seconds": round(wall, 3), "cases": timings},
    }


@table.command("verify")
@click.option("--cells", multiple=True, help="Restrict to cells given as R,S (repeatable).")
@click.option("--max-dim", type=int, default=None, help="Skip cases whose module is larger.")
@click.option("--seed", type=int, default=None, help="Seed for the modular primes.")
@click.option("--workers", type=int, default=None, help="Worker processes (default: CPU count).")
@click.option("--mode", type=click.Choice(["modular", "exact", "graph"]), default="modular", show_default=True)
@click.option("--exact-max-dim", type=int, default=EXACT_SPOT_MAX_DIM, show_default=True,
              help="Also run exact rational rank on modules up to this size (0 disables).")
@click.option("--timings", is_flag=True, help="Include wall-clock timings (output no longer byte-stable).")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@format_option
@click.pass_context
def table_verify(ctx, cells, max_dim, seed, workers, mode, exact_max_dim, timings, out, fmt):
    """Check every filled cell of the automorphism-group table."""
    try:
        parsed = _parse_cells(cells)
        report = verify_table(parsed, max_dim, seed, workers or os.cpu_count() or 1,
                              _cache_root(ctx), mode, exact_max_dim)
    except INPUT_ERRORS as exc:
        _fail_input(str(exc))
    t = report.pop("_timings")
    if timings:
        report["toolchain"]["timings"] = t
    text = _dump(report)
    if out is not None:
        out.write_text(text + "\n", encoding="utf-8")
    if fmt == "json":
        click.echo(text)
    else:
        for rec in report["cases"]:
            head = f"({rec['r']},{rec['s']}) p={rec['p']} q={rec['q']} dim {rec['module_dim']}"
            if rec["status"] == "skipped":
                click.echo(f"{head}: skipped ({rec['reason']})")
            else:
                click.echo(f"{head}: {rec['computed_dim']} vs {rec['expected_group']} "
                           f"({rec['expected_dim']}) {rec['status']}")
        sm = report["summary"]
        click.echo(f"match {sm['match']}, mismatch {sm['mismatch']}, skipped {sm['skipped']}, total {sm['total']}")
    sys.exit(1 if report["summary"]["mismatch"] else 0)


# classify / iso -------------------------------------------------------------------------

def _counterpart(r: int, s: int, p: int, q: int) -> AlgebraSpec:
    """Mirrored signature with the same module dimension, isotypic."""
    total = (p + q) * minimal_dim(r, s)
    d = minimal_dim(s, r)
    if total % d:
        raise CatalogError(f"no module over ({s},{r}) has dimension {total}")
    return AlgebraSpec(s, r, total // d, 0)


@main.command()
@click.option("--r", "r", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--p", "p", type=int, default=1, show_default=True)
@click.option("--q", "q", type=int, default=0, show_default=True)
@click.option("--other", nargs=4, type=int, default=None, metavar="R S P Q",
              help="Compare with this algebra instead of the mirrored one.")
@format_option
def classify(r, s, p, q, other, fmt):
    """Isomorphism verdict for n_{r,s}(U) against n_{s,r} of equal dimension."""
    try:
        if p < 0 or q < 0 or p + q < 1:
            raise CatalogError(f"invalid multiplicities ({p},{q})")
        a = AlgebraSpec(r, s, p, q)
        a.module_dim()
        if q:
            from .representations import admits_two_flavors
            if not admits_two_flavors(Signature(r, s)):
                raise CatalogError(f"({r},{s}) has a single minimal module flavor; q must be 0")
        b = AlgebraSpec(*other) if other else _counterpart(r, s, p, q)
        b.module_dim()
        verdict = classify_pair(a, b)
    except INPUT_ERRORS as exc:
        _fail_input(str(exc))
    if fmt == "json":
        click.echo(_dump(verdict.to_json()))
    else:
        click.echo(f"{verdict.verdict} to ({b.r},{b.s}) p={b.p} q={b.q}: {verdict.rule}")


@main.group()
def iso() -> None:
    """Explicit isomorphisms."""


@iso.command("demo-17-71")
@click.option("--show-matrix", is_flag=True, help="Print the full module map A.")
@format_option
def iso_demo(show_matrix, fmt):
    """The isomorphism n_{1,7}(U) -> n_{7,1}(V+ + V-) with its residual check."""
    from .isomorphisms import explicit_iso_17_71

    res = explicit_iso_17_71()
    data = res.to_json()
    data["residual"] = 0 if res.report.get("residual_zero") else "nonzero"
    if show_matrix or fmt == "json":
        data["A"] = [[str(x) for x in row] for row in res.A.tolist()]
    if fmt == "json":
        click.echo(_dump(data))
    else:
        pr = res.params
        vals = ", ".join(f"{k}={_fmt_gauss(pr[k])}" for k in ("l1", "l2", "m1", "m2"))
        click.echo(f"parameters: {vals}")
        click.echo(f"module dim {data['dim']}; C(z_k) = w_k")
        for k, v in res.report.items():
            click.echo(f"  {k}: {'ok' if v else 'FAILED'}")
        click.echo(f"residual C[u,v] - [Au,Av]: {data['residual']}")
        if show_matrix:
            for row in data["A"]:
                click.echo(" ".join(f"{x:>5}" for x in row))
    sys.exit(0 if res.ok else 1)


def _fmt_gauss(z) -> str:
    re_, im = z
    return str(re_) if im == 0 else f"{re_}{'+' if im >= 0 else '-'}{abs(im)}i"


if __name__ == "__main__":  # pragma: no cover
    main()
