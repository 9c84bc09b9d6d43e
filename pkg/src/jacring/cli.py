"""Command-line front end.

Every command prints one JSON run record::

    {"timestamp": ..., "version": ..., "command": ..., "config": {...},
     "result": {...}, "wall_time": ...}

``result`` depends only on the resolved ``config``; rerunning with the same
config reproduces it byte for byte, whatever ``--workers`` is.

Exit codes: 0 ok, 2 parse error, 3 precondition violated, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from . import __version__
from .decomposable import dimension_arithmetic_check, f_v_rank, membership_Y, incidence_fiber, tangent_dim_Y
from .errors import InvariantBreach, PolynomialSyntaxError, PreconditionError
from .fields import DEFAULT_PRIMES, FieldSpec
from .lefschetz import max_rank_kernel_square_check, slp_check, socle_coefficient, star_property_check, wlp_check
from .poly import GradedPolynomial, fermat, hyperplane_sum, parse_polynomial
from .ring import (
    annihilator_quotient_dims,
    build_jacobian_ring,
    gorenstein_pairing_check,
    hilbert_oracle_fermat,
    monomial_ci_ring,
    random_smooth_hypersurface,
)
from .seeding import stream
from .variation import (
    PlaneCurveIVHS,
    estimate_dM,
    fermat_min_variation_witness,
    rank_spectrum,
    verify_I_maximal,
    yukawa_rank,
)

PRIMES_ENV = "JACRING_PRIMES"

COMMANDS = (
    "hilbert", "pairing", "wlp", "slp", "star", "socle-coeff", "variation-max",
    "variation-spectrum", "min-witness", "yukawa", "kernel-square", "annihilator",
    "fv-rank", "y-membership", "arith-check", "survey",
)


class UsageError(Exception):
    """Bad command line; exit code 2."""


@dataclass
class RunConfig:
    command: str
    fermat: Optional[List[int]] = None
    poly: Optional[str] = None
    poly_file: Optional[str] = None
    random: Optional[List[int]] = None
    ci: Optional[List[int]] = None
    field: Optional[str] = None
    primes: List[int] = dataclasses.field(default_factory=lambda: list(DEFAULT_PRIMES))
    samples: int = 20
    seed: int = 0
    workers: int = 1
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    a: Optional[int] = None
    e: Optional[int] = None
    degree: Optional[int] = None
    linear: Optional[str] = None
    alpha: Optional[str] = None
    xi: Optional[str] = None
    v: Optional[List[int]] = None
    d_range: Optional[List[int]] = None
    k_range: Optional[List[int]] = None
    kind: Optional[str] = None
    max_exponent: Optional[int] = None
    nvars: Optional[int] = None
    jsonl: Optional[str] = None
    csv: Optional[str] = None

    def resolved(self) -> Dict[str, Any]:
        """Config fields that influence the result (output paths and worker count excluded)."""
        out = {k: v for k, v in asdict(self).items() if v is not None}
        for k in ("jsonl", "csv", "workers"):
            out.pop(k, None)
        return out

    def field_spec(self) -> FieldSpec:
        if self.field is None:
            return FieldSpec(self.primes[0])
        return FieldSpec.parse(self.field)


@dataclass
class RunRecord:
    timestamp: str
    version: str
    command: str
    config: Dict[str, Any]
    result: Any
    wall_time: float

    def to_json(self) -> dict:
        return asdict(self)


def config_hash(resolved: Dict[str, Any]) -> str:
    return hashlib.sha256(json.dumps(resolved, sort_keys=True).encode()).hexdigest()


# --- hypersurface sources -----------------------------------------------------------------


def _sources(cfg: RunConfig) -> int:
    return sum(x is not None for x in (cfg.fermat, cfg.poly, cfg.poly_file, cfg.random))


def hypersurface(cfg: RunConfig) -> GradedPolynomial:
    """The equation named by the config, over ``QQ`` (integer coefficients for random ones)."""
    if _sources(cfg) != 1:
        raise UsageError("give exactly one of --fermat, --poly, --poly-file, --random")
    if cfg.fermat is not None:
        n, d = cfg.fermat
        return fermat(n, d)
    if cfg.poly is not None:
        return parse_polynomial(cfg.poly, n=cfg.n)
    if cfg.poly_file is not None:
        with open(cfg.poly_file) as fh:
            return parse_polynomial(fh.read(), n=cfg.n)
    n, d = cfg.random
    return random_smooth_hypersurface(n, d, stream(cfg.seed, "hypersurface", n, d), cfg.primes)


def ring_from(cfg: RunConfig):
    fld = cfg.field_spec()
    if cfg.ci is not None:
        if _sources(cfg):
            raise UsageError("--ci excludes the hypersurface sources")
        return monomial_ci_ring(cfg.ci, fld)
    return build_jacobian_ring(hypersurface(cfg), fld)


def _poly_arg(text: Optional[str], ring, what: str) -> GradedPolynomial:
    if text is None:
        raise UsageError(f"--{what} is required")
    return parse_polynomial(text, ring.field, n=ring.n)


# --- commands --------------------------------------------------------------------------------


def cmd_hilbert(cfg):
    ring = ring_from(cfg)
    dims = ring.hilbert_function()
    out = {"n": ring.n, "socle_degree": ring.N, "dims": dims, "total": sum(dims), "smooth": ring.smooth,
           "field": str(ring.field)}
    if cfg.fermat is not None:
        out["oracle_match"] = dims == hilbert_oracle_fermat(*cfg.fermat)
    if ring.F is not None and ring.smooth:
        out["total_expected"] = (ring.F.degree - 1) ** (ring.n + 1)
    return out, [["k", "r_k"]] + [[k, r] for k, r in enumerate(dims)]


def cmd_pairing(cfg):
    ring = ring_from(cfg)
    degrees = [cfg.a] if cfg.a is not None else list(range(ring.N + 1))
    verdicts = {}
    for a in degrees:
        ok, mat = gorenstein_pairing_check(ring, a)
        verdicts[str(a)] = {"perfect": ok, "shape": list(mat.shape), "rank": mat.rank()}
    return {"field": str(ring.field), "pairings": verdicts, "all_perfect": all(v["perfect"] for v in verdicts.values())}, None


def _lefschetz(cfg, strong):
    ring = ring_from(cfg)
    L = parse_polynomial(cfg.linear, ring.field, n=ring.n) if cfg.linear else hyperplane_sum(ring.n, ring.field)
    rep = slp_check(ring, L) if strong else wlp_check(ring, L)
    table = [["k", "power", "source_dim", "target_dim", "rank", "maximal"]] + [
        [r.k, r.power, r.source_dim, r.target_dim, r.rank, r.maximal] for r in rep.rows]
    return rep.to_json(), table


def cmd_wlp(cfg):
    return _lefschetz(cfg, False)


def cmd_slp(cfg):
    return _lefschetz(cfg, True)


def _need(cfg, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {cfg.command}")


def cmd_star(cfg):
    _need(cfg, "n", "d", "k")
    return star_property_check(cfg.n, cfg.d, cfg.k, cfg.field_spec()).to_json(), None


def cmd_socle_coeff(cfg):
    _need(cfg, "n")
    fld = cfg.field_spec()
    lam = socle_coefficient(cfg.n, cfg.n + 1, fld)
    return {"n": cfg.n, "d": cfg.n + 1, "lambda": str(lam), "field": str(fld)}, None


def _ivhs(cfg) -> PlaneCurveIVHS:
    F = hypersurface(cfg)
    return PlaneCurveIVHS(F, cfg.primes)


def cmd_variation_max(cfg):
    ivhs = _ivhs(cfg)
    est = estimate_dM(ivhs, cfg.samples, cfg.seed, cfg.workers)
    ver = verify_I_maximal(ivhs, cfg.samples, cfg.seed)
    return {"d": ivhs.d, "genus": ivhs.g, "estimate": est.to_json(), "i_maximal": ver.to_json()}, None


def cmd_variation_spectrum(cfg):
    ivhs = _ivhs(cfg)
    rep = rank_spectrum(ivhs, cfg.samples, cfg.seed, workers=cfg.workers)
    return {"d": ivhs.d, "genus": ivhs.g, **rep.to_json()}, None


def cmd_min_witness(cfg):
    _need(cfg, "d")
    xi, r = fermat_min_variation_witness(cfg.d, cfg.field_spec())
    return {"d": cfg.d, "xi": xi.to_text(), "rank": r, "expected": cfg.d - 3}, None


def cmd_yukawa(cfg):
    ring = ring_from(cfg)
    xi = parse_polynomial(cfg.xi, ring.field, n=ring.n) if cfg.xi else hyperplane_sum(ring.n, ring.field)
    d = ring.F.degree
    r = yukawa_rank(ring, xi)
    src = ring.dim(d - ring.n - 1)
    return {"n": ring.n, "d": d, "xi": xi.to_text(), "rank": r, "source_dim": src, "full": r == src}, None


def cmd_kernel_square(cfg):
    _need(cfg, "a", "e")
    ring = ring_from(cfg)
    return max_rank_kernel_square_check(ring, cfg.a, cfg.e, cfg.samples, stream(cfg.seed, "kernel-square")).to_json(), None


def cmd_annihilator(cfg):
    ring = ring_from(cfg)
    return annihilator_quotient_dims(ring, _poly_arg(cfg.alpha, ring, "alpha")).to_json(), None


def cmd_fv_rank(cfg):
    _need(cfg, "v", "degree")
    F = hypersurface(cfg)
    return f_v_rank(F, cfg.v, cfg.degree, cfg.field_spec()).to_json(), None


def cmd_y_membership(cfg):
    ring = ring_from(cfg)
    alpha = _poly_arg(cfg.alpha, ring, "alpha")
    member = membership_Y(ring, alpha)
    out = {"alpha": alpha.to_text(), "member": member}
    if member:
        out["fiber"] = incidence_fiber(ring, alpha).to_json()
        out["tangent_dim_upper_bound"] = tangent_dim_Y(ring, alpha)
    return out, None


def cmd_arith_check(cfg):
    lo, hi = cfg.d_range or (3, 12)
    checks = [dimension_arithmetic_check(d) for d in range(lo, hi + 1)]
    return {"all_pass": all(c.ok for c in checks), "checks": [c.to_json() for c in checks]}, None


# --- surveys --------------------------------------------------------------------------------


def survey_cells(cfg: RunConfig) -> List[RunConfig]:
    kind = cfg.kind
    base = {"primes": cfg.primes, "seed": cfg.seed, "samples": cfg.samples, "field": cfg.field}
    cells = []
    if kind == "star":
        _need(cfg, "n", "d_range")
        lo, hi = cfg.d_range
        for d in range(lo, hi + 1):
            ks = range(cfg.k_range[0], cfg.k_range[1] + 1) if cfg.k_range else range(0, d - cfg.n)
            for k in ks:
                cells.append(RunConfig("star", n=cfg.n, d=d, k=k, **base))
    elif kind == "slp":
        _need(cfg, "nvars", "max_exponent")
        from itertools import combinations_with_replacement

        for a in combinations_with_replacement(range(2, cfg.max_exponent + 1), cfg.nvars):
            cells.append(RunConfig("slp", ci=list(a), **base))
    elif kind in ("hilbert", "pairing", "variation-max"):
        _need(cfg, "d_range")
        n = cfg.n if cfg.n is not None else 2
        lo, hi = cfg.d_range
        for d in range(lo, hi + 1):
            cells.append(RunConfig(kind, fermat=[n, d], **base))
    elif kind == "arith-check":
        _need(cfg, "d_range")
        lo, hi = cfg.d_range
        for d in range(lo, hi + 1):
            cells.append(RunConfig("arith-check", d_range=[d, d]))
    else:
        raise UsageError(f"unknown survey kind {kind!r}")
    if not cells:
        raise PreconditionError("survey grid is empty")
    return cells


def run_survey(cfg: RunConfig) -> dict:
    """Append one record per grid cell to ``cfg.jsonl``, skipping cells already present."""
    if not cfg.jsonl:
        raise UsageError("survey needs --jsonl")
    cells = survey_cells(cfg)
    done = set()
    if os.path.exists(cfg.jsonl):
        with open(cfg.jsonl) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    done.add(json.loads(line).get("config_hash"))
    todo = [c for c in cells if config_hash(c.resolved()) not in done]
    try:
        fh = open(cfg.jsonl, "a")
    except OSError as exc:
        raise PreconditionError(f"cannot write {cfg.jsonl}: {exc}") from None
    with fh, ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        for rec in pool.map(run_command, todo):
            row = rec.to_json()
            row["config_hash"] = config_hash(rec.config)
            fh.write(json.dumps(row, sort_keys=True) + "\n")
            fh.flush()
    return {"kind": cfg.kind, "cells": len(cells), "skipped": len(cells) - len(todo), "written": len(todo),
            "output": cfg.jsonl}


HANDLERS = {
    "hilbert": cmd_hilbert, "pairing": cmd_pairing, "wlp": cmd_wlp, "slp": cmd_slp, "star": cmd_star,
    "socle-coeff": cmd_socle_coeff, "variation-max": cmd_variation_max,
    "variation-spectrum": cmd_variation_spectrum, "min-witness": cmd_min_witness, "yukawa": cmd_yukawa,
    "kernel-square": cmd_kernel_square, "annihilator": cmd_annihilator, "fv-rank": cmd_fv_rank,
    "y-membership": cmd_y_membership, "arith-check": cmd_arith_check,
}


def run_command(cfg: RunConfig) -> RunRecord:
    start = time.perf_counter()
    stamp = datetime.now(timezone.utc).isoformat()
    if cfg.command == "survey":
        result = run_survey(cfg)
    else:
        result, table = HANDLERS[cfg.command](cfg)
        if cfg.csv and table:
            with open(cfg.csv, "w", newline="") as fh:
                csv.writer(fh).writerows(table)
    return RunRecord(stamp, __version__, cfg.command, cfg.resolved(), result, time.perf_counter() - start)


# --- argument parsing -------------------------------------------------------------------------


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> List[int]:
    try:
        lo, hi = text.split("..")
        return [int(lo), int(hi)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


def default_primes() -> List[int]:
    env = os.environ.get(PRIMES_ENV)
    return _int_list(env) if env else list(DEFAULT_PRIMES)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacring", description="Jacobian rings and variation of Hodge structure checks")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_argument_group("hypersurface source")
    src.add_argument("--fermat", nargs=2, type=int, metavar=("N", "D"))
    src.add_argument("--poly", type=str, help="polynomial text, e.g. 'x0^4 + x1^4 + x2^4'")
    src.add_argument("--poly-file", type=str)
    src.add_argument("--random", nargs=2, type=int, metavar=("N", "D"))
    src.add_argument("--ci", type=_int_list, help="monomial complete intersection exponents a0,a1,...")
    p.add_argument("--field", type=str, help="QQ or a prime (default: first of --primes)")
    p.add_argument("--primes", type=_int_list, default=None)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--degree", type=int, help="total degree p for fv-rank")
    p.add_argument("--linear", type=str, help="Lefschetz linear form (default: sum of variables)")
    p.add_argument("--alpha", type=str)
    p.add_argument("--xi", type=str)
    p.add_argument("--v", type=_int_list)
    p.add_argument("--d-range", type=_range)
    p.add_argument("--k-range", type=_range)
    p.add_argument("--kind", type=str, help="survey kind: star, slp, hilbert, pairing, variation-max, arith-check")
    p.add_argument("--max-exponent", type=int)
    p.add_argument("--nvars", type=int)
    p.add_argument("--jsonl", type=str)
    p.add_argument("--csv", type=str)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = vars(ns).copy()
    if values["primes"] is None:
        values["primes"] = default_primes()
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        if len(set(cfg.primes)) != len(cfg.primes) or not cfg.primes:
            raise UsageError("--primes must be a nonempty list of distinct primes")
        for q in cfg.primes:
            FieldSpec(q)
        record = run_command(cfg)
    except (UsageError, PolynomialSyntaxError) as exc:
        print(f"jacring: error: {exc}", file=sys.stderr)
        return 2
    except InvariantBreach as exc:
        print(f"jacring: internal invariant breach: {exc}", file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print(f"jacring: precondition violated: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(record.to_json(), sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
