"""Command line front end.

Exit codes for ``certify``: 0 certified, 2 refuted, 3 inconclusive.
Matrices are only ever written to files given with ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .basis import RATIONAL_LADDER, STRATEGIES, UNIT_CIRCLE, orthonormalize, realize_basis
from .certification import (
    DEFAULT_TUPLE_CAP,
    GES_CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    certify_ges,
    enumerate_bipartitions,
)
from .constructions import (
    NupbFamily,
    Scenario,
    build_custom,
    build_naive_vandermonde,
    build_standard,
    family_from_json,
    max_ces_dim,
    max_ges_dim,
    predicted_ges_dim,
)
from .poly import ExpPoly, SymbolicVector
from .witness import (
    build_witness,
    estimate_epsilon,
    ges_state,
    partial_transpose_min_eig,
)

log = logging.getLogger("gesforge")

EXIT_CODES = {GES_CERTIFIED: 0, REFUTED: 2, INCONCLUSIVE: 3}


@dataclass
class RunConfig:
    command: str
    variant: str | None
    dims: tuple[int, ...] | None
    strategy: str
    seed: int
    tol: float
    restarts: int
    output: Path | None
    format: str

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _parse_coords(text: str) -> SymbolicVector:
    """``"0;1+3;2+6"`` -> ``(1, a + a^3, a^2 + a^6)``."""
    polys = []
    for entry in text.split(";"):
        polys.append(ExpPoly.from_exponents(int(e) for e in entry.split("+")))
    return SymbolicVector(tuple(polys))


def _family(args) -> NupbFamily:
    if getattr(args, "family", None):
        return family_from_json(json.loads(Path(args.family).read_text()))
    if args.custom_exps or args.custom_coords:
        if not args.dims:
            raise ValueError("--dims is required for custom families")
        dims = _int_list(args.dims)
        first = _parse_coords(args.custom_coords) if args.custom_coords else _int_list(args.custom_exps)
        return build_custom(dims, first)
    if args.dims:
        scen = Scenario(tuple(_int_list(args.dims)))
    elif args.n and args.d:
        scen = Scenario.equal(args.n, args.d)
    else:
        raise ValueError("give --n and --d, --dims, or --family")
    variant = (args.variant or "v3").upper()
    if variant == "NAIVE":
        return build_naive_vandermonde(scen)
    return build_standard(variant, scen)


def _emit(payload: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        out.write_text(payload)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmat(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def cmd_construct(args) -> int:
    fam = _family(args)
    _emit(_dump(fam.to_json()), args.out)
    return 0


def cmd_certify(args) -> int:
    fam = _family(args)
    basis = realize_basis(fam, args.strategy or RATIONAL_LADDER, args.seed, args.tol)
    cert = certify_ges(basis, args.tol, args.tuple_cap, not args.no_shortcut)
    data = cert.to_json()
    data["family"] = fam.to_json()
    data["alphas"] = [str(a) for a in basis.alphas]
    _emit(_dump(data), args.out)
    if cert.verdict == INCONCLUSIVE:
        print(
            "hint: tuple count exceeded --tuple-cap; raise the cap or try a smaller instance",
            file=sys.stderr,
        )
    elif cert.verdict == REFUTED:
        print(
            f"spanning certification failed at cut {cert.refuting_cut}; "
            "run the seesaw (witness command) to decide the GES question numerically",
            file=sys.stderr,
        )
    return EXIT_CODES[cert.verdict]


def dims_rows(ns: Sequence[int], ds: Sequence[int]) -> list[dict]:
    rows = []
    for n in ns:
        for d in ds:
            scen = Scenario.equal(n, d)
            rows.append({
                "N": n,
                "d": d,
                "V1": predicted_ges_dim("V1", scen),
                "V2": predicted_ges_dim("V2", scen),
                "V3": predicted_ges_dim("V3", scen),
                "GESmax": max_ges_dim(scen.dims),
                "CESmax": max_ces_dim(scen.dims),
            })
    return rows


def cmd_dims(args) -> int:
    rows = dims_rows(_int_list(args.n_values), _int_list(args.d_values))
    if args.format == "json":
        payload = _dump(rows)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        payload = buf.getvalue()
    _emit(payload, args.out)
    return 0


def _pair(args):
    fam = _family(args)
    basis = realize_basis(fam, args.strategy or UNIT_CIRCLE, args.seed, args.tol)
    return fam, orthonormalize(basis, args.tol)


def cmd_state(args) -> int:
    fam, pair = _pair(args)
    rho = ges_state(pair)
    summary = {
        "dims": list(fam.dims),
        "u": pair.u,
        "D": pair.D,
        "rank": rho.rank,
        "trace": float(np.trace(rho.matrix).real),
    }
    if args.out:
        args.out.write_text(_dump({**summary, "rho": _cmat(rho.matrix)}))
    sys.stdout.write(_dump(summary))
    return 0


def cmd_witness(args) -> int:
    fam, pair = _pair(args)
    est = estimate_epsilon(pair.p_nupb, fam.dims, args.restarts, seed=args.seed)
    wit = build_witness(pair.p_nupb, est.epsilon_hat, args.safety, est.per_cut)
    rho = ges_state(pair)
    report = wit.to_json()
    report["tr_w_rho"] = float(np.trace(wit.operator @ rho.matrix).real)
    report["tr_w_rho_expected"] = wit.expected_on_state
    if args.out:
        args.out.write_text(_dump({**report, "operator": _cmat(wit.operator)}))
    sys.stdout.write(_dump({k: report[k] for k in ("epsilon_hat", "epsilon_used", "tr_w_rho")}))
    return 0


def cmd_ppt(args) -> int:
    fam, pair = _pair(args)
    rho = ges_state(pair)
    per_cut = [
        {"cut": cut.label, "min_eig": partial_transpose_min_eig(rho, cut)}
        for cut in enumerate_bipartitions(fam.dims)
    ]
    report = {"dims": list(fam.dims), "per_cut": per_cut,
              "npt_all_cuts": all(c["min_eig"] < 0 for c in per_cut)}
    _emit(_dump(report), args.out)
    return 0


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=["v1", "v2", "v3", "naive"], help="construction (default v3)")
    p.add_argument("--n", type=int, help="number of parties")
    p.add_argument("--d", type=int, help="local dimension")
    p.add_argument("--dims", help="comma separated local dimensions")
    p.add_argument("--custom-exps", help="party-1 exponents, e.g. 0,9,17")
    p.add_argument("--custom-coords", help="party-1 polynomials, e.g. '0;1+3;2+6'")
    p.add_argument("--family", help="read a family JSON file")


def _common_args(p: argparse.ArgumentParser, restarts: bool = False) -> None:
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", "-o", type=Path)
    if restarts:
        p.add_argument("--restarts", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gesforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a family JSON")
    _family_args(p)
    p.add_argument("--out", "-o", type=Path)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("certify", help="spanning certificate (exit 0/2/3)")
    _family_args(p)
    _common_args(p)
    p.add_argument("--tuple-cap", type=int, default=DEFAULT_TUPLE_CAP)
    p.add_argument("--no-shortcut", action="store_true",
                   help="enumerate tuples even for monomial sides")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("dims", help="closed-form dimension table")
    p.add_argument("--n", dest="n_values", default="3", help="party counts, e.g. 2-6")
    p.add_argument("--d", dest="d_values", default="2-10", help="local dimensions, e.g. 2,3,5")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", "-o", type=Path)
    p.set_defaults(func=cmd_dims)

    for name, func, text in (
        ("state", cmd_state, "normalized GES projector state"),
        ("witness", cmd_witness, "witness from a seesaw epsilon estimate"),
        ("ppt", cmd_ppt, "partial-transpose minimum eigenvalue per cut"),
    ):
        p = sub.add_parser(name, help=text)
        _family_args(p)
        _common_args(p, restarts=True)
        if name == "witness":
            p.add_argument("--safety", type=float, default=0.1, help="epsilon shrink factor")
        p.set_defaults(func=func)
    return parser


def _config(args) -> RunConfig:
    dims = _int_list(args.dims) if getattr(args, "dims", None) else None
    return RunConfig(
        command=args.command,
        variant=getattr(args, "variant", None),
        dims=tuple(dims) if dims else None,
        strategy=getattr(args, "strategy", None) or "",
        seed=getattr(args, "seed", 0),
        tol=getattr(args, "tol", 1e-9),
        restarts=getattr(args, "restarts", 1),
        output=getattr(args, "out", None),
        format=getattr(args, "format", "json"),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        _config(args)
        return args.func(args)
    except ValueError as exc:
        parser.exit(1, f"gesforge: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
