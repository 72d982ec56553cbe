"""Command line experiments.

Every subcommand writes a table (CSV with a header row, or JSON with a
``meta`` record) to ``--out`` (``-`` for stdout). Numbers are written with 13
significant digits so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .com import TwoObjectModel, com_negativity, critical_temperature
from .errors import InvalidParameter, NonPositivePotential, OscnetError
from .gaussian import log_negativity, partial_transpose, reduce, symplectic_spectrum, thermal_state
from .network import EnsembleSpec, Graph, aggregate_by_degree, degree_profile, network_hamiltonian
from .network import node_entropies, path, ring

SIG_DIGITS = 13


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0.0:
            return "0"
        return f"{v:.{SIG_DIGITS}g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(fmt(value))
    return value


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt_name: str, meta: dict) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()
    records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
    meta = {k: _json_value(v) for k, v in meta.items()}
    return json.dumps({"meta": meta, "records": records}, indent=2, sort_keys=False) + "\n"


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _meta(args: argparse.Namespace) -> dict:
    meta = {"command": args.command, "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "command"):
            continue
        if isinstance(value, list):
            value = ",".join(fmt(v) for v in value)
        meta[key] = value
    return meta


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


# -- network-profile ------------------------------------------------------------

_MODEL_PARAM = {"er": "mean_degree", "rrg": "degree", "sf-ba": "m", "sf-conf": "kmin"}


def run_network_profile(args: argparse.Namespace):
    if args.graph is not None:
        g = Graph.read(args.graph)
        profile = aggregate_by_degree(zip(g.degrees().tolist(), node_entropies(g, args.coupling).tolist()))
    else:
        if args.model is None:
            raise InvalidParameter("either --model or --graph is required")
        name = _MODEL_PARAM[args.model]
        param = getattr(args, name)
        if param is None:
            raise InvalidParameter(f"--{name.replace('_', '-')} is required for model {args.model}")
        ensemble = EnsembleSpec(args.model, args.nodes, param)
        profile = degree_profile(ensemble, args.coupling, args.realizations, args.seed)
    columns = ["degree", "mean_entropy_nats", "std", "count"]
    return columns, list(profile.rows()), {}


# -- com-scaling ------------------------------------------------------------------


def run_com_scaling(args: argparse.Namespace):
    columns = ["N", "pattern", "G0", "T", "log_negativity"]
    if args.critical:
        columns.append("T_c")
    rows = []
    for n in args.n_list:
        build = TwoObjectModel.pairwise if args.pattern == "pairwise" else TwoObjectModel.one_to_all
        model = build(n, args.g0, mass=args.mass, omega=args.omega)
        try:
            row = [n, args.pattern, args.g0, args.temperature, com_negativity(model, args.temperature)]
            if args.critical:
                row.append(critical_temperature(model, tol=args.tol))
        except NonPositivePotential as exc:
            raise NonPositivePotential(f"stability violated at N={n}: {exc}") from exc
        rows.append(row)
    return columns, rows, {}


# -- chain -------------------------------------------------------------------------


def chain_sites(topology: str, length: int, separation: int) -> tuple[int, int]:
    """Site pair at ``separation``: ``(0, d)`` on a ring, centred on a path."""
    if topology == "ring":
        return 0, separation
    first = (length - 1 - separation) // 2
    return first, first + separation


def _pair_margin(h, sites, temperature: float) -> float:
    state = reduce(thermal_state(h, temperature), list(sites))
    return float(symplectic_spectrum(partial_transpose(state, [1])).values[0] - 0.5)


def onset_temperature(h, sites, tol: float = 1e-6) -> float:
    """Lowest temperature at which the pair is PPT (0 if never entangled)."""
    if _pair_margin(h, sites, 0.0) >= -1e-12:
        return 0.0
    lo, hi = 0.0, 1.0
    while _pair_margin(h, sites, hi) < 0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if _pair_margin(h, sites, mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def run_chain(args: argparse.Namespace):
    length, dmax = args.length, args.max_separation
    limit = length // 2 if args.topology == "ring" else length - 1
    if not 1 <= dmax <= limit:
        raise InvalidParameter(f"--max-separation must be in [1, {limit}] for a {args.topology} of {length}")
    g = ring(length) if args.topology == "ring" else path(length)
    h = network_hamiltonian(g, args.coupling)
    state = thermal_state(h, args.temperature)
    columns = ["separation", "log_negativity"]
    if args.onset:
        columns.append("onset_temperature")
    rows = []
    onsets = []
    for d in range(1, dmax + 1):
        sites = chain_sites(args.topology, length, d)
        row = [d, log_negativity(reduce(state, list(sites)), [1])]
        if args.onset:
            onsets.append(onset_temperature(h, sites, args.tol))
            row.append(onsets[-1])
        rows.append(row)
    extra = {"all_separable_above": max(onsets)} if onsets else {}
    return columns, rows, extra


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("network-profile", help="degree-resolved node entropies of a graph ensemble")
    p.add_argument("--model", choices=tuple(_MODEL_PARAM))
    p.add_argument("--graph", help="edge-list file to use instead of a random ensemble")
    p.add_argument("--nodes", type=_positive_int, default=500)
    p.add_argument("--mean-degree", type=_nonneg)
    p.add_argument("--degree", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--kmin", type=int)
    p.add_argument("--coupling", type=float, required=True)
    p.add_argument("--realizations", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=run_network_profile)

    p = sub.add_parser("com-scaling", help="COM negativity of two objects versus N")
    p.add_argument("--pattern", choices=("pairwise", "one-to-all"), required=True)
    p.add_argument("--n-list", type=_int_list, default=[1, 2, 4, 8])
    p.add_argument("--g0", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--temperature", type=_nonneg, default=0.0)
    p.add_argument("--critical", action="store_true", help="also compute the critical temperature")
    p.add_argument("--tol", type=float, default=1e-6)
    common(p)
    p.set_defaults(func=run_com_scaling)

    p = sub.add_parser("chain", help="negativity versus separation on a 1D lattice")
    p.add_argument("--topology", choices=("ring", "path"), default="ring")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--coupling", type=float, required=True)
    p.add_argument("--temperature", type=_nonneg, default=0.0)
    p.add_argument("--max-separation", type=int, default=5)
    p.add_argument("--onset", action="store_true", help="add the per-pair separability temperature")
    p.add_argument("--tol", type=float, default=1e-6)
    common(p)
    p.set_defaults(func=run_chain)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        columns, rows, extra = args.func(args)
        meta = _meta(args)
        meta.update(extra)
        _write(render(columns, rows, args.format, meta), args.out)
    except (OscnetError, OSError) as exc:
        print(f"oscnet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if "all_separable_above" in extra:
        print(f"all separations separable above T = {fmt(extra['all_separable_above'])}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
