"""Command-line front end.

Subcommands: convert, spectrum, husimi, transition, search, cg-table,
catalog.  Structured objects travel as JSON, grids and sweeps as CSV with
17-significant-digit numbers.  Every output file is written atomically
(temp file in the target directory, then rename), so a crashed run never
leaves a truncated file behind.  Exit codes: 0 success, 1 domain error
(bad input file, failed validation), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .analysis import catalog_get, max_multipole_search
from .angular import cg_exact
from .convert import (
    constellation_from_state,
    husimi_grid,
    state_from_constellation,
)
from .core import (
    DomainError,
    SpinLabel,
    constellation_from_dict,
    constellation_to_dict,
    state_from_dict,
    state_to_dict,
)
from .multipoles import exact_multipole_lengths, multipoles_from_state
from .transitions import transition_sweep

_TRANSITION_KIND = {
    "ring": "ring",
    "spread": "spread_unidirectional",
    "spread-sym": "spread_symmetric",
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _write_json(path: str, payload: dict) -> None:
    _write_atomic(path, json.dumps(payload, indent=1) + "\n")


def _write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(cells) for cells in rows)
    _write_atomic(path, "\n".join(lines) + "\n")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


def _load_state(path: str):
    """State from either representation file (amps, or stars to assemble)."""
    data = _load_json(path)
    if "amps" in data:
        return state_from_dict(data)
    if "stars" in data:
        return state_from_constellation(constellation_from_dict(data))
    raise DomainError(f"{path} has neither 'amps' nor 'stars'")


#### subcommand handlers


def _cmd_convert(args) -> int:
    data = _load_json(args.infile)
    if args.to == "constellation":
        if "stars" in data:
            payload = constellation_to_dict(constellation_from_dict(data))
        else:
            payload = constellation_to_dict(constellation_from_state(state_from_dict(data)))
    else:
        payload = state_to_dict(_load_state(args.infile))
    _write_json(args.out, payload)
    return 0


def _exact_summary(state) -> list[Fraction]:
    pairs = [(Fraction(a.real), Fraction(a.imag)) for a in state.amps]
    return exact_multipole_lengths(state.spin.two_s, pairs)


def _cmd_spectrum(args) -> int:
    state = _load_state(args.infile)
    spec = multipoles_from_state(state)
    if args.exact:
        lengths = _exact_summary(state)
        if args.normalize_excluding_monopole:
            tail = sum(lengths[1:])
            lengths = lengths[:1] + [v / tail for v in lengths[1:]]
        values = [float(v) for v in lengths]
    else:
        values = list(spec.lengths_sq())
        if args.normalize_excluding_monopole:
            tail = sum(values[1:])
            values = values[:1] + [v / tail for v in values[1:]]
    _write_csv(
        args.out,
        "K,rho_sq",
        ([str(k), _fmt(v)] for k, v in enumerate(values)),
    )
    if args.components_out:
        rows = (
            [str(k), str(q), _fmt(val.real), _fmt(val.imag)]
            for (k, q), val in sorted(spec.components.items())
        )
        _write_csv(args.components_out, "K,q,re,im", rows)
    return 0


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise DomainError(f"grid must look like 181x360, got {text!r}") from exc


def _cmd_husimi(args) -> int:
    state = _load_state(args.infile)
    n_theta, n_phi = _parse_grid(args.grid)
    thetas, phis, q = husimi_grid(state, n_theta, n_phi)

    def rows():
        for i, theta in enumerate(thetas):
            for j, phi in enumerate(phis):
                yield [_fmt(theta), _fmt(phi), _fmt(q[i, j])]

    _write_csv(args.out, "theta,phi,Q", rows())
    return 0


def _cmd_transition(args) -> int:
    rows = transition_sweep(
        _TRANSITION_KIND[args.kind], SpinLabel(args.two_s), args.samples
    )
    _write_csv(
        args.out,
        "param,K,rho_sq_pipeline,rho_sq_closed_form",
        ([_fmt(p), str(k), _fmt(a), _fmt(b)] for p, k, a, b in rows),
    )
    return 0


def _cmd_search(args) -> int:
    result = max_multipole_search(
        SpinLabel(args.two_s),
        args.samples,
        seed=args.seed,
        sampler=args.sampler,
        threads=args.threads,
    )
    _write_json(args.out, result.to_json())
    return 0


def _cmd_cg_table(args) -> int:
    two_s = args.two_s

    def rows():
        for two_k in range(0, 2 * two_s + 1, 2):
            for two_q in range(-two_k, two_k + 1, 2):
                for two_m in range(-two_s, two_s + 1, 2):
                    if abs(two_m + two_q) > two_s:
                        continue
                    val = cg_exact(two_s, two_m, two_k, two_q, two_s, two_m + two_q)
                    yield [
                        str(two_s),
                        str(two_m),
                        str(two_k),
                        str(two_q),
                        _fmt(val.float_value),
                    ]

    _write_csv(args.out, "two_s,two_m,two_k,two_q,value", rows())
    return 0


def _cmd_catalog(args) -> int:
    named = catalog_get(args.name, SpinLabel(args.two_s))
    _write_json(args.out, state_to_dict(named.state))
    return 0


#### parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinmultipoles",
        description="Convert spin states between amplitude, star, and multipole "
        "representations, and run the bundled analyses.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("convert", help="rewrite a state/constellation file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--to", choices=("state", "constellation"), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("spectrum", help="multipole lengths of a state file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="summary CSV (K,rho_sq)")
    p.add_argument(
        "--components-out", default=None, help="also write the raw components (K,q,re,im)"
    )
    p.add_argument(
        "--normalize-excluding-monopole",
        action="store_true",
        help="rescale the K >= 1 summary entries to sum to 1",
    )
    p.add_argument(
        "--exact",
        action="store_true",
        help="big-rational evaluation (works when amplitude ratios are rational "
        "with square-free compatible couplings; errors out otherwise)",
    )
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("husimi", help="phase-space density on an angular grid")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--grid", default="181x360", help="n_theta x n_phi (default 181x360)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_husimi)

    p = sub.add_parser("transition", help="closed form vs pipeline along a family")
    p.add_argument("--kind", choices=tuple(_TRANSITION_KIND), required=True)
    p.add_argument("--two-s", dest="two_s", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_transition)

    p = sub.add_parser("search", help="maximal multipole lengths over random states")
    p.add_argument("--two-s", dest="two_s", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sampler", choices=("haar", "stars"), default="haar")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("cg-table", help="coupling table for golden-file testing")
    p.add_argument("--two-s", dest="two_s", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cg_table)

    p = sub.add_parser("catalog", help="write a named reference state")
    p.add_argument("--name", required=True, help="coherent(z0) | noon | basis(m) | king")
    p.add_argument("--two-s", dest="two_s", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
