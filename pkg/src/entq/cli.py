"""Command-line front end and the on-disk state file format.

Subcommands: gen, measure, verify, haar. Exit codes are stable: 0 success,
1 usage or file error, 2 verification failure.

State files are JSON with a version tag::

    {"format": "entq-state-v1", "d": 2, "n": 5,
     "amplitudes": [[re, im], ...]}          # dense, d**n entries, or
    {"format": "entq-state-v1", "d": 2, "n": 5,
     "sparse": {"00000": [re, im], ...}}     # base-d digit strings, site 1 first

Exactly one of "amplitudes"/"sparse" must be present. Digit strings use
0-9a-z, so the sparse form (and the basis family) supports d <= 36.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import scott
from .qstate import (
    QuditState,
    StateSpec,
    build,
    digits_to_index,
    index_to_digits,
)
from .reduce import purity_report

STATE_FORMAT = "entq-state-v1"
DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

DEFAULT_TOLERANCE = 1e-10


def _fmt(x: float) -> str:
    # 15 significant digits, banker's rounding; reproducible across platforms
    return format(float(x), ".15g")


# ---------------------------------------------------------------- state files


def _digit_string(index: int, d: int, n: int) -> str:
    return "".join(DIGIT_CHARS[v] for v in index_to_digits(index, d, n))


def _digit_string_to_index(text: str, d: int, n: int) -> int:
    if len(text) != n:
        raise ValueError(f"digit string {text!r} has length {len(text)}, expected {n}")
    values = []
    for ch in text:
        v = DIGIT_CHARS.find(ch.lower())
        if v < 0 or v >= d:
            raise ValueError(f"invalid base-{d} digit {ch!r} in {text!r}")
        values.append(v)
    return digits_to_index(values, d)


def _as_complex(value) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"expected a number or [re, im] pair, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def state_to_payload(state: QuditState, *, sparse: bool) -> dict:
    payload = {"format": STATE_FORMAT, "d": state.d, "n": state.n}
    if sparse:
        if state.d > len(DIGIT_CHARS):
            raise ValueError(f"sparse digit strings support d <= {len(DIGIT_CHARS)}")
        entries = {}
        for idx in np.flatnonzero(state.amplitudes):
            a = state.amplitudes[idx]
            entries[_digit_string(int(idx), state.d, state.n)] = [a.real, a.imag]
        payload["sparse"] = entries
    else:
        payload["amplitudes"] = [[a.real, a.imag] for a in state.amplitudes.tolist()]
    return payload


def payload_to_state(payload, *, normalize: bool = False) -> QuditState:
    if not isinstance(payload, dict):
        raise ValueError("state file must contain a JSON object")
    if payload.get("format") != STATE_FORMAT:
        raise ValueError(
            f"unsupported state file format {payload.get('format')!r}, "
            f"expected {STATE_FORMAT!r}"
        )
    try:
        d = int(payload["d"])
        n = int(payload["n"])
    except (KeyError, TypeError, ValueError):
        raise ValueError('state file needs integer "d" and "n" fields') from None
    has_dense = "amplitudes" in payload
    has_sparse = "sparse" in payload
    if has_dense == has_sparse:
        raise ValueError('state file needs exactly one of "amplitudes" or "sparse"')
    dim = d**n
    if has_dense:
        raw = payload["amplitudes"]
        if not isinstance(raw, list) or len(raw) != dim:
            raise ValueError(f"expected {dim} amplitude entries for d={d}, n={n}")
        amps = np.empty(dim, dtype=np.complex128)
        for i, value in enumerate(raw):
            amps[i] = _as_complex(value)
    else:
        raw = payload["sparse"]
        if not isinstance(raw, dict):
            raise ValueError('"sparse" must map digit strings to amplitudes')
        amps = np.zeros(dim, dtype=np.complex128)
        for key, value in raw.items():
            amps[_digit_string_to_index(key, d, n)] = _as_complex(value)
    return QuditState(d, n, amps, normalize=normalize)


def write_state_file(path, state: QuditState, *, sparse: bool) -> None:
    payload = state_to_payload(state, sparse=sparse)
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_state_file(path, *, normalize: bool = False) -> QuditState:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    try:
        return payload_to_state(payload, normalize=normalize)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


# ------------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1; argparse defaults to 2, which is reserved
    # for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_m_list(text: str, n: int) -> list[int]:
    if text.strip().lower() == "all":
        return list(range(1, n))
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"--m expects integers separated by commas, got {text!r}")
    if not values:
        raise ValueError("--m needs at least one subset size")
    for m in values:
        if not 1 <= m <= n - 1:
            raise ValueError(f"subset size {m} out of range 1..{n - 1}")
    return list(dict.fromkeys(values))


def _parse_site_amps(text: str, d: int, n: int) -> tuple:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--site-amps is not valid JSON ({exc})")
    if not isinstance(raw, list) or len(raw) != n:
        raise ValueError(f"--site-amps must be a JSON list of {n} site vectors")
    sites = []
    for vec in raw:
        if not isinstance(vec, list) or len(vec) != d:
            raise ValueError(f"each site vector needs {d} entries")
        sites.append(tuple(_as_complex(v) for v in vec))
    return tuple(sites)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="entq",
        description="Entanglement measures Q_m for qudit pure states.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    gen = sub.add_parser("gen", help="generate a state file")
    gen.add_argument(
        "--family",
        required=True,
        choices=("basis", "product", "ghz", "w", "haar"),
        help="state family",
    )
    gen.add_argument("--d", type=int, required=True, help="local dimension")
    gen.add_argument("--n", type=int, required=True, help="number of sites")
    gen.add_argument("--digits", help="basis digit string, site 1 first (basis only)")
    gen.add_argument(
        "--site-amps",
        help="JSON list of per-site amplitude vectors; entries are numbers "
        "or [re, im] pairs (product only)",
    )
    gen.add_argument("--seed", type=int, help="RNG seed (haar only)")
    gen.add_argument("-o", "--output", required=True, help="output path")
    gen.set_defaults(func=cmd_gen)

    measure = sub.add_parser("measure", help="compute Q_m from a state file")
    measure.add_argument("-i", "--input", required=True, help="state file path")
    measure.add_argument(
        "--m",
        default="all",
        help='comma-separated subset sizes, or "all" for 1..n-1 (default: all)',
    )
    measure.add_argument(
        "--per-subset", action="store_true", help="also list per-subset purities"
    )
    measure.add_argument(
        "--format", choices=("text", "csv", "json"), default="text", help="output format"
    )
    measure.add_argument(
        "--normalize",
        action="store_true",
        help="rescale the loaded state instead of rejecting off-norm files",
    )
    measure.add_argument(
        "--verify",
        action="store_true",
        help="append a complement-identity verification block",
    )
    measure.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_TOLERANCE,
        help="residual tolerance for --verify (default: %(default)g)",
    )
    measure.set_defaults(func=cmd_measure)

    verify = sub.add_parser(
        "verify", help="check the complement proportionality on a state file"
    )
    verify.add_argument("-i", "--input", required=True, help="state file path")
    verify.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_TOLERANCE,
        help="residual tolerance (default: %(default)g)",
    )
    verify.add_argument(
        "--normalize",
        action="store_true",
        help="rescale the loaded state instead of rejecting off-norm files",
    )
    verify.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    verify.set_defaults(func=cmd_verify)

    haar = sub.add_parser("haar", help="ensemble statistics over random states")
    haar.add_argument("--d", type=int, required=True, help="local dimension")
    haar.add_argument("--n", type=int, required=True, help="number of sites")
    haar.add_argument(
        "--m", required=True, help='comma-separated subset sizes, or "all"'
    )
    haar.add_argument("--samples", type=int, required=True, help="sample count")
    haar.add_argument("--seed", type=int, required=True, help="RNG seed")
    haar.add_argument(
        "--format", choices=("text", "csv", "json"), default="text", help="output format"
    )
    haar.set_defaults(func=cmd_haar)

    return parser


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> int:
    site_amps = None
    if args.family == "product":
        if args.site_amps is None:
            raise ValueError("family 'product' needs --site-amps")
        site_amps = _parse_site_amps(args.site_amps, args.d, args.n)
    spec = StateSpec(
        family=args.family,
        d=args.d,
        n=args.n,
        digits=args.digits,
        site_amplitudes=site_amps,
        seed=args.seed,
    )
    state = build(spec)
    sparse = args.family in ("basis", "ghz", "w")
    write_state_file(args.output, state, sparse=sparse)
    return EXIT_OK


def _verification_dict(report: scott.VerificationReport) -> dict:
    return {
        "tolerance": report.tolerance,
        "checks": [
            {
                "m": ch.m,
                "n_minus_m": report.n - ch.m,
                "q_m": ch.q_m,
                "q_complement": ch.q_complement,
                "coefficient": ch.coefficient,
                "predicted": ch.predicted,
                "residual": ch.residual,
            }
            for ch in report.checks
        ],
        "max_purity_residual": report.max_purity_residual,
        "passed": report.passed,
    }


def _print_verification_text(block: dict) -> None:
    print(f"{'m':>2}  {'n-m':>3}  {'Q_m':<20} {'Q_(n-m)':<20} "
          f"{'coefficient':<20} {'residual':<12}")
    for ch in block["checks"]:
        print(
            f"{ch['m']:>2}  {ch['n_minus_m']:>3}  {_fmt(ch['q_m']):<20} "
            f"{_fmt(ch['q_complement']):<20} {_fmt(ch['coefficient']):<20} "
            f"{_fmt(ch['residual']):<12}"
        )
    print(
        "max per-subset complement purity residual: "
        f"{_fmt(block['max_purity_residual'])}"
    )
    print(
        f"{'PASS' if block['passed'] else 'FAIL'} "
        f"(tolerance {_fmt(block['tolerance'])})"
    )


def cmd_measure(args) -> int:
    state = read_state_file(args.input, normalize=args.normalize)
    ms = _parse_m_list(args.m, state.n)
    half = state.n // 2
    rows = []
    per_subset = []
    for m in ms:
        report = purity_report(state, m)
        rows.append(
            {
                "m": m,
                "q": scott.qm_from_average(state.d, m, report.average),
                "average_purity": report.average,
                "subset_count": len(report.per_subset),
                "redundant": m > half,
            }
        )
        if args.per_subset:
            per_subset.extend(
                {"m": m, "sites": list(s.sites), "purity": value}
                for s, value in report.per_subset
            )
    out = {"input": str(args.input), "d": state.d, "n": state.n, "rows": rows}
    if args.per_subset:
        out["per_subset"] = per_subset

    code = EXIT_OK
    if args.verify:
        report = scott.verify_complement_relation(state, tolerance=args.tolerance)
        out["verification"] = _verification_dict(report)
        if not report.passed:
            code = EXIT_VIOLATION

    if args.format == "json":
        json.dump(out, sys.stdout, indent=2)
        print()
        return code

    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["m", "q_m", "average_purity", "subset_count", "redundant"])
        for r in rows:
            writer.writerow(
                [
                    r["m"],
                    _fmt(r["q"]),
                    _fmt(r["average_purity"]),
                    r["subset_count"],
                    "true" if r["redundant"] else "false",
                ]
            )
        if args.per_subset:
            print()
            writer.writerow(["m", "sites", "purity"])
            for row in per_subset:
                writer.writerow(
                    [row["m"], " ".join(map(str, row["sites"])), _fmt(row["purity"])]
                )
        if args.verify:
            print()
            writer.writerow(
                ["m", "n_minus_m", "q_m", "q_complement", "coefficient", "residual"]
            )
            for ch in out["verification"]["checks"]:
                writer.writerow(
                    [
                        ch["m"],
                        ch["n_minus_m"],
                        _fmt(ch["q_m"]),
                        _fmt(ch["q_complement"]),
                        _fmt(ch["coefficient"]),
                        _fmt(ch["residual"]),
                    ]
                )
        return code

    print(f"input: {out['input']}")
    print(f"d={out['d']} n={out['n']}")
    print(f"{'m':>2}  {'Q_m':<20} {'average_purity':<20} {'subsets':>8}  redundant")
    for r in rows:
        print(
            f"{r['m']:>2}  {_fmt(r['q']):<20} {_fmt(r['average_purity']):<20} "
            f"{r['subset_count']:>8}  {'yes' if r['redundant'] else 'no'}"
        )
    if args.per_subset:
        print("per-subset purities:")
        for row in per_subset:
            sites = ",".join(map(str, row["sites"]))
            print(f"  m={row['m']} sites={{{sites}}} purity={_fmt(row['purity'])}")
    if args.verify:
        print("verification:")
        _print_verification_text(out["verification"])
    return code


def cmd_verify(args) -> int:
    state = read_state_file(args.input, normalize=args.normalize)
    if state.n < 2:
        raise ValueError("verification needs at least two sites")
    report = scott.verify_complement_relation(state, tolerance=args.tolerance)
    block = _verification_dict(report)
    if args.format == "json":
        out = {"input": str(args.input), "d": state.d, "n": state.n}
        out.update(block)
        json.dump(out, sys.stdout, indent=2)
        print()
    else:
        print(f"input: {args.input}")
        print(f"d={state.d} n={state.n}")
        _print_verification_text(block)
    if not report.passed:
        print(
            "entq: complement identity violated; for pure states this indicates "
            "an implementation defect",
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_haar(args) -> int:
    ms = _parse_m_list(args.m, args.n)
    stats = scott.haar_statistics(args.d, args.n, ms, args.samples, args.seed)
    if args.format == "json":
        out = {
            "d": stats.d,
            "n": stats.n,
            "samples": stats.samples,
            "seed": stats.seed,
            "rows": [
                {"m": e.m, "mean": e.mean, "std": e.std, "stderr": e.stderr}
                for e in stats.entries
            ],
        }
        json.dump(out, sys.stdout, indent=2)
        print()
        return EXIT_OK
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["m", "mean", "std", "stderr", "samples", "seed"])
        for e in stats.entries:
            writer.writerow(
                [e.m, _fmt(e.mean), _fmt(e.std), _fmt(e.stderr), stats.samples, stats.seed]
            )
        return EXIT_OK
    print(f"d={stats.d} n={stats.n} samples={stats.samples} seed={stats.seed}")
    print(f"{'m':>2}  {'mean':<20} {'std':<20} {'stderr':<20}")
    for e in stats.entries:
        print(f"{e.m:>2}  {_fmt(e.mean):<20} {_fmt(e.std):<20} {_fmt(e.stderr):<20}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"entq: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
