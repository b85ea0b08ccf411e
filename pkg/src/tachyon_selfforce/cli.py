"""Command-line interface.

Subcommands: singular-betas, roots, force, sweep, refine, radius, plot.
Global flags (--digits, --cap, --threads, --config, --format, --output)
are accepted after any subcommand; a config file holds the same keys in
``key = value`` lines and explicit flags override it. Environment
variables are never consulted.

Exit codes: 0 success, 2 invalid arguments, 3 precision exhausted,
4 I/O failure. Diagnostics go to stderr; data files are never left
half-written with error text inside.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from mpmath import mpf

from .errors import InvalidBeta, PrecisionExhausted, TachyonError, ZeroZ
from .force import Model, self_force, z_of_beta
from .kinematics import PhysicalScale, Side, equilibrium_radius, vertex
from .nullshell import find_roots, singular_betas
from .precision import PrecisionContext, format_scalar, working_digits
from .records import (
    MalformedInput,
    SWEEP_HEADER,
    force_result_json,
    force_result_row,
    parse_sweep_csv,
    sweep_row_fields,
    sweep_row_json,
)
from .svgplot import DEFAULT_MARKER_COUNT, render_svg
from .sweep import Spacing, SweepSpec, refine_near_singularity, run_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_IO = 4

# Working precision rides this many digits above the stability target;
# the default target of 40 then evaluates at 64 digits.
WORKING_MARGIN = 24

DEFAULTS = {
    "digits": 40,
    "cap": 2000,
    "threads": 1,
    "output": None,
    "count": 15,
    "model": "fw",
    "points": 50,
    "spacing": "linear",
    "k": 1,
    "window": "1e-2",
    "depth": 8,
    "m0": "1",
    "q": "1",
    "c": "1",
    "series": "Z",
    "markers": DEFAULT_MARKER_COUNT,
    "title": None,
}

FORMAT_DEFAULTS = {
    "singular-betas": "csv",
    "roots": "csv",
    "force": "json",
    "sweep": "csv",
    "refine": "csv",
    "radius": "json",
    "plot": "svg",
}

MODEL_TOKENS = {
    "fw": Model.FEYNMAN_WHEELER,
    "feynman_wheeler": Model.FEYNMAN_WHEELER,
    "feynman-wheeler": Model.FEYNMAN_WHEELER,
    "causal": Model.CAUSAL,
}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help="stable decimal digits to produce (default 40)")
    common.add_argument("--cap", type=int, default=None,
                        help="precision escalation ceiling in digits (default 2000)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes for sweeps (default 1)")
    common.add_argument("--config", default=None,
                        help="key = value file mirroring the flags; flags win")
    common.add_argument("--format", dest="fmt", default=None,
                        choices=["csv", "json", "svg"])
    common.add_argument("--output", default=None,
                        help="output path (default: standard output)")

    parser = argparse.ArgumentParser(
        prog="tachyon-selfforce",
        description="Self-force of a charged tachyon on a circular "
                    "superluminal orbit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("singular-betas", parents=[common],
                       help="table of singular velocities")
    p.add_argument("--count", type=int, default=None)

    p = sub.add_parser("roots", parents=[common],
                       help="light-cone self-intersection delays")
    p.add_argument("--beta", required=True)

    p = sub.add_parser("force", parents=[common], help="self-force at one speed")
    p.add_argument("--beta", required=True)
    p.add_argument("--model", default=None, choices=sorted(MODEL_TOKENS))

    p = sub.add_parser("sweep", parents=[common], help="Z/epsilon over a beta grid")
    p.add_argument("--beta-min", required=True)
    p.add_argument("--beta-max", required=True)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--spacing", default=None, choices=["linear", "log"])
    p.add_argument("--model", default=None, choices=sorted(MODEL_TOKENS))

    p = sub.add_parser("refine", parents=[common],
                       help="fine sampling above a singular velocity")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--window", default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--model", default=None, choices=sorted(MODEL_TOKENS))

    p = sub.add_parser("radius", parents=[common],
                       help="equilibrium orbit radius from Z")
    p.add_argument("--beta", required=True)
    p.add_argument("--Z", dest="z_value", default=None,
                   help="radial force coefficient; computed when omitted")
    p.add_argument("--m0", default=None)
    p.add_argument("--q", default=None)
    p.add_argument("--c", default=None)

    p = sub.add_parser("plot", parents=[common], help="render a sweep CSV as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--series", default=None, choices=["Z", "epsilon"])
    p.add_argument("--markers", type=int, default=None)
    p.add_argument("--title", default=None)

    return parser


def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    config: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            config[key.strip().replace("-", "_")] = value.strip()
    return config


class _Options:
    """Flag values layered over config values over built-in defaults."""

    def __init__(self, args: argparse.Namespace, config: dict[str, str]):
        self._args = vars(args)
        self._config = config

    def get(self, key: str, convert=str):
        flag = self._args.get(key.replace("-", "_"))
        if flag is not None:
            return flag
        if key in self._config:
            raw = self._config[key]
            try:
                return convert(raw)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"config key {key}: {exc}") from exc
        value = DEFAULTS.get(key)
        return value if (value is None or convert is str) else convert(value)


def _context(options: _Options) -> PrecisionContext:
    digits = options.get("digits", int)
    cap = options.get("cap", int)
    if digits < 1:
        raise UsageError("--digits must be positive")
    working = digits + WORKING_MARGIN
    cap = max(cap, working)
    return PrecisionContext(
        working_digits=working, target_digits=digits, cap_digits=cap
    )


def _model(options: _Options) -> Model:
    token = options.get("model")
    try:
        return MODEL_TOKENS[token]
    except KeyError:
        raise UsageError(f"unknown model {token!r}") from None


def _parse_beta(raw: str, ctx: PrecisionContext):
    with working_digits(ctx.working_digits):
        try:
            return mpf(raw)
        except Exception:
            raise UsageError(f"not a number: {raw!r}") from None


@contextmanager
def _output_stream(path: str | None):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _emit_json(payload, stream) -> None:
    json.dump(payload, stream, indent=2)
    stream.write("\n")


def _csv_line(fields: list[str]) -> str:
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    _csv.writer(buf, lineterminator="\n").writerow(fields)
    return buf.getvalue()


def _cmd_singular_betas(options: _Options, fmt: str, stream) -> None:
    count = options.get("count", int)
    ctx = _context(options)
    table = singular_betas(count, ctx)
    digits = ctx.target_digits
    if fmt == "json":
        _emit_json(
            [
                {
                    "k": sv.index,
                    "phi": format_scalar(sv.phi, digits),
                    "beta": format_scalar(sv.beta, digits),
                }
                for sv in table
            ],
            stream,
        )
        return
    stream.write("k,phi,beta\n")
    for sv in table:
        stream.write(
            f"{sv.index},{format_scalar(sv.phi, digits)},"
            f"{format_scalar(sv.beta, digits)}\n"
        )


def _cmd_roots(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    beta = _parse_beta(args.beta, ctx)
    roots = find_roots(beta, ctx)
    digits = ctx.target_digits
    records = []
    with working_digits(ctx.working_digits):
        for i, root in enumerate(roots, start=1):
            K = vertex(beta, root, Side.RETARDED).K
            records.append(
                {
                    "index": i,
                    "tau": format_scalar(root.tau, digits),
                    "phi": format_scalar(root.phi, digits),
                    "K": format_scalar(K, digits),
                    "multiplicity": root.multiplicity_hint.value,
                }
            )
    if fmt == "json":
        _emit_json(records, stream)
        return
    stream.write("index,tau,phi,K,multiplicity\n")
    for r in records:
        stream.write(
            f"{r['index']},{r['tau']},{r['phi']},{r['K']},{r['multiplicity']}\n"
        )


def _cmd_force(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    beta = _parse_beta(args.beta, ctx)
    result = self_force(beta, _model(options), ctx)
    if fmt == "json":
        _emit_json(force_result_json(result), stream)
        return
    stream.write(_csv_line(SWEEP_HEADER))
    stream.write(_csv_line(sweep_row_fields(force_result_row(result))))


def _cmd_sweep(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    spec = SweepSpec(
        beta_min=_parse_beta(args.beta_min, ctx),
        beta_max=_parse_beta(args.beta_max, ctx),
        points=options.get("points", int),
        spacing=Spacing(options.get("spacing")),
        model=_model(options),
        ctx=ctx,
    )
    workers = options.get("threads", int)
    rows = run_sweep(spec, workers=workers)
    if fmt == "json":
        _emit_json([sweep_row_json(row) for row in rows], stream)
        return
    stream.write(_csv_line(SWEEP_HEADER))
    stream.flush()
    for row in rows:  # stream rows as they are computed
        stream.write(_csv_line(sweep_row_fields(row)))
        stream.flush()


def _cmd_refine(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    window = _parse_beta(options.get("window"), ctx)
    try:
        rows, summary = refine_near_singularity(
            k=options.get("k", int),
            window=window,
            max_depth=options.get("depth", int),
            ctx=ctx,
            model=_model(options),
            workers=options.get("threads", int),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if fmt == "json":
        _emit_json([sweep_row_json(row) for row in rows], stream)
    else:
        stream.write(_csv_line(SWEEP_HEADER))
        for row in rows:
            stream.write(_csv_line(sweep_row_fields(row)))
    max_abs = (
        format_scalar(summary.max_abs_Z, ctx.target_digits)
        if summary.max_abs_Z is not None
        else None
    )
    print(
        f"refine summary: sign_changes={summary.sign_changes} max_abs_Z={max_abs}",
        file=sys.stderr,
    )


def _cmd_radius(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    beta = _parse_beta(args.beta, ctx)
    scale = PhysicalScale(
        q=_parse_beta(options.get("q"), ctx),
        m0=_parse_beta(options.get("m0"), ctx),
        c=_parse_beta(options.get("c"), ctx),
    )
    if args.z_value is not None:
        z = _parse_beta(args.z_value, ctx)
    else:
        z = z_of_beta(beta, ctx)
    with working_digits(ctx.working_digits):
        radius, dynamics = equilibrium_radius(
            beta, scale, z, achieved_digits=ctx.target_digits
        )
    payload = {
        "beta": format_scalar(beta, ctx.target_digits),
        "Z": format_scalar(z, ctx.target_digits),
        "radius": format_scalar(radius, ctx.target_digits),
        "dynamics": dynamics.value,
    }
    if fmt == "csv":
        stream.write("beta,Z,radius,dynamics\n")
        stream.write(
            f"{payload['beta']},{payload['Z']},{payload['radius']},"
            f"{payload['dynamics']}\n"
        )
        return
    _emit_json(payload, stream)


def _cmd_plot(options: _Options, fmt: str, stream, args) -> None:
    ctx = _context(options)
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {args.input}: {exc}") from exc
    rows = parse_sweep_csv(text)
    svg = render_svg(
        rows,
        series=options.get("series"),
        title=options.get("title"),
        marker_count=options.get("markers", int),
        ctx=ctx,
    )
    stream.write(svg)


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        options = _Options(args, config)
        fmt = options.get("fmt") or FORMAT_DEFAULTS[args.command]
        if fmt == "svg" and args.command != "plot":
            raise UsageError("--format svg is only valid for the plot subcommand")
        if args.command == "plot" and fmt != "svg":
            raise UsageError("the plot subcommand only emits svg")

        output_path = options.get("output")
        try:
            with _output_stream(output_path) as stream:
                if args.command == "singular-betas":
                    _cmd_singular_betas(options, fmt, stream)
                elif args.command == "roots":
                    _cmd_roots(options, fmt, stream, args)
                elif args.command == "force":
                    _cmd_force(options, fmt, stream, args)
                elif args.command == "sweep":
                    _cmd_sweep(options, fmt, stream, args)
                elif args.command == "refine":
                    _cmd_refine(options, fmt, stream, args)
                elif args.command == "radius":
                    _cmd_radius(options, fmt, stream, args)
                elif args.command == "plot":
                    _cmd_plot(options, fmt, stream, args)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidBeta, ZeroZ, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TachyonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
