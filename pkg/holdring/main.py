import argparse
import json
import logging
import traceback
from pathlib import Path
from typing import List, Optional

from .actions.analysis import (
    INVALID,
    VALID,
    attractor_test,
    check_bounds,
    degree_table,
    plus_one_growth,
    search_quadratic,
)
from .actions.carry import add, add_mod, mul, mul_mod
from .actions.catalog import all_bindings, export_catalog, get_binding
from .actions.digits import format_digits, parse_digits
from .actions.embed import SystemBinding, decode, encode_text
from .actions.helpers import HoldringError
from .actions.quotients import structure_probe
from .actions.render import FIGURES, figure_preset, render_figure, render_tile, save_image
from .actions.ring import format_element

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


def _emit(args, text: str, record: Optional[dict] = None):
    if args.json and record is not None:
        print(json.dumps(record, indent=4))
    else:
        print(text)


def _binding(args) -> SystemBinding:
    if args.system is None:
        raise HoldringError(f"The '{args.command}' command needs --system.  Try the 'catalog' command for names.")
    return get_binding(args.system)


def do_encode(args) -> int:
    bind = _binding(args)
    digits = encode_text(args.element, bind, args.cap)
    _emit(args, format_digits(digits), {"system": bind.name, "element": args.element, "digits": str(digits)})
    return EXIT_OK


def do_decode(args) -> int:
    bind = _binding(args)
    z = decode(args.digits, bind)
    _emit(args, format_element(z), {"system": bind.name, "digits": args.digits, "element": format_element(z)})
    return EXIT_OK


def do_arithmetic(args) -> int:
    bind = _binding(args)
    a = parse_digits(args.a, bind.n)
    b = parse_digits(args.b, bind.n)
    if args.command == "add":
        if args.mod is not None:
            result = add_mod(a, b, args.mod, bind.system, faithful=args.faithful)
        else:
            result = add(a, b, bind.system, args.cap)
    else:
        if args.mod is not None:
            result = mul_mod(a, b, args.mod, bind.system)
        else:
            result = mul(a, b, bind.system, args.cap)
    _emit(
        args,
        format_digits(result),
        {
            "system": bind.name,
            "operation": args.command,
            "a": args.a,
            "b": args.b,
            "mod": args.mod,
            "result": str(result),
        },
    )
    return EXIT_OK


def do_quotient(args) -> int:
    bind = _binding(args)
    result = structure_probe(bind.system, args.m, n_parallel=args.parallel, progress=args.progress)
    print(json.dumps(result.to_json(), indent=4))
    return EXIT_OK


def do_validate(args) -> int:
    bind = _binding(args)
    report = attractor_test(bind, args.bound, progress=args.progress)
    growth = None
    if args.growth:
        growth = plus_one_growth(bind, args.growth, args.max_degree, seed=args.seed, limit=args.growth_limit)
        if growth.bound_violations or growth.side_violations:
            report.verdict = INVALID
    record = report.to_json()
    text = report.summary()
    if growth is not None:
        record["plus_one_growth"] = {
            "trials": growth.trials,
            "limit": growth.limit,
            "max_growth": growth.max_growth if growth.max_growth != float("-inf") else None,
            "counts": growth.growth_counts,
            "bound_violations": len(growth.bound_violations),
            "side_violations": len(growth.side_violations),
        }
        text += (
            f"\n\tz+1 degree growth over {growth.trials} strings: max {growth.max_growth},"
            f" {len(growth.bound_violations)} over the limit, {len(growth.side_violations)} side-condition violations"
        )
    _emit(args, text, record)
    if args.expect_valid and report.verdict != VALID:
        logger.error(f"System '{bind.name}' was expected to be valid but is {report.verdict}.")
        return EXIT_DOMAIN_ERROR
    return EXIT_OK


def do_search(args) -> int:
    results = search_quadratic(args.n, args.bound, canonical=not args.all, progress=args.progress)
    _emit(args, "\n".join(r.describe() for r in results), {"n": args.n, "generators": [r.to_json() for r in results]})
    return EXIT_OK


def do_table(args) -> int:
    rows = degree_table(args.max)
    text = "\n".join(f"{d}\t[{lo}, {hi}]" for d, lo, hi in rows)
    _emit(args, text, {"rows": [{"degree": d, "min": lo, "max": hi} for d, lo, hi in rows]})
    return EXIT_OK


def do_bounds(args) -> int:
    report = check_bounds(args.z_max, args.d_max)
    lines = [
        f"{report.checked} integers with 0 < |z| <= {report.z_max}: max degree {report.max_degree},"
        f" {len(report.violations)} violations of degree <= log2(3|z|+2)+1"
    ]
    for d, lo, hi, exact in report.cumulative:
        lines.append(f"degree <= {d}\t[{lo}, {hi}]\t{'exact' if exact else 'MISMATCH'}")
    _emit(args, "\n".join(lines), report.to_json())
    return EXIT_OK if report.passed else EXIT_DOMAIN_ERROR


def do_tile(args) -> int:
    if args.figure is not None:
        return _tile_figures(args)
    if args.degree is None:
        raise HoldringError("The 'tile' command needs --degree, or --figure for a preset.")
    bind = _binding(args)
    image, _ = render_tile(bind, args.degree, size=args.size, domain=args.domain, rescale=args.rescale)
    save_image(image, Path(args.out))
    _emit(
        args,
        f"{bind.name} degree <= {args.degree}: {image.point_count} points, {image.occupied()} pixels set,"
        f" {image.clipped} clipped -> {args.out}",
        image.meta(),
    )
    return EXIT_OK


def _tile_figures(args) -> int:
    """--figure NAME writes one preset to --out; --figure all treats --out as a directory of .ppm files."""
    out = Path(args.out)
    if args.figure == "all":
        out.mkdir(parents=True, exist_ok=True)
        targets = [(preset, out / f"{preset.name}.ppm") for preset in FIGURES]
    else:
        targets = [(figure_preset(args.figure), out)]
    lines = []
    records = []
    for preset, target in targets:
        image = render_figure(preset, args.size)
        save_image(image, target)
        lines.append(f"{preset.name}: {image.point_count} points, {image.occupied()} pixels set -> {target}")
        records.append({"figure": preset.name, "caption": preset.caption, **image.meta()})
    _emit(args, "\n".join(lines), {"figures": records})
    return EXIT_OK


def do_catalog(args) -> int:
    if args.export is not None:
        export_catalog(Path(args.export))
    bindings = all_bindings()
    lines = []
    records = []
    for name, bind in bindings.items():
        x_text = format_element(bind.x)
        lines.append(f"{name:<16} {str(bind.order):<38} X = {x_text:<6} {bind.system.describe()}")
        records.append({"name": name, "n": bind.n, "order": str(bind.order), "x": x_text})
    _emit(args, "\n".join(lines), {"systems": records})
    return EXIT_OK


def _common(parser: argparse.ArgumentParser, system: bool = True):
    if system:
        parser.add_argument("--system", type=str, default=None, help="Name of the number system (see 'catalog').")
    parser.add_argument("--json", action="store_true", help="Write structured output as JSON.")
    parser.add_argument("--cap", type=int, default=None, help="Position cap for untruncated carry processes.")
    parser.add_argument("--seed", type=int, default=0, help="Seed for randomized checks.")
    parser.add_argument("--parallel", type=int, default=1, help="Number of threads where supported.")
    parser.add_argument("--no-progress", dest="progress", action="store_false", help="Hide progress bars.")
    parser.add_argument("-v", "--v", action="store_true", help="Increase verbosity.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holdring",
        description="Exact arithmetic with digit strings whose addition is determined by a hold map",
        epilog="Digit strings are little-endian and comma-separated, e.g. 1,0,1.  Use '--' before a"
        + " positional argument that starts with '-', e.g.: add --system bal3 -- -1,1 1",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")

    p = commands.add_parser("encode", help="Digits of a ring element (syntax a+b*w).")
    _common(p)
    p.add_argument("element", type=str)
    p.set_defaults(handler=do_encode)

    p = commands.add_parser("decode", help="Ring element of a digit string.")
    _common(p)
    p.add_argument("digits", type=str)
    p.set_defaults(handler=do_decode)

    for name in ("add", "mul"):
        p = commands.add_parser(name, help=f"{'Sum' if name == 'add' else 'Product'} of two digit strings.")
        _common(p)
        p.add_argument("a", type=str)
        p.add_argument("b", type=str)
        p.add_argument("--mod", type=int, default=None, help="Work modulo X^M.")
        if name == "add":
            p.add_argument("--faithful", action="store_true", help="Use the carry-list algorithm (with --mod).")
        else:
            p.set_defaults(faithful=False)
        p.set_defaults(handler=do_arithmetic)

    p = commands.add_parser("quotient", help="Additive-order histogram of R/X^m as JSON.")
    _common(p)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(handler=do_quotient)

    p = commands.add_parser("validate", help="Attractor test of a system.")
    _common(p)
    p.add_argument("--bound", type=int, default=60, help="Half-width of the witness box.")
    p.add_argument("--expect-valid", action="store_true", help="Exit with 1 unless the verdict is valid.")
    p.add_argument("--growth", type=int, default=0, metavar="TRIALS", help="Also measure z+1 degree growth.")
    p.add_argument("--max-degree", type=int, default=12, help="Degree of the random strings for --growth.")
    p.add_argument(
        "--growth-limit", type=int, default=None, help="Largest allowed z+1 degree growth (default: known per system)."
    )
    p.set_defaults(handler=do_validate)

    p = commands.add_parser("search", help="Quadratic generators for digits mu_{n,+}.")
    _common(p, system=False)
    p.add_argument("--n", type=int, choices=(1, 2), required=True)
    p.add_argument("--bound", type=int, default=60)
    p.add_argument("--all", action="store_true", help="List every validated root, not one per field.")
    p.set_defaults(handler=do_search)

    p = commands.add_parser("table", help="Value ranges of negabinary strings by degree.")
    _common(p, system=False)
    p.add_argument("--max", type=int, default=6)
    p.set_defaults(handler=do_table)

    p = commands.add_parser("bounds", help="Negabinary degree bound and cumulative ranges.")
    _common(p, system=False)
    p.add_argument("--z-max", type=int, default=10**4)
    p.add_argument("--d-max", type=int, default=12)
    p.set_defaults(handler=do_bounds)

    p = commands.add_parser("tile", help="Render the values of all strings of degree <= D.")
    _common(p)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--out", type=str, required=True, help="Output file (.ppm, .png or .svg).")
    p.add_argument(
        "--figure",
        type=str,
        default=None,
        choices=[preset.name for preset in FIGURES] + ["all"],
        help="Render a named preset instead of --system/--degree; \"all\" writes every preset into the --out directory.",
    )
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--domain", action="store_true", help="Draw the cells p + F instead of points.")
    p.add_argument("--rescale", action="store_true", help="Scale by X^-D.")
    p.set_defaults(handler=do_tile)

    p = commands.add_parser("catalog", help="List the known systems.")
    _common(p, system=False)
    p.add_argument("--export", type=str, default=None, metavar="FILE", help="Write the catalog as JSON.")
    p.set_defaults(handler=do_catalog)

    return parser


def main(args: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(args)
    except SystemExit as ex:
        return EXIT_OK if ex.code in (0, None) else EXIT_USAGE

    if getattr(args, "command", None) is None:
        parser.print_usage()
        print("No command was recognized on the command-line.")
        return EXIT_USAGE

    if args.v:
        for handler in logging.getLogger().handlers:
            if isinstance(handler, logging.StreamHandler):
                handler.setLevel(logging.DEBUG)
        logging.getLogger().setLevel(logging.DEBUG)
        logger.setLevel(logging.DEBUG)
        logger.debug(f"Debug-level verbosity enabled.")

    try:
        return args.handler(args)
    except HoldringError as ex:
        print(str(ex))
        logger.debug(traceback.format_exc())
        return EXIT_DOMAIN_ERROR
    except Exception as ex:
        print(str(ex))
        logger.error(traceback.format_exc())
        return EXIT_DOMAIN_ERROR
