"""Command-line interface.

Subcommands: to-spline, synth, eval, verify, normalize.  Exit codes:
0 success, 1 verification failure, 2 schema violation or bad range,
3 dimension mismatch, 4 interlacing violation, 5 activity failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import active_knots
from .core import (
    ActivityError,
    CoverageError,
    DegenerateFirstLayerError,
    DimensionMismatchError,
    InterlacingError,
    SynthesisOptions,
    Tolerances,
    knot_bound,
)
from .evaluate import eval_network, eval_spline, probe_grid
from .normalize import positive_scale_normalize
from .serialization import (
    SchemaError,
    detect_and_load,
    dump_json,
    hierarchy_from_obj,
    load_json,
    network_from_obj,
    network_to_obj,
    spline_from_obj,
    spline_to_obj,
    write_csv,
)
from .synth import (
    hierarchy_from_flat,
    prescribed_knots,
    synth_three_hidden,
    synth_two_hidden,
    synth_two_hidden_no_source,
)
from .transfer import dnn_to_spline
from .core import ReluNetwork

__all__ = ["main"]


def _add_tol_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--tol-zero", type=float, default=None, metavar="X",
                        help="absolute zero threshold (default 1e-10)")
    parser.add_argument("--tol-merge", type=float, default=None, metavar="X",
                        help="knot merge distance (default 1e-12)")
    parser.add_argument("--tol-eval", type=float, default=None, metavar="X",
                        help="relative comparison tolerance (default 1e-8)")


def _tolerances(args) -> Tolerances:
    defaults = Tolerances()
    return Tolerances(
        zero_tol=args.tol_zero if args.tol_zero is not None else defaults.zero_tol,
        merge_tol=args.tol_merge if args.tol_merge is not None else defaults.merge_tol,
        eval_tol=args.tol_eval if args.tol_eval is not None else defaults.eval_tol,
    )


def _parse_ints(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as err:
        raise SchemaError(f"{flag} must be comma-separated integers, got {text!r}") from err


def _parse_floats(text: str, flag: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",") if part != ""])
    except ValueError as err:
        raise SchemaError(f"{flag} must be comma-separated numbers, got {text!r}") from err


def _cmd_to_spline(args) -> int:
    tol = _tolerances(args)
    net = network_from_obj(load_json(args.network))
    spline = dnn_to_spline(net, tol)
    dump_json(args.out, spline_to_obj(spline))
    observed = len(active_knots(spline, tol))
    print(f"knots: observed={observed} bound={knot_bound(net.widths)}")
    return 0


def _cmd_synth(args) -> int:
    tol = _tolerances(args)
    obj = load_json(args.knots)
    opts = SynthesisOptions(
        seeds=_parse_floats(args.seeds, "--seeds") if args.seeds else None
    )
    rng = np.random.default_rng(args.seed)
    if "level1" in obj:
        hierarchy = hierarchy_from_obj(obj)
        flat = None
    elif "knots" in obj:
        if args.arch is None:
            raise SchemaError("--arch is required with a flat knots file")
        flat = np.asarray(obj["knots"], dtype=float)
        hierarchy = None
    else:
        raise SchemaError(f"{args.knots}: neither a hierarchy (level1) nor flat (knots)")

    if args.no_source:
        if flat is None:
            raise SchemaError("--no-source needs a flat knots file")
        arch = _parse_ints(args.arch, "--arch")
        if len(arch) != 2:
            raise SchemaError("--no-source takes --arch n1,n2")
        net = synth_two_hidden_no_source(flat, arch[0], arch[1], opts, tol)
        wanted = flat
    else:
        if hierarchy is None:
            arch = _parse_ints(args.arch, "--arch")
            if len(arch) == 2:
                hierarchy = hierarchy_from_flat(flat, arch[0], arch[1])
            elif len(arch) == 3:
                hierarchy = hierarchy_from_flat(flat, arch[0], arch[1], arch[2])
            else:
                raise SchemaError("--arch must be n1,n2 or n1,n2,n3")
        if hierarchy.level3 is None:
            net = synth_two_hidden(hierarchy, opts, tol)
        else:
            net = synth_three_hidden(hierarchy, opts, tol, rng=rng)
        wanted = prescribed_knots(hierarchy)

    spline = dnn_to_spline(net, tol)
    active = np.array([x for x, _ in active_knots(spline, tol)])
    missing = [
        float(x)
        for x in wanted
        if active.size == 0 or np.min(np.abs(active - x)) > 1e-9
    ]
    if missing:
        print(f"inactive prescribed knots: {missing}", file=sys.stderr)
        return 5
    dump_json(args.out, network_to_obj(net))
    print(f"prescribed knots active: {len(wanted)}/{len(wanted)}")
    return 0


def _cmd_eval(args) -> int:
    tol = _tolerances(args)
    del tol  # evaluation itself is tolerance-free; flags accepted for symmetry
    model = detect_and_load(args.file)
    if args.start >= args.stop:
        raise SchemaError("--from must be strictly below --to")
    if args.samples < 1:
        raise SchemaError("--samples must be at least 1")
    ts = np.linspace(args.start, args.stop, args.samples)
    values = eval_network(model, ts) if isinstance(model, ReluNetwork) else eval_spline(model, ts)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as stream:
            write_csv(stream, ts, values, header=args.header)
    else:
        write_csv(sys.stdout, ts, values, header=args.header)
    return 0


def _cmd_verify(args) -> int:
    tol = _tolerances(args)
    net = network_from_obj(load_json(args.network))
    recomputed = dnn_to_spline(net, tol)
    spline = spline_from_obj(load_json(args.spline)) if args.spline else recomputed
    merged = np.unique(np.concatenate((recomputed.knots, spline.knots)))
    grid = probe_grid(merged, margin=2.0, per_interval=3) if merged.size else probe_grid(merged)
    f = eval_network(net, grid)
    s = eval_spline(spline, grid)
    error = float(np.max(np.abs(f - s) / (1.0 + np.abs(f)))) if grid.size else 0.0
    observed = len(active_knots(recomputed, tol))
    bound = knot_bound(net.widths)
    ok = error <= tol.eval_tol and observed <= bound
    print(f"max relative error: {error:.3e}")
    print(f"knots: observed={observed} bound={bound} {'ok' if observed <= bound else 'EXCEEDED'}")
    return 0 if ok else 1


def _cmd_normalize(args) -> int:
    tol = _tolerances(args)
    net = network_from_obj(load_json(args.network))
    before = [np.sign(layer.c).tolist() for layer in net.layers[1:-1]]
    try:
        normalized = positive_scale_normalize(net, tol)
    except DegenerateFirstLayerError as err:
        print(f"warning: {err} (no normal form of equal width)", file=sys.stderr)
        return 1
    after = [np.sign(layer.c).tolist() for layer in normalized.layers[1:-1]]
    dump_json(args.out, network_to_obj(normalized))
    for i, (x, y) in enumerate(zip(before, after), start=2):
        print(f"layer {i} source signs: before {x} after {y}")
    if not before:
        print("no interior layers to normalize")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relusplines",
        description="Translate 1-D ReLU networks to piecewise-linear splines and back, "
        "and synthesize networks with prescribed breakpoints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("to-spline", help="convert a network file to its spline")
    p.add_argument("network", help="network JSON file")
    p.add_argument("-o", "--out", required=True, help="output spline JSON file")
    _add_tol_flags(p)
    p.set_defaults(func=_cmd_to_spline)

    p = sub.add_parser("synth", help="build a network with prescribed knots")
    p.add_argument("knots", help="hierarchy JSON or flat {\"knots\": [...]} file")
    p.add_argument("--arch", default=None, metavar="N1,N2[,N3]",
                   help="hidden widths when the knots file is flat")
    p.add_argument("--no-source", action="store_true",
                   help="force all source channels to zero (flat file, two widths)")
    p.add_argument("--seeds", default=None, metavar="S1,S2,...",
                   help="first-interval slopes for --no-source")
    p.add_argument("--seed", type=int, default=0, metavar="U",
                   help="seed for randomized retries")
    p.add_argument("-o", "--out", required=True, help="output network JSON file")
    _add_tol_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="sample a network or spline to CSV")
    p.add_argument("file", help="network or spline JSON file")
    p.add_argument("--from", dest="start", type=float, required=True, metavar="A")
    p.add_argument("--to", dest="stop", type=float, required=True, metavar="B")
    p.add_argument("--samples", type=int, required=True, metavar="N")
    p.add_argument("-o", "--out", default=None, help="CSV file (default stdout)")
    p.add_argument("--header", action="store_true", help="write a t,value header row")
    _add_tol_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("verify", help="check a network against a spline and the knot bound")
    p.add_argument("network", help="network JSON file")
    p.add_argument("spline", nargs="?", default=None,
                   help="spline JSON file (default: the network's own spline)")
    _add_tol_flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("normalize", help="rewrite with unit first layer and sign-only channels")
    p.add_argument("network", help="network JSON file")
    p.add_argument("-o", "--out", required=True, help="output network JSON file")
    _add_tol_flags(p)
    p.set_defaults(func=_cmd_normalize)
    return parser


def _fuse_seed_values(argv: list[str]) -> list[str]:
    """Glue ``--seeds -1,1`` into ``--seeds=-1,1``.

    argparse takes a leading dash in the value for an unknown flag; a comma
    list of signed numbers is the one value here that can start that way.
    """
    fused = []
    i = 0
    while i < len(argv):
        if argv[i] == "--seeds" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            fused.append(f"--seeds={argv[i + 1]}")
            i += 2
        else:
            fused.append(argv[i])
            i += 1
    return fused


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _build_parser().parse_args(_fuse_seed_values(argv))
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DimensionMismatchError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except InterlacingError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except (ActivityError, CoverageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 5
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
