import argparse
import os
import sys
from typing import Sequence

import numpy as np

from qtomo import TomographyClient
from qtomo.config import Config
from qtomo.lib import constants
from qtomo.lib.exceptions import InvalidGridException, StateConstructionException, TomographyException
from qtomo.lib.grid import Axis, make_axis
from qtomo.lib.logger import SDKLogger
from qtomo.lib.utils import Utils
from qtomo.lib.version import ClientVersion
from qtomo.services import fidelity, states, transforms
from qtomo.services.selftest import run_selftest

logger = SDKLogger.getLogger("qtcli")


def describe_axes(axes: Sequence[Axis]) -> str:
    parts = []
    for axis in axes:
        origin = f"extent={-axis.min!r}" if axis.is_symmetric else f"min={axis.min!r}"
        parts.append(f"[{origin} step={axis.step!r} count={axis.count}]")
    return " x ".join(parts)


def provenance(args, client: TomographyClient, axes: Sequence[Axis], normalization=None):
    """Header printed before every report. `axes` are the grid of the input being processed."""
    print(f"# qtomo {ClientVersion.version()}")
    print(f"# command: {' '.join(args.argv)}")
    print(f"# grid: {describe_axes(axes)}")
    print(f"# angles={client.angles} oversampling={client.oversampling} threads={client.threads}")
    print(
        f"# tolerances: imaginary_residue={constants.imaginary_residue_tolerance} "
        f"hermitian={constants.hermitian_tolerance} norm={constants.norm_tolerance} "
        f"singular_sine={constants.singular_sine}"
    )
    if normalization is not None:
        print(f"# normalization_constant: {normalization!r}")


def report_written(path: str, digest: str):
    print(f"wrote {path} xxh64={digest}")


def _write(args, client, path, value):
    report_written(path, client.files.write(path, value, replace=args.replace, csv=args.csv))


def _mixture(args, client):
    parts = []
    for spec in args.params:
        weight, _, path = spec.partition(":")
        if not path:
            raise StateConstructionException(message=f"Mixture parts look like WEIGHT:FILE, got {spec!r}")
        try:
            weight = float(weight)
        except ValueError:
            raise StateConstructionException(message=f"Cannot parse mixture weight {weight!r} in {spec!r}")
        parts.append((weight, client.files.read_kernel(path)))
    return states.mix(parts, allow_negative=args.allow_negative)


def cmd_state(args, client):
    axis = make_axis(args.extent, args.count)

    if args.kind == "mix":
        kernel = _mixture(args, client)
        provenance(args, client, kernel.field.axes)
        print(f"trace {kernel.trace().real!r}")
        print(f"hermitian {kernel.hermitian}")
        _write(args, client, args.output, kernel)
        return constants.exit_ok

    if len(args.params) != 1:
        raise InvalidGridException(message=f"'state {args.kind}' takes exactly one parameter")
    value = args.params[0]
    try:
        if args.kind == "fock":
            state = states.fock_state(int(value), axis)
        elif args.kind == "coherent":
            state = states.coherent_state(complex(value.replace("i", "j")), axis)
        else:
            state = states.box_state(float(value), axis)
    except ValueError:
        raise StateConstructionException(message=f"Cannot parse {value!r} as a {args.kind} parameter")

    provenance(args, client, [axis])
    print(f"norm {state.norm()!r}")
    if args.kernel:
        kernel = states.pure_kernel(state)
        print(f"trace {kernel.trace().real!r}")
        _write(args, client, args.output, kernel)
    else:
        print("trace 1.0")
        _write(args, client, args.output, state)
    return constants.exit_ok


def cmd_char(args, client):
    kernel = client.files.read_kernel(args.input)
    provenance(args, client, kernel.field.axes)
    cf = client.transforms.char(kernel)
    print(f"f(0,0) {cf.value_at_origin()!r}")
    _write(args, client, args.output, cf)
    return constants.exit_ok


def cmd_wigner(args, client):
    if args.source == "char":
        cf = client.files.read_char(args.input)
        provenance(args, client, cf.field.axes)
        w = transforms.wigner_from_char(cf)
    else:
        kernel = client.files.read_kernel(args.input)
        provenance(args, client, kernel.field.axes)
        w = client.transforms.wigner(kernel)
    print(f"max |Im W| {float(np.max(np.abs(w.w.imag)))!r}")
    print(f"integral {float(w.field.data.sum().real * w.field.cell_volume)!r}")
    _write(args, client, args.output, w)
    return constants.exit_ok


def cmd_frft(args, client):
    source = client.files.read_state(args.input)
    provenance(args, client, source.field.axes)
    state = transforms.frft(source, args.alpha)
    print(f"norm {state.norm()!r}")
    _write(args, client, args.output, state)
    return constants.exit_ok


def _gate(client, kernel):
    passed, _ = client.sobolev.v_gate(kernel)
    print(f"v_gate {passed}")


def cmd_tomogram(args, client):
    kernel = client.files.read_kernel(args.input)
    provenance(args, client, kernel.field.axes)
    _gate(client, kernel)

    routes = ["char", "wigner", "rotate"] if args.route == "all" else [args.route]
    toms = {}
    for route in routes:
        if route == "char":
            toms[route] = client.tomography.from_char(client.transforms.char(kernel))
        elif route == "wigner":
            toms[route] = client.tomography.from_wigner(client.transforms.wigner(kernel))
        else:
            toms[route] = client.tomography.from_kernel(kernel)

        path = f"{args.output}-{route}.qtg" if len(routes) > 1 else _with_extension(args.output, ".qtg")
        report_written(path, client.files.write_tomogram(path, toms[route], replace=args.replace, csv=args.csv))
        print(f"{route} normalization max deviation {float(np.max(np.abs(toms[route].normalization() - 1.0)))!r}")

    if len(routes) > 1:
        deviation = max(
            float(np.max(np.abs(toms[a].omega - toms[b].omega)))
            for i, a in enumerate(routes)
            for b in routes[i + 1:]
        )
        print(f"max pairwise deviation {deviation!r}")
    return constants.exit_ok


def _with_extension(path: str, extension: str) -> str:
    return path if os.path.splitext(path)[1] else path + extension


def cmd_reconstruct(args, client):
    tom = client.files.read_tomogram(args.input)
    provenance(args, client, [tom.x_axis])
    kernel = client.tomography.reconstruct(tom)
    print(f"trace {kernel.trace().real!r}")
    if args.compare:
        reference = client.files.read_kernel(args.compare)
        print(f"relative L2 {Utils.relative_l2(kernel.rho, reference.rho)!r}")
    _write(args, client, args.output, kernel)
    return constants.exit_ok


def cmd_fidelity(args, client):
    k1 = client.files.read_kernel(args.first)
    k2 = client.files.read_kernel(args.second)
    routes = list(fidelity.Route) if args.route == "all" else [fidelity.Route.parse(args.route)]

    normalization = None
    if any(route is not fidelity.Route.DIRECT for route in routes):
        normalization = client.fidelity.calibration().constant
    provenance(args, client, k1.field.axes, normalization)

    results = []
    for route in routes:
        if route is fidelity.Route.DIRECT:
            result = client.fidelity.direct(k1, k2)
        elif route is fidelity.Route.CHARACTERISTIC:
            result = client.fidelity.char(client.transforms.char(k1), client.transforms.char(k2))
        else:
            t1 = client.tomography.from_char(client.transforms.char(k1))
            t2 = client.tomography.from_char(client.transforms.char(k2))
            result = client.fidelity.tomographic(t1, t2)
        results.append(result)
        print(f"{result.route.value} {result.value!r} normalization_constant={result.normalization_constant!r}")

    for i, a in enumerate(results):
        for b in results[i + 1:]:
            print(f"deviation {a.route.value}-{b.route.value} {abs(a.value - b.value)!r}")
    return constants.exit_ok


def cmd_regularity(args, client):
    field = client.files.read_field(args.input)
    provenance(args, client, field.axes)
    report = client.sobolev.report(field, args.nu, args.refinements)
    for line in report.json_lines():
        print(line)
    return constants.exit_ok


def cmd_selftest(args, client):
    provenance(args, client, [client.axis])
    results = run_selftest(args.workdir, client.threads, client.progress)
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
    return constants.exit_ok if all(result.passed for result in results) else constants.exit_numerical


def output_options() -> argparse.ArgumentParser:
    """Global options repeated on every subcommand; unset ones keep the global value."""
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--angles", type=int, default=argparse.SUPPRESS, help="Number of angles in [0, pi)")
    options.add_argument("--csv", action="store_true", default=argparse.SUPPRESS, help="Also export CSV")
    options.add_argument("--replace", action="store_true", default=argparse.SUPPRESS, help="Replace outputs")
    return options


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtcli", description="Quantum tomography transforms")

    ## Global args
    parser.add_argument("--threads", type=int, default=Config.default_concurrency, help="Number of threads to use")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--angles", type=int, default=Config.default_angles, help="Number of angles in [0, pi)")
    parser.add_argument("--csv", action="store_true", help="Also export CSV next to every output")
    parser.add_argument("--replace", action="store_true", help="Replace existing outputs with different contents")

    commands = parser.add_subparsers(dest="command", required=True)
    shared = [output_options()]

    state = commands.add_parser("state", parents=shared, help="Construct a test state")
    state.add_argument("kind", choices=["fock", "coherent", "box", "mix"])
    state.add_argument("params", nargs="+", help="M, ALPHA, HALFWIDTH or WEIGHT:FILE ...")
    state.add_argument("--extent", type=float, default=Config.default_extent)
    state.add_argument("--count", type=int, default=Config.default_count)
    state.add_argument("--kernel", action="store_true", help="Write the pure kernel instead of the wavefunction")
    state.add_argument("--allow-negative", action="store_true", help="Accept negative mixture weights")
    state.add_argument("-o", "--output", required=True)
    state.set_defaults(func=cmd_state)

    char = commands.add_parser("char", parents=shared, help="Characteristic function of a kernel")
    char.add_argument("input")
    char.add_argument("-o", "--output", required=True)
    char.set_defaults(func=cmd_char)

    wigner = commands.add_parser("wigner", parents=shared, help="Wigner function")
    wigner.add_argument("input")
    wigner.add_argument("--from", dest="source", choices=["kernel", "char"], default="kernel")
    wigner.add_argument("-o", "--output", required=True)
    wigner.set_defaults(func=cmd_wigner)

    frft = commands.add_parser("frft", parents=shared, help="Fractional Fourier transform of a wavefunction")
    frft.add_argument("input")
    frft.add_argument("--alpha", type=float, required=True)
    frft.add_argument("-o", "--output", required=True)
    frft.set_defaults(func=cmd_frft)

    tom = commands.add_parser("tomogram", parents=shared, help="Optical tomogram of a kernel")
    tom.add_argument("input")
    tom.add_argument("--route", choices=["char", "wigner", "rotate", "all"], default="char")
    tom.add_argument("-o", "--output", required=True, help="Output file, or prefix with --route all")
    tom.set_defaults(func=cmd_tomogram)

    reconstruct = commands.add_parser("reconstruct", parents=shared, help="Density kernel from a tomogram")
    reconstruct.add_argument("input")
    reconstruct.add_argument("--compare", help="Reference kernel for a relative L2 report")
    reconstruct.add_argument("-o", "--output", required=True)
    reconstruct.set_defaults(func=cmd_reconstruct)

    fid = commands.add_parser("fidelity", parents=shared, help="Transition probability between two states")
    fid.add_argument("first")
    fid.add_argument("second")
    fid.add_argument("--route", choices=["direct", "char", "tomo", "all"], default="direct")
    fid.set_defaults(func=cmd_fidelity)

    regularity = commands.add_parser("regularity", parents=shared, help="Sobolev membership report")
    regularity.add_argument("input")
    regularity.add_argument("--nu", type=float, default=2.0)
    regularity.add_argument("--refinements", type=int, default=Config.refinements)
    regularity.set_defaults(func=cmd_regularity)

    selftest = commands.add_parser("selftest", parents=shared, help="Run the acceptance suite")
    selftest.add_argument("--workdir", help="Directory for the determinism outputs")
    selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = ["qtcli"] + argv
    SDKLogger.configure(args.verbose)

    client = TomographyClient(
        extent=getattr(args, "extent", Config.default_extent),
        count=getattr(args, "count", Config.default_count),
        angles=args.angles,
        threads=args.threads,
        progress=args.progress,
    )

    try:
        return args.func(args, client)
    except TomographyException as e:
        logger.error(e.message)
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return constants.exit_io


if __name__ == "__main__":
    sys.exit(main())
