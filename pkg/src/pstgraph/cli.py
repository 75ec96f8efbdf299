"""Command-line entry point.

Exit codes: 0 success, 1 malformed input, 2 precondition violation,
3 failed certification.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import graphs as gr
from . import serialization as ser
from .serialization import MalformedInput
from .spectral import ConvergenceError, eigendecompose
from .synth import (
    double_cone_weights,
    halfjoin_no_pst_probe,
    hamming_universal,
    hypercube_subcube_transfer,
    sample_half_join_weights,
)
from .walk import certify, describe, scan, transfer_amplitude

EXIT_MALFORMED = 1
EXIT_PRECONDITION = 2
EXIT_CERT_FAIL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(f"{self.prog}: {message}")


def _number(token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MalformedInput(f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise MalformedInput(f"not a finite number: {token!r}")
    return value


def _descriptor(token: str):
    token = token.strip()
    if token.isdigit():
        return int(token)
    pattern = token.replace(gr.STAR, "*")
    if "*" in pattern:
        try:
            return gr.SubcubeSpec(pattern).pattern
        except ValueError as exc:
            raise MalformedInput(str(exc)) from None
    raise MalformedInput(f"state must be a vertex index or a subcube pattern with '*', got {token!r}")


def _emit(obj, out) -> None:
    ser.write_json(obj, out, sys.stdout)


# -- graph ---------------------------------------------------------------------


def _family(args) -> gr.WeightedGraph:
    name = args.name

    def need(*fields):
        values = [getattr(args, f) for f in fields]
        missing = [f"--{f}" for f, v in zip(fields, values) if v is None]
        if missing:
            raise MalformedInput(f"family {name} needs {' '.join(missing)}")
        return values

    if name in ("complete", "empty", "cycle", "path", "hypercube"):
        return gr.standard(name, *need("n"))
    if name == "hamming":
        return gr.hamming(*need("q", "n"))
    if name == "path-hypercubic":
        return gr.path_hypercubic(*need("n"))
    return gr.subcube_hypercube(*need("k", "l", "m"))


def cmd_graph_family(args):
    ser.write_graph(_family(args), args.out, sys.stdout)


def cmd_graph_build(args):
    ser.write_graph(ser.read_graph(args.spec), args.out, sys.stdout)


def cmd_graph_op(args):
    if args.join:
        g1, g2 = (ser.read_graph(p) for p in args.join)
        result = gr.join(g1, g2, args.rho)
    elif args.cartesian:
        g1, g2 = (ser.read_graph(p) for p in args.cartesian)
        result = gr.cartesian(g1, g2)
    elif args.double_cone:
        b, mu, eta, path = args.double_cone
        b = _number(b)
        if b not in (0, 1):
            raise ValueError("b must be 0 or 1")
        result = gr.double_cone(int(b), _number(mu), _number(eta), ser.read_graph(path))
    else:
        *weights, path = args.half_join
        result = gr.half_join(*map(_number, weights), ser.read_graph(path))
    ser.write_graph(result, args.out, sys.stdout)


# -- walk ------------------------------------------------------------------------


def cmd_spectrum(args):
    _emit(eigendecompose(ser.read_graph(args.graph)).to_dict(), args.out)


def cmd_amplitude(args):
    spectrum = eigendecompose(ser.read_graph(args.graph))
    src, dst = _descriptor(args.source), _descriptor(args.target)
    amp = transfer_amplitude(spectrum, src, dst, args.time)
    _emit(
        {
            "source": describe(src),
            "target": describe(dst),
            "time": args.time,
            "re": amp.real,
            "im": amp.imag,
            "fidelity": abs(amp) ** 2,
        },
        None,
    )


def cmd_scan(args):
    spectrum = eigendecompose(ser.read_graph(args.graph))
    result = scan(spectrum, _descriptor(args.source), _descriptor(args.target), args.t_max, args.steps)
    text = ser.scan_csv(result.rows())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _emit({"t_best": result.t_best, "f_best": result.f_best, "steps": args.steps}, None)
    else:
        sys.stdout.write(text)


def cmd_certify(args):
    spectrum = eigendecompose(ser.read_graph(args.graph))
    cert = certify(spectrum, _descriptor(args.source), _descriptor(args.target), args.time, args.tol)
    _emit(cert.to_dict(), args.out)
    return 0 if cert.passed else EXIT_CERT_FAIL


# -- synthesis -------------------------------------------------------------------


def _synthesis_output(args, weights, t_star, graph, source, target):
    cert = certify(eigendecompose(graph), source, target, t_star, args.tol)
    doc = {
        "weights": weights,
        "t_star": t_star,
        "graph": ser.graph_to_dict(graph),
        "certificate": cert.to_dict(),
    }
    if args.graph_out:
        ser.write_graph(graph, args.graph_out)
    _emit(doc, args.out)


def cmd_synth_double_cone(args):
    w = double_cone_weights(args.n, args.k, args.b, args.p, args.q)
    if args.base:
        base = ser.read_graph(args.base)
    else:
        base = gr.circulant_regular(args.n, args.k)
    _synthesis_output(args, w.to_dict(), w.t_star, w.graph(base), 0, 1)


def cmd_synth_hamming(args):
    res = hamming_universal(args.q, args.n, args.a, args.b, args.t_star)
    weights = {
        "q": args.q,
        "n": args.n,
        "factors": [
            {"source": f.source, "target": f.target, "native_time": f.native_time, "scale": s}
            for f, s in zip(res.plan.factors, res.plan.scales)
        ],
    }
    _synthesis_output(args, weights, res.t_star, res.graph, res.source, res.target)


def cmd_synth_subcube(args):
    res = hypercube_subcube_transfer(args.k, args.l, args.m)
    weights = {"k": args.k, "l": args.l, "m": args.m, "pattern": res.pattern.pattern}
    _synthesis_output(args, weights, res.t_star, res.graph, 0, res.pattern.pattern)


def cmd_probe_half_join(args):
    graph = ser.read_graph(args.graph)
    samples = sample_half_join_weights(args.samples, args.seed)
    report = halfjoin_no_pst_probe(graph, samples, args.t_max, args.steps, oracle=args.oracle)
    doc = {"seed": args.seed, "samples": args.samples, "t_max": args.t_max, "steps": args.steps}
    doc.update(report.to_dict())
    _emit(doc, args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def _add_state_args(p):
    p.add_argument("--graph", required=True)
    p.add_argument("--source", required=True, help="vertex index or subcube pattern such as 10**")
    p.add_argument("--target", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pstgraph", description="Perfect state transfer on weighted graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    graph = sub.add_parser("graph", help="construct graphs")
    gsub = graph.add_subparsers(dest="graph_command", required=True, parser_class=_Parser)

    fam = gsub.add_parser("family", help="standard graph family")
    fam.add_argument(
        "--name",
        required=True,
        choices=["complete", "empty", "cycle", "path", "hypercube", "hamming", "path-hypercubic", "subcube-hypercube"],
    )
    for flag in ("n", "q", "k", "l", "m"):
        fam.add_argument(f"--{flag}", type=int)
    fam.add_argument("--out")
    fam.set_defaults(func=cmd_graph_family)

    bld = gsub.add_parser("build", help="validate and canonicalize graph JSON")
    bld.add_argument("--spec", required=True)
    bld.add_argument("--out")
    bld.set_defaults(func=cmd_graph_build)

    op = gsub.add_parser("op", help="combine graphs")
    which = op.add_mutually_exclusive_group(required=True)
    which.add_argument("--join", nargs=2, metavar=("G1", "G2"))
    which.add_argument("--cartesian", nargs=2, metavar=("G1", "G2"))
    which.add_argument("--double-cone", nargs=4, metavar=("B", "MU", "ETA", "G"))
    which.add_argument("--half-join", nargs=7, metavar=("MU", "ETA", "KAPPA", "TAU", "RHO", "EPS", "G"))
    op.add_argument("--rho", type=float, default=1.0)
    op.add_argument("--out")
    op.set_defaults(func=cmd_graph_op)

    spec = sub.add_parser("spectrum", help="eigendecomposition as JSON")
    spec.add_argument("--graph", required=True)
    spec.add_argument("--out")
    spec.set_defaults(func=cmd_spectrum)

    amp = sub.add_parser("amplitude", help="transfer amplitude at one time")
    _add_state_args(amp)
    amp.add_argument("--time", type=_number, required=True)
    amp.set_defaults(func=cmd_amplitude)

    sc = sub.add_parser("scan", help="fidelity on a uniform time grid")
    _add_state_args(sc)
    sc.add_argument("--t-max", type=_number, required=True)
    sc.add_argument("--steps", type=int, required=True)
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scan)

    cert = sub.add_parser("certify", help="check perfect state transfer at a time")
    _add_state_args(cert)
    cert.add_argument("--time", type=_number, required=True)
    cert.add_argument("--tol", type=_number, default=1e-9)
    cert.add_argument("--out")
    cert.set_defaults(func=cmd_certify)

    synth = sub.add_parser("synth", help="synthesize PST weights")
    ssub = synth.add_subparsers(dest="synth_command", required=True, parser_class=_Parser)

    def synth_common(p):
        p.add_argument("--tol", type=_number, default=1e-9)
        p.add_argument("--out")
        p.add_argument("--graph-out")

    dc = ssub.add_parser("double-cone")
    dc.add_argument("--n", type=int, required=True)
    dc.add_argument("--k", type=int, required=True)
    dc.add_argument("--b", type=int, required=True)
    dc.add_argument("--p", type=int)
    dc.add_argument("--q", type=int)
    dc.add_argument("--base", help="k-regular base graph JSON (default: circulant)")
    synth_common(dc)
    dc.set_defaults(func=cmd_synth_double_cone)

    hm = ssub.add_parser("hamming")
    hm.add_argument("--q", type=int, required=True)
    hm.add_argument("--n", type=int, required=True)
    hm.add_argument("--a", required=True, help="word such as 012 or 0,1,2")
    hm.add_argument("--b", required=True)
    hm.add_argument("--t-star", type=_number, required=True)
    synth_common(hm)
    hm.set_defaults(func=cmd_synth_hamming)

    scb = ssub.add_parser("subcube")
    scb.add_argument("--k", type=int, required=True)
    scb.add_argument("--l", type=int, required=True)
    scb.add_argument("--m", type=int, required=True)
    synth_common(scb)
    scb.set_defaults(func=cmd_synth_subcube)

    probe = sub.add_parser("probe", help="numerical probes")
    psub = probe.add_subparsers(dest="probe_command", required=True, parser_class=_Parser)
    hj = psub.add_parser("half-join")
    hj.add_argument("--graph", required=True)
    hj.add_argument("--samples", type=int, default=50)
    hj.add_argument("--t-max", type=_number, default=100.0)
    hj.add_argument("--steps", type=int, default=100_000)
    hj.add_argument("--seed", type=int, default=0)
    hj.add_argument("--oracle", action="store_true", help="also compare against the eigensolver")
    hj.add_argument("--out")
    hj.set_defaults(func=cmd_probe_half_join)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args) or 0
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (ValueError, IndexError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
