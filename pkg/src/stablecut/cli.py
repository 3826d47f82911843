"""Command-line entry point: ``stablecut {fiedler,certify,tau,search,simulate}``.

Exit codes: 0 success / CertifiedStable, 1 CertifiedUnstable, 2 bad input,
3 disconnected graph, 4 Inconclusive, 5 problem too large.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .certify import Verdict, certify_partition
from .dynamics import cut_experiment, perturbation_decay
from .errors import Disconnected, NoConvergence, ParseError, StableCutError, TooLarge, UnknownEdge
from .formats import parse_cut, parse_graph, parse_model
from .graph import apply_cut, cut_weight
from .metapop import (
    find_equilibrium,
    gershgorin_conditions,
    linearize,
    spectrum_verdict,
    tau_threshold,
    trace_lower_bound,
)
from .search import search_stable_cuts
from .spectral import fiedler

EXIT_OK = 0
EXIT_UNSTABLE = 1
EXIT_INPUT = 2
EXIT_DISCONNECTED = 3
EXIT_INCONCLUSIVE = 4
EXIT_TOO_LARGE = 5

VERDICT_EXIT = {
    Verdict.CERTIFIED_STABLE: EXIT_OK,
    Verdict.CERTIFIED_UNSTABLE: EXIT_UNSTABLE,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def num(x):
    return f"{x:.12g}"


def cnum(z):
    z = complex(z)
    if z.imag == 0:
        return num(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{num(z.real)}{sign}{num(abs(z.imag))}i"


def passfail(flag):
    return "n/a" if flag is None else ("pass" if flag else "fail")


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_fiedler(args, out):
    g = parse_graph(_read(args.graph))
    fp = fiedler(g)
    out.write(f"lambda2 = {num(fp.value)}\n")
    if fp.degenerate_fiedler:
        out.write("degenerate_fiedler = true\n")
    for v, y in zip(g.nodes, fp.vector):
        out.write(f"{v} {num(y)}\n")
    return EXIT_OK


def format_certificate(g, cert):
    lines = [f"tau = {num(cert.tau)}"]
    if cert.graph_lambda2 is not None:
        lines.append(f"graph_lambda2 = {num(cert.graph_lambda2)}")
    if cert.partition.origin is not None:
        lines.append(f"cut_weight = {num(cut_weight(g, cert.partition.origin))}")
    lines.append(f"components = {len(cert.per_component)}")
    for k, v in enumerate(cert.per_component, start=1):
        lines.append(f"component {k}: {' '.join(v.component)}")
        lam = "n/a" if v.exact_lambda2 is None else num(v.exact_lambda2)
        lines.append(f"  lambda2 = {lam}")
        ev = v.evidence
        if "internal_cost_1" in ev:
            lines.append(f"  smallest_internal_costs = {num(ev['internal_cost_1'])} {num(ev['internal_cost_2'])}")
        lines.append(f"  max_external_cost = {num(ev['max_external_cost'])}")
        lines.append(f"  necessary_internal_cost = {passfail(v.necessary_pass)}")
        lines.append(f"  sufficient_external_cost = {passfail(v.sufficient_pass)}")
        if v.degenerate:
            state = "degenerate"
        else:
            state = "stable" if v.stable else "unstable"
        lines.append(f"  verdict = {state}")
    lines.append(f"overall = {cert.overall}")
    return "\n".join(lines) + "\n"


def cmd_certify(args, out):
    g = parse_graph(_read(args.graph))
    cut = parse_cut(_read(args.cut), g)
    if not args.tau >= 0:
        raise ParseError("--tau must be >= 0")
    p = apply_cut(g, cut)
    cert = certify_partition(g, p, args.tau)
    out.write(format_certificate(g, cert))
    return VERDICT_EXIT[cert.overall]


def _equilibrium(model):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return find_equilibrium(model, model.initial_guess())


def cmd_tau(args, out):
    model = parse_model(_read(args.model)).build()
    eq = _equilibrium(model)
    sys_ = linearize(model, eq.x)
    out.write(f"model = {model.name}\n")
    out.write(f"species = {model.n}\npatches = {model.m}\n")
    out.write("equilibrium = " + " ".join(num(v) for v in eq.x) + "\n")
    if not eq.positive:
        out.write("equilibrium_positive = false\n")
    tau = tau_threshold(sys_)
    out.write(f"tau = {num(tau)}\n")
    out.write(f"tau_all_rows = {num(tau_threshold(sys_, all_rows=True))}\n")
    lam2 = sys_.fiedler_min
    if lam2 is not None:
        out.write(f"min_species_lambda2 = {num(lam2)}\n")
        out.write(f"lambda2_meets_tau = {'true' if lam2 >= tau else 'false'}\n")
        bound = trace_lower_bound(sys_)
        out.write(f"trace_bound = {num(bound)}\n")
        out.write(f"lambda2_meets_trace_bound = {'true' if lam2 >= bound else 'false'}\n")
    report = gershgorin_conditions(sys_)
    for q, margin in enumerate(report.margins):
        kind, ok = ("zero", report.cond1[q]) if q in report.cond1 else ("positive", report.cond2[q])
        out.write(f"gershgorin row {q} {kind} margin = {num(margin)} {passfail(ok)}\n")
    out.write(f"gershgorin_certified = {'true' if report.certified else 'false'}\n")
    sv = spectrum_verdict(sys_)
    out.write("eigenvalues = " + " ".join(cnum(z) for z in sv.eigenvalues) + "\n")
    out.write(f"max_real_part = {num(sv.max_real)}\n")
    out.write(f"stable = {'true' if sv.stable else 'false'}\n")
    return EXIT_OK


def cmd_search(args, out):
    g = parse_graph(_read(args.graph))
    if not args.tau >= 0:
        raise ParseError("--tau must be >= 0")
    report = search_stable_cuts(g, args.tau, mode=args.mode, max_components=args.max_components)
    out.write(f"mode = {report.mode}\n")
    out.write(f"tau = {num(args.tau)}\n")
    out.write(f"candidates_examined = {report.candidates_examined}\n")
    out.write(f"certified = {len(report.certified)}\n")
    for rank, entry in enumerate(report.certified, start=1):
        parts = " | ".join(" ".join(c) for c in entry.partition.components)
        out.write(f"{rank}. cut_weight = {num(entry.cut_weight)} "
                  f"min_lambda2 = {num(entry.min_lambda2)} : {parts}\n")
    return EXIT_OK


def cmd_simulate(args, out):
    model = parse_model(_read(args.model)).build()
    eq = _equilibrium(model)
    delta = args.perturb
    if args.cut:
        cut = parse_cut(_read(args.cut))
        try:
            res = cut_experiment(model, eq.x, cut, t_end=args.t_end, dt=args.dt,
                                 delta=delta, record_every=args.every)
        except (ValueError, UnknownEdge) as exc:
            raise ParseError(str(exc)) from exc
        for k, comp in enumerate(res.components, start=1):
            if comp.decay is not None:
                out.write(f"# component {k}: {' '.join(comp.patches)}\n")
                out.write(comp.decay.trajectory.to_table())
        out.write(f"# pre-cut: {'stable' if res.pre_verdict.stable else 'unstable'} "
                  f"(max real part {num(res.pre_verdict.max_real)})\n")
        for k, comp in enumerate(res.components, start=1):
            if comp.verdict is None:
                out.write(f"# component {k}: no equilibrium found\n")
                continue
            eig = " ".join(cnum(z) for z in comp.verdict.eigenvalues)
            out.write(f"# component {k} [{' '.join(comp.patches)}]: "
                      f"{'stable' if comp.verdict.stable else 'unstable'}; eigenvalues {eig}; "
                      f"ratio = {num(comp.decay.ratio)}\n")
        out.write(f"# post-cut components {'stable' if res.post_stable else 'unstable'}\n")
        out.write(f"# post-cut components with dispersal losses retained: "
                  f"{'stable' if res.post_stable_losses_retained else 'unstable'}\n")
        return EXIT_OK
    decay = perturbation_decay(model, eq.x, delta=delta, t_end=args.t_end, dt=args.dt,
                               record_every=args.every)
    out.write(decay.trajectory.to_table())
    ratio = decay.ratio
    if decay.delta == 0 or ratio == 1:
        trend = "constant"
    elif ratio < 1e-3:
        trend = "ratio < 1e-3, decaying"
    elif ratio < 1:
        trend = "decaying"
    else:
        trend = "growing"
    out.write(f"# delta = {num(decay.delta)}\n")
    out.write(f"# ratio = {num(ratio)}\n")
    out.write(f"# monotone_tail = {'true' if decay.monotone_tail else 'false'}\n")
    out.write(f"# summary: {trend}\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="stablecut", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiedler", help="print lambda2 and the Fiedler vector of a graph file")
    p.add_argument("graph")
    p.set_defaults(func=cmd_fiedler)

    p = sub.add_parser("certify", help="certify the partition induced by a cut")
    p.add_argument("graph")
    p.add_argument("cut")
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("tau", help="threshold, trace bound and stability report of a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("search", help="rank certified-stable partitions by cut weight")
    p.add_argument("graph")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--mode", choices=("exhaustive", "heuristic"), default="exhaustive")
    p.add_argument("--max-components", type=int, default=2)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("simulate", help="perturb the model equilibrium and integrate")
    p.add_argument("model")
    p.add_argument("--perturb", type=float, default=None, help="perturbation size delta")
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--every", type=int, default=100, help="keep every k-th sample in the table")
    p.add_argument("--cut", default=None, help="cut file applied to every species graph")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    np.seterr(all="ignore")
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Disconnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (StableCutError, NoConvergence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
