"""Command line front end: the ``biquant`` binary.

Subcommands::

    graphs enumerate      list admissible graphs at a bidegree / budget
    graphs validate       re-check a graph file against the admissibility rules
    op compile            compile graphs against structure tensors
    gs d                  apply both components of the complex differential
    gs d2check            verify the square of the differential vanishes
    bialg check           run the Jacobi / co-Jacobi / cocycle validator
    weight                Monte-Carlo graph weights along an eps schedule
    quantize              build both series from a weight table, check axioms
    verify-propagator     numerical certificate for the two-form

Every artifact begins with ``#`` header lines recording the package
version, the propagator profile id, and the seed (``-`` where a command
involves neither), so any output can be traced to the configuration that
produced it.  All text artifacts are byte-identical across reruns and
worker counts at a fixed seed.  ``quantize --report`` and
``verify-propagator --report`` additionally render a PNG chart next to the
text file; everything else is text only.  Weight estimates are cached under
``$BIQUANT_CACHE_DIR`` when that variable is set.

Exit codes: 0 success, 1 validation failure, 2 I/O failure, 3 axiom
violation beyond tolerance.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .bigbracket import is_lie_bialgebra
from .geometry import (
    EPS_SCHEDULE,
    MCParams,
    PropagatorParams,
    canonical_labeling,
    richardson,
    verify_propagator,
    weight_schedule,
    weight_table_lines,
)
from .graphs import enumerate_graphs, format_graphs, parse_graphs, validate
from .gs import d_gs, square_components
from .operators import Cochain, compile_graph, parse_tensors, probe_tuples
from .poly import Poly
from .quantize import (
    build_costar,
    build_star,
    check_axioms,
    parse_weight_table,
    report_lines,
)

__all__ = ["main"]


class _CliError(Exception):
    """Failure with a definite exit code (1 validation, 2 I/O, 3 axioms)."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; here 2 means an I/O
    # failure, so route usage problems to the validation exit code instead.
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise _CliError(1, message)


def _headers(profile: str = "-", seed: int | str = "-") -> list[str]:
    return [
        f"# biquant {__version__}",
        f"# profile {profile}",
        f"# seed {seed}",
    ]


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _CliError(2, f"cannot read {path}: {exc}") from exc


def _emit(out: str | None, lines: Sequence[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise _CliError(2, f"cannot write {out}: {exc}") from exc


def _frac(c) -> str:
    return f"{c.numerator}/{c.denominator}"


def _template_lines(op: Cochain) -> list[str]:
    """One row per template term: ``coeff : in-exps -> out-exps``."""
    rows = []
    for coeff, dexps, mexps in op.terms or ():
        ins = " | ".join(" ".join(map(str, e)) for e in dexps)
        outs = " | ".join(" ".join(map(str, e)) for e in mexps)
        rows.append(f"{_frac(coeff)} : {ins} -> {outs}")
    return rows


def _split_pair(tensors, where: str):
    alpha = next((t for t in tensors if (t.a, t.b) == (2, 1)), None)
    beta = next((t for t in tensors if (t.a, t.b) == (1, 2)), None)
    if alpha is None or beta is None:
        raise _CliError(
            1, f"{where} must contain one (2,1) bracket and one (1,2) cobracket"
        )
    return alpha, beta


def _parse_schedule(spec: str) -> list[float]:
    try:
        eps = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise _CliError(1, f"bad eps schedule {spec!r}") from exc
    if not eps or any(e <= 0 for e in eps):
        raise _CliError(1, f"eps schedule must be positive: {spec!r}")
    return eps


# -- graphs ---------------------------------------------------------------------


def _cmd_graphs_enumerate(a) -> int:
    if min(a.m, a.n, a.s) < 0:
        raise _CliError(1, "m, n, s must be non-negative")
    found = enumerate_graphs(a.m, a.n, a.s, a.budget)
    lines = _headers() + [f"# count {len(found)}"]
    if found:
        lines += ["", format_graphs(found)]
    _emit(a.out, lines)
    return 0


def _cmd_graphs_validate(a) -> int:
    try:
        glist = parse_graphs(_read_text(a.graph))
    except ValueError as exc:
        raise _CliError(1, f"{a.graph}: {exc}") from exc
    lines = _headers()
    bad = 0
    for i, g in enumerate(glist, 1):
        ok, errs = validate(g)
        if ok:
            lines.append(f"graph {i} ok {g.canonical_key()}")
        else:
            bad += 1
            lines.append(f"graph {i} FAIL " + "; ".join(errs))
    lines.append(f"# invalid {bad}")
    _emit(a.out, lines)
    return 0 if bad == 0 else 1


# -- operators and the complex ----------------------------------------------------


def _compile_from_files(graph_path: str, tensor_path: str, dim: int):
    glist = parse_graphs(_read_text(graph_path))
    tensors = parse_tensors(_read_text(tensor_path), dim)
    if not glist:
        raise _CliError(1, f"{graph_path}: no graphs")
    return glist, tensors


def _cmd_op_compile(a) -> int:
    glist, tensors = _compile_from_files(a.graph, a.tensors, a.dim)
    lines = _headers()
    for i, g in enumerate(glist, 1):
        if len(tensors) != g.s:
            raise _CliError(
                1, f"graph {i} needs {g.s} tensors, file has {len(tensors)}"
            )
        op = compile_graph(g, tensors, a.dim)
        lines.append(
            f"graph {i} {g.canonical_key()} shape {op.m},{op.n} "
            f"order {op.order} terms {len(op.terms or ())}"
        )
        lines.extend(_template_lines(op))
    _emit(a.out, lines)
    return 0


def _single_cochain(a) -> Cochain:
    glist, tensors = _compile_from_files(a.graph, a.tensors, a.dim)
    if len(glist) != 1:
        raise _CliError(1, "expected exactly one graph in the file")
    g = glist[0]
    if len(tensors) != g.s:
        raise _CliError(1, f"graph needs {g.s} tensors, file has {len(tensors)}")
    return compile_graph(g, tensors, a.dim)


def _cmd_gs_d(a) -> int:
    phi = _single_cochain(a)
    d1, d2 = d_gs(phi)
    lines = _headers() + [
        f"# source shape {phi.m},{phi.n} dim {a.dim} probe-degree {a.deg}"
    ]
    for name, comp in (("d1", d1), ("d2", d2)):
        lines.append(f"component {name} shape {comp.m},{comp.n}")
        for tup in probe_tuples(a.dim, comp.m, a.deg):
            val = comp(*[Poly.monomial(e) for e in tup])
            ins = " | ".join(" ".join(map(str, e)) for e in tup)
            flat = val.to_text().replace("\n", " ; ")
            lines.append(f"{name} {ins} => {flat}")
    _emit(a.out, lines)
    return 0


def _cmd_gs_d2check(a) -> int:
    phi = _single_cochain(a)
    comps = square_components(phi)
    lines = _headers() + [
        f"# source shape {phi.m},{phi.n} dim {a.dim} probe-degree {a.deg}"
    ]
    ok = True
    for name, comp in zip(("d1d1", "d2d2", "mixed"), comps):
        zero = comp.is_zero_op(a.deg)
        ok = ok and zero
        lines.append(f"{name} ({comp.m},{comp.n}) zero {zero}")
    lines.append("square " + ("PASS" if ok else "FAIL"))
    _emit(a.out, lines)
    return 0 if ok else 1


# -- bialgebra validator -----------------------------------------------------------


def _cmd_bialg_check(a) -> int:
    tensors = parse_tensors(_read_text(a.tensors), a.dim)
    alpha, beta = _split_pair(tensors, a.tensors)
    report = is_lie_bialgebra(alpha, beta)
    lines = _headers() + report.lines()
    lines.append("bialgebra " + ("PASS" if report.ok else "FAIL"))
    _emit(a.out, lines)
    return 0 if report.ok else 1


# -- weights -----------------------------------------------------------------------


def _cmd_weight(a) -> int:
    glist = parse_graphs(_read_text(a.graph))
    if not glist:
        raise _CliError(1, f"{a.graph}: no graphs")
    eps_list = _parse_schedule(a.eps_schedule)
    if a.samples < 20:
        raise _CliError(1, "need at least 20 samples")
    prm = PropagatorParams()
    # keep >= 20 blocks so the spread of block means gives a usable stderr;
    # at the default 10^6 this reproduces the library block size (cache hits)
    block = min(50_000, a.samples // 20)
    mc = MCParams(samples=a.samples, seed=a.seed, workers=a.workers, block=block)
    lines = _headers(profile=prm.profile, seed=a.seed)
    lines.append(f"# samples {a.samples}")
    for g in glist:
        # rows are keyed by canonical class, so measure the representative:
        # the weight's sign is a property of the labeling, not the class
        g = canonical_labeling(g)
        key = g.canonical_key()
        sched = weight_schedule(g, prm, mc, eps_list)
        lines.extend(weight_table_lines((key, eps, est) for eps, est in sched))
        value, stderr = richardson(sched)
        lines.append(f"# combined {key} {value:.12e} {stderr:.12e}")
    _emit(a.out, lines)
    return 0


# -- the series and its report -------------------------------------------------------


def _cmd_quantize(a) -> int:
    tensors = parse_tensors(_read_text(a.tensors), a.dim)
    alpha, beta = _split_pair(tensors, a.tensors)
    bial = is_lie_bialgebra(alpha, beta)
    if not bial.ok:
        raise _CliError(1, "tensor pair is not a Lie bialgebra")
    table = parse_weight_table(_read_text(a.weights))
    caps = (a.caps[0], a.caps[1])
    if min(caps) < 0:
        raise _CliError(1, "caps must be non-negative")

    profile = table.profile if table.profile is not None else "-"
    seed = table.seed if table.seed is not None else "-"
    lines = _headers(profile=profile, seed=seed)
    lines.append(f"# caps {caps[0]} {caps[1]}")
    lines.append(f"# basis-degree {a.deg}")

    blocks: list[tuple[str, list]] = []
    star = build_star(alpha, beta, caps, table.combined())
    costar = build_costar(alpha, beta, caps, table.combined())
    combined = check_axioms(star, costar, deg=a.deg, workers=a.workers)
    blocks.append(("combined", combined))
    for eps in table.eps_values():
        wmap = table.at(eps)
        try:
            s_eps = build_star(alpha, beta, caps, wmap)
            c_eps = build_costar(alpha, beta, caps, wmap)
        except ValueError:
            # a key measured at other regularizations only; trend row skipped
            lines.append(f"# weights eps {eps:g} skipped (incomplete)")
            continue
        blocks.append((f"eps {eps:g}", check_axioms(s_eps, c_eps, deg=a.deg,
                                                    workers=a.workers)))

    violated = False
    for label, results in blocks:
        lines.append(f"# weights {label}")
        lines.extend(report_lines(results))
        violated = violated or any(r.verdict == "violation" for r in results)

    _emit(a.report, lines)
    if a.report is not None:
        _render_quantize_figure(Path(a.report).with_suffix(".png"), blocks)
    return 3 if violated else 0


# -- propagator certificate ----------------------------------------------------------


def _cmd_verify_propagator(a) -> int:
    prm = PropagatorParams()
    if a.eps is not None:
        if a.eps <= 0:
            raise _CliError(1, "eps must be positive")
        prm = replace(prm, eps=a.eps)
    cert = verify_propagator(prm, seed=a.seed, closedness_points=a.points)
    lines = _headers(profile=cert.profile, seed=a.seed) + cert.lines()
    _emit(a.report, lines)
    if a.report is not None:
        _render_certificate_figure(Path(a.report).with_suffix(".png"), cert)
    return 0 if cert.ok else 1


# -- figures (report paths only) -------------------------------------------------------


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


_FLOOR = 1e-18  # log-scale stand-in for exact zeros


def _render_quantize_figure(path: Path, blocks) -> None:
    plt = _plt()
    label0, combined = blocks[0]
    names = [f"{r.axiom[:6]} ({r.l1},{r.l2})" for r in combined]
    xs = range(len(combined))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))

    ax1.bar(xs, [max(3 * r.sigma, _FLOOR) for r in combined],
            color="#c5d8ee", label="3 sigma")
    ax1.plot(xs, [max(abs(r.residual), _FLOOR) for r in combined],
             "k.", markersize=9, label="|residual|")
    ax1.set_yscale("log")
    ax1.set_xticks(list(xs))
    ax1.set_xticklabels(names, rotation=45, ha="right", fontsize=7)
    ax1.set_title(f"axiom defects ({label0})")
    ax1.legend(fontsize=7)

    trend = [(lab, res) for lab, res in blocks[1:]]
    stochastic = [i for i, r in enumerate(combined) if r.sigma > 0]
    for i in stochastic:
        ys = [max(abs(res[i].residual), _FLOOR) for _, res in trend]
        ax2.plot(range(len(trend)), ys, "o-", label=names[i])
    ax2.set_yscale("log")
    ax2.set_xticks(range(len(trend)))
    ax2.set_xticklabels([lab for lab, _ in trend], fontsize=7)
    ax2.set_title("stochastic rows along the schedule")
    if stochastic:
        ax2.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": "biquant"})
    plt.close(fig)


def _render_certificate_figure(path: Path, cert) -> None:
    import numpy as np

    from .geometry import propagator1

    plt = _plt()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

    x = np.linspace(-1.25, 1.25, 501)
    ax1.plot(x, propagator1(x), color="#2c5f9e")
    ax1.set_title("one-form bump profile")
    ax1.set_xlabel("x")

    names = ["bump-mass", "sphere", "face", "closed", "channel"]
    measured = [
        cert.f_mass_dev,
        abs(cert.sphere_mass - 1.0),
        cert.face_max,
        cert.closedness_max,
        cert.channel_reldev,
    ]
    tols = [cert.TOL["f_mass"], cert.TOL["sphere"], cert.TOL["face"],
            cert.TOL["closed"], cert.TOL["channel"]]
    xs = np.arange(len(names))
    ax2.bar(xs - 0.2, [max(v, _FLOOR) for v in measured], width=0.4,
            color="#2c5f9e", label="measured")
    ax2.bar(xs + 0.2, tols, width=0.4, color="#c5d8ee", label="tolerance")
    ax2.set_yscale("log")
    ax2.set_xticks(xs)
    ax2.set_xticklabels(names, fontsize=8)
    ax2.set_title(f"certificate ({cert.profile}, eps {cert.eps:g})")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": "biquant"})
    plt.close(fig)


# -- parser ------------------------------------------------------------------------


def _build_parser() -> _Parser:
    p = _Parser(
        prog="biquant",
        description="quantization of finite-dimensional Lie bialgebras",
        epilog="Weight estimates are cached under $BIQUANT_CACHE_DIR when set.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    def out_flag(sp):
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    graphs = sub.add_parser("graphs", help="admissible graph tools")
    gsub = graphs.add_subparsers(dest="sub", required=True)
    ge = gsub.add_parser("enumerate", help="list graphs at a bidegree")
    ge.add_argument("--m", type=int, required=True)
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--s", type=int, required=True)
    ge.add_argument("--budget", type=int, default=None,
                    help="edge budget (default: top-dimensional)")
    out_flag(ge)
    ge.set_defaults(func=_cmd_graphs_enumerate)
    gv = gsub.add_parser("validate", help="re-check a graph file")
    gv.add_argument("--graph", required=True)
    out_flag(gv)
    gv.set_defaults(func=_cmd_graphs_validate)

    op = sub.add_parser("op", help="graph-indexed operators")
    osub = op.add_subparsers(dest="sub", required=True)
    oc = osub.add_parser("compile", help="compile graphs against tensors")
    oc.add_argument("--graph", required=True)
    oc.add_argument("--tensors", required=True)
    oc.add_argument("--dim", type=int, required=True)
    out_flag(oc)
    oc.set_defaults(func=_cmd_op_compile)

    gscmd = sub.add_parser("gs", help="complex differential")
    ssub = gscmd.add_subparsers(dest="sub", required=True)
    gd = ssub.add_parser("d", help="apply both differential components")
    gd.add_argument("--graph", required=True)
    gd.add_argument("--tensors", required=True)
    gd.add_argument("--dim", type=int, required=True)
    gd.add_argument("--deg", type=int, default=1, help="probe-basis degree")
    out_flag(gd)
    gd.set_defaults(func=_cmd_gs_d)
    g2 = ssub.add_parser("d2check", help="check the differential squares to zero")
    g2.add_argument("--graph", required=True)
    g2.add_argument("--tensors", required=True)
    g2.add_argument("--dim", type=int, required=True)
    g2.add_argument("--deg", type=int, default=2, help="probe-basis degree")
    out_flag(g2)
    g2.set_defaults(func=_cmd_gs_d2check)

    ba = sub.add_parser("bialg", help="Lie bialgebra validator")
    bsub = ba.add_subparsers(dest="sub", required=True)
    bc = bsub.add_parser("check", help="Jacobi / co-Jacobi / cocycle")
    bc.add_argument("--tensors", required=True)
    bc.add_argument("--dim", type=int, required=True)
    out_flag(bc)
    bc.set_defaults(func=_cmd_bialg_check)

    w = sub.add_parser("weight", help="Monte-Carlo graph weights")
    w.add_argument("--graph", required=True)
    w.add_argument("--samples", type=int, default=100_000)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--eps-schedule", default=",".join(f"{e:g}" for e in EPS_SCHEDULE))
    w.add_argument("--workers", type=int, default=1)
    out_flag(w)
    w.set_defaults(func=_cmd_weight)

    q = sub.add_parser("quantize", help="two-parameter series + axiom report")
    q.add_argument("--tensors", required=True)
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--caps", type=int, nargs=2, required=True, metavar=("L1", "L2"))
    q.add_argument("--weights", required=True)
    q.add_argument("--report", default=None,
                   help="report file (PNG chart rendered alongside)")
    q.add_argument("--deg", type=int, default=2, help="axiom-basis degree")
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=_cmd_quantize)

    v = sub.add_parser("verify-propagator", help="two-form certificate")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--points", type=int, default=100,
                   help="closedness sample points")
    v.add_argument("--eps", type=float, default=None,
                   help="override the regularization half-width")
    v.add_argument("--report", default=None,
                   help="report file (PNG chart rendered alongside)")
    v.set_defaults(func=_cmd_verify_propagator)

    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except _CliError as exc:
        print(f"biquant: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"biquant: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"biquant: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
