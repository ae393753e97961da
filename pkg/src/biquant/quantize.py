"""Two-parameter deformation of a Lie bialgebra into a (co)associative bialgebra.

The product and the coproduct are operator power series in two formal
parameters.  The (l1, l2) coefficient of the product collects every
admissible (2,1)-graph on l1 + l2 interior vertices that can host l1 copies
of the bracket and l2 of the cobracket; each graph contributes its compiled
polydifferential operator times a configuration-space weight, scaled by a
per-order rational prefactor (1/l1!l2! by default).  The coproduct series is
the mirror construction over (1,2)-graphs.

Weights are Monte-Carlo intervals (value, stderr), so a series coefficient
is a sum of exact operators with interval scalars.  Axiom defects --
associativity, coassociativity, and the compatibility of coproduct with
product -- are therefore polynomials in the weight symbols with exact
rational operator coefficients.  Checking an axiom evaluates those
coefficients on a monomial basis, takes the mean over the weight intervals,
and propagates the stderrs to first order.  Verdicts are three-valued:
``exact-zero`` when the defect vanishes identically as a polynomial in the
weight symbols, ``zero-within-3sigma``, or ``violation``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Mapping, Sequence

from .bigbracket import is_lie_bialgebra
from .geometry import (
    WeightEstimate,
    canonical_labeling,
    density_vanishes,
    richardson,
    weight_table_lines,
)
from .graphs import AdmissibleGraph, enumerate_graphs, is_inner
from .operators import Cochain, StructTensor, alternated_compile, compile_graph, monomials_up_to
from .poly import Monomial, Poly, TensorPoly

__all__ = [
    "AxiomResult",
    "Piece",
    "StarSeries",
    "WeightTable",
    "build_costar",
    "build_star",
    "check_axioms",
    "factorial_scale",
    "format_weight_table",
    "pairing_parity",
    "parse_weight_table",
    "report_lines",
]

Bidegree = tuple[int, int]
Interval = tuple[float, float]
OrderScale = Callable[[int, int], Fraction]


def factorial_scale(l1: int, l2: int) -> Fraction:
    """The default series prefactor 1/(l1! l2!)."""
    return Fraction(1, factorial(l1) * factorial(l2))


# -- weight tables -----------------------------------------------------------------


@dataclass
class WeightTable:
    """Weight rows keyed by canonical graph key, one block per regularization.

    ``rows`` maps eps -> canonical key -> (value, stderr, samples).  A table
    belongs to a single propagator profile; two ``# profile`` headers that
    disagree are refused at parse time, so series built from one table are
    guaranteed a consistent propagator representative.
    """

    profile: str | None = None
    seed: int | None = None
    rows: dict[float, dict[str, tuple[float, float, int]]] = field(default_factory=dict)

    def add(self, key: str, eps: float, value: float, stderr: float, samples: int = 0) -> None:
        self.rows.setdefault(float(eps), {})[key] = (float(value), float(stderr), int(samples))

    def eps_values(self) -> list[float]:
        """Regularizations present, coarsest first."""
        return sorted(self.rows, reverse=True)

    def keys(self) -> list[str]:
        return sorted({k for block in self.rows.values() for k in block})

    def at(self, eps: float) -> dict[str, Interval]:
        """(value, stderr) per key at one fixed regularization."""
        return {k: (v, e) for k, (v, e, _) in self.rows.get(float(eps), {}).items()}

    def combined(self) -> dict[str, Interval]:
        """(value, stderr) per key, extrapolated over the stored schedule."""
        out: dict[str, Interval] = {}
        for key in self.keys():
            pairs = [
                (eps, WeightEstimate(v, e, n, self.seed or 0))
                for eps, block in self.rows.items()
                if key in block
                for (v, e, n) in [block[key]]
            ]
            out[key] = richardson(pairs)
        return out


def parse_weight_table(text: str) -> WeightTable:
    """Read ``canonical_key value stderr samples eps`` rows.

    ``#`` lines are comments except for the ``# profile <id>`` and
    ``# seed <n>`` headers.  Raises ValueError on malformed rows or when two
    profile headers disagree.
    """
    table = WeightTable()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            toks = line[1:].split()
            if len(toks) >= 2 and toks[0] == "profile":
                if table.profile is not None and table.profile != toks[1]:
                    raise ValueError(
                        "weight table mixes propagator profiles: "
                        f"{table.profile} vs {toks[1]}"
                    )
                table.profile = toks[1]
            elif len(toks) >= 2 and toks[0] == "seed":
                table.seed = int(toks[1])
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(
                f"line {lineno}: want 'key value stderr samples eps', got {raw!r}"
            )
        key, value, stderr, samples, eps = parts
        table.add(key, float(eps), float(value), float(stderr), int(samples))
    return table


def format_weight_table(table: WeightTable) -> str:
    lines = []
    if table.profile is not None:
        lines.append(f"# profile {table.profile}")
    if table.seed is not None:
        lines.append(f"# seed {table.seed}")
    entries = [
        (key, eps, WeightEstimate(v, e, n, table.seed or 0))
        for eps in table.eps_values()
        for key, (v, e, n) in sorted(table.rows[eps].items())
    ]
    lines.extend(weight_table_lines(entries))
    return "\n".join(lines) + "\n"


# -- series ------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """One interval-weighted operator inside a series coefficient.

    ``symbol`` is the canonical key of the weight the operator multiplies;
    the empty string marks an exact scalar (value 1, stderr 0), used for the
    zero-vertex coefficient whose weight is the integral over a point.
    """

    symbol: str
    value: float
    stderr: float
    op: Cochain


@dataclass
class StarSeries:
    """Coefficients of a two-parameter operator series up to a bidegree cap."""

    m: int
    n: int
    dim: int
    caps: Bidegree
    terms: dict[Bidegree, tuple[Piece, ...]]
    profile: str | None = None

    def term(self, l1: int, l2: int) -> tuple[Piece, ...]:
        return self.terms.get((l1, l2), ())

    def symbols(self) -> list[str]:
        """Weight symbols the series depends on, sorted."""
        return sorted({p.symbol for ps in self.terms.values() for p in ps if p.symbol})


def _check_pair(alpha: StructTensor, beta: StructTensor) -> None:
    if (alpha.a, alpha.b) != (2, 1):
        raise ValueError("bracket tensor must have shape (2, 1)")
    if (beta.a, beta.b) != (1, 2):
        raise ValueError("cobracket tensor must have shape (1, 2)")
    if alpha.dim != beta.dim:
        raise ValueError("bracket and cobracket dimensions differ")
    report = is_lie_bialgebra(alpha, beta)
    if not report.ok:
        bad = [
            name
            for name, good in [
                ("jacobi", report.jacobi_ok),
                ("cojacobi", report.cojacobi_ok),
                ("cocycle", report.cocycle_ok),
            ]
            if not good
        ]
        raise ValueError("not a Lie bialgebra (fails: " + ", ".join(bad) + ")")


def _check_caps(caps: Sequence[int]) -> Bidegree:
    l1, l2 = caps
    if l1 < 0 or l2 < 0:
        raise ValueError("caps must be non-negative")
    return (int(l1), int(l2))


def _weight_map(
    weights: "WeightTable | Mapping[str, Interval] | None",
) -> tuple[dict[str, Interval], str | None]:
    if weights is None:
        return {}, None
    if isinstance(weights, WeightTable):
        return weights.combined(), weights.profile
    return dict(weights), None


def _slot_legs(h: AdmissibleGraph) -> list[tuple[str, int]]:
    """One leg token per tensor slot, star blocks then end blocks.

    An edge between two interior vertices occupies two slots (an in-slot at
    its source, an out-slot at its target) and its two-form splits into one
    odd leg per slot; an external edge occupies a single slot.  This is the
    order in which the compiled operator consumes its tensor indices.
    """
    star = [("S", e) for k in range(1, h.s + 1) for e in h.star_of(k)]
    ends = [("E", e) for k in range(1, h.s + 1) for e in h.end_of(k)]
    return star + ends


def _wedge_legs(h: AdmissibleGraph) -> list[tuple[str, int]]:
    """Leg tokens in the order the weight density wedges its factors: each
    interior-pair edge keeps both legs adjacent at its star position, and
    the upper external legs trail in end order."""
    out: list[tuple[str, int]] = []
    for k in range(1, h.s + 1):
        for e in h.star_of(k):
            out.append(("S", e))
            if is_inner(h.edges[e]):
                out.append(("E", e))
    for k in range(1, h.s + 1):
        for e in h.end_of(k):
            if h.edges[e][0][0] == "u":
                out.append(("E", e))
    return out


def pairing_parity(g: AdmissibleGraph, rep: AdmissibleGraph) -> int:
    """Sign pairing a labeling's slot order with its representative's weight.

    The permutation compares g's slot legs with the wedge order of the
    representative's density.  Unlike the one-form order used to transport
    weights between labelings, this tracks interior-pair legs individually,
    so swapping an interior edge inside a star or end sequence flips the
    sign exactly when it flips the compiled operator.
    """
    target = {tok: i for i, tok in enumerate(_wedge_legs(rep))}
    perm = [target[tok] for tok in _slot_legs(g)]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _build_term(
    m: int,
    n: int,
    dim: int,
    alpha: StructTensor,
    beta: StructTensor,
    l1: int,
    l2: int,
    wmap: Mapping[str, Interval],
    scale: Fraction,
) -> tuple[Piece, ...]:
    s = l1 + l2
    if s == 0:
        (g,) = enumerate_graphs(m, n, 0)
        return (Piece("", 1.0, 0.0, compile_graph(g, [], dim).scale(scale)),)
    if (l1 > 0 and alpha.is_zero()) or (l2 > 0 and beta.is_zero()):
        return ()  # every placement compiles to zero; skip the enumeration
    shapes = sorted([(alpha.a, alpha.b)] * l1 + [(beta.a, beta.b)] * l2)
    tensors = [alpha] * l1 + [beta] * l2
    sym_ops: dict[str, Cochain] = {}
    for g in enumerate_graphs(m, n, s):
        if sorted(g.profile(k) for k in range(1, s + 1)) != shapes:
            continue
        if density_vanishes(g):
            continue
        op = alternated_compile(g, tensors, dim)
        if not op.terms:
            continue
        rep = canonical_labeling(g)
        signed = op.scale(pairing_parity(g, rep) * scale)
        key = rep.canonical_key()
        sym_ops[key] = (sym_ops[key] + signed) if key in sym_ops else signed
    pieces = []
    for key in sorted(sym_ops):
        if not sym_ops[key].terms:
            continue  # placements cancel pairwise; no weight needed
        if key not in wmap:
            raise ValueError(f"missing weight for graph {key}")
        value, stderr = wmap[key]
        if value == 0.0 and stderr == 0.0:
            continue
        pieces.append(Piece(key, float(value), float(stderr), sym_ops[key]))
    return tuple(pieces)


def _build_series(
    m: int,
    n: int,
    alpha: StructTensor,
    beta: StructTensor,
    caps: Bidegree,
    weights: "WeightTable | Mapping[str, Interval] | None",
    order_scale: OrderScale | None,
) -> StarSeries:
    scale_of = order_scale or factorial_scale
    wmap, label = _weight_map(weights)
    terms: dict[Bidegree, tuple[Piece, ...]] = {}
    for l1 in range(caps[0] + 1):
        for l2 in range(caps[1] + 1):
            terms[(l1, l2)] = _build_term(
                m, n, alpha.dim, alpha, beta, l1, l2, wmap, Fraction(scale_of(l1, l2))
            )
    return StarSeries(m, n, alpha.dim, caps, terms, label)


def build_star(
    alpha: StructTensor,
    beta: StructTensor,
    caps: Sequence[int],
    weights: "WeightTable | Mapping[str, Interval] | None" = None,
    order_scale: OrderScale | None = None,
) -> StarSeries:
    """Product series of the pair (bracket, cobracket) up to a bidegree cap.

    The (0,0) coefficient is plain multiplication with exact scalar 1.  A
    higher coefficient sums, over admissible (2,1)-graphs on l1 + l2 interior
    vertices whose vertex profiles can host l1 brackets and l2 cobrackets,
    the Koszul-alternated compiled operator grouped under the canonical key
    of its weight, scaled by ``order_scale(l1, l2)``.  Graphs whose wedge
    density is structurally zero, or whose compiled operator vanishes for
    these tensors, are dropped before any weight is looked up -- so the
    abelian pair needs no weights at all.  Raises ValueError when the pair
    fails the Lie-bialgebra validator or a needed weight is absent.
    """
    _check_pair(alpha, beta)
    return _build_series(2, 1, alpha, beta, _check_caps(caps), weights, order_scale)


def build_costar(
    alpha: StructTensor,
    beta: StructTensor,
    caps: Sequence[int],
    weights: "WeightTable | Mapping[str, Interval] | None" = None,
    order_scale: OrderScale | None = None,
) -> StarSeries:
    """Coproduct series: the (1,2)-graph mirror of :func:`build_star`.

    The (0,0) coefficient is the coproduct that makes the generators
    primitive, with exact scalar 1.
    """
    _check_pair(alpha, beta)
    return _build_series(1, 2, alpha, beta, _check_caps(caps), weights, order_scale)


# -- axiom checks ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _mono_poly(dim: int, mono: Monomial) -> Poly:
    return Poly(dim, {mono: 1})


def _as_poly(t: TensorPoly) -> Poly:
    if t.arity != 1:
        raise ValueError("expected a single-slot tensor")
    return Poly(t.dim, {key[0]: c for key, c in t.terms.items()})


def _apply_leg(op: Cochain, t: TensorPoly, leg: int) -> TensorPoly:
    """Apply a one-argument operator to slot ``leg`` of a tensor, in place."""
    arity = t.arity - 1 + op.n
    acc: dict[tuple[Monomial, ...], Fraction] = {}
    for key, c in t.terms.items():
        image = op(_mono_poly(t.dim, key[leg]))
        for ikey, ic in image.terms.items():
            new = key[:leg] + ikey + key[leg + 1 :]
            val = acc.get(new, Fraction(0)) + c * ic
            if val:
                acc[new] = val
            else:
                acc.pop(new, None)
    return TensorPoly(t.dim, arity, acc)


def _syms(*pieces: Piece) -> tuple[str, ...]:
    return tuple(sorted(p.symbol for p in pieces if p.symbol))


Groups = dict[tuple[str, ...], TensorPoly]


def _accumulate(groups: Groups, wmono: tuple[str, ...], val: TensorPoly) -> None:
    if not val.terms:
        return
    if wmono in groups:
        groups[wmono] = groups[wmono] + val
    else:
        groups[wmono] = val


def _splits2(L: Bidegree) -> list[tuple[Bidegree, Bidegree]]:
    return [
        ((a, b), (L[0] - a, L[1] - b))
        for a in range(L[0] + 1)
        for b in range(L[1] + 1)
    ]


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    return [
        (head, *rest)
        for head in range(total + 1)
        for rest in _compositions(total - head, parts - 1)
    ]


def _splits4(L: Bidegree) -> list[tuple[Bidegree, ...]]:
    return [
        tuple(zip(c1, c2))
        for c1 in _compositions(L[0], 4)
        for c2 in _compositions(L[1], 4)
    ]


def _associator_groups(star: StarSeries, L: Bidegree, args: tuple[Poly, ...]) -> Groups:
    f, g, h = args
    groups: Groups = {}
    for A, B in _splits2(L):
        for p in star.term(*A):
            for q in star.term(*B):
                left = p.op(_as_poly(q.op(f, g)), h)
                right = p.op(f, _as_poly(q.op(g, h)))
                _accumulate(groups, _syms(p, q), left - right)
    return groups


def _coassociator_groups(costar: StarSeries, L: Bidegree, args: tuple[Poly, ...]) -> Groups:
    (f,) = args
    groups: Groups = {}
    for A, B in _splits2(L):
        for p in costar.term(*A):
            for q in costar.term(*B):
                base = q.op(f)
                val = _apply_leg(p.op, base, 0) - _apply_leg(p.op, base, 1)
                _accumulate(groups, _syms(p, q), val)
    return groups


def _compatibility_groups(
    star: StarSeries, costar: StarSeries, L: Bidegree, args: tuple[Poly, ...]
) -> Groups:
    f, g = args
    dim = star.dim
    groups: Groups = {}
    for A, B in _splits2(L):
        for p in costar.term(*A):
            for q in star.term(*B):
                _accumulate(groups, _syms(p, q), p.op(_as_poly(q.op(f, g))))
    for A1, A2, B, C in _splits4(L):
        for p1 in star.term(*A1):
            for p2 in star.term(*A2):
                for r1 in costar.term(*B):
                    for r2 in costar.term(*C):
                        df = r1.op(f)
                        dg = r2.op(g)
                        acc: dict[tuple[Monomial, ...], Fraction] = {}
                        for (u1, u2), cf in df.terms.items():
                            for (v1, v2), cg in dg.terms.items():
                                first = p1.op(_mono_poly(dim, u1), _mono_poly(dim, v1))
                                if not first.terms:
                                    continue
                                second = p2.op(_mono_poly(dim, u2), _mono_poly(dim, v2))
                                if not second.terms:
                                    continue
                                cc = cf * cg
                                for (k1,), c1 in first.terms.items():
                                    for (k2,), c2 in second.terms.items():
                                        key2 = (k1, k2)
                                        val = acc.get(key2, Fraction(0)) + cc * c1 * c2
                                        if val:
                                            acc[key2] = val
                                        else:
                                            acc.pop(key2, None)
                        _accumulate(
                            groups,
                            _syms(p1, p2, r1, r2),
                            TensorPoly(dim, 2, acc).scale(-1),
                        )
    return groups


_SLOTS = {"associator": 3, "coassociator": 1, "compatibility": 2}


def _groups_for(
    axiom: str, star: StarSeries, costar: StarSeries, L: Bidegree, args: tuple[Poly, ...]
) -> Groups:
    if axiom == "associator":
        return _associator_groups(star, L, args)
    if axiom == "coassociator":
        return _coassociator_groups(costar, L, args)
    if axiom == "compatibility":
        return _compatibility_groups(star, costar, L, args)
    raise ValueError(f"unknown axiom {axiom!r}")


def _scalar_stats(
    amap: Mapping[tuple[str, ...], Fraction], means: Mapping[str, Interval]
) -> tuple[float, float]:
    """Mean and first-order sigma of sum_w A_w * prod(w) over the intervals."""
    val = 0.0
    grad: dict[str, float] = {}
    for wmono, a in amap.items():
        af = float(a)
        prod = 1.0
        for s in wmono:
            prod *= means[s][0]
        val += af * prod
        mult = Counter(wmono)
        for s, k in mult.items():
            rest = 1.0
            for o, ko in mult.items():
                rest *= means[o][0] ** (ko - (o == s))
            grad[s] = grad.get(s, 0.0) + af * k * rest
    sigma2 = sum((gv * means[s][1]) ** 2 for s, gv in grad.items())
    return val, math.sqrt(sigma2)


def _axiom_chunk(
    star: StarSeries,
    costar: StarSeries,
    axiom: str,
    L: Bidegree,
    tuples: Sequence[tuple[Monomial, ...]],
    means: Mapping[str, Interval],
):
    """Fold one block of basis tuples into (all-exact, worst, worst-violation)."""
    exact = True
    best = (0.0, 0.0, 0.0)  # (|mean|, mean, sigma), max over scalars
    worst_violation = None
    for mono_tuple in tuples:
        args = tuple(_mono_poly(star.dim, m) for m in mono_tuple)
        groups = _groups_for(axiom, star, costar, L, args)
        for key in sorted({k for tp in groups.values() for k in tp.terms}):
            amap = {w: tp.terms[key] for w, tp in groups.items() if key in tp.terms}
            if not amap:
                continue
            exact = False
            r, sigma = _scalar_stats(amap, means)
            if abs(r) > best[0]:
                best = (abs(r), r, sigma)
            if abs(r) > 3.0 * sigma:
                if worst_violation is None or abs(r) > worst_violation[0]:
                    worst_violation = (abs(r), r, sigma)
    return exact, best, worst_violation


def _chunks(seq: list, k: int) -> list[list]:
    step = max(1, math.ceil(len(seq) / k))
    return [seq[i : i + step] for i in range(0, len(seq), step)]


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    l1: int
    l2: int
    verdict: str  # exact-zero | zero-within-3sigma | violation
    residual: float
    sigma: float

    def line(self) -> str:
        return (
            f"{self.axiom} {self.l1},{self.l2} {self.verdict} "
            f"{self.residual:.6e} {self.sigma:.6e}"
        )


def report_lines(results: Sequence[AxiomResult]) -> list[str]:
    return [r.line() for r in results]


def check_axioms(
    star: StarSeries,
    costar: StarSeries,
    cap: Sequence[int] | None = None,
    *,
    deg: int = 3,
    workers: int = 1,
) -> list[AxiomResult]:
    """Evaluate the three bialgebra axioms order by order on a monomial basis.

    For each bidegree L up to ``cap`` (default: the common cap of the two
    series) the associator, the coassociator, and the compatibility defect
    coproduct(f*g) - coproduct(f)*coproduct(g) are expanded over all bidegree
    splits and evaluated on every tuple of monomials of per-slot degree <=
    ``deg``.  Exact rational coefficients are kept per monomial in the weight
    symbols; the verdict is ``exact-zero`` when they all vanish,
    ``violation`` when some scalar exceeds 3 sigma of its propagated error,
    and ``zero-within-3sigma`` otherwise.  ``residual``/``sigma`` report the
    worst offending scalar (largest mean for a violation, largest overall
    otherwise).

    Tuples are independent, so ``workers`` > 1 splits the basis across
    processes; block results are folded in fixed order and the outcome does
    not depend on the worker count.
    """
    if (star.m, star.n) != (2, 1):
        raise ValueError("star series must be a (2,1) series")
    if (costar.m, costar.n) != (1, 2):
        raise ValueError("costar series must be a (1,2) series")
    if star.dim != costar.dim:
        raise ValueError("series dimensions differ")
    if star.profile != costar.profile:
        raise ValueError(
            f"weight tables disagree: {star.profile!r} vs {costar.profile!r}"
        )
    if cap is None:
        cap = (min(star.caps[0], costar.caps[0]), min(star.caps[1], costar.caps[1]))
    cap = _check_caps(cap)
    if cap[0] > min(star.caps[0], costar.caps[0]) or cap[1] > min(
        star.caps[1], costar.caps[1]
    ):
        raise ValueError("cap exceeds the built series")

    means: dict[str, Interval] = {}
    for series in (star, costar):
        for pieces in series.terms.values():
            for p in pieces:
                if not p.symbol:
                    continue
                seen = means.get(p.symbol)
                if seen is not None and seen != (p.value, p.stderr):
                    raise ValueError(f"inconsistent weight for {p.symbol}")
                means[p.symbol] = (p.value, p.stderr)

    basis = monomials_up_to(star.dim, deg)
    bidegrees = [(a, b) for a in range(cap[0] + 1) for b in range(cap[1] + 1)]
    results: list[AxiomResult] = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for axiom in ("associator", "coassociator", "compatibility"):
            tuples = list(itertools.product(basis, repeat=_SLOTS[axiom]))
            for L in bidegrees:
                if pool is None:
                    parts = [_axiom_chunk(star, costar, axiom, L, tuples, means)]
                else:
                    futs = [
                        pool.submit(_axiom_chunk, star, costar, axiom, L, blk, means)
                        for blk in _chunks(tuples, workers)
                    ]
                    parts = [f.result() for f in futs]
                exact = all(p[0] for p in parts)
                best = (0.0, 0.0, 0.0)
                violation = None
                for _, b, v in parts:
                    if b[0] > best[0]:
                        best = b
                    if v is not None and (violation is None or v[0] > violation[0]):
                        violation = v
                if exact:
                    results.append(AxiomResult(axiom, L[0], L[1], "exact-zero", 0.0, 0.0))
                elif violation is not None:
                    results.append(
                        AxiomResult(axiom, L[0], L[1], "violation", violation[1], violation[2])
                    )
                else:
                    results.append(
                        AxiomResult(
                            axiom, L[0], L[1], "zero-within-3sigma", best[1], best[2]
                        )
                    )
    finally:
        if pool is not None:
            pool.shutdown()
    return results
