"""Structure tensors and graph-indexed polydifferential operators.

``StructTensor`` holds a linear map wedge^a V -> wedge^b V as antisymmetric
components over a chosen basis; ``compile_graph`` turns an admissible graph
with one tensor per first-type vertex into the bialgebra cochain

    f_1 .. f_m  |->  Delta^(n)( prod_v Psi_v ) . (Psi_u1 (x) .. (x) Psi_un),

where a first-type vertex contributes the tensor component selected by the
indices of its star/end edges, a lower vertex contributes the multiply
differentiated argument, and an upper vertex multiplies its slot by the
monomial of its outgoing edge indices.  The sum runs over all index
assignments to edges.

Cochains keep a symbolic term list (coefficient, per-lower-slot derivative
multi-index, per-upper-slot monomial) whenever they arise from graphs; sums
and differentials that leave this class fall back to an evaluation closure.
Equality is extensional: two cochains with derivative order <= r and
coefficient degree <= c agree iff they agree on all monomial argument tuples
of per-slot degree <= r + c + 1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator, Sequence

from .graphs import AdmissibleGraph
from .poly import Monomial, Poly, TensorPoly

Scalar = int | Fraction

# a template term: (coeff, D_1..D_m derivative multi-indices, M_1..M_n monomials)
Term = tuple[Fraction, tuple[Monomial, ...], tuple[Monomial, ...]]


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


class StructTensor:
    """Antisymmetric components gamma: wedge^a V -> wedge^b V over Q.

    Components are stored on strictly increasing index tuples (1-based);
    ``entry`` resolves arbitrary tuples through antisymmetry.
    """

    __slots__ = ("a", "b", "dim", "comps")

    def __init__(self, a: int, b: int, dim: int,
                 comps: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] | None = None):
        if a < 0 or b < 0 or dim < 1:
            raise ValueError("bad tensor shape")
        self.a, self.b, self.dim = a, b, dim
        self.comps: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}
        if comps:
            for (ins, outs), c in comps.items():
                self._accumulate(tuple(ins), tuple(outs), Fraction(c))

    def _accumulate(self, ins: tuple[int, ...], outs: tuple[int, ...], c: Fraction) -> None:
        if len(ins) != self.a or len(outs) != self.b:
            raise ValueError("entry arity mismatch")
        if any(not 1 <= i <= self.dim for i in ins + outs):
            raise ValueError("index out of range")
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            return  # repeated index in an antisymmetric slot: zero
        sin = tuple(sorted(ins))
        sout = tuple(sorted(outs))
        sign = _perm_sign([sin.index(i) for i in ins]) * _perm_sign(
            [sout.index(j) for j in outs]
        )
        key = (sin, sout)
        val = self.comps.get(key, Fraction(0)) + sign * c
        if val:
            self.comps[key] = val
        else:
            self.comps.pop(key, None)

    @classmethod
    def from_entries(cls, a: int, b: int, dim: int,
                     entries: Iterable[tuple[tuple[int, ...], tuple[int, ...], Scalar]]) -> "StructTensor":
        t = cls(a, b, dim)
        for ins, outs, c in entries:
            t._accumulate(tuple(ins), tuple(outs), Fraction(c))
        return t

    def entry(self, ins: tuple[int, ...], outs: tuple[int, ...]) -> Fraction:
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            return Fraction(0)
        sin = tuple(sorted(ins))
        sout = tuple(sorted(outs))
        c = self.comps.get((sin, sout))
        if c is None:
            return Fraction(0)
        sign = _perm_sign([sin.index(i) for i in ins]) * _perm_sign(
            [sout.index(j) for j in outs]
        )
        return sign * c

    def items(self):
        """Canonical nonzero entries ((ins, outs), coeff), deterministic order."""
        return sorted(self.comps.items())

    def assignments(self) -> list[tuple[tuple[int, ...], tuple[int, ...], Fraction]]:
        """All nonzero (ordered-ins, ordered-outs, coeff) index assignments."""
        out = []
        for (sin, sout), c in self.items():
            for pin in itertools.permutations(range(len(sin))):
                for pout in itertools.permutations(range(len(sout))):
                    ins = tuple(sin[p] for p in pin)
                    outs = tuple(sout[p] for p in pout)
                    out.append((ins, outs, _perm_sign(pin) * _perm_sign(pout) * c))
        return out

    def is_zero(self) -> bool:
        return not self.comps

    def degree(self) -> int:
        return self.a + self.b - 2

    def scale(self, c: Scalar) -> "StructTensor":
        c = Fraction(c)
        return StructTensor(self.a, self.b, self.dim,
                            {k: c * v for k, v in self.comps.items()})

    def __add__(self, other: "StructTensor") -> "StructTensor":
        if (self.a, self.b, self.dim) != (other.a, other.b, other.dim):
            raise ValueError("shape mismatch")
        out = dict(self.comps)
        for k, v in other.comps.items():
            nv = out.get(k, Fraction(0)) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return StructTensor(self.a, self.b, self.dim, out)

    def __sub__(self, other: "StructTensor") -> "StructTensor":
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, StructTensor)
            and (self.a, self.b, self.dim) == (other.a, other.b, other.dim)
            and self.comps == other.comps
        )

    def __repr__(self) -> str:
        return f"StructTensor(a={self.a}, b={self.b}, dim={self.dim}, nnz={len(self.comps)})"


def parse_tensors(text: str, dim: int) -> list[StructTensor]:
    """Parse a tensor file: ``gamma k : a b`` headers with entry lines
    ``i1 .. ia ; j1 .. jb = num/den``."""
    tensors: list[StructTensor] = []
    current: StructTensor | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gamma"):
            head, _, shape = line.partition(":")
            parts = head.split()
            sparts = shape.split()
            if len(parts) != 2 or not parts[1].isdigit() or len(sparts) != 2:
                raise ValueError(f"bad gamma header {raw!r}")
            if int(parts[1]) != len(tensors) + 1:
                raise ValueError(f"gamma blocks must be numbered consecutively: {raw!r}")
            current = StructTensor(int(sparts[0]), int(sparts[1]), dim)
            tensors.append(current)
            continue
        if current is None:
            raise ValueError(f"entry line before any gamma header: {raw!r}")
        body, _, coeff = line.partition("=")
        if not coeff:
            raise ValueError(f"bad entry line {raw!r}")
        ins_s, _, outs_s = body.partition(";")
        ins = tuple(int(t) for t in ins_s.split())
        outs = tuple(int(t) for t in outs_s.split())
        current._accumulate(ins, outs, Fraction(coeff.strip()))
    return tensors


def format_tensors(tensors: Sequence[StructTensor]) -> str:
    lines = []
    for k, t in enumerate(tensors, start=1):
        lines.append(f"gamma {k} : {t.a} {t.b}")
        for (ins, outs), c in t.items():
            lhs = " ".join(map(str, ins)) + " ; " + " ".join(map(str, outs))
            lines.append(f"{lhs} = {c.numerator}/{c.denominator}")
    return "\n".join(lines)


def monomials_up_to(dim: int, deg: int) -> list[Monomial]:
    out = [
        m
        for m in itertools.product(range(deg + 1), repeat=dim)
        if sum(m) <= deg
    ]
    out.sort(key=lambda m: (sum(m), m))
    return out


def probe_tuples(dim: int, slots: int, deg: int) -> Iterator[tuple[Monomial, ...]]:
    return itertools.product(monomials_up_to(dim, deg), repeat=slots)


class Cochain:
    """Multilinear operator A^(x)m -> A^(x)n with recorded testability bounds."""

    __slots__ = ("m", "n", "dim", "order", "coeff_deg", "terms", "_ev", "_memo")

    def __init__(self, m: int, n: int, dim: int, order: int, coeff_deg: int,
                 ev: Callable[..., TensorPoly] | None = None,
                 terms: tuple[Term, ...] | None = None):
        if m < 1 or n < 1:
            raise ValueError("cochain arities must be >= 1")
        self.m, self.n, self.dim = m, n, dim
        self.order = order
        self.coeff_deg = coeff_deg
        self.terms = terms
        self._ev = ev
        self._memo: dict[tuple, TensorPoly] = {}
        if ev is None and terms is None:
            raise ValueError("need either a term list or an evaluator")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, m: int, n: int, dim: int) -> "Cochain":
        return cls(m, n, dim, 0, 0, terms=())

    @classmethod
    def from_template(cls, m: int, n: int, dim: int,
                      terms: Iterable[tuple[Scalar, Sequence[Monomial], Sequence[Monomial]]]) -> "Cochain":
        merged: dict[tuple[tuple[Monomial, ...], tuple[Monomial, ...]], Fraction] = {}
        for coeff, dexps, mexps in terms:
            dexps = tuple(tuple(e) for e in dexps)
            mexps = tuple(tuple(e) for e in mexps)
            if len(dexps) != m or len(mexps) != n:
                raise ValueError("template term arity mismatch")
            if any(len(e) != dim for e in dexps + mexps):
                raise ValueError("template term dimension mismatch")
            key = (dexps, mexps)
            merged[key] = merged.get(key, Fraction(0)) + Fraction(coeff)
        clean = tuple(
            (c, d, mm) for (d, mm), c in sorted(merged.items()) if c
        )
        order = max((max(sum(e) for e in d) for _, d, _ in clean), default=0)
        cdeg = max((sum(sum(e) for e in mm) for _, _, mm in clean), default=0)
        return cls(m, n, dim, order, cdeg, terms=clean)

    @classmethod
    def from_function(cls, m: int, n: int, dim: int, order: int, coeff_deg: int,
                      ev: Callable[..., TensorPoly]) -> "Cochain":
        return cls(m, n, dim, order, coeff_deg, ev=ev)

    # -- evaluation ------------------------------------------------------------

    def __call__(self, *fs: Poly) -> TensorPoly:
        if len(fs) != self.m:
            raise ValueError(f"expected {self.m} arguments, got {len(fs)}")
        for f in fs:
            if f.dim != self.dim:
                raise ValueError("argument dimension mismatch")
        key = tuple(f.to_key() for f in fs)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self.terms is not None:
            out = self._eval_template(fs)
        else:
            out = self._ev(*fs)
            if out.dim != self.dim or out.arity != self.n:
                raise ValueError("evaluator returned wrong shape")
        self._memo[key] = out
        return out

    def _eval_template(self, fs: Sequence[Poly]) -> TensorPoly:
        acc: dict[tuple[Monomial, ...], Fraction] = {}
        for coeff, dexps, mexps in self.terms:
            prod = Poly.one(self.dim)
            for f, d in zip(fs, dexps):
                prod = prod * f.partial_multi(d)
                if prod.is_zero():
                    break
            if prod.is_zero():
                continue
            for key, c in prod.iterated_coproduct(self.n).terms.items():
                shifted = tuple(
                    tuple(x + y for x, y in zip(mono, mexp))
                    for mono, mexp in zip(key, mexps)
                )
                val = acc.get(shifted, Fraction(0)) + coeff * c
                if val:
                    acc[shifted] = val
                else:
                    acc.pop(shifted, None)
        return TensorPoly(self.dim, self.n, acc)

    # -- linear structure --------------------------------------------------------

    def scale(self, c: Scalar) -> "Cochain":
        c = Fraction(c)
        if self.terms is not None:
            return Cochain.from_template(
                self.m, self.n, self.dim,
                [(c * t[0], t[1], t[2]) for t in self.terms],
            )
        return Cochain(self.m, self.n, self.dim, self.order, self.coeff_deg,
                       ev=lambda *fs: self(*fs).scale(c))

    def __add__(self, other: "Cochain") -> "Cochain":
        self._shape_check(other)
        if self.terms is not None and other.terms is not None:
            return Cochain.from_template(
                self.m, self.n, self.dim, list(self.terms) + list(other.terms)
            )
        return Cochain(
            self.m, self.n, self.dim,
            max(self.order, other.order),
            max(self.coeff_deg, other.coeff_deg),
            ev=lambda *fs: self(*fs) + other(*fs),
        )

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    # -- extensional comparison -----------------------------------------------------

    def probe_bound(self) -> int:
        return self.order + self.coeff_deg + 1

    def probes(self, degree: int | None = None) -> Iterator[tuple[Poly, ...]]:
        deg = self.probe_bound() if degree is None else degree
        for monos in probe_tuples(self.dim, self.m, deg):
            yield tuple(Poly.monomial(mo) for mo in monos)

    def equals(self, other: "Cochain", degree: int | None = None) -> bool:
        self._shape_check(other)
        deg = max(self.probe_bound(), other.probe_bound()) if degree is None else degree
        for fs in self.probes(deg):
            if self(*fs) != other(*fs):
                return False
        return True

    def is_zero_op(self, degree: int | None = None) -> bool:
        deg = self.probe_bound() if degree is None else degree
        for fs in self.probes(deg):
            if self(*fs):
                return False
        return True

    def _shape_check(self, other: "Cochain") -> None:
        if (self.m, self.n, self.dim) != (other.m, other.n, other.dim):
            raise ValueError("cochain shape mismatch")

    def __repr__(self) -> str:
        kind = "template" if self.terms is not None else "closure"
        return (f"Cochain(m={self.m}, n={self.n}, dim={self.dim}, "
                f"order<={self.order}, coeff_deg<={self.coeff_deg}, {kind})")


def degree_audit(g: AdmissibleGraph, tensors: Sequence[StructTensor]) -> tuple[bool, str]:
    """Check the degree bookkeeping of placing ``tensors`` on ``g``.

    Passes iff sum of tensor degrees equals 2#inner + #external - 2s and each
    vertex profile matches its tensor shape.
    """
    if len(tensors) != g.s:
        return (False, f"need {g.s} tensors, got {len(tensors)}")
    lhs = sum(t.degree() for t in tensors)
    rhs = 2 * len(g.inner_edges()) + len(g.external_edges()) - 2 * g.s
    if lhs != rhs:
        return (False, f"degree mismatch: sum deg = {lhs}, budget - 2s = {rhs}")
    for k in range(1, g.s + 1):
        want = g.profile(k)
        got = (tensors[k - 1].a, tensors[k - 1].b)
        if want != got:
            return (False, f"vertex i{k} has profile {want}, tensor is {got}")
    return (True, "ok")


def compile_graph(g: AdmissibleGraph, tensors: Sequence[StructTensor], dim: int) -> Cochain:
    """Compile a labeled graph with tensors at its first-type vertices.

    Returns the zero cochain when any vertex profile disagrees with its
    tensor shape.  Raises on dimension mismatch or wrong tensor count.
    """
    if g.m < 1 or g.n < 1:
        raise ValueError("compilation needs m >= 1 and n >= 1")
    if len(tensors) != g.s:
        raise ValueError(f"need {g.s} tensors, got {len(tensors)}")
    for t in tensors:
        if t.dim != dim:
            raise ValueError("tensor dimension mismatch")
    errs = g.violations()
    if errs:
        raise ValueError("graph is not admissible: " + "; ".join(errs))
    for k in range(1, g.s + 1):
        if g.profile(k) != (tensors[k - 1].a, tensors[k - 1].b):
            return Cochain.zero(g.m, g.n, dim)

    vertex_options = [tensors[k - 1].assignments() for k in range(1, g.s + 1)]
    terms: list[tuple[Fraction, tuple[Monomial, ...], tuple[Monomial, ...]]] = []
    zero = (0,) * dim
    for combo in itertools.product(*vertex_options) if vertex_options else [()]:
        edge_index: dict[int, int] = {}
        coeff = Fraction(1)
        ok = True
        for k in range(1, g.s + 1):
            ins, outs, c = combo[k - 1]
            coeff *= c
            for pos, eidx in enumerate(g.star[k - 1]):
                if eidx in edge_index and edge_index[eidx] != ins[pos]:
                    ok = False
                    break
                edge_index[eidx] = ins[pos]
            if not ok:
                break
            for pos, eidx in enumerate(g.end[k - 1]):
                if eidx in edge_index and edge_index[eidx] != outs[pos]:
                    ok = False
                    break
                edge_index[eidx] = outs[pos]
            if not ok:
                break
        if not ok or not coeff:
            continue
        dexps = [list(zero) for _ in range(g.m)]
        mexps = [list(zero) for _ in range(g.n)]
        for eidx, idx in edge_index.items():
            src, dst = g.edges[eidx]
            if dst[0] == "d":
                dexps[dst[1] - 1][idx - 1] += 1
            if src[0] == "u":
                mexps[src[1] - 1][idx - 1] += 1
        terms.append(
            (coeff, tuple(tuple(d) for d in dexps), tuple(tuple(mo) for mo in mexps))
        )
    return Cochain.from_template(g.m, g.n, dim, terms)


def alternated_compile(g: AdmissibleGraph, tensors: Sequence[StructTensor], dim: int) -> Cochain:
    """Average of compile over all tensor placements with Koszul-signed shuffles:

        (1/s!) sum_pi chi(pi) compile(g, pi . tensors),

    chi(pi) = sgn(pi) * prod over inversions (-1)^(deg_i deg_j).
    """
    s = g.s
    if len(tensors) != s:
        raise ValueError(f"need {s} tensors, got {len(tensors)}")
    if s == 0:
        return compile_graph(g, tensors, dim)
    degs = [t.degree() for t in tensors]
    total = Cochain.zero(g.m, g.n, dim)
    for perm in itertools.permutations(range(s)):
        chi = 1
        for i in range(s):
            for j in range(i + 1, s):
                if perm[i] > perm[j]:
                    chi *= -((-1) ** (degs[perm[i]] * degs[perm[j]]))
        arranged = [tensors[p] for p in perm]
        total = total + compile_graph(g, arranged, dim).scale(chi)
    return total.scale(Fraction(1, factorial(s)))
