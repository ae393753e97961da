"""Structure-constant validator built on an odd-variable calculus.

A candidate bracket mu (a (2,1) tensor) and cobracket delta (a (1,2) tensor)
on a d-dimensional space embed into the exterior algebra on 2d anticommuting
generators: xi_1..xi_d dual to the basis, e_1..e_d the basis itself.  The
algebra carries a degree -2 Poisson pairing determined by {xi_i, e_j} =
delta_ij, and the classical structure equations collapse to self-bracket
components of alpha = mu + delta:

    {mu, mu}     = 0   <=>  Jacobi identity,
    {delta, delta} = 0 <=>  co-Jacobi identity,
    {mu, delta}  = 0   <=>  the cobracket is a 1-cocycle,

and the three live in distinct bidegrees of {alpha, alpha}, so a single
equation detects all three axioms at once.  Classical componentwise checks
(jacobiator, cojacobiator, cocycle defect) are provided alongside as
independent formulations; the proportionality constants between the two
routes are fixed and exercised by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .operators import StructTensor

Term = tuple[int, ...]  # strictly increasing generator indices


class OddPoly:
    """Element of the exterior algebra on 2*dim odd generators.

    Generators 0..dim-1 are the dual generators xi_i, dim..2*dim-1 are e_j.
    Terms map strictly increasing index tuples to rational coefficients.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Term, Fraction] | None = None):
        self.dim = dim
        cleaned: dict[Term, Fraction] = {}
        if terms:
            for k, v in terms.items():
                v = Fraction(v)
                if v:
                    cleaned[tuple(k)] = v
        self.terms = cleaned

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "OddPoly":
        return cls(dim)

    @classmethod
    def xi(cls, i: int, dim: int) -> "OddPoly":
        if not 1 <= i <= dim:
            raise ValueError(f"xi index {i} out of range")
        return cls(dim, {(i - 1,): Fraction(1)})

    @classmethod
    def e(cls, j: int, dim: int) -> "OddPoly":
        if not 1 <= j <= dim:
            raise ValueError(f"e index {j} out of range")
        return cls(dim, {(dim + j - 1,): Fraction(1)})

    # -- ring structure ---------------------------------------------------

    def __add__(self, other: "OddPoly") -> "OddPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return OddPoly(self.dim, out)

    def __neg__(self) -> "OddPoly":
        return OddPoly(self.dim, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "OddPoly") -> "OddPoly":
        return self + (-other)

    def scale(self, c) -> "OddPoly":
        c = Fraction(c)
        return OddPoly(self.dim, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "OddPoly") -> "OddPoly":
        out: dict[Term, Fraction] = {}
        for a, ca in self.terms.items():
            sa = set(a)
            for b, cb in other.terms.items():
                if sa & set(b):
                    continue
                inv = sum(1 for x in a for y in b if x > y)
                key = tuple(sorted(a + b))
                c = ca * cb * (-1) ** inv
                out[key] = out.get(key, Fraction(0)) + c
        return OddPoly(self.dim, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OddPoly)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def is_homogeneous(self) -> bool:
        degs = {len(k) for k in self.terms}
        return len(degs) <= 1

    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def component(self, p: int, q: int) -> "OddPoly":
        """Bidegree slice: p dual generators, q plain ones."""
        d = self.dim
        out = {
            k: v
            for k, v in self.terms.items()
            if sum(1 for g in k if g < d) == p and sum(1 for g in k if g >= d) == q
        }
        return OddPoly(d, out)

    def __repr__(self):
        if not self.terms:
            return "OddPoly(0)"
        bits = []
        for k in sorted(self.terms):
            names = []
            for g in k:
                if g < self.dim:
                    names.append(f"xi{g + 1}")
                else:
                    names.append(f"e{g - self.dim + 1}")
            bits.append(f"{self.terms[k]}*{'^'.join(names) or '1'}")
        return "OddPoly(" + " + ".join(bits) + ")"


def _left_partial(p: OddPoly, g: int) -> OddPoly:
    out: dict[Term, Fraction] = {}
    for k, v in p.terms.items():
        if g not in k:
            continue
        pos = k.index(g)
        key = k[:pos] + k[pos + 1:]
        out[key] = out.get(key, Fraction(0)) + v * (-1) ** pos
    return OddPoly(p.dim, out)


def _right_partial(p: OddPoly, g: int) -> OddPoly:
    out: dict[Term, Fraction] = {}
    for k, v in p.terms.items():
        if g not in k:
            continue
        pos = k.index(g)
        key = k[:pos] + k[pos + 1:]
        out[key] = out.get(key, Fraction(0)) + v * (-1) ** (len(k) - 1 - pos)
    return OddPoly(p.dim, out)


def big_bracket(a: OddPoly, b: OddPoly) -> OddPoly:
    """Degree -2 pairing with {xi_i, e_j} = {e_j, xi_i} = delta_ij.

    Acts as a biderivation; on homogeneous elements it satisfies
    {a,b} = -(-1)^(|a||b|) {b,a} and the matching graded Jacobi identity
    (both enforced by tests on random elements).
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    d = a.dim
    out = OddPoly.zero(d)
    for i in range(d):
        out = out + _right_partial(a, i) * _left_partial(b, d + i)
        out = out + _right_partial(a, d + i) * _left_partial(b, i)
    return out


# -- tensor embeddings ---------------------------------------------------------


def from_bracket(c: StructTensor) -> OddPoly:
    """Embed a (2,1) tensor as sum c^k_ij xi_i xi_j e_k over i<j."""
    if (c.a, c.b) != (2, 1):
        raise ValueError("bracket tensor must have shape (2, 1)")
    d = c.dim
    terms: dict[Term, Fraction] = {}
    for (ins, outs), v in c.items():
        (i, j), (k,) = ins, outs
        terms[(i - 1, j - 1, d + k - 1)] = v
    return OddPoly(d, terms)


def from_cobracket(t: StructTensor) -> OddPoly:
    """Embed a (1,2) tensor as sum d_i^kl xi_i e_k e_l over k<l."""
    if (t.a, t.b) != (1, 2):
        raise ValueError("cobracket tensor must have shape (1, 2)")
    d = t.dim
    terms: dict[Term, Fraction] = {}
    for (ins, outs), v in t.items():
        (i,), (k, l) = ins, outs
        terms[(i - 1, d + k - 1, d + l - 1)] = v
    return OddPoly(d, terms)


def extract_tensor(p: OddPoly, a: int, b: int) -> StructTensor:
    """Read the (a, b) bidegree component back as an antisymmetric tensor."""
    d = p.dim
    entries: list[tuple[tuple[int, ...], tuple[int, ...], Fraction]] = []
    for k, v in p.component(a, b).terms.items():
        ins = tuple(g + 1 for g in k if g < d)
        outs = tuple(g - d + 1 for g in k if g >= d)
        if len(ins) != a or len(outs) != b:
            continue
        entries.append((ins, outs, v))
    return StructTensor.from_entries(a, b, d, entries)


# -- classical componentwise forms ---------------------------------------------


def bracket_map(c: StructTensor, i: int, j: int) -> dict[int, Fraction]:
    """[x_i, x_j] as a coefficient map k -> c^k_ij (1-based, any i, j)."""
    out = {}
    for k in range(1, c.dim + 1):
        v = c.entry((i, j), (k,))
        if v:
            out[k] = v
    return out


def jacobiator(c: StructTensor) -> StructTensor:
    """J(x_i,x_j,x_k) = [[x_i,x_j],x_k] + cyclic, as a (3,1) tensor."""
    if (c.a, c.b) != (2, 1):
        raise ValueError("bracket tensor must have shape (2, 1)")
    d = c.dim
    entries = []
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            for k in range(j + 1, d + 1):
                for l in range(1, d + 1):
                    v = Fraction(0)
                    for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
                        for m in range(1, d + 1):
                            v += c.entry((a, b), (m,)) * c.entry((m, cc), (l,))
                    if v:
                        entries.append(((i, j, k), (l,), v))
    return StructTensor.from_entries(3, 1, d, entries)


def cojacobiator(t: StructTensor) -> StructTensor:
    """Mirror of the jacobiator for a (1,2) tensor, output shape (1,3)."""
    if (t.a, t.b) != (1, 2):
        raise ValueError("cobracket tensor must have shape (1, 2)")
    d = t.dim
    entries = []
    for i in range(1, d + 1):
        for k in range(1, d + 1):
            for l in range(k + 1, d + 1):
                for r in range(l + 1, d + 1):
                    v = Fraction(0)
                    for a, b, cc in ((k, l, r), (l, r, k), (r, k, l)):
                        for m in range(1, d + 1):
                            v += t.entry((i,), (m, cc)) * t.entry((m,), (a, b))
                    if v:
                        entries.append(((i,), (k, l, r), v))
    return StructTensor.from_entries(1, 3, d, entries)


def cocycle_defect(c: StructTensor, t: StructTensor) -> StructTensor:
    """delta([x,y]) - x.delta(y) + y.delta(x) as a (2,2) tensor.

    The adjoint action on two-vectors is a derivation in each slot.
    """
    if (c.a, c.b) != (2, 1) or (t.a, t.b) != (1, 2):
        raise ValueError("need a (2,1) bracket and a (1,2) cobracket")
    if c.dim != t.dim:
        raise ValueError("dimension mismatch")
    d = c.dim

    def act(i: int, k: int, l: int, p: int, q: int) -> Fraction:
        # coefficient of x_p ^ x_q in x_i . (x_k ^ x_l)
        v = Fraction(0)
        # [x_i, x_k] ^ x_l
        if l == q:
            v += c.entry((i, k), (p,))
        if l == p:
            v -= c.entry((i, k), (q,))
        # x_k ^ [x_i, x_l]
        if k == p:
            v += c.entry((i, l), (q,))
        if k == q:
            v -= c.entry((i, l), (p,))
        return v

    entries = []
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            for p in range(1, d + 1):
                for q in range(p + 1, d + 1):
                    v = Fraction(0)
                    for m in range(1, d + 1):
                        v += c.entry((i, j), (m,)) * t.entry((m,), (p, q))
                    for k in range(1, d + 1):
                        for l in range(k + 1, d + 1):
                            tv = t.entry((j,), (k, l))
                            if tv:
                                v -= tv * act(i, k, l, p, q)
                            tv = t.entry((i,), (k, l))
                            if tv:
                                v += tv * act(j, k, l, p, q)
                    if v:
                        entries.append(((i, j), (p, q), v))
    return StructTensor.from_entries(2, 2, d, entries)


# -- the validator --------------------------------------------------------------


@dataclass(frozen=True)
class BialgebraReport:
    dim: int
    jacobi_ok: bool
    cojacobi_ok: bool
    cocycle_ok: bool
    jacobi_residual: Fraction
    cojacobi_residual: Fraction
    cocycle_residual: Fraction

    @property
    def ok(self) -> bool:
        return self.jacobi_ok and self.cojacobi_ok and self.cocycle_ok

    def lines(self) -> list[str]:
        rows = [
            ("jacobi", self.jacobi_ok, self.jacobi_residual),
            ("cojacobi", self.cojacobi_ok, self.cojacobi_residual),
            ("cocycle", self.cocycle_ok, self.cocycle_residual),
        ]
        out = []
        for name, good, res in rows:
            verdict = "ok" if good else "violated"
            out.append(f"{name} {verdict} max_abs={res}")
        return out


def self_bracket_components(
    c: StructTensor, t: StructTensor
) -> dict[str, OddPoly]:
    """The three bidegree pieces of {alpha, alpha} with alpha = mu + delta."""
    mu = from_bracket(c)
    de = from_cobracket(t)
    return {
        "mu,mu": big_bracket(mu, mu),
        "mu,delta": big_bracket(mu, de) + big_bracket(de, mu),
        "delta,delta": big_bracket(de, de),
    }


def is_lie_bialgebra(c: StructTensor, t: StructTensor) -> BialgebraReport:
    comps = self_bracket_components(c, t)
    jj = comps["mu,mu"]
    xx = comps["mu,delta"]
    dd = comps["delta,delta"]
    return BialgebraReport(
        dim=c.dim,
        jacobi_ok=jj.is_zero(),
        cojacobi_ok=dd.is_zero(),
        cocycle_ok=xx.is_zero(),
        jacobi_residual=jj.max_abs(),
        cojacobi_residual=dd.max_abs(),
        cocycle_residual=xx.max_abs(),
    )
