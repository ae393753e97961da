"""Deformation complex of the symmetric bialgebra: differentials and fractions.

Cochains live in Hom(A^(x)m, A^(x)n) with A the polynomial bialgebra.  The
differential has an algebra direction

  (d1 Psi)(a_0 .. a_m) = Delta^(n)(a_0) * Psi(a_1 .. a_m)
                        + sum_{i=0}^{m-1} (-1)^(i+1) Psi(.. a_i a_{i+1} ..)
                        + (-1)^(m-1) Psi(a_0 .. a_{m-1}) * Delta^(n)(a_m)

(* is the slotwise product) and a coalgebra direction

  (d2 Psi)(a_1 .. a_m) = (prod_i a_i^(1)) (x) Psi((x)_i a_i^(2))
                        + sum_{i=1}^{n} (-1)^i Delta_i Psi(a_1 .. a_m)
                        + (-1)^(n+1) Psi((x)_i a_i^(1)) (x) (prod_i a_i^(2))

with Sweedler sums over every argument and Delta_i the coproduct applied to
output slot i.  The boundary-term signs and the twist making the total
differential square to zero are held in a swappable sign table; the defaults
were fixed by machine search over the 2^4 boundary sign choices and the four
candidate twists (see tests), which confirmed the formulas as printed with
total differential D = d1 + (-1)^m d2 on bidegree (m, n).

``fraction`` composes a column of cochains through a row of cochains with
interleaved slots; its degree defect ``fraction_defect(m1, n1) = 2 m1 n1 - m1
- n1`` vanishes exactly for the (1,1)-shaped middle layers, which is why only
those compose to top degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .operators import Cochain, StructTensor, compile_graph
from .graphs import AdmissibleGraph
from .poly import Poly, TensorPoly

__all__ = [
    "GSSigns",
    "GS_SIGNS",
    "d_gs1",
    "d_gs2",
    "d_gs",
    "square_components",
    "fraction",
    "fraction_defect",
    "hkr",
    "star_graph",
    "cochain_eq",
    "circ_sum",
    "g_bracket",
    "co_circ_sum",
    "co_g_bracket",
]


@dataclass(frozen=True)
class GSSigns:
    """Boundary-term signs for the two differentials and the mixing twist.

    ``twist`` names the sign carried by d2 inside the total differential on
    bidegree (m, n): one of "one", "m", "n", "m+n".
    """

    d1_first: int = 1
    d1_last: int = 1
    d2_first: int = 1
    d2_last: int = 1
    twist: str = "m"

    def twist_sign(self, m: int, n: int) -> int:
        return {
            "one": 1,
            "m": (-1) ** m,
            "n": (-1) ** n,
            "m+n": (-1) ** (m + n),
        }[self.twist]


GS_SIGNS = GSSigns()


def _sweedler(args: Sequence[Poly]):
    """Iterate simultaneous coproduct terms of all arguments:
    (coeff, left monomials, right monomials)."""
    per = [list(a.coproduct().terms.items()) for a in args]
    for combo in itertools.product(*per):
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        lefts = tuple(key[0] for key, _ in combo)
        rights = tuple(key[1] for key, _ in combo)
        yield coeff, lefts, rights


def _mono_product(monos) -> tuple[int, ...]:
    out = None
    for m in monos:
        out = m if out is None else tuple(a + b for a, b in zip(out, m))
    return out


def d_gs1(psi: Cochain, signs: GSSigns = GS_SIGNS) -> Cochain:
    """Algebra-direction differential: Hom(A^m, A^n) -> Hom(A^(m+1), A^n)."""
    m, n, dim = psi.m, psi.n, psi.dim

    def ev(*args: Poly) -> TensorPoly:
        out = args[0].iterated_coproduct(n).tensor_mul(psi(*args[1:]))
        if signs.d1_first < 0:
            out = -out
        for i in range(m):
            merged = args[:i] + (args[i] * args[i + 1],) + args[i + 2:]
            term = psi(*merged)
            out = out + (term if (-1) ** (i + 1) > 0 else -term)
        last = psi(*args[:-1]).tensor_mul(args[-1].iterated_coproduct(n))
        sign = signs.d1_last * (-1) ** (m - 1)
        return out + (last if sign > 0 else -last)

    return Cochain.from_function(m + 1, n, dim, psi.order, psi.coeff_deg, ev)


def d_gs2(psi: Cochain, signs: GSSigns = GS_SIGNS) -> Cochain:
    """Coalgebra-direction differential: Hom(A^m, A^n) -> Hom(A^m, A^(n+1))."""
    m, n, dim = psi.m, psi.n, psi.dim

    def ev(*args: Poly) -> TensorPoly:
        acc: dict[tuple, Fraction] = {}
        sgn_last = signs.d2_last * (-1) ** (n + 1)
        for coeff, lefts, rights in _sweedler(args):
            lprod = _mono_product(lefts)
            rprod = _mono_product(rights)
            val_r = psi(*[Poly.monomial(r) for r in rights])
            for key, c in val_r.terms.items():
                k = (lprod,) + key
                acc[k] = acc.get(k, Fraction(0)) + signs.d2_first * coeff * c
            val_l = psi(*[Poly.monomial(le) for le in lefts])
            for key, c in val_l.terms.items():
                k = key + (rprod,)
                acc[k] = acc.get(k, Fraction(0)) + sgn_last * coeff * c
        out = TensorPoly(dim, n + 1, acc)
        mid = psi(*args)
        for i in range(1, n + 1):
            term = mid.coproduct_slot(i)
            out = out + (term if (-1) ** i > 0 else -term)
        return out

    return Cochain.from_function(m, n + 1, dim, psi.order, psi.coeff_deg, ev)


def d_gs(psi: Cochain, signs: GSSigns = GS_SIGNS) -> tuple[Cochain, Cochain]:
    """Both components of the total differential applied to psi."""
    return (d_gs1(psi, signs), d_gs2(psi, signs))


def square_components(psi: Cochain, signs: GSSigns = GS_SIGNS) -> tuple[Cochain, Cochain, Cochain]:
    """The three bidegree components of D^2 psi for D = d1 + twist(m,n) d2.

    Returns (d1 d1 psi, d2 d2 psi, mixed) where
    mixed = twist(m+1, n) d2 d1 psi + twist(m, n) d1 d2 psi.
    """
    m, n = psi.m, psi.n
    c11 = d_gs1(d_gs1(psi, signs), signs)
    c22 = d_gs2(d_gs2(psi, signs), signs)
    a = d_gs2(d_gs1(psi, signs), signs).scale(signs.twist_sign(m + 1, n))
    b = d_gs1(d_gs2(psi, signs), signs).scale(signs.twist_sign(m, n))
    return (c11, c22, a + b)


def fraction(psis: Sequence[Cochain], thetas: Sequence[Cochain]) -> Cochain:
    """Compose a row of cochains through a column with interleaved slots.

    ``thetas`` = (Theta_1 .. Theta_l1), each Hom(A^(x)m_j, A^(x)l2);
    ``psis``   = (Psi_1 .. Psi_l2),   each Hom(A^(x)l1, A^(x)n_i).

    The composite feeds output t of every Theta_j, in j order, into Psi_t.
    """
    l1, l2 = len(thetas), len(psis)
    if l1 < 1 or l2 < 1:
        raise ValueError("need at least one cochain on each side")
    dim = thetas[0].dim
    for th in thetas:
        if th.n != l2 or th.dim != dim:
            raise ValueError("every theta must output one slot per psi")
    for ps in psis:
        if ps.m != l1 or ps.dim != dim:
            raise ValueError("every psi must consume one slot per theta")
    m_total = sum(th.m for th in thetas)
    n_total = sum(ps.n for ps in psis)
    blocks = []
    start = 0
    for th in thetas:
        blocks.append((start, start + th.m))
        start += th.m

    def ev(*args: Poly) -> TensorPoly:
        fval: TensorPoly | None = None
        for th, (lo, hi) in zip(thetas, blocks):
            piece = th(*args[lo:hi])
            fval = piece if fval is None else fval.otimes(piece)
        acc: dict[tuple, Fraction] = {}
        for key, coeff in fval.terms.items():
            gval: TensorPoly | None = None
            for i in range(l2):
                ins = [Poly.monomial(key[j * l2 + i]) for j in range(l1)]
                piece = psis[i](*ins)
                gval = piece if gval is None else gval.otimes(piece)
            for k2, c2 in gval.terms.items():
                acc[k2] = acc.get(k2, Fraction(0)) + coeff * c2
        return TensorPoly(dim, n_total, acc)

    order = max(th.order for th in thetas) + max(ps.order for ps in psis)
    cdeg = sum(th.coeff_deg for th in thetas) + sum(ps.coeff_deg for ps in psis)
    return Cochain.from_function(m_total, n_total, dim, order, cdeg, ev)


def fraction_defect(m1: int, n1: int) -> int:
    """Top-degree defect of stacking through an (m1, n1) middle layer."""
    return 2 * m1 * n1 - m1 - n1


def star_graph(a: int, b: int) -> AdmissibleGraph:
    """Single interior vertex wired straight to a lower and b upper slots."""
    if a < 1 or b < 1:
        raise ValueError("star graph needs a, b >= 1")
    edges = tuple((("i", 1), ("d", j)) for j in range(1, a + 1)) + tuple(
        (("u", j), ("i", 1)) for j in range(1, b + 1)
    )
    return AdmissibleGraph(
        1, a, b, edges, (tuple(range(a)),), (tuple(range(a, a + b)),)
    )


def hkr(gamma: StructTensor, dim: int | None = None) -> Cochain:
    """The (a,b)-tensor as a one-vertex graph cochain: the classical embedding
    of coefficients into polydifferential operators."""
    d = gamma.dim if dim is None else dim
    return compile_graph(star_graph(gamma.a, gamma.b), [gamma], d)


def cochain_eq(a: Cochain, b: Cochain, degree: int | None = None) -> bool:
    return a.equals(b, degree)


# -- codim-1 stratum pairings for single-output / single-input cochains --------

def _identity_cochain(dim: int) -> Cochain:
    return Cochain.from_function(1, 1, dim, 0, 0, lambda f: TensorPoly.of(f))


def circ_sum(phi: Cochain, psi: Cochain) -> Cochain:
    """sum_i (-1)^((i-1)(m2-1)) phi o_i psi for cochains with one output slot.

    Each insertion is the stratum composite with identity fillers elsewhere.
    """
    if phi.n != 1 or psi.n != 1:
        raise ValueError("circ_sum needs single-output cochains")
    dim = phi.dim
    total: Cochain | None = None
    for i in range(1, phi.m + 1):
        thetas = [
            psi if j == i else _identity_cochain(dim) for j in range(1, phi.m + 1)
        ]
        q = fraction([phi], thetas)
        sgn = (-1) ** ((i - 1) * (psi.m - 1))
        total = q.scale(sgn) if total is None else total + q.scale(sgn)
    return total


def g_bracket(phi: Cochain, psi: Cochain) -> Cochain:
    """Stratum bracket of single-output cochains:
    circ_sum(phi, psi) - (-1)^((m1-1)(m2-1)) circ_sum(psi, phi)."""
    sgn = (-1) ** ((phi.m - 1) * (psi.m - 1))
    return circ_sum(phi, psi) - circ_sum(psi, phi).scale(sgn)


def co_circ_sum(phi: Cochain, psi: Cochain) -> Cochain:
    """Mirror pairing for single-input cochains: insert psi into output slot i."""
    if phi.m != 1 or psi.m != 1:
        raise ValueError("co_circ_sum needs single-input cochains")
    dim = phi.dim
    total: Cochain | None = None
    for i in range(1, phi.n + 1):
        psis = [
            psi if j == i else _identity_cochain(dim) for j in range(1, phi.n + 1)
        ]
        q = fraction(psis, [phi])
        sgn = (-1) ** ((i - 1) * (psi.n - 1))
        total = q.scale(sgn) if total is None else total + q.scale(sgn)
    return total


def co_g_bracket(phi: Cochain, psi: Cochain) -> Cochain:
    sgn = (-1) ** ((phi.n - 1) * (psi.n - 1))
    return co_circ_sum(phi, psi) - co_circ_sum(psi, phi).scale(sgn)
