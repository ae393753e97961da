"""Exact multivariate polynomial algebra over Q with the symmetric-coalgebra coproduct.

The base object is the free commutative algebra A on d generators x_1..x_d with
rational coefficients.  A carries the unique bialgebra structure in which the
generators are primitive, Delta(x_i) = x_i (x) 1 + 1 (x) x_i; Delta extends as
an algebra map, which on a monomial is the multi-binomial expansion

    Delta(x^E) = sum_{A+B=E} prod_j binom(E_j, A_j)  x^A (x) x^B.

``iterated_coproduct(p, n)`` applies Delta (n-1) times, so n=1 is the identity
and n=2 a single Delta.  Everything is exact: coefficients are ``Fraction``s
and stay that way.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = [
    "Monomial",
    "Poly",
    "TensorPoly",
    "mul",
    "tensor_mul",
    "coproduct",
    "iterated_coproduct",
    "partial",
]


def _mono_key(mono: Monomial) -> tuple[int, Monomial]:
    # graded-lex: total degree first, then exponent vector
    return (sum(mono), mono)


def _tensor_key(monos: tuple[Monomial, ...]) -> tuple:
    return tuple(_mono_key(m) for m in monos)


def _format_coeff(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_coeff(tok: str) -> Fraction:
    return Fraction(tok)


def _add_exps(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _mono_splits(exp: int, n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Compositions of a single exponent into n ordered parts with multinomials."""
    if n == 1:
        return (((exp,), 1),)
    out = []
    for first in range(exp + 1):
        for rest, mult in _mono_splits(exp - first, n - 1):
            out.append(((first, *rest), comb(exp, first) * mult))
    return tuple(out)


@lru_cache(maxsize=None)
def _delta_n_monomial(mono: Monomial, n: int) -> tuple[tuple[tuple[Monomial, ...], int], ...]:
    """All ways of splitting x^mono across n tensor slots, with multinomial weights."""
    splits: list[tuple[tuple[Monomial, ...], int]] = [((tuple(),) * n, 1)]
    # splits[k] accumulates slot-exponent prefixes over the first k variables
    for exp in mono:
        new: list[tuple[tuple[Monomial, ...], int]] = []
        for slots, mult in splits:
            for parts, m2 in _mono_splits(exp, n):
                new.append(
                    (tuple(s + (p,) for s, p in zip(slots, parts)), mult * m2)
                )
        splits = new
    return tuple(splits)


class Poly:
    """Polynomial in ``dim`` variables with Fraction coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Monomial, Scalar] | None = None):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != dim:
                    raise ValueError(f"monomial {mono} has wrong dimension (want {dim})")
                c = Fraction(c)
                if c:
                    clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
                    if not clean[tuple(mono)]:
                        del clean[tuple(mono)]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Poly":
        return cls(dim)

    @classmethod
    def one(cls, dim: int) -> "Poly":
        return cls(dim, {(0,) * dim: 1})

    @classmethod
    def variable(cls, i: int, dim: int) -> "Poly":
        """The generator x_i (1-based index)."""
        if not 1 <= i <= dim:
            raise ValueError(f"variable index {i} out of range 1..{dim}")
        mono = tuple(1 if j == i - 1 else 0 for j in range(dim))
        return cls(dim, {mono: 1})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: Scalar = 1) -> "Poly":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Poly(self.dim, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.dim, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            self._check(other)
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    key = _add_exps(m1, m2)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
            return Poly(self.dim, out)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        return Poly(self.dim, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def _check(self, other: "Poly") -> None:
        if self.dim != other.dim:
            raise ValueError("mixed dimensions")

    def to_key(self) -> tuple:
        return (self.dim, tuple(sorted(self.terms.items())))

    # -- calculus / coalgebra ----------------------------------------------

    def partial(self, i: int) -> "Poly":
        """d/dx_i (1-based)."""
        if not 1 <= i <= self.dim:
            raise ValueError(f"variable index {i} out of range 1..{self.dim}")
        j = i - 1
        out: dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            if mono[j]:
                key = tuple(e - 1 if k == j else e for k, e in enumerate(mono))
                out[key] = out.get(key, Fraction(0)) + c * mono[j]
        return Poly(self.dim, out)

    def partial_multi(self, d_exps: Monomial) -> "Poly":
        """Apply prod_i (d/dx_i)^{d_exps[i]}."""
        out = self
        for i, k in enumerate(d_exps, start=1):
            for _ in range(k):
                out = out.partial(i)
                if out.is_zero():
                    return out
        return out

    def coproduct(self) -> "TensorPoly":
        return self.iterated_coproduct(2)

    def iterated_coproduct(self, n: int) -> "TensorPoly":
        """Delta^(n): A -> A^(x)n; n=1 is the identity embedding."""
        if n < 1:
            raise ValueError("n must be >= 1")
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for mono, c in self.terms.items():
            for slots, mult in _delta_n_monomial(mono, n):
                out[slots] = out.get(slots, Fraction(0)) + c * mult
        return TensorPoly(self.dim, n, out)

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0/1 : " + " ".join(["0"] * self.dim)
        lines = []
        for mono in sorted(self.terms, key=_mono_key):
            lines.append(
                _format_coeff(self.terms[mono]) + " : " + " ".join(map(str, mono))
            )
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        dim = None
        for coeff, slots in _parse_term_lines(text):
            if len(slots) != 1:
                raise ValueError("Poly text must have a single slot per line")
            mono = slots[0]
            if dim is None:
                dim = len(mono)
            elif len(mono) != dim:
                raise ValueError("inconsistent dimension in Poly text")
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        if dim is None:
            raise ValueError("empty Poly text")
        return cls(dim, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        bits = []
        for mono in sorted(self.terms, key=_mono_key):
            c = self.terms[mono]
            mono_s = "*".join(
                f"x{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e
            )
            bits.append(f"{c}" + (f"*{mono_s}" if mono_s else ""))
        return "Poly(" + " + ".join(bits) + ")"


class TensorPoly:
    """Element of A^(x)n: Fraction combination of monomial tensors."""

    __slots__ = ("dim", "arity", "terms")

    def __init__(
        self,
        dim: int,
        arity: int,
        terms: Mapping[tuple[Monomial, ...], Scalar] | None = None,
    ):
        if dim < 1 or arity < 1:
            raise ValueError("dim and arity must be >= 1")
        self.dim = dim
        self.arity = arity
        clean: dict[tuple[Monomial, ...], Fraction] = {}
        if terms:
            for key, c in terms.items():
                key = tuple(tuple(m) for m in key)
                if len(key) != arity or any(len(m) != dim for m in key):
                    raise ValueError(f"bad tensor key {key}")
                c = Fraction(c)
                if c:
                    clean[key] = clean.get(key, Fraction(0)) + c
                    if not clean[key]:
                        del clean[key]
        self.terms = clean

    @classmethod
    def zero(cls, dim: int, arity: int) -> "TensorPoly":
        return cls(dim, arity)

    @classmethod
    def of(cls, *factors: Poly) -> "TensorPoly":
        """Tensor product of polynomials (concatenation of slots)."""
        if not factors:
            raise ValueError("need at least one factor")
        dim = factors[0].dim
        keys: list[tuple[tuple[Monomial, ...], Fraction]] = [(tuple(), Fraction(1))]
        for f in factors:
            if f.dim != dim:
                raise ValueError("mixed dimensions")
            keys = [
                (key + (mono,), c * c2)
                for key, c in keys
                for mono, c2 in f.terms.items()
            ]
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for key, c in keys:
            out[key] = out.get(key, Fraction(0)) + c
        return cls(dim, len(factors), out)

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return TensorPoly(self.dim, self.arity, out)

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def __neg__(self) -> "TensorPoly":
        return TensorPoly(self.dim, self.arity, {k: -c for k, c in self.terms.items()})

    def scale(self, c: Scalar) -> "TensorPoly":
        c = Fraction(c)
        return TensorPoly(self.dim, self.arity, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, other: Scalar) -> "TensorPoly":
        return self.scale(other)

    def __mul__(self, other):
        if isinstance(other, TensorPoly):
            return self.tensor_mul(other)
        return self.scale(other)

    def tensor_mul(self, other: "TensorPoly") -> "TensorPoly":
        """Slotwise product: (a1 (x) .. (x) an) * (b1 (x) .. (x) bn)."""
        self._check(other)
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(_add_exps(a, b) for a, b in zip(k1, k2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return TensorPoly(self.dim, self.arity, out)

    def otimes(self, other: "TensorPoly") -> "TensorPoly":
        """Concatenate slots: A^(x)m (x) A^(x)n -> A^(x)(m+n)."""
        if self.dim != other.dim:
            raise ValueError("mixed dimensions")
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = k1 + k2
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return TensorPoly(self.dim, self.arity + other.arity, out)

    def mul_into_slot(self, i: int, p: Poly) -> "TensorPoly":
        """Multiply slot i (1-based) by the polynomial p."""
        if not 1 <= i <= self.arity:
            raise ValueError("slot out of range")
        if p.dim != self.dim:
            raise ValueError("mixed dimensions")
        out: dict[tuple[Monomial, ...], Fraction] = {}
        j = i - 1
        for key, c in self.terms.items():
            for mono, c2 in p.terms.items():
                nk = key[:j] + (_add_exps(key[j], mono),) + key[j + 1 :]
                out[nk] = out.get(nk, Fraction(0)) + c * c2
        return TensorPoly(self.dim, self.arity, out)

    def coproduct_slot(self, i: int) -> "TensorPoly":
        """Apply Delta to slot i (1-based), raising arity by one."""
        if not 1 <= i <= self.arity:
            raise ValueError("slot out of range")
        j = i - 1
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for key, c in self.terms.items():
            for slots, mult in _delta_n_monomial(key[j], 2):
                nk = key[:j] + slots + key[j + 1 :]
                out[nk] = out.get(nk, Fraction(0)) + c * mult
        return TensorPoly(self.dim, self.arity + 1, out)

    def slot(self, i: int) -> Poly:
        """Collapse to the marginal of slot i assuming all other slots are scalars.

        Only valid when every term has exponent zero outside slot i; used by
        tests and the CLI for pretty-printing arity-1 tensors.
        """
        j = i - 1
        out: dict[Monomial, Fraction] = {}
        for key, c in self.terms.items():
            if any(sum(m) for k, m in enumerate(key) if k != j):
                raise ValueError("tensor is not concentrated in one slot")
            out[key[j]] = out.get(key[j], Fraction(0)) + c
        return Poly(self.dim, out)

    def as_poly(self) -> Poly:
        if self.arity != 1:
            raise ValueError("arity != 1")
        return Poly(self.dim, {k[0]: c for k, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TensorPoly)
            and self.dim == other.dim
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def to_key(self) -> tuple:
        return (self.dim, self.arity, tuple(sorted(self.terms.items())))

    def max_abs_float(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def to_text(self) -> str:
        if not self.terms:
            zero_slot = " ".join(["0"] * self.dim)
            return "0/1 : " + " | ".join([zero_slot] * self.arity)
        lines = []
        for key in sorted(self.terms, key=_tensor_key):
            slots = " | ".join(" ".join(map(str, m)) for m in key)
            lines.append(_format_coeff(self.terms[key]) + " : " + slots)
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "TensorPoly":
        terms: dict[tuple[Monomial, ...], Fraction] = {}
        dim = arity = None
        for coeff, slots in _parse_term_lines(text):
            if dim is None:
                arity = len(slots)
                dim = len(slots[0])
            if len(slots) != arity or any(len(m) != dim for m in slots):
                raise ValueError("inconsistent shape in TensorPoly text")
            key = tuple(slots)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        if dim is None:
            raise ValueError("empty TensorPoly text")
        return cls(dim, arity, terms)

    def __repr__(self) -> str:
        return f"TensorPoly(dim={self.dim}, arity={self.arity}, nterms={len(self.terms)})"

    def _check(self, other: "TensorPoly") -> None:
        if self.dim != other.dim or self.arity != other.arity:
            raise ValueError("shape mismatch")


def _parse_term_lines(text: str) -> Iterator[tuple[Fraction, list[Monomial]]]:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, tail = line.partition(":")
        if not tail and ":" not in line:
            raise ValueError(f"malformed term line: {raw!r}")
        coeff = _parse_coeff(head.strip())
        slots = [
            tuple(int(t) for t in part.split())
            for part in tail.split("|")
        ]
        if any(len(s) == 0 for s in slots):
            raise ValueError(f"malformed term line: {raw!r}")
        yield coeff, slots


# Module-level conveniences mirroring the class methods.

def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def tensor_mul(p: TensorPoly, q: TensorPoly) -> TensorPoly:
    return p.tensor_mul(q)


def coproduct(p: Poly) -> TensorPoly:
    return p.coproduct()


def iterated_coproduct(p: Poly, n: int) -> TensorPoly:
    return p.iterated_coproduct(n)


def partial(p: Poly, i: int) -> Poly:
    return p.partial(i)
