import itertools
import random
from fractions import Fraction
from itertools import permutations

from biquant.bigbracket import (
    OddPoly,
    big_bracket,
    cocycle_defect,
    cojacobiator,
    extract_tensor,
    from_bracket,
    from_cobracket,
    is_lie_bialgebra,
    jacobiator,
    self_bracket_components,
)
from biquant.gs import co_g_bracket, d_gs1, d_gs2, g_bracket, hkr
from biquant.operators import Cochain, StructTensor
from biquant.poly import Poly

PERM3_SIGNS = list(zip(permutations(range(3)), (1, -1, -1, 1, 1, -1)))


def rand_homog(rng, dim, deg):
    gens = list(range(2 * dim))
    terms = {}
    for _ in range(4):
        k = tuple(sorted(rng.sample(gens, deg)))
        terms[k] = Fraction(rng.randint(-4, 4))
    return OddPoly(dim, terms)


def rand_tensor(rng, dim, a, b, n=4):
    entries = []
    for _ in range(n):
        ins = tuple(sorted(rng.sample(range(1, dim + 1), a)))
        outs = tuple(sorted(rng.sample(range(1, dim + 1), b)))
        entries.append((ins, outs, Fraction(rng.randint(-3, 3))))
    return StructTensor.from_entries(a, b, dim, entries)


def solvable_pair(dim=2):
    c = StructTensor.from_entries(2, 1, dim, [((1, 2), (2,), 1)])
    t = StructTensor.from_entries(1, 2, dim, [((2,), (1, 2), 1)])
    return c, t


# -- exterior algebra --------------------------------------------------------


def test_generators_anticommute_and_square_to_zero():
    x1 = OddPoly.xi(1, 2)
    e2 = OddPoly.e(2, 2)
    assert (x1 * e2 + e2 * x1).is_zero()
    assert (x1 * x1).is_zero()
    assert (e2 * e2).is_zero()


def test_product_associative_random():
    rng = random.Random(1)
    for _ in range(40):
        a = rand_homog(rng, 3, rng.randint(1, 3))
        b = rand_homog(rng, 3, rng.randint(1, 3))
        c = rand_homog(rng, 3, rng.randint(1, 3))
        assert (a * b) * c == a * (b * c)


def test_component_slicing():
    p = OddPoly(2, {(0, 1, 2): Fraction(3), (0, 2, 3): Fraction(-1)})
    assert p.component(2, 1).terms == {(0, 1, 2): Fraction(3)}
    assert p.component(1, 2).terms == {(0, 2, 3): Fraction(-1)}
    assert p.component(3, 0).is_zero()


# -- the pairing -------------------------------------------------------------------


def test_pairing_normalization():
    for d in (2, 3):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                v = big_bracket(OddPoly.xi(i, d), OddPoly.e(j, d))
                w = big_bracket(OddPoly.e(j, d), OddPoly.xi(i, d))
                want = OddPoly(d, {(): Fraction(1)}) if i == j else OddPoly.zero(d)
                assert v == want and w == want
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                assert big_bracket(OddPoly.xi(i, d), OddPoly.xi(j, d)).is_zero()
                assert big_bracket(OddPoly.e(i, d), OddPoly.e(j, d)).is_zero()


def test_graded_antisymmetry_and_jacobi():
    rng = random.Random(7)
    for _ in range(60):
        d = rng.choice((2, 3))
        pa, pb, pc = (rng.randint(1, 4) for _ in range(3))
        a, b, c = (rand_homog(rng, d, p) for p in (pa, pb, pc))
        assert big_bracket(a, b) == big_bracket(b, a).scale(-((-1) ** (pa * pb)))
        jac = (
            big_bracket(a, big_bracket(b, c))
            - big_bracket(big_bracket(a, b), c)
            - big_bracket(b, big_bracket(a, c)).scale((-1) ** (pa * pb))
        )
        assert jac.is_zero()


def test_graded_leibniz():
    rng = random.Random(8)
    for _ in range(40):
        d = 3
        pa, pb, pc = (rng.randint(1, 3) for _ in range(3))
        a, b, c = (rand_homog(rng, d, p) for p in (pa, pb, pc))
        lhs = big_bracket(a, b * c)
        rhs = big_bracket(a, b) * c + (b * big_bracket(a, c)).scale((-1) ** (pa * pb))
        assert lhs == rhs


# -- structure equations vs componentwise oracles -----------------------------------


def embed31(J):
    d = J.dim
    terms = {}
    for (ins, outs), v in J.items():
        (i, j, k), (l,) = ins, outs
        terms[(i - 1, j - 1, k - 1, d + l - 1)] = v
    return OddPoly(d, terms)


def embed13(J):
    d = J.dim
    terms = {}
    for (ins, outs), v in J.items():
        (i,), (k, l, r) = ins, outs
        terms[(i - 1, d + k - 1, d + l - 1, d + r - 1)] = v
    return OddPoly(d, terms)


def embed22(D):
    d = D.dim
    terms = {}
    for (ins, outs), v in D.items():
        (i, j), (p, q) = ins, outs
        terms[(i - 1, j - 1, d + p - 1, d + q - 1)] = v
    return OddPoly(d, terms)


def test_self_bracket_is_twice_jacobiator():
    rng = random.Random(9)
    for _ in range(25):
        c = rand_tensor(rng, 3, 2, 1)
        mu = from_bracket(c)
        assert big_bracket(mu, mu) == embed31(jacobiator(c)).scale(2)


def test_cobracket_self_bracket_is_minus_twice_cojacobiator():
    rng = random.Random(10)
    for _ in range(25):
        t = rand_tensor(rng, 3, 1, 2)
        de = from_cobracket(t)
        assert big_bracket(de, de) == embed13(cojacobiator(t)).scale(-2)


def test_cross_bracket_is_twice_cocycle_defect():
    rng = random.Random(11)
    for _ in range(25):
        d = 3
        c = rand_tensor(rng, d, 2, 1)
        t = rand_tensor(rng, d, 1, 2)
        mu, de = from_bracket(c), from_cobracket(t)
        cross = big_bracket(mu, de) + big_bracket(de, mu)
        assert cross == embed22(cocycle_defect(c, t)).scale(2)


def test_extract_tensor_round_trip():
    rng = random.Random(12)
    c = rand_tensor(rng, 3, 2, 1)
    assert extract_tensor(from_bracket(c), 2, 1) == c
    t = rand_tensor(rng, 3, 1, 2)
    assert extract_tensor(from_cobracket(t), 1, 2) == t


# -- the validator -----------------------------------------------------------------


def test_solvable_two_dim_example_is_a_bialgebra():
    c, t = solvable_pair()
    rep = is_lie_bialgebra(c, t)
    assert rep.ok
    assert rep.jacobi_ok and rep.cojacobi_ok and rep.cocycle_ok
    assert rep.jacobi_residual == 0
    assert all(line.endswith("max_abs=0") for line in rep.lines())


def test_two_dim_example_padded_to_three_dims():
    c = StructTensor.from_entries(2, 1, 3, [((1, 2), (2,), 1)])
    t = StructTensor.from_entries(1, 2, 3, [((2,), (1, 2), 1)])
    assert is_lie_bialgebra(c, t).ok


def test_sl2_with_trivial_cobracket():
    c = StructTensor.from_entries(
        2, 1, 3, [((1, 2), (2,), 2), ((1, 3), (3,), -2), ((2, 3), (1,), 1)]
    )
    t = StructTensor.from_entries(1, 2, 3, [])
    rep = is_lie_bialgebra(c, t)
    assert rep.ok
    assert jacobiator(c).is_zero()


def test_dimension_two_is_automatic():
    # In two dimensions there is no room for a jacobiator and the cocycle
    # defect cancels identically, so every antisymmetric pair validates.
    rng = random.Random(13)
    for _ in range(30):
        c = rand_tensor(rng, 2, 2, 1, n=2)
        t = rand_tensor(rng, 2, 1, 2, n=2)
        assert is_lie_bialgebra(c, t).ok
        assert jacobiator(c).is_zero()
        assert cojacobiator(t).is_zero()
        assert cocycle_defect(c, t).is_zero()


def test_equivalences_random_three_dims():
    rng = random.Random(14)
    saw_bad_jacobi = saw_bad_cocycle = saw_bad_cojacobi = False
    for _ in range(60):
        c = rand_tensor(rng, 3, 2, 1)
        t = rand_tensor(rng, 3, 1, 2)
        comps = self_bracket_components(c, t)
        assert comps["mu,mu"].is_zero() == jacobiator(c).is_zero()
        assert comps["delta,delta"].is_zero() == cojacobiator(t).is_zero()
        assert comps["mu,delta"].is_zero() == cocycle_defect(c, t).is_zero()
        rep = is_lie_bialgebra(c, t)
        assert rep.ok == (
            jacobiator(c).is_zero()
            and cojacobiator(t).is_zero()
            and cocycle_defect(c, t).is_zero()
        )
        saw_bad_jacobi |= not rep.jacobi_ok
        saw_bad_cocycle |= not rep.cocycle_ok
        saw_bad_cojacobi |= not rep.cojacobi_ok
    # the sample must exercise actual violations, not just trivial zeros
    assert saw_bad_jacobi and saw_bad_cocycle and saw_bad_cojacobi


def test_report_lines_name_the_violated_axiom():
    # [[x3,x1],x2] = -x3 is the only surviving jacobiator term
    c = StructTensor.from_entries(2, 1, 3, [((1, 2), (3,), 1), ((1, 3), (1,), 1)])
    t = StructTensor.from_entries(1, 2, 3, [])
    rep = is_lie_bialgebra(c, t)
    assert not rep.jacobi_ok
    lines = rep.lines()
    assert any(line.startswith("jacobi violated") for line in lines)
    assert any(line.startswith("cojacobi ok") for line in lines)


# -- boundary-stratum pairing against the embedded operators ------------------------


def alt_on_linear(C, d):
    lin = [Poly.variable(i + 1, d) for i in range(d)]
    out = {}
    for i, j, k in itertools.combinations(range(d), 3):
        tot = None
        for perm, sign in PERM3_SIGNS:
            trip = (i, j, k)
            v = C(lin[trip[perm[0]]], lin[trip[perm[1]]], lin[trip[perm[2]]]).scale(sign)
            tot = v if tot is None else tot + v
        out[(i, j, k)] = tot
    return out


def alt_lin_out(C, d):
    lin = [Poly.variable(i + 1, d) for i in range(d)]
    out = {}
    for i in range(d):
        v = C(lin[i])
        acc = {}
        for key, c in v.terms.items():
            for perm, sign in PERM3_SIGNS:
                pk = tuple(key[p] for p in perm)
                acc[pk] = acc.get(pk, Fraction(0)) + sign * c
        out[i] = {k: w for k, w in acc.items() if w}
    return out


def multis(dim, lo, hi):
    return [
        m for m in itertools.product(range(hi + 1), repeat=dim) if lo <= sum(m) <= hi
    ]


def test_coboundaries_vanish_under_antisymmetrized_linear_pairing():
    rng = random.Random(15)
    d = 3
    Ds, Ms = multis(d, 1, 2), multis(d, 0, 2)
    for _ in range(15):
        terms = [
            (
                Fraction(rng.randint(-3, 3)),
                (rng.choice(Ds), rng.choice(Ds)),
                (rng.choice(Ms),),
            )
            for _ in range(5)
        ]
        eta = Cochain.from_template(2, 1, d, terms)
        assert all(v.terms == {} for v in alt_on_linear(d_gs1(eta), d).values())
        terms = [
            (
                Fraction(rng.randint(-3, 3)),
                (rng.choice(Ds),),
                (rng.choice(Ms), rng.choice(Ms)),
            )
            for _ in range(5)
        ]
        eta2 = Cochain.from_template(1, 2, d, terms)
        assert all(not v for v in alt_lin_out(d_gs2(eta2), d).values())


def test_stratum_class_identity():
    """Insertion-sum bracket of two embedded biderivations agrees with one
    third of the embedded pairing bracket at the level of antisymmetrized
    linear evaluations (the part blind to coboundaries)."""
    rng = random.Random(16)
    d = 3
    for _ in range(4):
        c1 = rand_tensor(rng, d, 2, 1)
        c2 = rand_tensor(rng, d, 2, 1)
        A = g_bracket(hkr(c1), hkr(c2))
        cross = big_bracket(from_bracket(c1), from_bracket(c2)) + big_bracket(
            from_bracket(c2), from_bracket(c1)
        )
        B = hkr(extract_tensor(cross, 3, 1))
        assert d_gs1(A).is_zero_op(degree=1)
        va = alt_on_linear(A, d)
        vb = alt_on_linear(B, d)
        for key in va:
            diff = va[key] + vb[key].scale(Fraction(-1, 3))
            assert diff.terms == {}


def test_costratum_class_identity():
    rng = random.Random(17)
    d = 3
    for _ in range(4):
        t1 = rand_tensor(rng, d, 1, 2)
        t2 = rand_tensor(rng, d, 1, 2)
        A = co_g_bracket(hkr(t1), hkr(t2))
        cross = big_bracket(from_cobracket(t1), from_cobracket(t2)) + big_bracket(
            from_cobracket(t2), from_cobracket(t1)
        )
        B = hkr(extract_tensor(cross, 1, 3))
        va = alt_lin_out(A, d)
        vb = alt_lin_out(B, d)
        for i in range(d):
            ta, tb = va[i], vb[i]
            for mk in set(ta) | set(tb):
                x = ta.get(mk, Fraction(0))
                y = tb.get(mk, Fraction(0))
                assert x == Fraction(-1, 3) * y


def _gauss_solve(cols, rhs):
    """Exact dense solve of sum_j x_j cols[j] = rhs over the rationals.

    Columns and rhs are sparse dicts keyed by arbitrary hashables.  Returns
    the coefficient vector, or None when inconsistent.
    """
    rows = sorted(set(k for c in cols for k in c) | set(rhs), key=repr)
    ridx = {k: i for i, k in enumerate(rows)}
    n = len(cols)
    mat = [[Fraction(0)] * (n + 1) for _ in rows]
    for j, c in enumerate(cols):
        for k, v in c.items():
            mat[ridx[k]][j] = v
    for k, v in rhs.items():
        mat[ridx[k]][n] = v
    row = 0
    piv = []
    for col in range(n):
        sel = next((r for r in range(row, len(mat)) if mat[r][col]), None)
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        pv = mat[row][col]
        mat[row] = [x / pv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        piv.append(col)
        row += 1
    for r in range(len(mat)):
        if all(mat[r][c] == 0 for c in range(n)) and mat[r][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(piv):
        sol[col] = mat[i][n]
    return sol


def test_stratum_bracket_is_exact_in_two_dims():
    # with no room for an antisymmetric (3,1) tensor the whole bracket
    # must be a coboundary; find the primitive over the rationals
    rng = random.Random(18)
    d = 2
    c1 = rand_tensor(rng, d, 2, 1, n=2)
    c2 = rand_tensor(rng, d, 2, 1, n=2)
    A = g_bracket(hkr(c1), hkr(c2))

    Ds, Ms = multis(d, 1, 2), multis(d, 0, 2)
    basis = [(D1, D2, M) for D1 in Ds for D2 in Ds for M in Ms]
    probe_monos = [m for m in itertools.product(range(4), repeat=d) if sum(m) <= 3]
    probes = [
        tuple(Poly.monomial(m) for m in t)
        for t in itertools.product(probe_monos, repeat=3)
    ]
    rng.shuffle(probes)
    probes = probes[:70]

    def flatten(vals):
        flat = {}
        for pi, v in enumerate(vals):
            for k, cc in v.terms.items():
                flat[(pi, k)] = cc
        return flat

    cols = []
    for D1, D2, M in basis:
        eta = Cochain.from_template(2, 1, d, [(Fraction(1), (D1, D2), (M,))])
        de = d_gs1(eta)
        cols.append(flatten([de(*p) for p in probes]))
    rhs = flatten([A(*p) for p in probes])
    sol = _gauss_solve(cols, rhs)
    assert sol is not None, "no primitive found in the template space"
    eta = Cochain.from_template(
        2,
        1,
        d,
        [(v, (b[0], b[1]), (b[2],)) for b, v in zip(basis, sol) if v],
    )
    assert d_gs1(eta).equals(A, degree=4)
