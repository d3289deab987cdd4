import math
import random
from fractions import Fraction

import pytest

import oracles
from eta_forge import (
    DomainError,
    GaussRat,
    UnitPhase,
    UPoly,
    WeylPoly,
    WeylWord,
    commutator,
    lemma_suite,
    mod_observer,
    mod_vacuum,
    normal_order,
    parse_weyl_poly,
    rest_frames,
    substitute_u,
)

A = WeylPoly.gen_a()
B = WeylPoly.gen_b()
U = UPoly.gen()


# ---------------------------------------------------------------------------
# exact scalars
# ---------------------------------------------------------------------------

def test_gauss_rational_arithmetic():
    i = GaussRat(Fraction(0), Fraction(1))
    assert i * i == GaussRat.of(-1)
    z = GaussRat(Fraction(1, 2), Fraction(-3))
    assert z * z.conjugate() == GaussRat.of(Fraction(1, 4) + 9)
    assert (z / z) == GaussRat.of(1)


def test_gauss_rational_rejects_floats():
    with pytest.raises(DomainError):
        GaussRat.of(0.5 + 0j)


# ---------------------------------------------------------------------------
# normal ordering
# ---------------------------------------------------------------------------

def test_ba_rewrites():
    assert normal_order("BA") == A * B + WeylPoly.scalar(U)
    assert str(normal_order("BA")) == "a b + u"


def test_ab_already_normal():
    assert normal_order("AB") == A * B
    assert str(normal_order("AB")) == "a b"


def test_bbaa_canonical():
    got = normal_order("BBAA")
    want = parse_weyl_poly("a^2 b^2 + 4u a b + 2u^2")
    assert got == want


def test_empty_word_is_unit():
    assert normal_order("") == WeylPoly.one()


def test_word_validation():
    with pytest.raises(DomainError):
        WeylWord("BAC")


def test_rewrite_strategy_is_irrelevant():
    rng = random.Random(12345)
    words = []
    for _ in range(120):
        length = rng.randint(0, 12)
        words.append("".join(rng.choice("AB") for _ in range(length)))
    for w in words:
        first = normal_order(w)
        last = normal_order(w, choose=lambda redexes, _w: redexes[-1])
        rnd = normal_order(w, choose=lambda redexes, _w: rng.choice(redexes))
        assert first == last == rnd, w


def test_normal_order_is_multiplicative():
    rng = random.Random(99)
    for _ in range(60):
        w1 = "".join(rng.choice("AB") for _ in range(rng.randint(0, 5)))
        w2 = "".join(rng.choice("AB") for _ in range(rng.randint(0, 5)))
        assert normal_order(w1 + w2) == normal_order(w1) * normal_order(w2), (w1, w2)


def test_grading_parity_and_u_degree_drop():
    # each applied commutator trades one a and one b for one power of u:
    # a monomial a^i b^j with coefficient u^r satisfies i + j = len(w) - 2r
    rng = random.Random(4242)
    for _ in range(80):
        w = "".join(rng.choice("AB") for _ in range(rng.randint(0, 10)))
        poly = normal_order(w)
        for (i, j), coeff in poly.terms.items():
            assert ((i + j) - len(w)) % 2 == 0, w
            for r in coeff.coeffs:
                assert i + j == len(w) - 2 * r, (w, i, j, r)


def test_matrix_model_oracle():
    # compare against a-as-multiplication / b-as-derivative matrices on a
    # truncated polynomial space, u = 1; the first len+2 basis columns are
    # computed in a large enough ambient space to be truncation-free
    rng = random.Random(2718)
    words = ["BA", "AB", "BBAA", "ABBA", "BABA"]
    for _ in range(40):
        words.append("".join(rng.choice("AB") for _ in range(rng.randint(1, 8))))
    for w in words:
        span = len(w) + 2
        dim = 2 * len(w) + 2
        want = oracles.word_matrix(w, dim)
        poly = substitute_u(normal_order(w), 1)
        got = [[0] * dim for _ in range(dim)]
        for (i, j), coeff in poly.terms.items():
            c = coeff.coeffs.get(0)
            mono = oracles.monomial_matrix(i, j, dim)
            frac = Fraction(c.re)
            assert c.im == 0
            for r in range(dim):
                for s in range(dim):
                    got[r][s] += frac * mono[r][s]
        for col in range(span):
            for row in range(dim):
                assert got[row][col] == want[row][col], (w, row, col)


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

def test_mod_vacuum_examples():
    p = normal_order("BBAA")
    assert mod_vacuum(p) == WeylPoly.scalar(UPoly({2: 2}))
    assert mod_vacuum(WeylPoly.scalar(UPoly.const(7))) == WeylPoly.scalar(UPoly.const(7))
    assert mod_vacuum(A * B).is_zero


def test_mod_observer_examples():
    assert mod_observer(A * B + WeylPoly.one()) == WeylPoly.one()
    assert mod_observer(normal_order("BBAA")) == WeylPoly.scalar(UPoly({2: 2}))
    assert mod_observer(B).is_zero
    assert mod_observer(A).is_zero


# ---------------------------------------------------------------------------
# commutators and the lemma suite
# ---------------------------------------------------------------------------

def test_commutator_examples():
    assert commutator(B, A ** 3) == WeylPoly.monomial(2, 0).scale(U * 3)
    assert commutator(A, B ** 2) == WeylPoly.monomial(0, 1).scale(U * (-2))
    assert commutator(A, A).is_zero


def test_lemma_suite_small_and_exact():
    rep = lemma_suite(1)
    assert rep.n_max == 1
    assert any("1!" in c for c in rep.checks)
    rep5 = lemma_suite(5)
    assert len(rep5.checks) == 25


def test_lemma_suite_ten_exact_factorials():
    rep = lemma_suite(10)
    # b^10 a^10 = u^10 10! mod vacuum, coefficient exact
    p = mod_vacuum(WeylPoly.monomial(0, 10) * WeylPoly.monomial(10, 0))
    assert p == WeylPoly.scalar(UPoly({10: math.factorial(10)}))
    assert rep.n_max == 10


def test_lemma_suite_rejects_bad_input():
    with pytest.raises(DomainError):
        lemma_suite(0)


def test_vacuum_norm_is_factorial_with_phase():
    for n in (1, 2, 3, 4, 7):
        p = mod_vacuum(WeylPoly.monomial(0, n) * WeylPoly.monomial(n, 0))
        assert p == WeylPoly.scalar(UPoly({n: math.factorial(n)}))


def test_h_eigenvalues():
    H = (A * B + B * A).scale(GaussRat(Fraction(1, 2)))
    for k in (0, 1, 2, 5):
        lhs = mod_vacuum(H * WeylPoly.monomial(k, 0))
        rhs = WeylPoly.monomial(k, 0).scale(UPoly({1: Fraction(2 * k + 1, 2)}))
        assert lhs == rhs


# ---------------------------------------------------------------------------
# substitution and text round trip
# ---------------------------------------------------------------------------

def test_substitute_u_one():
    p = normal_order("BBAA")
    q = substitute_u(p, 1)
    assert q == parse_weyl_poly("a^2 b^2 + 4 a b + 2")


def test_substitute_u_i():
    p = normal_order("BA")  # a b + u
    q = substitute_u(p, GaussRat(Fraction(0), Fraction(1)))
    want = WeylPoly({(1, 1): UPoly.one(), (0, 0): UPoly({0: GaussRat(Fraction(0), Fraction(1))})})
    assert q == want


def _random_weyl_poly(rng):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        ij = (rng.randint(0, 4), rng.randint(0, 4))
        coeffs = {}
        for _ in range(rng.randint(1, 3)):
            coeffs[rng.randint(0, 3)] = GaussRat(
                Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
                Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
        poly = UPoly(coeffs)
        if not poly.is_zero:
            terms[ij] = poly
    return WeylPoly(terms) if terms else WeylPoly.one()


def test_text_round_trip_random():
    rng = random.Random(31337)
    for _ in range(200):
        p = _random_weyl_poly(rng)
        assert parse_weyl_poly(str(p)) == p, str(p)


def test_text_round_trip_edge_cases():
    for text in ("0", "1", "-1", "u", "-u", "a", "b", "a b", "2u^2",
                 "i a", "-i b^3", "(1/2)i u a", "(1+2i)u^2 a b",
                 "a^2 b^2 + 4u a b + 2u^2"):
        p = parse_weyl_poly(text)
        assert parse_weyl_poly(str(p)) == p, text


# ---------------------------------------------------------------------------
# rest frames
# ---------------------------------------------------------------------------

def test_rest_frames_u_one():
    frames = rest_frames(1)
    ws = [f.w.exact_pair().to_complex() for f in frames]
    assert set(ws) == {1, -1, 1j, -1j}
    for f in frames:
        if f.w.exact_pair().to_complex() in (1j, -1j):
            assert f.swaps_ab
            assert f.h_scale.exact_pair().to_complex() == -1
            assert f.time_scale.exact_pair().to_complex() == -1
        else:
            assert not f.swaps_ab
            assert f.h_scale.exact_pair().to_complex() == 1


def test_rest_frames_identity_frame():
    frames = rest_frames(1)
    ident = [f for f in frames if f.w.turns == 0][0]
    assert not ident.swaps_ab
    assert ident.h_scale.turns == 0 and ident.time_scale.turns == 0


def test_rest_frames_u_i():
    frames = rest_frames(1j)
    # w solves w^4 = -1: the four primitive eighth roots
    assert [f.w.turns for f in frames] == [Fraction(1, 8), Fraction(3, 8),
                                           Fraction(5, 8), Fraction(7, 8)]
    for f in frames:
        w2 = f.w ** 2
        assert f.swaps_ab == (w2.turns == Fraction(3, 4))  # w^2 == -i


def test_rest_frames_symbolic_angle():
    frames = rest_frames(Fraction(1, 3))  # u = e^(2 pi i/3)
    for f in frames:
        assert (f.w ** 4).turns == (UnitPhase(Fraction(1, 3)) ** 2).turns
    assert sum(1 for f in frames if f.swaps_ab) == 2


def test_rest_frames_rejects_off_circle():
    with pytest.raises(DomainError):
        rest_frames(0.5 + 0.5j)
