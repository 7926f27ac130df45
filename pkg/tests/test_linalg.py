import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from instances import CON_A, CON_B, WINDOW_A, WINDOW_Q, Z, m, v
from strategies import ADDITIVE, ALL, columns, matrices, square
from tropopt import (
    MAX_PLUS,
    MIN_PLUS,
    Matrix,
    Scalar,
    conjugate_transpose,
    kleene_star,
    matrix_power,
    normal_form,
    regularity,
    spectral_radius,
    tr_cumulative,
    trace,
)
from tropopt.errors import DimensionError, SemifieldMismatch, TropicalError
from tropopt.linalg import spectral_terms


class TestExamples:
    def test_products(self):
        assert WINDOW_A @ WINDOW_A == m([[6, 6, 5], [4, 6, 3], [2, 4, 2]])
        assert CON_A @ CON_B == m([[0, 2, 5], [3, 0, 5], [2, -1, 3]])
        assert WINDOW_A + Matrix.zeros(MAX_PLUS, 3, 3) == WINDOW_A

    def test_powers(self):
        assert matrix_power(WINDOW_A, 3) == m([[8, 10, 7], [8, 8, 7], [6, 6, 5]])
        assert matrix_power(WINDOW_A, 0) == Matrix.identity(MAX_PLUS, 3)
        assert CON_B ** 2 == m([[0, Z, 0], [1, -2, 1], [Z, -3, 0]])
        with pytest.raises(ValueError):
            matrix_power(WINDOW_A, -1)

    def test_conjugate_transpose(self):
        assert conjugate_transpose(v([1, 1, 1])) == m([[-1, -1, -1]])
        assert conjugate_transpose(WINDOW_Q) @ WINDOW_A == m([[1, 3, 0]])
        assert conjugate_transpose(v([2, Z])) == m([[-2, Z]])
        with pytest.raises(TropicalError):
            conjugate_transpose(Matrix.zeros(MAX_PLUS, 2, 1))

    def test_traces(self):
        assert trace(WINDOW_A) == Scalar.of(MAX_PLUS, 2)
        assert trace(Matrix.identity(MAX_PLUS, 3)) == Scalar.one(MAX_PLUS)
        assert trace(CON_A ** 2) == Scalar.of(MAX_PLUS, 8)
        assert tr_cumulative(CON_B) == Scalar.of(MAX_PLUS, 0)
        assert tr_cumulative(Matrix.zeros(MAX_PLUS, 3, 3)).is_zero
        assert tr_cumulative(Scalar.of(MAX_PLUS, -3) * WINDOW_A) == Scalar.of(MAX_PLUS, 0)

    def test_star(self):
        G = kleene_star(Scalar.of(MAX_PLUS, -3) * WINDOW_A)
        assert G == m([[0, 1, -1], [-1, 0, -2], [-3, -2, 0]])
        assert kleene_star(Matrix.zeros(MAX_PLUS, 3, 3)) == Matrix.identity(MAX_PLUS, 3)
        theta_inv = Scalar.of(MAX_PLUS, -4)
        assert kleene_star(theta_inv * CON_A + CON_B) == m([[0, -2, 1], [1, 0, 2], [-1, -3, 0]])

    def test_spectral_radius(self):
        assert spectral_radius(WINDOW_A) == Scalar.of(MAX_PLUS, 3)
        assert spectral_radius(CON_A) == Scalar.of(MAX_PLUS, 4)
        assert spectral_radius(Matrix.identity(MAX_PLUS, 4)) == Scalar.one(MAX_PLUS)
        terms = spectral_terms(WINDOW_A)
        assert [t.value for _, t, _ in terms] == [2, 6, 8]
        assert terms[2][2].value == Fraction(8, 3)

    def test_regularity(self):
        assert WINDOW_Q.is_regular
        r = regularity(WINDOW_A)
        assert r.row_regular and r.column_regular and not r.regular
        r = regularity(Matrix.zeros(MAX_PLUS, 3, 3))
        assert not (r.regular or r.row_regular or r.column_regular)

    def test_normal_form(self):
        assert normal_form(WINDOW_A).block_sizes == (3,)
        assert normal_form(WINDOW_A).irreducible
        nf = normal_form(Matrix.zeros(MAX_PLUS, 3, 3))
        assert nf.block_sizes == (1, 1, 1)
        nf = normal_form(m([[0, Z], [0, 0]]))
        assert nf.permutation == (0, 1) and nf.block_sizes == (1, 1)

    def test_normal_form_reorders(self):
        # 1 feeds 0, so 1's component must come first
        nf = normal_form(m([[0, 0], [Z, 0]]))
        assert nf.permutation == (1, 0)
        P = nf.apply(m([[0, 0], [Z, 0]]))
        assert P.data[0][1] is None

    def test_errors(self):
        with pytest.raises(DimensionError):
            WINDOW_A @ m([[1, 2]])
        with pytest.raises(SemifieldMismatch):
            WINDOW_A + Matrix.identity(MIN_PLUS, 3)
        with pytest.raises(DimensionError):
            Matrix(MAX_PLUS, [[1, 2], [3]])
        with pytest.raises(DimensionError):
            trace(m([[1, 2]]))


# --- properties ----------------------------------------------------------

additive = st.sampled_from(ADDITIVE)


@st.composite
def square_pair(draw, sfs=ADDITIVE, max_n=4):
    sf = draw(st.sampled_from(sfs))
    n = draw(st.integers(1, max_n))
    return sf, draw(matrices(sf, n)), draw(matrices(sf, n))


@given(square_pair(sfs=ALL))
def test_trace_identities(pair):
    sf, A, B = pair
    assert trace(A + B).isclose(trace(A) + trace(B))
    assert trace(A @ B).isclose(trace(B @ A))
    x = Scalar(sf, sf.lift(Fraction(3, 2)))
    assert trace(x * A).isclose(x * trace(A))


def _word_trace_sum(A, B, m_):
    """Right-hand side of the binomial identity, enumerated independently."""
    sf = A.semifield
    n = A.rows
    acc = trace(matrix_power(B, m_))
    for k in range(1, m_ + 1):
        for split in itertools.product(range(m_ - k + 1), repeat=k):
            if sum(split) != m_ - k:
                continue
            P = Matrix.identity(sf, n)
            for i in split:
                P = P @ A @ matrix_power(B, i)
            acc = acc + trace(P)
    return acc


@given(square_pair(), st.integers(1, 4))
def test_binomial_trace_identity(pair, m_):
    _, A, B = pair
    assert trace(matrix_power(A + B, m_)) == _word_trace_sum(A, B, m_)


@given(additive.flatmap(lambda sf: square(sf, max_n=4)))
def test_carre_inequality(A):
    sf = A.semifield
    lam = spectral_radius(A)
    if not lam.is_zero:
        # scaled by its spectral radius, every cycle weight is at most the identity
        A = lam.inverse() * A
    assert sf.le(tr_cumulative(A).value, sf.one)
    S = kleene_star(A)
    for k in range(0, 2 * A.rows + 1):
        assert matrix_power(A, k) <= S


@given(st.sampled_from(ALL).flatmap(lambda sf: square(sf, max_n=4)))
def test_spectral_radius_dominates_traces(A):
    lam = spectral_radius(A)
    for m_ in range(1, A.rows + 1):
        t = trace(matrix_power(A, m_))
        assert (lam ** m_) >= t or (lam ** m_).isclose(t)


@st.composite
def two_columns(draw):
    sf = draw(st.sampled_from(ALL))
    n = draw(st.integers(1, 4))
    return sf, draw(columns(sf, n)), draw(columns(sf, n))


@given(two_columns())
def test_conjugate_transpose_properties(data):
    sf, x, y = data
    xc, yc = conjugate_transpose(x), conjugate_transpose(y)
    assert (xc @ x).item().isclose(Scalar.one(sf))
    if x <= y:
        assert yc <= xc
    n = x.rows
    lhs = x @ yc
    rhs = (xc @ y).item().inverse() * Matrix.identity(sf, n)
    assert rhs <= lhs


@given(st.sampled_from(ALL).flatmap(
    lambda sf: st.integers(1, 4).flatmap(
        lambda n: st.tuples(matrices(sf, n, zero_weight=0.5), columns(sf, n)))))
def test_row_regular_times_regular(data):
    A, x = data
    assume(A.is_row_regular)
    assert (A @ x).is_regular


@given(st.sampled_from(ADDITIVE).flatmap(lambda sf: square(sf, max_n=6, zero_weight=0.6)))
def test_normal_form_is_block_triangular(A):
    nf = normal_form(A)
    assert sorted(nf.permutation) == list(range(A.rows))
    P = nf.apply(A)
    for b, (start, stop) in enumerate(nf.blocks):
        for later_start, later_stop in nf.blocks[b + 1:]:
            for i in range(start, stop):
                for j in range(later_start, later_stop):
                    assert P.data[i][j] is None
        # diagonal blocks: irreducible or a 1x1 block
        size = stop - start
        if size > 1:
            sub = Matrix(A.semifield, [row[start:stop] for row in P.data[start:stop]])
            assert normal_form(sub).irreducible


@given(st.integers(0, 2**32 - 1))
def test_star_is_closure(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    A = m([[rng.choice([Z, rng.randint(-6, 0)]) for _ in range(n)] for _ in range(n)])
    S = kleene_star(A)
    I = Matrix.identity(MAX_PLUS, n)
    # nonpositive entries mean no positive cycles: the star is idempotent and solves S = I + AS
    assert S @ S == S
    assert I + A @ S == S
