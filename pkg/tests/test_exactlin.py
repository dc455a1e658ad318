import itertools
import random

import numpy as np
import pytest

from measuringkit.exactlin import (
    GF2,
    GF3,
    QQ,
    DimensionMismatch,
    FieldMismatch,
    LinearMap,
    PrimeField,
    annihilator,
    field_from_spec,
    functional_quotient,
    intersect_spaces,
    kernel_basis,
    multiplicative_closure,
    parse_field,
    quotient_map,
    row_space,
    same_span,
    solve_matrix,
    span_contains,
    sum_spaces,
    swap_map,
    tensor_permutation,
)


def test_field_specs():
    assert parse_field("q") == QQ
    assert parse_field("f2") == GF2
    assert field_from_spec("prime", 7) == PrimeField(7)
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)
    with pytest.raises(ValueError):
        parse_field("r64")


def test_scalars_are_exact():
    f = QQ("1/3") if False else QQ((1, 3))
    assert f * 3 == 1
    assert GF3(5) == 2
    big = PrimeField((1 << 31) - 1)  # Mersenne prime, object-dtype path
    a = big.asarray([[big.p - 1, 1], [1, 0]])
    sq = big.mm(a, a)
    assert sq[0, 0] == ((big.p - 1) ** 2 + 1) % big.p


def test_solve_identity():
    m = LinearMap.identity(QQ, 3)
    v = QQ.asarray([1, (1, 2), 3])
    assert QQ.equal(m.solve(v), v)


def test_solve_zero_map_misses_target():
    m = LinearMap.zero(GF2, 2, 2)
    assert m.solve([1, 1]) is None
    assert m.solve([0, 0]) is not None


def test_solve_back_substitution_f2():
    # over F2, [[1,1],[0,1]] maps (0,1) to (1,1)
    m = LinearMap(GF2, [[1, 1], [0, 1]])
    sol = m.solve([1, 1])
    assert GF2.equal(sol, GF2.asarray([0, 1]))
    assert GF2.equal(m.apply(sol), GF2.asarray([1, 1]))


def test_kernel_identity_empty():
    assert LinearMap.identity(GF3, 4).kernel().shape == (0, 4)


def test_kernel_zero_map_standard_basis():
    k = LinearMap.zero(QQ, 2, 3).kernel()
    assert QQ.equal(k, QQ.eye(3))


def test_kernel_sum_functional():
    k = LinearMap(QQ, [[1, 1]]).kernel()
    assert same_span(QQ, k, QQ.asarray([[1, -1]]))


def test_tensor_of_identities():
    a = LinearMap.identity(QQ, 2)
    b = LinearMap.identity(QQ, 3)
    assert a.tensor(b).is_identity()


def test_tensor_with_zero():
    f = LinearMap(GF2, [[1, 0], [1, 1]])
    assert f.tensor(LinearMap.zero(GF2, 2, 2)).is_zero()


def test_tensor_matches_definition_on_basis_pairs():
    # (f (x) g)(e_i (x) e_j) == f(e_i) (x) g(e_j), dims <= 3
    rng = random.Random(7)
    for dims in itertools.product(range(1, 4), repeat=4):
        mf, nf, mg, ng = dims
        f = LinearMap(GF3, [[rng.randrange(3) for _ in range(nf)] for _ in range(mf)])
        g = LinearMap(GF3, [[rng.randrange(3) for _ in range(ng)] for _ in range(mg)])
        fg = f.tensor(g)
        for i in range(nf):
            for j in range(ng):
                v = GF3.zeros(nf * ng)
                v[i * ng + j] = 1
                expect = GF3.kron(f.matrix[:, i], g.matrix[:, j])
                assert GF3.equal(fg.apply(v), expect)


def test_tensor_functorial():
    rng = random.Random(3)
    def rnd(m, n):
        return LinearMap(GF2, [[rng.randrange(2) for _ in range(n)] for _ in range(m)])
    f, f2 = rnd(2, 3), rnd(3, 2)
    g, g2 = rnd(2, 2), rnd(2, 3)
    assert (f @ f2).tensor(g @ g2) == f.tensor(g) @ f2.tensor(g2)


def test_swap_left_unit_is_identity():
    assert swap_map(QQ, 1, 5).is_identity()
    assert swap_map(QQ, 5, 1).is_identity()


def test_swap_on_basis():
    s = swap_map(GF2, 2, 2)
    v = GF2.zeros(4)
    v[0 * 2 + 1] = 1  # e_0 (x) e_1
    out = s.apply(v)
    expect = GF2.zeros(4)
    expect[1 * 2 + 0] = 1  # e_1 (x) e_0
    assert GF2.equal(out, expect)


def test_swap_involutive():
    for m in range(1, 5):
        for n in range(1, 5):
            assert (swap_map(QQ, m, n) @ swap_map(QQ, n, m)).is_identity()


def test_tensor_permutation_three_factors():
    p = tensor_permutation(GF2, (2, 3, 2), (2, 0, 1))
    v = GF2.zeros(12)
    v[(1 * 3 + 2) * 2 + 1] = 1  # e_1 (x) e_2 (x) e_1
    out = p.apply(v)
    expect = GF2.zeros(12)
    expect[(1 * 2 + 1) * 3 + 2] = 1  # factor order (2, 0, 1)
    assert GF2.equal(out, expect)


def test_intersection_with_self():
    v = row_space(GF2, [[1, 0, 1], [0, 1, 1]])
    assert GF2.equal(intersect_spaces(GF2, v, v), v)


def test_annihilator_of_full_space():
    assert annihilator(QQ, QQ.eye(3), 3).shape == (0, 3)
    # double annihilator recovers the span
    s = QQ.asarray([[1, 2, 0]])
    ann = annihilator(QQ, s, 3)
    assert same_span(QQ, annihilator(QQ, ann, 3), s)


def test_intersection_f2_dim3():
    u = GF2.asarray([[1, 0, 0], [0, 1, 0]])
    w = GF2.asarray([[0, 1, 0], [0, 0, 1]])
    meet = intersect_spaces(GF2, u, w)
    assert GF2.equal(meet, GF2.asarray([[0, 1, 0]]))


def test_sum_and_quotient():
    u = QQ.asarray([[1, 0, 0]])
    w = QQ.asarray([[0, 0, 1]])
    assert sum_spaces(QQ, u, w).shape[0] == 2
    proj, sec = quotient_map(QQ, u, 3)
    assert proj.codomain_dim == 2
    assert (proj @ sec).is_identity()
    assert np.all(proj.apply([5, 0, 0]) == 0)


def test_functional_quotient_canonical():
    # functionals x+y and y on a 3-dim space: quotient reads their values
    proj, sec = functional_quotient(QQ, QQ.asarray([[1, 1, 0], [0, 1, 0]]), 3)
    assert (proj @ sec).is_identity()
    got = proj.apply([1, 2, 7])
    assert QQ.equal(got, QQ.asarray([1, 2]))  # RREF basis is x, y


def test_row_reduction_is_order_independent():
    rows = [[1, 2, 3], [0, 1, 1], [1, 3, 4], [2, 0, 5]]
    base = row_space(QQ, rows)
    rng = random.Random(11)
    for _ in range(6):
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert QQ.equal(row_space(QQ, shuffled), base)


def test_solve_matrix_consistency():
    a = GF3.asarray([[1, 2], [2, 2]])
    b = GF3.asarray([[1], [1]])
    x = solve_matrix(GF3, a, b)
    assert GF3.equal(GF3.mm(a, x), b)
    assert solve_matrix(GF2, GF2.asarray([[1, 1], [1, 1]]), GF2.asarray([[1], [0]])) is None


def test_span_contains():
    basis = GF2.asarray([[1, 1, 0]])
    assert span_contains(GF2, basis, [[1, 1, 0]])
    assert not span_contains(GF2, basis, [[1, 0, 0]])


def _dual_numbers_convolution():
    # basis (g*, d*) of the dual of the 2-dim "dual numbers" coalgebra;
    # convolution makes it k[x]/(x^2) with g* the unit and d* nilpotent
    prod = LinearMap(GF2, [[1, 0, 0, 0], [0, 1, 1, 0]])
    unit = GF2.asarray([1, 0])
    return prod, unit


def test_multiplicative_closure_unital_seed():
    prod, unit = _dual_numbers_convolution()
    closed = multiplicative_closure(GF2, GF2.zeros(0, 2), prod, unit)
    assert GF2.equal(closed, GF2.asarray([[1, 0]]))


def test_multiplicative_closure_full_seed():
    prod, unit = _dual_numbers_convolution()
    closed = multiplicative_closure(GF2, GF2.eye(2), prod, unit)
    assert GF2.equal(closed, GF2.eye(2))


def test_multiplicative_closure_matches_word_enumeration():
    prod, unit = _dual_numbers_convolution()
    seed = GF2.asarray([[0, 1]])  # d*
    closed = multiplicative_closure(GF2, seed, prod, unit)
    # brute force: all products of words in {d*} up to length dim C = 2
    words = [unit, seed[0]]
    for u in [seed[0]]:
        for w in [seed[0]]:
            words.append(prod.apply(GF2.kron(u, w)))
    assert same_span(GF2, closed, np.vstack(words))


def test_multiplicative_closure_idempotent_and_monotone():
    prod, unit = _dual_numbers_convolution()
    small = multiplicative_closure(GF2, GF2.zeros(0, 2), prod, unit)
    big = multiplicative_closure(GF2, GF2.asarray([[0, 1]]), prod, unit)
    again = multiplicative_closure(GF2, big, prod, unit)
    assert GF2.equal(big, again)
    assert span_contains(GF2, big, small)


def test_dimension_and_field_errors():
    with pytest.raises(DimensionMismatch):
        LinearMap.identity(QQ, 2) @ LinearMap.identity(QQ, 3)
    with pytest.raises(FieldMismatch):
        LinearMap.identity(QQ, 2) @ LinearMap.identity(GF2, 2)
    with pytest.raises(DimensionMismatch):
        LinearMap.identity(QQ, 2).apply([1, 2, 3])
