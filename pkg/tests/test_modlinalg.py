"""Brute-force cross-checks for the mod-m linear algebra core."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistcoh import modlinalg as ml


def span_of_columns(gens: np.ndarray, m: int) -> set:
    """All Z/m combinations of the columns (BFS closure)."""
    n = gens.shape[0]
    seen = {(0,) * n}
    frontier = [np.zeros(n, dtype=np.int64)]
    cols = [gens[:, j] for j in range(gens.shape[1])]
    while frontier:
        nxt = []
        for v in frontier:
            for c in cols:
                w = tuple((v + c) % m)
                if w not in seen:
                    seen.add(w)
                    nxt.append(np.array(w, dtype=np.int64))
        frontier = nxt
    return seen


def brute_kernel(A: np.ndarray, m: int) -> set:
    R, C = A.shape
    out = set()
    for x in itertools.product(range(m), repeat=C):
        v = np.array(x, dtype=np.int64)
        if not np.any((A @ v) % m):
            out.add(x)
    return out


@st.composite
def small_system(draw):
    m = draw(st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12]))
    R = draw(st.integers(1, 4))
    C = draw(st.integers(1, 4))
    entries = draw(st.lists(st.integers(0, m - 1), min_size=R * C, max_size=R * C))
    return m, np.array(entries, dtype=np.int64).reshape(R, C)


@settings(max_examples=150, deadline=None)
@given(small_system())
def test_kernel_matches_bruteforce(sys_):
    m, A = sys_
    if m ** A.shape[1] > 4000:
        return
    ker = ml.column_reduce(A, m).kernel
    assert span_of_columns(ker if ker.size else np.zeros((A.shape[1], 0)), m) \
        == brute_kernel(A, m)


@settings(max_examples=100, deadline=None)
@given(small_system(), st.randoms(use_true_random=False))
def test_solve_agrees_with_membership(sys_, rnd):
    m, A = sys_
    C = A.shape[1]
    x0 = np.array([rnd.randrange(m) for _ in range(C)], dtype=np.int64)
    b = (A @ x0) % m
    x = ml.solve_mod(A, b, m)
    assert x is not None
    assert not np.any((A @ x - b) % m)
    # and an unsolvable system is reported as such
    if m ** C <= 2000:
        sols = {tuple((A @ np.array(v)) % m) for v in itertools.product(range(m), repeat=C)}
        bad = next((w for w in itertools.product(range(m), repeat=A.shape[0])
                    if w not in sols), None)
        if bad is not None:
            assert ml.solve_mod(A, np.array(bad), m) is None


def test_solver_object_replays_reductions():
    m = 12
    rng = np.random.default_rng(5)
    A = rng.integers(0, m, size=(6, 5)).astype(np.int64)
    red = ml.column_reduce(A, m, keep_pivots=True)
    for _ in range(20):
        x0 = rng.integers(0, m, size=5)
        b = (A @ x0) % m
        x = red.solve(b)
        assert x is not None and not np.any((A @ x - b) % m)


def test_kernel_pivot_counting_gives_sizes():
    m = 8
    A = np.array([[2, 4], [0, 2]], dtype=np.int64)
    red = ml.column_reduce(A, m)
    assert red.kernel_size() * red.image_size() == m ** 2
    assert red.kernel_size() == len(brute_kernel(A, m))


@settings(max_examples=80, deadline=None)
@given(small_system())
def test_gf2_and_general_paths_agree(sys_):
    _, A = sys_
    ker_general = ml._column_reduce_general(A % 2, 2, None, False).kernel
    ker_packed = ml._column_reduce_gf2(A % 2, None).kernel
    assert span_of_columns(ker_general, 2) == span_of_columns(ker_packed, 2)


@settings(max_examples=100, deadline=None)
@given(small_system())
def test_howell_preserves_span_and_canonicalizes(sys_):
    m, A = sys_
    rows = A
    if m ** rows.shape[1] > 2000:
        return
    H, pivots = ml.howell_form(rows, m)
    # same row span
    assert span_of_columns(H.T, m) == span_of_columns(rows.T, m)
    # canonical coset representatives: x ~ y iff reductions agree
    span = span_of_columns(rows.T, m)
    C = rows.shape[1]
    vecs = [np.array(v, dtype=np.int64)
            for v in itertools.islice(itertools.product(range(m), repeat=C), 200)]
    for x in vecs[:20]:
        for d in list(span)[:20]:
            y = (x + np.array(d)) % m
            rx = ml.coset_reduce(H, pivots, x, m)
            ry = ml.coset_reduce(H, pivots, y, m)
            assert np.array_equal(rx, ry)


@settings(max_examples=80, deadline=None)
@given(small_system())
def test_snf_quotient_structure(sys_):
    m, A = sys_
    s = A.shape[0]
    diag, U, Uinv = ml.snf_left_mod(A, m)
    # diagonal divides m and forms a chain
    assert all(m % d == 0 for d in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
    # quotient order equals lattice index
    if m ** s <= 4096:
        lattice = span_of_columns(np.concatenate([A % m, m * np.eye(s, dtype=np.int64) % m], axis=1), m)
        assert math.prod(diag) * len(lattice) == m ** s
        # membership test via coordinates
        for v in itertools.product(range(m), repeat=s):
            w = np.array(v, dtype=np.int64)
            coords = (U @ w) % m
            in_lattice = all(coords[i] % diag[i] == 0 for i in range(s))
            assert in_lattice == (tuple(w) in lattice)
    # U @ Uinv == identity modulo the diagonal structure
    prod = (U @ Uinv) % m
    for i in range(s):
        for j in range(s):
            want = 1 if i == j else 0
            assert (prod[i, j] - want) % diag[i] == 0


def test_snf_int_hyperelliptic_relation_matrix():
    # rows: x_j^2 = 1 and the product relation, genus 2 (6 torsion generators)
    n = 6
    rel = [[0] * n for _ in range(n + 1)]
    for j in range(n):
        rel[j][j] = 2
    rel[n] = [1] * n
    diag = ml.snf_int(rel)
    assert sorted(d for d in diag if d != 1) == [2] * (n - 1)
