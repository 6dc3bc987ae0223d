import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from diracbc.errors import AmbientMismatch, NotAGraph, NotHermitian, NotSkew, NotUnitary
from diracbc.linalg import (
    Subspace,
    UnitaryMap,
    eigen_clusters,
    eigenspace,
    extract_unitary,
    graph_of,
    intersect,
    principal_angles,
    random_subspace,
    random_unitary,
    same_subspace,
    skew_eigenspace,
)
from diracbc.boundary import BoundaryFrame
from diracbc.clifford import build_rep, clifford_mult

E = np.eye(3)


def span(*cols):
    return Subspace.span(np.column_stack(cols))


def rank_oracle(*frames):
    """Numerical rank of concatenated frames via column-pivoted QR."""
    m = np.hstack(frames)
    _, r, _ = scipy.linalg.qr(m, pivoting=True)
    d = np.abs(np.diag(r))
    return int(np.sum(d > 1e-10 * d[0])) if d.size else 0


def test_eigenspace_examples():
    s3 = np.diag([1.0, -1.0])
    assert same_subspace(eigenspace(s3, 1.0), span(np.eye(2)[:, 0]))
    cnu = clifford_mult(build_rep(3, 4), [0, 0, 1])
    assert eigenspace(cnu, 1.0).dim == 2
    assert eigenspace(np.eye(3), -1.0).dim == 0


def test_eigenspace_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eigenspace(np.array([[0, 1], [0, 0]]), 0.0)


def test_skew_eigenspace_examples():
    a = 1j * np.diag([1.0, -1.0])
    assert same_subspace(skew_eigenspace(a, 1j), span(np.eye(2)[:, 0]))
    rep = build_rep(3, 2)
    a = clifford_mult(rep, [0, 0, 1]) @ clifford_mult(rep, [1, 0, 0])
    assert skew_eigenspace(a, 1j).dim == 1 and skew_eigenspace(a, -1j).dim == 1
    rep5 = build_rep(5, 4)
    a = clifford_mult(rep5, [0, 0, 0, 1, 0]) @ clifford_mult(rep5, [1, 0, 0, 0, 0])
    assert skew_eigenspace(a, 1j).dim == 2 and skew_eigenspace(a, -1j).dim == 2


def test_skew_eigenspace_rejects():
    with pytest.raises(NotSkew):
        skew_eigenspace(np.eye(2), 1j)
    with pytest.raises(NotSkew):
        skew_eigenspace(2j * np.eye(2), 1j)


def test_intersect_examples():
    u = span(E[:, 0], E[:, 1])
    v = span(E[:, 1], E[:, 2])
    assert same_subspace(intersect(u, v), span(E[:, 1]))
    assert same_subspace(intersect(u, u), u)
    with pytest.raises(AmbientMismatch):
        intersect(u, Subspace.full(4))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_intersect_matches_rank_oracle(seed, k, l):
    rng = np.random.default_rng(seed)
    n = 4
    # share a random common part of dimension c
    c = int(rng.integers(0, min(k, l) + 1))
    common = rng.standard_normal((n, c)) + 1j * rng.standard_normal((n, c))
    u = Subspace.span(np.hstack([common, rng.standard_normal((n, k - c)) + 1j * rng.standard_normal((n, k - c))]))
    v = Subspace.span(np.hstack([common, rng.standard_normal((n, l - c)) + 1j * rng.standard_normal((n, l - c))]))
    expected = u.dim + v.dim - rank_oracle(u.frame, v.frame)
    assert intersect(u, v).dim == expected
    assert intersect(v, u).dim == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_clusters_cover_spectrum(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = x + x.conj().T
    assert sum(s.dim for _, s in eigen_clusters(h)) == n


def test_clusters_group_degenerate_values():
    u = random_unitary(4, np.random.default_rng(0))
    h = u @ np.diag([1.0, 1.0, -1.0, -1.0]) @ u.conj().T
    groups = eigen_clusters(h)
    assert [g[1].dim for g in groups] == [2, 2]


def test_graph_of_examples():
    f = UnitaryMap(span(np.eye(2)[:, 0]), span(np.eye(2)[:, 1]), np.eye(1))
    assert same_subspace(graph_of(f), span(np.array([1.0, 1.0]) / np.sqrt(2)))


def test_extract_examples():
    rep = build_rep(3, 4)
    fr = BoundaryFrame.standard(rep)
    ep, em = fr.eplus(), fr.eminus()
    with pytest.raises(NotUnitary) as info:
        extract_unitary(ep, ep, em)
    assert np.allclose(info.value.matrix, 0)
    with pytest.raises(NotAGraph):
        extract_unitary(em, ep, em)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4]))
def test_graph_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    rep = build_rep(3, n)
    fr = BoundaryFrame.random(rep, rng)
    ep, em = fr.eplus(), fr.eminus()
    f = UnitaryMap(ep, em, random_unitary(n // 2, rng))
    lam = graph_of(f)
    back = extract_unitary(lam, ep, em)
    assert np.linalg.norm(back.matrix - f.matrix) < 1e-9
    assert np.all(principal_angles(graph_of(back), lam) < 1e-9)


def test_subspace_is_readonly():
    s = random_subspace(4, 2, np.random.default_rng(1))
    with pytest.raises(ValueError):
        s.frame[0, 0] = 1.0
    assert s.orthonormality_residual() < 1e-12
    assert Subspace.zero(3).dim == 0
