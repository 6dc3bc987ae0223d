"""Small dense complex linear algebra on subspaces of C^N.

Subspaces are carried as orthonormal column frames. Everything here is
meant for N <= 8, so clarity wins over speed.
"""
from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch, DimensionMismatch, NotAGraph, NotHermitian, NotSkew, NotUnitary

DEFAULT_TOL = 1e-9
# relative cutoff for numerical rank when orthonormalizing spanning sets
RANK_RTOL = 1e-10
# relative eigenvalue clustering tolerance
CLUSTER_RTOL = 1e-8
# subspaces are equal when every principal angle is below this
EQUAL_ANGLE = 1e-8


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Subspace:
    """Complex subspace of C^N given by an orthonormal N x r frame."""

    frame: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frame, dtype=complex)
        if f.ndim != 2:
            raise DimensionMismatch(f"frame must be 2-d, got shape {f.shape}")
        object.__setattr__(self, "frame", _readonly(f))

    @property
    def ambient_dim(self):
        return self.frame.shape[0]

    @property
    def dim(self):
        return self.frame.shape[1]

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def span(cls, vectors, rtol=RANK_RTOL):
        """Orthonormal frame for the column span of `vectors`."""
        return cls(orthonormalize(vectors, rtol))

    def projector(self):
        return self.frame @ self.frame.conj().T

    def complement(self):
        return orthogonal_complement(self)

    def contains(self, v, tol=DEFAULT_TOL):
        v = np.asarray(v, dtype=complex)
        r = v - self.frame @ (self.frame.conj().T @ v)
        return np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(v))

    def orthonormality_residual(self):
        g = self.frame.conj().T @ self.frame
        return float(np.linalg.norm(g - np.eye(self.dim)))


@dataclass(frozen=True, eq=False)
class UnitaryMap:
    """Linear map source -> target written as a matrix in the two frames."""

    source: Subspace
    target: Subspace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match frames ({self.target.dim}, {self.source.dim})"
            )
        object.__setattr__(self, "matrix", _readonly(m))

    def unitarity_residual(self):
        m = self.matrix
        return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])))


def orthonormalize(vectors, rtol=RANK_RTOL):
    """Orthonormal basis of the column span, numerical rank cut at rtol * largest singular value."""
    a = np.asarray(vectors, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    n = a.shape[0]
    if a.shape[1] == 0:
        return np.zeros((n, 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, 0), dtype=complex)
    rank = int(np.sum(s > rtol * s[0]))
    return u[:, :rank]


def gram_schmidt(vectors, tol=1e-10):
    """Modified Gram-Schmidt over the columns in order, dropping dependent ones.

    Unlike `orthonormalize` this keeps the result tied to the input columns,
    which gives canonical frames for projectors (e.g. chirality eigenspaces).
    """
    a = np.asarray(vectors, dtype=complex)
    out = []
    for j in range(a.shape[1]):
        v = a[:, j].copy()
        for _ in range(2):
            for q in out:
                v -= q * np.vdot(q, v)
        nv = np.linalg.norm(v)
        if nv > tol:
            out.append(v / nv)
    if not out:
        return np.zeros((a.shape[0], 0), dtype=complex)
    return np.stack(out, axis=1)


def nullspace(m, rtol=RANK_RTOL, atol=0.0):
    """Orthonormal basis of ker(m)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cut = max(atol, rtol * (s[0] if s.size else 0.0))
    rank = int(np.sum(s > cut))
    return vh[rank:].conj().T


def orthogonal_complement(sub):
    f = sub.frame
    n = sub.ambient_dim
    if sub.dim == 0:
        return Subspace.full(n)
    if sub.dim == n:
        return Subspace.zero(n)
    _, _, vh = np.linalg.svd(f.conj().T, full_matrices=True)
    return Subspace(vh[sub.dim:].conj().T)


def hermitian_part(h, tol=DEFAULT_TOL):
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {h.shape}")
    if np.linalg.norm(h - h.conj().T) > tol:
        raise NotHermitian(f"||H - H^*|| = {np.linalg.norm(h - h.conj().T):.3e} exceeds {tol:.1e}")
    return 0.5 * (h + h.conj().T)


def eigenspace(h, lam, tol=DEFAULT_TOL):
    """Span of the eigenvectors of Hermitian h whose eigenvalue clusters at lam."""
    hs = hermitian_part(h, tol)
    w, v = np.linalg.eigh(hs)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    idx = np.abs(w - lam) <= CLUSTER_RTOL * scale
    if scale == 0.0:
        idx = np.abs(w - lam) == 0.0
    return Subspace(v[:, idx])


def eigen_clusters(h, tol=DEFAULT_TOL):
    """Group the spectrum of Hermitian h into clusters; returns [(value, Subspace)]."""
    hs = hermitian_part(h, tol)
    w, v = np.linalg.eigh(hs)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    ctol = CLUSTER_RTOL * scale
    groups = []
    start = 0
    for j in range(1, len(w) + 1):
        if j == len(w) or w[j] - w[j - 1] > ctol:
            groups.append((float(np.mean(w[start:j])), Subspace(v[:, start:j])))
            start = j
    return groups


def skew_eigenspace(a, mu, tol=DEFAULT_TOL):
    """Eigenspace of a skew-Hermitian involution-like A (A^2 = -Id) at mu = +i or -i."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if np.linalg.norm(a + a.conj().T) > tol:
        raise NotSkew("A is not skew-Hermitian")
    if np.linalg.norm(a @ a + np.eye(a.shape[0])) > tol:
        raise NotSkew("A^2 differs from -Id")
    if mu == 1j:
        target = 1.0
    elif mu == -1j:
        target = -1.0
    else:
        raise NotSkew(f"mu must be +i or -i, got {mu}")
    return eigenspace(-1j * a, target, tol)


def principal_sines(u, v):
    """Sines of the principal angles between U and V (one per column of U), ascending.

    Also returns the corresponding unit vectors in U. Sines are computed from
    the residual (I - P_V) U, which keeps small angles accurate.
    """
    uf, vf = u.frame, v.frame
    if u.dim == 0:
        return np.zeros(0), np.zeros((u.ambient_dim, 0), dtype=complex)
    resid = uf - vf @ (vf.conj().T @ uf) if v.dim else uf
    _, s, wh = np.linalg.svd(resid, full_matrices=True)
    k = u.dim
    sines = np.ones(k)
    sines[: s.size] = s[:k]
    # svd sorts descending; flip to ascending
    order = np.argsort(sines, kind="stable")
    vecs = uf @ wh.conj().T
    return np.clip(sines[order], 0.0, 1.0), vecs[:, order]


def principal_angles(u, v):
    """Principal angles between U and V, min(dim U, dim V) of them, ascending."""
    if u.ambient_dim != v.ambient_dim:
        raise AmbientMismatch("subspaces live in different ambient spaces")
    if u.dim > v.dim:
        u, v = v, u
    if u.dim == 0:
        return np.zeros(0)
    sines, _ = principal_sines(u, v)
    cos = np.linalg.svd(u.frame.conj().T @ v.frame, compute_uv=False)
    cos = np.sort(np.clip(cos, 0.0, 1.0))[::-1]
    ang = np.where(sines < 0.7, np.arcsin(sines), np.arccos(cos[: len(sines)]))
    return ang


def intersect(u, v, tol=DEFAULT_TOL):
    """Frame for U ∩ V: principal directions of U whose angle to V has sine <= tol."""
    if u.ambient_dim != v.ambient_dim:
        raise AmbientMismatch("subspaces live in different ambient spaces")
    n = u.ambient_dim
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(n)
    if u.dim > v.dim:
        u, v = v, u
    sines, vecs = principal_sines(u, v)
    keep = sines <= tol
    return Subspace(gram_schmidt(vecs[:, keep]))


def subspace_sum(*subs):
    n = subs[0].ambient_dim
    for s in subs:
        if s.ambient_dim != n:
            raise AmbientMismatch("subspaces live in different ambient spaces")
    return Subspace.span(np.hstack([s.frame for s in subs]))


def same_subspace(u, v, angle_tol=EQUAL_ANGLE):
    if u.ambient_dim != v.ambient_dim:
        raise AmbientMismatch("subspaces live in different ambient spaces")
    if u.dim != v.dim:
        return False
    if u.dim == 0:
        return True
    return bool(np.max(principal_angles(u, v)) < angle_tol)


def contained_in(u, v, angle_tol=EQUAL_ANGLE):
    """U ⊆ V up to principal angles."""
    if u.dim == 0:
        return True
    if u.dim > v.dim:
        return False
    sines, _ = principal_sines(u, v)
    return bool(np.max(sines) < angle_tol)


def graph_of(f):
    """Frame of {u + F u : u in source}, columns (u_i + F u_i)/sqrt(2)."""
    s, t = f.source.frame, f.target.frame
    return Subspace((s + t @ f.matrix) / np.sqrt(2.0))


def graph_matrix(lam, eplus, eminus):
    """Matrix M with lam = {u + M u}, plus the smallest singular value of the E+ projection.

    Returns (None, smin) when the projection onto E+ is numerically singular.
    """
    n = lam.ambient_dim
    if eplus.ambient_dim != n or eminus.ambient_dim != n:
        raise AmbientMismatch("subspaces live in different ambient spaces")
    if not (lam.dim == eplus.dim == eminus.dim):
        raise DimensionMismatch(
            f"dimensions must agree: dim lam={lam.dim}, dim E+={eplus.dim}, dim E-={eminus.dim}"
        )
    x = lam.frame
    a = eplus.frame.conj().T @ x
    b = eminus.frame.conj().T @ x
    smin = float(np.linalg.svd(a, compute_uv=False).min()) if a.size else 1.0
    if smin <= 1e-14:
        return None, smin
    return np.linalg.solve(a.T, b.T).T, smin


def extract_unitary(lam, eplus, eminus, tol=DEFAULT_TOL):
    """Recover F with lam = graph(F), F : eplus -> eminus.

    eplus and eminus must be orthogonal complements of each other. Raises
    NotAGraph when lam meets eminus and NotUnitary (carrying the matrix)
    when the recovered map is not unitary.
    """
    m, smin = graph_matrix(lam, eplus, eminus)
    if m is None or smin <= tol:
        raise NotAGraph(f"projection onto E+ is singular (smallest singular value {smin:.3e})")
    resid = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1]))
    if resid > tol:
        raise NotUnitary(f"||F^*F - Id|| = {resid:.3e} exceeds {tol:.1e}", matrix=m)
    return UnitaryMap(eplus, eminus, m)


def random_unitary(n, rng):
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_subspace(n, k, rng):
    z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return Subspace.span(z)
