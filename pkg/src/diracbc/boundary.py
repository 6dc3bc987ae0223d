"""Pointwise boundary-condition algebra.

A local boundary condition at a point is a subspace Lambda of C^N. The
form b(u, v) = <c_nu u, v> decides symmetry (Lambda is b-isotropic) and the
adjoint subspace; self-adjoint conditions are the graphs of unitary maps
E+(c_nu) -> E-(c_nu). With a chirality, they are parametrized by a unitary
f on S+ and split further by the eigenvalues of f at +1 and -1.
"""
from dataclasses import dataclass

import numpy as np

from .clifford import clifford_mult
from .errors import DimensionMismatch, InconsistentCheck, InvalidFrame, NotUnitary
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    eigenspace,
    graph_matrix,
    gram_schmidt,
    nullspace,
    orthogonal_complement,
)

FRAME_TOL = 1e-12
# |eigenvalue -/+ 1| threshold used to read off F+ and F- from f
UNIT_EIG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BoundaryFrame:
    """Outward unit normal nu and an orthonormal basis of its orthogonal complement."""

    rep: object
    nu: np.ndarray
    tangent: np.ndarray

    def __post_init__(self):
        d = self.rep.d
        nu = np.array(self.nu, dtype=float)
        t = np.array(self.tangent, dtype=float).reshape(-1, d) if np.size(self.tangent) else np.zeros((0, d))
        if nu.shape != (d,):
            raise InvalidFrame(f"normal must have {d} components")
        if t.shape != (d - 1, d):
            raise InvalidFrame(f"need {d - 1} tangent vectors with {d} components each")
        if abs(np.linalg.norm(nu) - 1.0) > FRAME_TOL:
            raise InvalidFrame(f"normal is not a unit vector (|nu| = {float(np.linalg.norm(nu))!r})")
        basis = np.vstack([t, nu])
        gram = basis @ basis.T
        if np.max(np.abs(gram - np.eye(d))) > FRAME_TOL:
            raise InvalidFrame("tangent vectors must be orthonormal and orthogonal to the normal")
        nu.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "tangent", t)
        cnu = clifford_mult(self.rep, nu)
        cnu.setflags(write=False)
        object.__setattr__(self, "c_nu", cnu)

    @classmethod
    def standard(cls, rep):
        """nu = e_d, tangent basis e_1 .. e_{d-1}."""
        eye = np.eye(rep.d)
        return cls(rep, eye[-1], eye[:-1])

    @classmethod
    def from_normal(cls, rep, nu):
        """Complete a unit normal to an orthonormal frame (deterministic)."""
        nu = np.asarray(nu, dtype=float)
        nu = nu / np.linalg.norm(nu)
        q, _ = np.linalg.qr(np.column_stack([nu, np.eye(rep.d)]))
        # q[:, 0] = +-nu, the remaining columns span its complement
        return cls(rep, nu, q[:, 1:].T)

    @classmethod
    def random(cls, rep, rng):
        q, r = np.linalg.qr(rng.standard_normal((rep.d, rep.d)))
        q = q * np.sign(np.diag(r))
        return cls(rep, q[:, -1], q[:, :-1].T)

    def covector(self, coords):
        """Ambient covector from tangent-basis coordinates."""
        return np.asarray(coords, dtype=float) @ self.tangent

    def coords(self, k):
        return self.tangent @ np.asarray(k, dtype=float)

    def c(self, k):
        return clifford_mult(self.rep, k)

    def flipped(self):
        """Same point seen from the other side: normal -nu."""
        return BoundaryFrame(self.rep, -self.nu, self.tangent)

    def eplus(self):
        return eigenspace(self.c_nu, 1.0)

    def eminus(self):
        return eigenspace(self.c_nu, -1.0)


@dataclass(frozen=True, eq=False)
class BoundaryCondition:
    frame: BoundaryFrame
    lam: Subspace

    def __post_init__(self):
        if self.lam.ambient_dim != self.frame.rep.N:
            raise DimensionMismatch(
                f"subspace lives in C^{self.lam.ambient_dim}, representation has rank {self.frame.rep.N}"
            )


@dataclass(frozen=True, eq=False)
class ChiralDecomposition:
    f_tilde: np.ndarray
    Fplus: Subspace
    Fminus: Subspace
    Fperp: Subspace
    Q: np.ndarray


def b_form(frame, u, v):
    """b(u, v) = <c_nu u, v>, antilinear in v."""
    return complex(np.vdot(np.asarray(v, dtype=complex), frame.c_nu @ np.asarray(u, dtype=complex)))


def isotropy_residual(bc):
    f = bc.lam.frame
    if f.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(f.conj().T @ bc.frame.c_nu @ f, 2))


def is_symmetric(bc, tol=DEFAULT_TOL):
    return isotropy_residual(bc) <= tol


def adjoint_bc(bc):
    """Lambda* = (c_nu Lambda)^perp."""
    cl = Subspace(bc.frame.c_nu @ bc.lam.frame)
    return orthogonal_complement(cl)


def is_self_adjoint(bc, tol=DEFAULT_TOL):
    """Symmetric with dim N/2, cross-checked against the unitary-graph description."""
    n = bc.frame.rep.N
    r1 = isotropy_residual(bc)
    route1 = r1 <= tol and bc.lam.dim == n // 2
    if bc.lam.dim != n // 2:
        return False
    # second route: Lambda is the graph of a unitary E+ -> E-
    m, _ = graph_matrix(bc.lam, bc.frame.eplus(), bc.frame.eminus())
    r2 = np.inf if m is None else float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])))
    route2 = r2 <= 2 * tol
    if route1 != route2:
        # the graph residual is about twice the isotropy residual; only flag clear contradictions
        clear = (r1 <= tol and r2 > 100 * tol) or (r2 <= 2 * tol and r1 > 100 * tol)
        if clear:
            raise InconsistentCheck(f"isotropy residual {r1:.3e} but unitarity residual {r2:.3e}")
    return route1


def chiral_eigenframes(chiral, frame):
    """Frames of E+(c_nu) and E-(c_nu) adapted to the chirality: columns (e_j, +-C_nu e_j)/sqrt(2).

    In these frames the unitary graph map E+ -> E- has the same matrix as f.
    """
    cnu = chiral.C(frame.nu)
    m = chiral.half
    eye = np.eye(m)
    ep = chiral.join(eye, cnu) / np.sqrt(2.0)
    em = chiral.join(eye, -cnu) / np.sqrt(2.0)
    return Subspace(ep), Subspace(em)


def _check_unitary(f, m, tol):
    f = np.asarray(f, dtype=complex)
    if f.shape != (m, m):
        raise DimensionMismatch(f"f must be {m} x {m}, got {f.shape}")
    r = np.linalg.norm(f.conj().T @ f - np.eye(m))
    if r > tol:
        raise NotUnitary(f"||f^*f - Id|| = {r:.3e} exceeds {tol:.1e}", matrix=f)
    return f


def from_chiral_unitary(chiral, frame, f_tilde, tol=DEFAULT_TOL):
    """Lambda = {((Id + f) w, C_nu (Id - f) w) : w in S+}."""
    m = chiral.half
    f = _check_unitary(f_tilde, m, tol)
    cnu = chiral.C(frame.nu)
    eye = np.eye(m)
    # columns have Gram matrix 4 Id exactly when f is unitary
    cols = chiral.join(eye + f, cnu @ (eye - f)) / 2.0
    return BoundaryCondition(frame, Subspace(gram_schmidt(cols)))


def chiral_decompose(f_tilde, tol=DEFAULT_TOL):
    f = np.asarray(f_tilde, dtype=complex)
    m = f.shape[0]
    f = _check_unitary(f, m, tol)
    eye = np.eye(m)
    fp = Subspace(nullspace(f - eye, rtol=0.0, atol=UNIT_EIG_TOL))
    fm = Subspace(nullspace(f + eye, rtol=0.0, atol=UNIT_EIG_TOL))
    both = np.hstack([fp.frame, fm.frame])
    fperp = orthogonal_complement(Subspace(gram_schmidt(both)))
    w = fperp.frame
    if w.shape[1]:
        fw = w.conj().T @ f @ w
        k = np.eye(w.shape[1])
        qw = -1j * np.linalg.solve(k + fw, k - fw)
        q = w @ qw @ w.conj().T
    else:
        q = np.zeros((m, m), dtype=complex)
    return ChiralDecomposition(f, fp, fm, fperp, q)


def decomposition_subspace(chiral, frame, dec):
    """F+ ⊕ C_nu F- ⊕ {(v, i C_nu Q v) : v in F_perp} as a subspace of C^N."""
    cnu = chiral.C(frame.nu)
    m = chiral.half
    zp = np.zeros((m, dec.Fplus.dim))
    zm = np.zeros((m, dec.Fminus.dim))
    w = dec.Fperp.frame
    cols = [
        chiral.join(dec.Fplus.frame, zp),
        chiral.join(zm, cnu @ dec.Fminus.frame),
        chiral.join(w, 1j * cnu @ dec.Q @ w),
    ]
    return Subspace.span(np.hstack(cols))


def tangent_lambda(frame, t):
    """E+(c_t) for a unit tangent covector t: always self-adjoint."""
    t = np.asarray(t, dtype=float)
    if abs(np.dot(t, frame.nu)) > FRAME_TOL * 10 or abs(np.linalg.norm(t) - 1.0) > 1e-9:
        raise InvalidFrame("t must be a unit covector orthogonal to the normal")
    return BoundaryCondition(frame, eigenspace(frame.c(t), 1.0))
