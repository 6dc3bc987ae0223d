"""Gamma matrices for the supported (d, N) pairs, Clifford multiplication and chirality."""
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, InputError, NoChirality, UnsupportedPair
from .linalg import gram_schmidt

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA1, SIGMA2, SIGMA3)
I2 = np.eye(2, dtype=complex)

SUPPORTED = ((2, 2), (3, 2), (2, 4), (3, 4), (4, 4), (5, 4))
CHIRAL = ((2, 2), (2, 4), (3, 4), (4, 4))
DEFAULT_TOL = 1e-9


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _antidiag(a, b):
    z = np.zeros_like(a)
    return np.block([[z, a], [b, z]])


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """d Hermitian N x N matrices with g_j g_k + g_k g_j = 2 delta_jk Id."""

    d: int
    N: int
    gammas: tuple

    def __post_init__(self):
        gs = tuple(_readonly(g) for g in self.gammas)
        if len(gs) != self.d:
            raise DimensionMismatch(f"expected {self.d} gamma matrices, got {len(gs)}")
        for g in gs:
            if g.shape != (self.N, self.N):
                raise DimensionMismatch(f"gamma of shape {g.shape}, expected ({self.N}, {self.N})")
        if self.N % 2 or self.N < 2 ** (self.d // 2):
            raise InputError(f"rank N={self.N} impossible for d={self.d}")
        object.__setattr__(self, "gammas", gs)
        object.__setattr__(self, "_stack", np.stack(gs))

    @property
    def pair(self):
        return (self.d, self.N)

    def mult(self, k):
        return clifford_mult(self, k)


def _gammas(d, n):
    if (d, n) == (2, 2):
        return [SIGMA1, SIGMA2]
    if (d, n) == (3, 2):
        return list(PAULI)
    if (d, n) == (2, 4):
        return [np.kron(SIGMA1, I2), np.kron(SIGMA2, I2)]
    if (d, n) == (3, 4):
        return [_antidiag(s, s) for s in PAULI]
    if (d, n) == (4, 4):
        return [_antidiag(s, s) for s in PAULI] + [np.kron(SIGMA3, I2)]
    if (d, n) == (5, 4):
        return (
            [_antidiag(s, s) for s in PAULI]
            + [np.kron(SIGMA3, I2)]
            + [_antidiag(1j * I2, -1j * I2)]
        )
    raise UnsupportedPair(f"(d, N) = ({d}, {n}) is not one of {SUPPORTED}")


def build_rep(d, N):
    """Pinned gamma matrices for one of the six supported pairs."""
    return CliffordRep(int(d), int(N), tuple(_gammas(int(d), int(N))))


def clifford_mult(rep, k):
    """c_k = sum_j k_j gamma_j."""
    k = np.asarray(k, dtype=float)
    if k.shape != (rep.d,):
        raise DimensionMismatch(f"covector must have {rep.d} components, got shape {k.shape}")
    return np.tensordot(k, rep._stack, axes=1)


def verify_rep(rep, tol=DEFAULT_TOL):
    herm = max(float(np.linalg.norm(g - g.conj().T)) for g in rep.gammas)
    eye = np.eye(rep.N)
    anti = 0.0
    for j, gj in enumerate(rep.gammas):
        for k, gk in enumerate(rep.gammas):
            r = gj @ gk + gk @ gj - 2.0 * (j == k) * eye
            anti = max(anti, float(np.linalg.norm(r)))
    return {
        "max_hermiticity_residual": herm,
        "max_anticommutation_residual": anti,
        "passed": bool(herm <= tol and anti <= tol),
    }


@dataclass(frozen=True, eq=False)
class ChiralStructure:
    """Chirality beta with frames of S+ / S- and the blocks C_j = <S-| gamma_j |S+>.

    In the basis (plus_frame, minus_frame), c_xi = [[0, C_xi^*], [C_xi, 0]].
    """

    rep: CliffordRep
    beta: np.ndarray
    phase: complex
    plus_frame: np.ndarray
    minus_frame: np.ndarray
    blocks: tuple

    def C(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.rep.d,):
            raise DimensionMismatch(f"covector must have {self.rep.d} components")
        return np.tensordot(xi, np.stack(self.blocks), axes=1)

    @property
    def half(self):
        return self.rep.N // 2

    def join(self, upper, lower):
        """Vector(s) in C^N from S+ and S- coordinates."""
        return self.plus_frame @ upper + self.minus_frame @ lower

    def split(self, v):
        return self.plus_frame.conj().T @ v, self.minus_frame.conj().T @ v

    def unitary(self):
        """Change of basis from (S+, S-) coordinates to the standard basis."""
        return np.hstack([self.plus_frame, self.minus_frame])


def _beta(rep):
    d, n = rep.pair
    g = rep.gammas
    if (d, n) == (3, 4):
        # not a volume form: in odd d the volume element is central
        return np.kron(SIGMA3, I2), None
    if d % 2 == 0 and (d, n) in CHIRAL:
        # complex volume form, phase (-i)^(d/2) so that beta^2 = Id
        phase = (-1j) ** (d // 2)
        return phase * reduce(np.matmul, g), phase
    raise NoChirality(f"no chirality operator for (d, N) = ({d}, {n})")


def chirality(rep):
    beta, phase = _beta(rep)
    beta = _readonly(beta)
    n = rep.N
    eye = np.eye(n)
    plus = gram_schmidt((eye + beta) / 2.0)
    minus = gram_schmidt((eye - beta) / 2.0)
    if plus.shape[1] != n // 2 or minus.shape[1] != n // 2:
        raise NoChirality("chirality eigenspaces are not of dimension N/2")
    blocks = tuple(_readonly(minus.conj().T @ gj @ plus) for gj in rep.gammas)
    return ChiralStructure(rep, beta, phase, _readonly(plus), _readonly(minus), blocks)


def verify_chirality(ch):
    """Residuals of beta^2 = Id, beta = beta^*, {beta, gamma_j} = 0 and the block identity."""
    n = ch.rep.N
    b = ch.beta
    res = {
        "involution": float(np.linalg.norm(b @ b - np.eye(n))),
        "hermiticity": float(np.linalg.norm(b - b.conj().T)),
        "anticommutation": max(float(np.linalg.norm(b @ g + g @ b)) for g in ch.rep.gammas),
    }
    blk = 0.0
    m = n // 2
    for j, cj in enumerate(ch.blocks):
        for k, ck in enumerate(ch.blocks):
            r = cj.conj().T @ ck + ck.conj().T @ cj - 2.0 * (j == k) * np.eye(m)
            blk = max(blk, float(np.linalg.norm(r)))
    res["block_identity"] = blk
    return res
