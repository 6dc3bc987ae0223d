"""Shapiro-Lopatinski regularity of local boundary conditions.

The condition at a boundary point is E_{-i}(a(k)) ∩ Lambda = {0} for every
unit tangent covector k, where a(k) = c_nu c_k. Three routes are provided:

* a sampled oracle over a deterministic grid of tangent directions, with a
  local refinement step that locates failures sitting on measure-zero sets;
* the exact chirality criterion in S+ ⊕ S+ coordinates;
* closed-form classifiers for the low-dimensional cases, including the
  Mobius-transform criterion used for d = 3, 4 and N = 4.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import warnings

import numpy as np
from scipy.optimize import least_squares

from .boundary import BoundaryCondition, BoundaryFrame, chiral_eigenframes, tangent_lambda
from .clifford import build_rep, chirality, clifford_mult
from .errors import (
    DegenerateMobius,
    FamilyRepMismatch,
    InconsistentCheck,
    NotTangent,
    ParamOutOfDomain,
)
from .linalg import DEFAULT_TOL, Subspace, eigenspace, gram_schmidt, intersect, skew_eigenspace

DEFAULT_SAMPLES = 512
# sampled margins below this are reported as boundary cases
BOUNDARY_MARGIN = 1e-4
BOUNDARY = "boundary"
# refinement gives up on a start point after this many alternating steps
ASCENT_STEPS = 60
MAX_STARTS = 12


@dataclass(frozen=True, eq=False)
class Witness:
    """Tangent covector k (ambient coordinates) and unit v in Lambda ∩ E_{-i}(a(k))."""

    k: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class SLVerdict:
    """regular is True, False, BOUNDARY, or None when a sufficient-only criterion makes no claim."""

    regular: object
    witness: object = None
    margin: float = float("nan")
    method: str = "sampled"
    notes: tuple = ()
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.regular, (bool, np.bool_)):
            object.__setattr__(self, "regular", bool(self.regular))

    @property
    def is_regular(self):
        return self.regular is True

    @property
    def is_failure(self):
        return self.regular is False


# ---------------------------------------------------------------- symbols


def principal_symbol(frame, k, tol=DEFAULT_TOL):
    """a(k) = c_nu c_k for a unit tangent covector k."""
    k = np.asarray(k, dtype=float)
    if abs(np.dot(k, frame.nu)) > tol:
        raise NotTangent(f"<k, nu> = {np.dot(k, frame.nu):.3e}")
    if abs(np.linalg.norm(k) - 1.0) > tol:
        raise NotTangent(f"|k| = {np.linalg.norm(k)!r} is not 1")
    return frame.c_nu @ clifford_mult(frame.rep, k)


def symbol_generators(frame):
    """i a(t_j) for the tangent basis: Hermitian, and sum_j k_j (.) squares to |k|^2."""
    return np.stack([1j * frame.c_nu @ frame.c(t) for t in frame.tangent])


def witness_residuals(frame, lam, w):
    """(||a v + i v||, ||(Id - P_Lambda) v||) for a witness."""
    a = principal_symbol(frame, w.k, tol=1e-8)
    v = w.v
    r1 = float(np.linalg.norm(a @ v + 1j * v))
    r2 = float(np.linalg.norm(v - lam.frame @ (lam.frame.conj().T @ v)))
    return r1, r2


# ---------------------------------------------------------------- direction grids


def sphere_grid(m, n):
    """Deterministic quasi-uniform points on the unit sphere of R^m (m = d - 1)."""
    if m == 1:
        return np.array([[1.0], [-1.0]])
    n = max(int(n), 1)
    i = np.arange(n, dtype=float)
    if m == 2:
        ang = 2.0 * np.pi * i / n
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if m == 3:
        z = 1.0 - (2.0 * i + 1.0) / n
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = i * np.pi * (3.0 - np.sqrt(5.0))
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    if m == 4:
        # super-Fibonacci spiral on S^3
        s = i + 0.5
        psi = 1.533751168755204288118041
        r = np.sqrt(s / n)
        big = np.sqrt(1.0 - s / n)
        alpha = 2.0 * np.pi * s / np.sqrt(2.0)
        beta = 2.0 * np.pi * s / psi
        return np.column_stack([r * np.sin(alpha), r * np.cos(alpha), big * np.sin(beta), big * np.cos(beta)])
    raise ValueError(f"no direction grid for tangent dimension {m}")


@lru_cache(maxsize=None)
def covering_radius(m, n):
    """Chordal distance within which every unit vector has a grid point.

    Exact for circles; estimated by dense probing (with a safety factor) for S^2, S^3.
    """
    if m == 1:
        return 0.0
    n = max(int(n), 1)
    if m == 2:
        return 2.0 * np.sin(np.pi / (2.0 * n))
    grid = sphere_grid(m, n)
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(8):
        p = rng.standard_normal((4000, m))
        p /= np.linalg.norm(p, axis=1, keepdims=True)
        d2 = 2.0 - 2.0 * np.clip(p @ grid.T, -1.0, 1.0)
        worst = max(worst, float(np.sqrt(max(d2.min(axis=1).max(), 0.0))))
    return min(2.0, 1.25 * worst)


# ---------------------------------------------------------------- pencil search


@dataclass
class SearchResult:
    witness_coords: object
    witness_vector: object
    margin: float
    directions: np.ndarray
    sines: np.ndarray


class PencilSearch:
    """Search for unit k with span(L) ∩ range((Id + H(k))/2) != {0}.

    L is an orthonormal M x r frame and H = (H_1, .., H_m) Hermitian with
    H(k) = sum_j k_j H_j a unitary involution for unit k, so (Id + H(k))/2 is
    the projector onto the "bad" subspace. Writing K_j = L^* H_j L, the
    largest eigenvalue f(k) of K(k) is at most 1, with equality exactly at
    failures, and the smallest principal sine between the two subspaces is
    sqrt((1 - f)/2). Since ||K(k) - K(k')|| <= |k - k'|, grid points farther
    than the covering radius from 1 - f certify the absence of failures
    nearby; the remaining ones seed an alternating ascent on
    f(k, u) = u^* K(k) u followed by a Levenberg-Marquardt polish.
    """

    def __init__(self, L, H):
        self.L = np.asarray(L, dtype=complex)
        self.H = np.asarray(H, dtype=complex)
        self.m = self.H.shape[0]
        self.K = np.einsum("ai,jab,bk->jik", self.L.conj(), self.H, self.L)

    def evaluate(self, coords):
        """Top eigenvalue, principal sine and principal vector (in C^M) for each row of coords."""
        coords = np.atleast_2d(coords)
        kc = np.einsum("nj,jik->nik", coords, self.K)
        w, u = np.linalg.eigh(kc)
        top = u[:, :, -1]
        v = top @ self.L.T
        hv = np.einsum("nj,jab,nb->na", coords, self.H, v)
        sines = np.linalg.norm(v - hv, axis=1) / 2.0
        return w[:, -1], sines, v, top

    def _ascend(self, k):
        f_old = -np.inf
        for _ in range(ASCENT_STEPS):
            kc = np.tensordot(k, self.K, axes=1)
            w, u = np.linalg.eigh(kc)
            u = u[:, -1]
            g = np.real(np.einsum("i,jik,k->j", u.conj(), self.K, u))
            ng = np.linalg.norm(g)
            if ng == 0.0:
                break
            k_new = g / ng
            f = w[-1]
            k = k_new
            if f - f_old < 1e-15:
                break
            f_old = f
        return k

    def _polish(self, k, u):
        m, r = self.m, self.L.shape[1]
        L, H = self.L, self.H
        u0 = u / np.linalg.norm(u)

        def unpack(x):
            return x[:m], x[m:m + r] + 1j * x[m + r:]

        def fun(x):
            kk, uu = unpack(x)
            lu = L @ uu
            res = (lu - np.tensordot(kk, H, axes=1) @ lu) / 2.0
            extra = [kk @ kk - 1.0, np.vdot(uu, uu).real - 1.0, np.imag(np.vdot(u0, uu))]
            return np.concatenate([res.real, res.imag, extra])

        def jac(x):
            kk, uu = unpack(x)
            lu = L @ uu
            hk = np.tensordot(kk, H, axes=1)
            dk = -np.einsum("jab,b->aj", H, lu) / 2.0
            du = (L - hk @ L) / 2.0
            top = np.hstack([dk, du, 1j * du])
            rows = [np.concatenate([2.0 * kk, np.zeros(2 * r)]),
                    np.concatenate([np.zeros(m), 2.0 * uu.real, 2.0 * uu.imag]),
                    np.concatenate([np.zeros(m), -u0.imag, u0.real])]
            return np.vstack([top.real, top.imag, np.array(rows)])

        x0 = np.concatenate([k, u0.real, u0.imag])
        try:
            sol = least_squares(fun, x0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=100)
            kk = sol.x[:m]
        except (ValueError, np.linalg.LinAlgError):
            return k
        nk = np.linalg.norm(kk)
        return kk / nk if nk > 0 else k

    def run(self, samples, tol, refine=True):
        r = self.L.shape[1]
        grid = sphere_grid(self.m, samples)
        if r == 0:
            return SearchResult(None, None, 1.0, grid, np.ones(len(grid)))
        f, sines, vecs, _ = self.evaluate(grid)
        dirs = [grid]
        all_sines = [sines]
        hit = np.flatnonzero(sines <= tol)
        if hit.size:
            j = int(hit[0])
            return SearchResult(grid[j], vecs[j], float(sines.min()), grid, sines)
        witness = (None, None)
        if refine and self.m > 1:
            cover = covering_radius(self.m, samples)
            cand = np.flatnonzero(f >= 1.0 - cover)
            cand = cand[np.argsort(-f[cand], kind="stable")]
            starts = []
            for j in cand:
                if all(np.linalg.norm(grid[j] - grid[s]) > cover for s in starts):
                    starts.append(j)
                if len(starts) >= MAX_STARTS:
                    break
            for j in starts:
                k = self._ascend(grid[j])
                fk, sk, vk, uk = self.evaluate(k)
                if sk[0] > tol and sk[0] < 1e-2:
                    k = self._polish(k, uk[0])
                    fk, sk, vk, uk = self.evaluate(k)
                dirs.append(k[None, :])
                all_sines.append(sk)
                if sk[0] <= tol:
                    witness = (k, vk[0])
                    break
        dirs = np.vstack(dirs)
        all_sines = np.concatenate(all_sines)
        return SearchResult(witness[0], witness[1], float(all_sines.min()), dirs, all_sines)


def _margin_angle(sine):
    return float(np.arcsin(min(max(sine, 0.0), 1.0)))


def _verdict_from_search(res, to_witness, method, notes=()):
    if res.witness_coords is not None:
        k, v = to_witness(res.witness_coords, res.witness_vector)
        return SLVerdict(False, Witness(k, v), _margin_angle(res.margin), method, tuple(notes))
    margin = _margin_angle(res.margin)
    regular = True if margin >= BOUNDARY_MARGIN else BOUNDARY
    return SLVerdict(regular, None, margin, method, tuple(notes))


# ---------------------------------------------------------------- sampled oracle


def sl_check_sampled(bc, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL, refine=True):
    """Brute-force check of E_{-i}(a(k)) ∩ Lambda = {0} over sampled unit tangent k."""
    frame = bc.frame
    n = frame.rep.N
    notes = []
    if bc.lam.dim != n // 2:
        warnings.warn(f"Lambda has dimension {bc.lam.dim}, not N/2 = {n // 2}", stacklevel=2)
        notes.append("dimension differs from N/2")
    search = PencilSearch(bc.lam.frame, symbol_generators(frame))
    res = search.run(samples, tol, refine=refine)
    if res.witness_coords is not None:
        k = frame.covector(res.witness_coords)
        k = k / np.linalg.norm(k)
        # confirm with an explicit eigenspace intersection
        e = skew_eigenspace(principal_symbol(frame, k, tol=1e-8), -1j, tol=1e-8)
        if intersect(e, bc.lam, tol=10 * tol).dim == 0:
            raise InconsistentCheck("located direction does not give an eigenspace intersection")

    def to_witness(coords, v):
        k = frame.covector(coords)
        return k / np.linalg.norm(k), v / np.linalg.norm(v)

    verdict = _verdict_from_search(res, to_witness, "sampled", notes)
    verdict.extra["directions"] = res.directions.shape[0]
    return verdict


def search_witness(bc, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """Witness located by the sampled oracle, or None."""
    v = sl_check_sampled(bc, samples, tol)
    return v.witness


# ---------------------------------------------------------------- chirality criterion


def boundary_clifford(chiral, frame):
    """R_j = i C_nu^* C_{t_j} on S+ for the tangent basis t_j."""
    cnu = chiral.C(frame.nu)
    return np.stack([1j * cnu.conj().T @ chiral.C(t) for t in frame.tangent])


def chiral_condition_subspace(dec):
    """F+ ⊕ F- + {(v, iQv) : v in F_perp} inside S+ ⊕ S+."""
    m = dec.f_tilde.shape[0]
    zp = np.zeros((m, dec.Fplus.dim))
    zm = np.zeros((m, dec.Fminus.dim))
    w = dec.Fperp.frame
    cols = np.hstack([
        np.vstack([dec.Fplus.frame, zp]),
        np.vstack([zm, dec.Fminus.frame]),
        np.vstack([w, 1j * dec.Q @ w]),
    ])
    return Subspace.span(cols)


def _q_criterion(R, Q, coords):
    """Smallest singular value of G+^* Q G+ per direction, scaled by max(1, ||Q||)."""
    scale = max(1.0, float(np.linalg.norm(Q, 2)))
    rk = np.einsum("nj,jab->nab", np.atleast_2d(coords), R)
    _, v = np.linalg.eigh(rk)
    g = v[:, :, v.shape[-1] // 2:]
    c = np.swapaxes(g.conj(), 1, 2) @ Q @ g
    return np.linalg.svd(c, compute_uv=False)[:, -1] / scale


def sl_check_chiral(chiral, frame, dec, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """Chirality form of the condition:

    (F+ ⊕ F- + (1, iQ) F_perp) ∩ (G+(k) ⊕ G-(k)) = {0}, with G± the ±1
    eigenspaces of R_k = i C_nu^* C_k. When F+ = F- = {0} the equivalent
    test "G+(k)^* Q G+(k) is invertible" is evaluated on the same directions.
    """
    R = boundary_clifford(chiral, frame)
    H = np.stack([np.block([[r, np.zeros_like(r)], [np.zeros_like(r), -r]]) for r in R])
    W = chiral_condition_subspace(dec)
    search = PencilSearch(W.frame, H)
    res = search.run(samples, tol)
    cnu = chiral.C(frame.nu)
    m = chiral.half
    notes = []

    def to_witness(coords, v):
        k = frame.covector(coords)
        full = chiral.join(v[:m], cnu @ v[m:])
        return k / np.linalg.norm(k), full / np.linalg.norm(full)

    verdict = _verdict_from_search(res, to_witness, "chiral", notes)
    if dec.Fplus.dim == 0 and dec.Fminus.dim == 0:
        q = _q_criterion(R, dec.Q, res.directions)
        qmin = float(q.min())
        verdict.extra["q_criterion_min"] = qmin
        if verdict.is_failure and qmin > 1e-4:
            raise InconsistentCheck(f"witness found but G+^*QG+ stays invertible (min {qmin:.2e})")
        if verdict.regular is True and qmin < 1e-12:
            raise InconsistentCheck("no witness but G+^*QG+ is singular at a sampled direction")
    return verdict


# ---------------------------------------------------------------- Mobius criterion


@dataclass(frozen=True)
class MobiusParams:
    """M(z) = (a z + b) / (conj(b) z + d) with real a, d."""

    a: float
    d: float
    b: complex

    @property
    def determinant(self):
        return self.a * self.d - abs(self.b) ** 2

    def degenerate(self, tol=1e-14):
        scale = max(1.0, self.a ** 2 + self.d ** 2 + abs(self.b) ** 2)
        return abs(self.determinant) <= tol * scale


def mobius_criterion(p):
    """Solutions of M(z) = -1/conj(z) on the unit circle and in the extended plane."""
    if p.degenerate():
        raise DegenerateMobius(f"ad - |b|^2 = {p.determinant!r}")
    b2 = abs(p.b) ** 2
    return {
        "circle_solution": bool(b2 >= ((p.a + p.d) / 2.0) ** 2),
        "plane_solution": bool(b2 > p.a * p.d),
    }


def mobius_root_oracle(p, circle_tol=1e-10):
    """Independent check by solving the reduced quadratics directly.

    After rotating b to |b|: on the circle the equation is
    |b| z^2 + (a + d) z + |b| = 0, and on the real axis (the only place
    solutions can sit off the circle) a t^2 + 2|b| t + d = 0, with t = inf
    admissible when a = 0.
    """
    a, d, bb = float(p.a), float(p.d), abs(complex(p.b))
    scale = max(1.0, abs(a), abs(d), bb)
    if bb == 0.0:
        circle = abs(a + d) <= 1e-14 * scale
    else:
        roots = np.roots([bb, a + d, bb])
        circle = bool(np.any(np.abs(np.abs(roots) - 1.0) <= circle_tol))
    if a == 0.0:
        # t = inf is a root of the degree-dropped quadratic
        plane = bb != 0.0 or d == 0.0
    else:
        roots = np.roots([a, 2.0 * bb, d])
        plane = bool(np.any(np.abs(np.imag(roots)) <= 1e-12 * scale))
    return {"circle_solution": bool(circle), "plane_solution": bool(plane)}


# ---------------------------------------------------------------- closed-form classifiers


def _require(frame, pair, default_pair=None):
    if frame is None:
        return BoundaryFrame.standard(build_rep(*pair))
    if frame.rep.pair != pair:
        raise FamilyRepMismatch(f"needs representation {pair}, got {frame.rep.pair}")
    return frame


def _check_witness(frame, lam, w, tol=1e-8):
    r1, r2 = witness_residuals(frame, lam, w)
    if r1 > tol or r2 > tol:
        raise InconsistentCheck(f"analytic witness fails its residual check ({r1:.2e}, {r2:.2e})")
    return w


def _exact_witness(frame, lam, directions, tol=1e-9):
    """Try explicit directions; return the first that gives a nonzero intersection."""
    for k in directions:
        k = np.asarray(k, dtype=float)
        k = k / np.linalg.norm(k)
        e = skew_eigenspace(principal_symbol(frame, k, tol=1e-8), -1j, tol=1e-8)
        x = intersect(e, lam, tol)
        if x.dim:
            return Witness(k, x.frame[:, 0])
    return None


def _closed_verdict(bc, regular, method, notes=(), witness_dirs=None, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    notes = list(notes)
    if regular is False:
        w = None
        if witness_dirs is not None:
            w = _exact_witness(bc.frame, bc.lam, witness_dirs)
        if w is None:
            w = search_witness(bc, samples, tol)
        if w is None:
            notes.append("no witness located")
        else:
            _check_witness(bc.frame, bc.lam, w)
        return SLVerdict(False, w, 0.0, method, tuple(notes))
    return SLVerdict(regular, None, float("nan"), method, tuple(notes))


def classify_d2n2(B, frame=None, tol=DEFAULT_TOL):
    """Lambda = {(w, i B C_nu w)} for real B; regular iff B != 0."""
    frame = _require(frame, (2, 2))
    ch = chirality(frame.rep)
    cnu = ch.C(frame.nu)
    B = float(B)
    col = ch.join(np.eye(1), 1j * B * cnu)
    bc = BoundaryCondition(frame, Subspace.span(col))
    t = frame.tangent[0]
    verdict = _closed_verdict(bc, abs(B) > tol, "closed-form", witness_dirs=[t, -t])
    return bc, verdict


def _hermitian_param(A, tol, name="A"):
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise ParamOutOfDomain(f"{name} must be 2 x 2, got {A.shape}")
    if np.linalg.norm(A - A.conj().T) > tol:
        raise ParamOutOfDomain(f"{name} must be Hermitian")
    return 0.5 * (A + A.conj().T)


def classify_d2n4(A, frame=None, tol=DEFAULT_TOL):
    """Lambda = {(w, i C_nu A w)}, A Hermitian; regular iff A is invertible."""
    frame = _require(frame, (2, 4))
    A = _hermitian_param(A, tol)
    ch = chirality(frame.rep)
    cnu = ch.C(frame.nu)
    bc = BoundaryCondition(frame, Subspace.span(ch.join(np.eye(2), 1j * cnu @ A)))
    t = frame.tangent[0]
    regular = abs(np.linalg.det(A)) > tol
    return bc, _closed_verdict(bc, regular, "closed-form", witness_dirs=[t, -t])


def boundary_chirality(chiral, frame):
    """beta_+ = -i R_1 R_2, the chirality of the boundary Clifford module on S+ (d = 3)."""
    R = boundary_clifford(chiral, frame)
    if R.shape[0] != 2:
        raise FamilyRepMismatch("boundary chirality needs a two-dimensional boundary")
    return -1j * R[0] @ R[1]


def d3_matrix(chiral, frame, a, d, t):
    R = boundary_clifford(chiral, frame)
    bp = boundary_chirality(chiral, frame)
    t = np.asarray(t, dtype=float)
    return a * np.eye(2) + d * bp + np.tensordot(t, R, axes=1)


def _mobius_entries(A, bp):
    """Entries of A in the eigenbasis of beta_+ (ordered +1, -1)."""
    w, v = np.linalg.eigh(bp)
    v = v[:, ::-1]
    m = v.conj().T @ A @ v
    return MobiusParams(float(m[0, 0].real), float(m[1, 1].real), complex(m[0, 1]))


def classify_d3n4(kind, a=0.0, d=0.0, t=(0.0, 0.0), b=0.0, form=1, frame=None, tol=DEFAULT_TOL):
    """d = 3, N = 4 classification.

    kind "caseA": Lambda = {(w, i C_nu A w)} (form 1) or {(A w, i C_nu w)} (form 2)
    with A = a Id + d beta_+ + R_t non-degenerate; regular iff |t| < |a|.
    kind "caseA_singular": same construction with det A = 0; same inequality.
    kind "caseB": Lambda = E+(b beta_+ + R_t) ⊕ C_nu E-(b beta_+ + R_t) with
    b^2 + |t|^2 = 1; regular iff b != 0.
    """
    frame = _require(frame, (3, 4))
    ch = chirality(frame.rep)
    cnu = ch.C(frame.nu)
    t = np.asarray(t, dtype=float)
    if t.shape != (2,):
        raise ParamOutOfDomain("t must have two tangent coordinates")
    notes = []
    if kind in ("caseA", "caseA_singular"):
        A = d3_matrix(ch, frame, a, d, t)
        det = float(np.linalg.det(A).real)
        scale = max(1.0, a * a + d * d + t @ t)
        singular = abs(det) <= tol * scale
        if kind == "caseA" and singular:
            raise ParamOutOfDomain("caseA needs a non-degenerate A; use caseA_singular")
        if kind == "caseA_singular" and not singular:
            raise ParamOutOfDomain(f"caseA_singular needs det A = 0, got {det!r}")
        if form == 1:
            cols = ch.join(np.eye(2), 1j * cnu @ A)
        elif form == 2:
            cols = ch.join(A, 1j * cnu)
        else:
            raise ParamOutOfDomain("form must be 1 or 2")
        bc = BoundaryCondition(frame, Subspace.span(cols))
        regular = bool(abs(a) - np.linalg.norm(t) > tol)
        if not singular:
            circle = mobius_criterion(_mobius_entries(A, boundary_chirality(ch, frame)))["circle_solution"]
            if circle == regular and abs(abs(a) - np.linalg.norm(t)) > 1e-9:
                raise InconsistentCheck("Mobius circle criterion disagrees with |t| < |a|")
        method = "closed-form"
    elif kind == "caseB":
        if abs(b * b + t @ t - 1.0) > 1e-9 or abs(b) > 1.0 + 1e-12:
            raise ParamOutOfDomain("caseB needs b in [-1, 1] and b^2 + |t|^2 = 1")
        H = b * boundary_chirality(ch, frame) + np.tensordot(t, boundary_clifford(ch, frame), axes=1)
        ep = eigenspace(H, 1.0).frame
        em = eigenspace(H, -1.0).frame
        cols = np.hstack([ch.join(ep, np.zeros_like(ep)), ch.join(np.zeros_like(em), cnu @ em)])
        bc = BoundaryCondition(frame, Subspace.span(cols))
        regular = bool(abs(b) > tol)
        method = "closed-form"
    else:
        raise ParamOutOfDomain(f"unknown kind {kind!r}")
    return bc, _closed_verdict(bc, regular, method, notes)


def _bloch(R, w):
    return np.real(np.einsum("i,jik,k->j", w.conj(), R, w))


def classify_d4n4(A, form=1, frame=None, tol=DEFAULT_TOL):
    """d = 4, N = 4: Lambda = {(i A w, C_nu w)} (form 1) or {(i w, C_nu A w)} (form 2), A Hermitian.

    The criterion "A != 0 and det A >= 0" is sufficient-only. For det A > 0 the
    verdict is regular. At det A = 0 a kernel vector of A gives an explicit
    witness, so the verdict is not regular (noted). For det A < 0 no claim is
    made (regular = None); use the sampled oracle.
    """
    frame = _require(frame, (4, 4))
    A = _hermitian_param(A, tol)
    ch = chirality(frame.rep)
    cnu = ch.C(frame.nu)
    if form == 1:
        cols = ch.join(1j * A, cnu)
    elif form == 2:
        cols = ch.join(1j * np.eye(2), cnu @ A)
    else:
        raise ParamOutOfDomain("form must be 1 or 2")
    bc = BoundaryCondition(frame, Subspace.span(cols))
    det = float(np.linalg.det(A).real)
    nrm = float(np.linalg.norm(A, 2))
    condition = nrm > tol and det >= -tol * max(1.0, nrm * nrm)
    extra = {"condition_holds": bool(condition), "det": det}
    if not condition:
        return bc, SLVerdict(None, None, float("nan"), "sufficient", ("sufficient condition not met; no claim",), extra)
    if det > tol * max(1.0, nrm * nrm):
        return bc, SLVerdict(True, None, float("nan"), "sufficient", (), extra)
    # det A = 0, A != 0: kernel vector w
    wv, vv = np.linalg.eigh(A)
    w = vv[:, int(np.argmin(np.abs(wv)))]
    R = boundary_clifford(ch, frame)
    m = _bloch(R, w)
    if form == 1:
        v = ch.join(np.zeros(2), cnu @ w)
        k = frame.covector(-m)
    else:
        v = ch.join(1j * w, np.zeros(2))
        k = frame.covector(m)
    wit = _check_witness(frame, bc.lam, Witness(k / np.linalg.norm(k), v / np.linalg.norm(v)))
    note = "det A = 0 satisfies the sufficient condition, but ker A yields a failing direction"
    return bc, SLVerdict(False, wit, 0.0, "sufficient", (note,), extra)


def _unit_tangent(frame, t):
    t = np.asarray(t, dtype=float)
    if t.shape != (frame.rep.d - 1,):
        raise ParamOutOfDomain(f"t needs {frame.rep.d - 1} tangent coordinates")
    if abs(np.linalg.norm(t) - 1.0) > 1e-9:
        raise ParamOutOfDomain("t must be a unit vector")
    return t / np.linalg.norm(t)


def _orthogonal_tangent(frame, t):
    """A unit tangent direction orthogonal to t (coordinates)."""
    basis = np.vstack([t, np.eye(len(t))])
    q = gram_schmidt(basis.T.astype(complex)).real
    return q[:, 1]


def classify_d3n2_global(t, frame=None):
    """Lambda = E+(c_t) in d = 3, N = 2: self-adjoint, never regular."""
    frame = _require(frame, (3, 2))
    tc = _unit_tangent(frame, t)
    bc = tangent_lambda(frame, frame.covector(tc))
    u = frame.covector(_orthogonal_tangent(frame, tc))
    w = _exact_witness(frame, bc.lam, [u, -u])
    if w is None:
        raise InconsistentCheck("no failing direction orthogonal to t")
    _check_witness(frame, bc.lam, w)
    return bc, SLVerdict(False, w, 0.0, "closed-form")


def recover_tangent(bc):
    """Read t off P_Lambda = (Id + c_t)/2 through the gamma coefficients; returns tangent coordinates."""
    rep = bc.frame.rep
    p = bc.lam.projector()
    t = np.array([np.trace(p @ g).real for g in rep.gammas]) * 2.0 / rep.N
    resid = np.linalg.norm(p - (np.eye(rep.N) + clifford_mult(rep, t)) / 2.0)
    if resid > 1e-8 or abs(np.dot(t, bc.frame.nu)) > 1e-8:
        raise ParamOutOfDomain("Lambda is not E+(c_t) for a tangent t")
    return bc.frame.coords(t)


def d5_operator(frame, t_cov, tau):
    """H = exp(i tau c_nu) c_t = cos(tau) c_t + i sin(tau) c_nu c_t."""
    ct = frame.c(t_cov)
    return np.cos(tau) * ct + 1j * np.sin(tau) * frame.c_nu @ ct


def classify_d5n4_global(t, tau, frame=None):
    """Lambda = E+(exp(i tau c_nu) c_t) in d = 5, N = 4; never regular.

    The failing direction is k = sin(tau) t + cos(tau) u for a unit tangent u ⊥ t.
    """
    frame = _require(frame, (5, 4))
    tc = _unit_tangent(frame, t)
    t_cov = frame.covector(tc)
    lam = eigenspace(d5_operator(frame, t_cov, tau), 1.0)
    bc = BoundaryCondition(frame, lam)
    u = frame.covector(_orthogonal_tangent(frame, tc))
    k = np.sin(tau) * t_cov + np.cos(tau) * u
    w = _exact_witness(frame, lam, [k])
    if w is None:
        raise InconsistentCheck("analytic direction does not fail")
    _check_witness(frame, lam, w)
    return bc, SLVerdict(False, w, 0.0, "closed-form")
