"""Named boundary-condition families with their expected verdicts.

Parameter keys are shared with the command-line interface. Expected
regularity is True, False, "boundary" (within BAND of the criterion
boundary), "sufficient" (guaranteed by a sufficient-only criterion) or None
(no claim).
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .boundary import BoundaryFrame, chiral_decompose, from_chiral_unitary, tangent_lambda
from .clifford import CHIRAL, build_rep, chirality
from .errors import FamilyRepMismatch, ParamOutOfDomain
from .regularity import (
    BOUNDARY,
    DEFAULT_SAMPLES,
    SLVerdict,
    classify_d2n2,
    classify_d2n4,
    classify_d3n2_global,
    classify_d3n4,
    classify_d4n4,
    classify_d5n4_global,
    sl_check_chiral,
    sl_check_sampled,
)
from .linalg import DEFAULT_TOL
from .transmission import DeltaShellParams, delta_shell_pair, delta_shell_regular, surface_distance, trans_sl_check

# parameters this close to a criterion boundary are expected to come out as boundary cases
BAND = 1e-6
# and this close count as exactly on it
EXACT = 1e-12
SUFFICIENT = "sufficient"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)


FAMILIES = {
    # name: (allowed reps, default rep)
    "mit_bag": (CHIRAL, (3, 4)),
    "generalized_mit": (CHIRAL, (3, 4)),
    "berry_mondragon": (((2, 2),), (2, 2)),
    "d2n4": (((2, 4),), (2, 4)),
    "chiral_bag": (((3, 2), (2, 2)), (3, 2)),
    "d5_family": (((5, 4),), (5, 4)),
    "d3n4_caseA": (((3, 4),), (3, 4)),
    "d3n4_caseB": (((3, 4),), (3, 4)),
    "d4n4": (((4, 4),), (4, 4)),
    "delta_shell": (CHIRAL, (3, 4)),
}


def default_rep(name):
    return build_rep(*_family(name)[1])


def _family(name):
    if name not in FAMILIES:
        raise ParamOutOfDomain(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[name]


def resolve_frame(spec, frame=None):
    allowed, default = _family(spec.name)
    if frame is None:
        return BoundaryFrame.standard(build_rep(*default))
    if frame.rep.pair not in allowed:
        raise FamilyRepMismatch(f"{spec.name} needs one of {allowed}, got {frame.rep.pair}")
    return frame


def _get(params, key, default=None):
    if key in params:
        return params[key]
    if default is None:
        raise ParamOutOfDomain(f"missing parameter {key!r}")
    return default


def _matrix2(params, key="A"):
    a = np.asarray(_get(params, key), dtype=complex)
    if a.shape != (2, 2):
        raise ParamOutOfDomain(f"{key} must be a 2 x 2 matrix")
    return a


def _tangent_param(params, d):
    """Unit tangent coordinates from "t" (list) or "phi" (angle, two-dimensional boundaries)."""
    if "t" in params:
        t = np.atleast_1d(np.asarray(params["t"], dtype=float))
    elif "phi" in params and d == 3:
        phi = float(params["phi"])
        t = np.array([math.cos(phi), math.sin(phi)])
    elif d == 2:
        t = np.array([1.0])
    else:
        raise ParamOutOfDomain("missing tangent parameter 't'")
    if t.shape != (d - 1,):
        raise ParamOutOfDomain(f"t needs {d - 1} tangent coordinates")
    nt = np.linalg.norm(t)
    if abs(nt - 1.0) > 1e-9:
        raise ParamOutOfDomain("t must be a unit vector")
    return t / nt


def _theta(spec):
    return float(spec.params.get("theta", math.pi / 2)) if spec.name == "generalized_mit" else math.pi / 2


def _delta_params(p):
    return DeltaShellParams(float(p.get("eta", 0.0)), float(p.get("tau", 0.0)), float(p.get("omega", 0.0)), float(p.get("lam", 0.0)))


def _d3_args(p):
    return np.asarray(p.get("t", (0.0, 0.0)), dtype=float)


def _d3_kind(a, d, t):
    A_det = a * a - d * d - t @ t
    scale = max(1.0, a * a + d * d + t @ t)
    return "caseA_singular" if abs(A_det) <= DEFAULT_TOL * scale else "caseA"


def build_family(spec, frame=None):
    """BoundaryCondition (or TransmissionPair for delta_shell) for a family at one point."""
    frame = resolve_frame(spec, frame)
    p = spec.params
    name = spec.name
    if name in ("mit_bag", "generalized_mit"):
        ch = chirality(frame.rep)
        f = np.exp(1j * _theta(spec)) * np.eye(ch.half)
        return from_chiral_unitary(ch, frame, f)
    if name == "berry_mondragon":
        return classify_d2n2(float(_get(p, "B")), frame)[0]
    if name == "d2n4":
        return classify_d2n4(_matrix2(p), frame)[0]
    if name == "chiral_bag":
        t = _tangent_param(p, frame.rep.d)
        return tangent_lambda(frame, frame.covector(t))
    if name == "d5_family":
        return classify_d5n4_global(_tangent_param(p, 5), float(_get(p, "tau")), frame)[0]
    if name == "d3n4_caseA":
        a, d, t = float(_get(p, "a")), float(p.get("d", 0.0)), _d3_args(p)
        return classify_d3n4(_d3_kind(a, d, t), a=a, d=d, t=t, form=int(p.get("form", 1)), frame=frame)[0]
    if name == "d3n4_caseB":
        return classify_d3n4("caseB", b=float(_get(p, "b")), t=_d3_args(p), frame=frame)[0]
    if name == "d4n4":
        return classify_d4n4(_matrix2(p), form=int(p.get("form", 1)), frame=frame)[0]
    if name == "delta_shell":
        return delta_shell_pair(_delta_params(p), chirality(frame.rep), frame).pair
    raise ParamOutOfDomain(f"unknown family {name!r}")


def _banded(distance):
    if distance <= EXACT:
        return False
    if distance <= BAND:
        return BOUNDARY
    return True


def expected_verdicts(spec, frame=None):
    """{"self_adjoint": bool, "regular": True | False | "boundary" | "sufficient" | None}."""
    frame = resolve_frame(spec, frame)
    name = spec.name
    p = spec.params
    if name in ("mit_bag", "generalized_mit"):
        th = _theta(spec)
        reg = _banded(abs(math.remainder(th, math.pi)))
    elif name == "berry_mondragon":
        reg = _banded(abs(float(_get(p, "B"))))
    elif name == "d2n4":
        reg = _banded(abs(np.linalg.det(_matrix2(p))))
    elif name == "chiral_bag":
        reg = frame.rep.d == 2
    elif name == "d5_family":
        reg = False
    elif name == "d3n4_caseA":
        a, t = float(_get(p, "a")), _d3_args(p)
        # a negative gap is a failure, so _banded maps it to False
        reg = _banded(abs(a) - float(np.linalg.norm(t)))
    elif name == "d3n4_caseB":
        reg = _banded(abs(float(_get(p, "b"))))
    elif name == "d4n4":
        A = _matrix2(p)
        det = float(np.linalg.det(A).real)
        if np.linalg.norm(A) <= EXACT or det < -BAND:
            reg = None
        elif abs(det) <= EXACT:
            # the kernel of A yields a failing direction
            reg = False
        elif abs(det) <= BAND:
            reg = BOUNDARY
        else:
            reg = SUFFICIENT
    elif name == "delta_shell":
        reg = _banded(surface_distance(_delta_params(p)))
    else:
        raise ParamOutOfDomain(f"unknown family {name!r}")
    return {"self_adjoint": True, "regular": reg}


def verdict_matches(expected, observed):
    """Compare an expected regularity label with a checker's verdict.regular."""
    if expected is None:
        return True
    if expected == SUFFICIENT:
        return observed is True
    return observed == expected


def closed_form(spec, frame=None, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """(object, SLVerdict) from the family's exact criterion."""
    frame = resolve_frame(spec, frame)
    p = spec.params
    name = spec.name
    if name in ("mit_bag", "generalized_mit"):
        ch = chirality(frame.rep)
        f = np.exp(1j * _theta(spec)) * np.eye(ch.half)
        bc = from_chiral_unitary(ch, frame, f)
        return bc, sl_check_chiral(ch, frame, chiral_decompose(f), samples, tol)
    if name == "berry_mondragon":
        return classify_d2n2(float(_get(p, "B")), frame, tol)
    if name == "d2n4":
        return classify_d2n4(_matrix2(p), frame, tol)
    if name == "chiral_bag":
        t = _tangent_param(p, frame.rep.d)
        if frame.rep.d == 3:
            return classify_d3n2_global(t, frame)
        bc = tangent_lambda(frame, frame.covector(t))
        return bc, SLVerdict(True, None, float("nan"), "closed-form")
    if name == "d5_family":
        return classify_d5n4_global(_tangent_param(p, 5), float(_get(p, "tau")), frame)
    if name == "d3n4_caseA":
        a, d, t = float(_get(p, "a")), float(p.get("d", 0.0)), _d3_args(p)
        return classify_d3n4(_d3_kind(a, d, t), a=a, d=d, t=t, form=int(p.get("form", 1)), frame=frame, tol=tol)
    if name == "d3n4_caseB":
        return classify_d3n4("caseB", b=float(_get(p, "b")), t=_d3_args(p), frame=frame, tol=tol)
    if name == "d4n4":
        return classify_d4n4(_matrix2(p), form=int(p.get("form", 1)), frame=frame, tol=tol)
    if name == "delta_shell":
        dp = _delta_params(p)
        pair = delta_shell_pair(dp, chirality(frame.rep), frame).pair
        return pair, SLVerdict(delta_shell_regular(dp, tol), None, float("nan"), "closed-form")
    raise ParamOutOfDomain(f"unknown family {name!r}")


def oracle(spec, frame=None, samples=DEFAULT_SAMPLES, tol=DEFAULT_TOL):
    """(object, SLVerdict) from the sampled checker."""
    obj = build_family(spec, frame)
    if spec.name == "delta_shell":
        return obj, trans_sl_check(obj, samples, tol)
    return obj, sl_check_sampled(obj, samples, tol)
