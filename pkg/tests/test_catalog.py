import math

import numpy as np
import pytest

from diracbc.boundary import BoundaryFrame, is_self_adjoint
from diracbc.catalog import (
    FAMILIES,
    SUFFICIENT,
    FamilySpec,
    build_family,
    closed_form,
    expected_verdicts,
    oracle,
    verdict_matches,
)
from diracbc.clifford import CHIRAL, build_rep
from diracbc.errors import FamilyRepMismatch, ParamOutOfDomain
from diracbc.linalg import Subspace, eigenspace, same_subspace
from diracbc.regularity import BOUNDARY
from diracbc.transmission import TransmissionPair, trans_self_adjoint


def hermitian(rng):
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return (x + x.conj().T) / 2


def unit(rng, m):
    x = rng.standard_normal(m)
    return x / np.linalg.norm(x)


def family_grid(name, rng):
    """At least 50 parameter points (and frames) per family."""
    if name == "mit_bag":
        return [(FamilySpec(name), BoundaryFrame.random(build_rep(*CHIRAL[i % len(CHIRAL)]), rng)) for i in range(52)]
    if name == "generalized_mit":
        return [(FamilySpec(name, {"theta": th}), None) for th in np.linspace(0.0, 2 * math.pi, 61)]
    if name == "berry_mondragon":
        return [(FamilySpec(name, {"B": b}), None) for b in np.linspace(-3, 3, 61)]
    if name == "d2n4":
        pts = [hermitian(rng) for _ in range(50)]
        pts += [np.diag([1.0, 0.0]), np.zeros((2, 2)), np.array([[1.0, 1.0], [1.0, 1.0]])]
        return [(FamilySpec(name, {"A": a}), None) for a in pts]
    if name == "chiral_bag":
        out = [(FamilySpec(name, {"phi": p}), None) for p in np.linspace(0, 2 * math.pi, 50)]
        fr2 = BoundaryFrame.standard(build_rep(2, 2))
        return out + [(FamilySpec(name, {"t": [s]}), fr2) for s in (1.0, -1.0)]
    if name == "d5_family":
        return [(FamilySpec(name, {"t": unit(rng, 4), "tau": rng.uniform(-math.pi, math.pi)}), None) for _ in range(50)]
    if name == "d3n4_caseA":
        out = []
        for i in range(60):
            a, d = rng.uniform(-2, 2, 2)
            t = rng.uniform(-2, 2, 2)
            out.append((FamilySpec(name, {"a": a, "d": d, "t": t, "form": 1 + i % 2}), None))
        # singular A: a^2 = d^2 + |t|^2
        for i in range(10):
            d, t = rng.uniform(-2, 2), rng.uniform(-2, 2, 2)
            a = math.sqrt(d * d + t @ t)
            out.append((FamilySpec(name, {"a": a, "d": d, "t": t, "form": 1 + i % 2}), None))
        return out
    if name == "d3n4_caseB":
        out = []
        for al, be in zip(np.linspace(0, math.pi, 51), rng.uniform(0, 2 * math.pi, 51)):
            out.append((FamilySpec(name, {"b": math.cos(al), "t": math.sin(al) * np.array([math.cos(be), math.sin(be)])}), None))
        return out
    if name == "d4n4":
        # definite draws (det > 0) carry a claim; indefinite ones only get logged
        pts = []
        for i in range(44):
            x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            pts.append((-1) ** i * x @ x.conj().T)
        pts += [hermitian(rng) for _ in range(6)] + [np.diag([1.0, 0.0]), np.eye(2)]
        return [(FamilySpec(name, {"A": a, "form": 1 + i % 2}), None) for i, a in enumerate(pts)]
    if name == "delta_shell":
        return [(FamilySpec(name, dict(zip(("eta", "tau", "omega", "lam"), rng.uniform(-3, 3, 4)))), None) for _ in range(50)]
    raise KeyError(name)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_family_grid_reproduces_expected(name):
    rng = np.random.default_rng(len(name))
    grid = family_grid(name, rng)
    assert len(grid) >= 50
    checked = 0
    for spec, frame in grid:
        exp = expected_verdicts(spec, frame)
        obj = build_family(spec, frame)
        sa = trans_self_adjoint(obj) if isinstance(obj, TransmissionPair) else is_self_adjoint(obj)
        assert sa is exp["self_adjoint"], spec
        if exp["regular"] in (BOUNDARY, None):
            continue
        _, cf = closed_form(spec, frame)
        _, orc = oracle(spec, frame)
        assert verdict_matches(exp["regular"], cf.regular), (spec, cf)
        assert verdict_matches(exp["regular"], orc.regular), (spec, orc)
        checked += 1
    assert checked >= 40


@pytest.mark.parametrize(
    "spec",
    [
        FamilySpec("generalized_mit", {"theta": math.pi + 1e-8}),
        FamilySpec("generalized_mit", {"theta": 1e-7}),
        FamilySpec("berry_mondragon", {"B": 1e-8}),
        FamilySpec("d3n4_caseB", {"b": 1e-8, "t": [math.sqrt(1 - 1e-16), 0.0]}),
        FamilySpec("delta_shell", {"eta": 2.0 + 1e-9}),
    ],
)
def test_boundary_band_points(spec):
    assert expected_verdicts(spec)["regular"] == BOUNDARY
    _, orc = oracle(spec)
    assert orc.regular in (BOUNDARY, False)


def test_exact_boundary_points_fail():
    for spec in (
        FamilySpec("generalized_mit", {"theta": math.pi}),
        FamilySpec("berry_mondragon", {"B": 0.0}),
        FamilySpec("delta_shell", {"eta": 2.0}),
    ):
        assert expected_verdicts(spec)["regular"] is False
        assert oracle(spec)[1].regular is False
        assert closed_form(spec)[1].regular is False


def test_documented_examples():
    assert expected_verdicts(FamilySpec("generalized_mit", {"theta": math.pi})) == {"self_adjoint": True, "regular": False}
    assert expected_verdicts(FamilySpec("berry_mondragon", {"B": 1.0})) == {"self_adjoint": True, "regular": True}
    assert expected_verdicts(FamilySpec("d5_family", {"t": [0, 0, 0, 1.0], "tau": 0.7}))["regular"] is False
    assert expected_verdicts(FamilySpec("d4n4", {"A": np.eye(2)}))["regular"] == SUFFICIENT


def test_mit_bag_uses_i_identity():
    fr = BoundaryFrame.standard(build_rep(3, 4))
    a = build_family(FamilySpec("mit_bag"), fr)
    b = build_family(FamilySpec("generalized_mit", {"theta": math.pi / 2}), fr)
    assert same_subspace(a.lam, b.lam)


def test_chiral_bag_is_tangent_eigenspace():
    fr = BoundaryFrame.standard(build_rep(3, 2))
    bc = build_family(FamilySpec("chiral_bag", {"t": [1.0, 0.0]}), fr)
    assert same_subspace(bc.lam, eigenspace(fr.c(fr.tangent[0]), 1.0))


def test_d5_family_literal():
    fr = BoundaryFrame.standard(build_rep(5, 4))
    tau = 0.3
    bc = build_family(FamilySpec("d5_family", {"t": [0, 0, 0, 1.0], "tau": tau}), fr)
    ct = fr.c(fr.tangent[3])
    h = math.cos(tau) * ct + 1j * math.sin(tau) * fr.c_nu @ ct
    assert same_subspace(bc.lam, eigenspace(h, 1.0))


def test_errors():
    with pytest.raises(FamilyRepMismatch):
        build_family(FamilySpec("d4n4", {"A": np.eye(2)}), BoundaryFrame.standard(build_rep(3, 4)))
    with pytest.raises(ParamOutOfDomain):
        build_family(FamilySpec("nope"))
    with pytest.raises(ParamOutOfDomain):
        build_family(FamilySpec("berry_mondragon"))
    with pytest.raises(ParamOutOfDomain):
        build_family(FamilySpec("chiral_bag", {"t": [2.0, 0.0]}))
    with pytest.raises(ParamOutOfDomain):
        build_family(FamilySpec("d3n4_caseB", {"b": 0.5, "t": [0.1, 0.0]}))
