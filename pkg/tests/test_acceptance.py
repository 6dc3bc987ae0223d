"""Acceptance criteria, one test per criterion, each with its runtime budget."""
import itertools
import json
import math
import time

import numpy as np
import pytest

from diracbc.boundary import BoundaryCondition, BoundaryFrame, adjoint_bc, chiral_eigenframes, is_self_adjoint, is_symmetric, tangent_lambda
from diracbc.catalog import FamilySpec, closed_form, oracle
from diracbc.cli import main
from diracbc.clifford import CHIRAL, SUPPORTED, build_rep, chirality, verify_chirality, verify_rep
from diracbc.linalg import Subspace, UnitaryMap, extract_unitary, graph_of, random_subspace, random_unitary, same_subspace, skew_eigenspace
from diracbc.regularity import (
    BOUNDARY,
    MobiusParams,
    classify_d2n2,
    classify_d3n4,
    classify_d4n4,
    classify_d5n4_global,
    mobius_criterion,
    mobius_root_oracle,
    principal_symbol,
    sl_check_sampled,
    witness_residuals,
)
from diracbc.transmission import DeltaShellParams, TransmissionPair, delta_shell_pair, delta_shell_regular, surface_distance, trans_self_adjoint, trans_sl_check
from diracbc.witness import witness_build, witness_report


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"


def unit(rng, m):
    x = rng.standard_normal(m)
    return x / np.linalg.norm(x)


def test_criterion_01_clifford_structure():
    with Budget(1):
        for pair in SUPPORTED:
            r = verify_rep(build_rep(*pair), tol=1e-12)
            assert r["passed"], (pair, r)
            assert r["max_hermiticity_residual"] < 1e-12 and r["max_anticommutation_residual"] < 1e-12
        for pair in CHIRAL:
            res = verify_chirality(chirality(build_rep(*pair)))
            assert max(res.values()) < 1e-12, (pair, res)


def test_criterion_02_unitary_graph_round_trip():
    rng = np.random.default_rng(2)
    with Budget(10):
        for pair in CHIRAL:
            fr = BoundaryFrame.standard(build_rep(*pair))
            ep, em = fr.eplus(), fr.eminus()
            h = fr.rep.N // 2
            for _ in range(1000):
                u = random_unitary(h, rng)
                bc = BoundaryCondition(fr, graph_of(UnitaryMap(ep, em, u)))
                assert is_self_adjoint(bc)
                assert np.linalg.norm(extract_unitary(bc.lam, ep, em).matrix - u) < 1e-9
            for _ in range(1000):
                # a proper subspace of a Lagrangian graph: symmetric, never self-adjoint
                lam = graph_of(UnitaryMap(ep, em, random_unitary(h, rng)))
                k = int(rng.integers(0, h))
                sub = Subspace.span(lam.frame @ rng.standard_normal((h, k))) if k else Subspace.zero(fr.rep.N)
                bc = BoundaryCondition(fr, sub)
                assert is_symmetric(bc) and not is_self_adjoint(bc)


def test_criterion_03_adjoint_involution():
    rng = np.random.default_rng(3)
    with Budget(10):
        for i in range(1000):
            pair = SUPPORTED[i % len(SUPPORTED)]
            fr = BoundaryFrame.random(build_rep(*pair), rng)
            n = fr.rep.N
            k = int(rng.integers(0, n + 1))
            lam = random_subspace(n, k, rng) if k else Subspace.zero(n)
            bc = BoundaryCondition(fr, lam)
            adj = adjoint_bc(bc)
            assert lam.dim + adj.dim == n
            assert same_subspace(adjoint_bc(BoundaryCondition(fr, adj)), lam)


def test_criterion_04_d2n2_classification():
    with Budget(1):
        for B in (2.0, -2.0, 1.0, -1.0, 0.5, -0.5, 0.0):
            bc, v = classify_d2n2(B)
            assert is_self_adjoint(bc)
            assert v.regular is (B != 0)
            assert sl_check_sampled(bc).regular is v.regular


def test_criterion_05_generalized_mit():
    with Budget(5):
        thetas = np.linspace(0.0, 2 * math.pi, 41)
        for i, th in enumerate(thetas):
            spec = FamilySpec("generalized_mit", {"theta": th})
            _, chiral = closed_form(spec)
            _, sampled = oracle(spec)
            expected = i not in (0, 20, 40)
            assert chiral.regular is expected, (th, chiral)
            assert sampled.regular is expected, (th, sampled)


def test_criterion_06_no_go_reproductions():
    rng = np.random.default_rng(6)
    with Budget(30):
        for _ in range(100):
            fr = BoundaryFrame.random(build_rep(3, 2), rng)
            bc = tangent_lambda(fr, fr.covector(unit(rng, 2)))
            v = sl_check_sampled(bc)
            assert v.regular is False and v.witness is not None
            assert max(witness_residuals(fr, bc.lam, v.witness)) < 1e-8
        for _ in range(100):
            fr = BoundaryFrame.random(build_rep(5, 4), rng)
            t = unit(rng, 4)
            tau = rng.uniform(-math.pi, math.pi)
            bc, analytic = classify_d5n4_global(t, tau, fr)
            v = sl_check_sampled(bc)
            assert v.regular is False and v.witness is not None
            k = analytic.witness.k
            along = float(np.dot(k, fr.covector(t)))
            assert along == pytest.approx(math.sin(tau), abs=1e-12)
            assert np.linalg.norm(k - along * fr.covector(t)) == pytest.approx(abs(math.cos(tau)), abs=1e-12)
            assert max(witness_residuals(fr, bc.lam, analytic.witness)) < 1e-8


def test_criterion_07_mobius_vs_roots():
    rng = np.random.default_rng(7)
    band = 1e-8
    checked = 0
    with Budget(5):
        while checked < 10_000:
            a, d = rng.uniform(-2, 2, 2)
            b = complex(*rng.uniform(-2, 2, 2))
            b2 = abs(b) ** 2
            if min(abs(b2 - ((a + d) / 2) ** 2), abs(b2 - a * d)) <= band:
                continue
            p = MobiusParams(a, d, b)
            assert mobius_criterion(p) == mobius_root_oracle(p), p
            checked += 1


def test_criterion_08_d3n4_d4n4_vs_oracle():
    rng = np.random.default_rng(8)
    band = 1e-6
    log = []
    with Budget(60):
        n3 = 0
        while n3 < 500:
            if n3 % 2:
                al, be = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
                b = math.cos(al)
                if abs(b) <= band:
                    continue
                bc, v = classify_d3n4("caseB", b=b, t=math.sin(al) * np.array([math.cos(be), math.sin(be)]))
            else:
                a, d = rng.uniform(-2, 2, 2)
                t = rng.uniform(-2, 2, 2)
                if abs(abs(a) - np.linalg.norm(t)) <= band or abs(a * a - d * d - t @ t) <= 1e-6:
                    continue
                bc, v = classify_d3n4("caseA", a=a, d=d, t=t, form=1 + (n3 // 2) % 2)
            assert sl_check_sampled(bc).regular is v.regular
            n3 += 1
        n4 = 0
        while n4 < 500:
            x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            A = (x + x.conj().T) / 2
            det = float(np.linalg.det(A).real)
            if abs(det) <= band:
                continue
            bc, v = classify_d4n4(A, form=1 + n4 % 2)
            sampled = sl_check_sampled(bc).regular
            if v.regular is None:
                log.append(sampled)
            else:
                assert sampled is v.regular
            n4 += 1
    counts = {str(k): log.count(k) for k in set(log)}
    print(f"d4n4 draws outside the sufficient condition: {len(log)}, sampled verdicts {json.dumps(counts, sort_keys=True)}")


def test_criterion_09_delta_shell_surface():
    axis = np.linspace(-3.0, 3.0, 10)
    fr = BoundaryFrame.standard(build_rep(3, 4))
    ch = chirality(fr.rep)
    compared = 0
    with Budget(120):
        for eta, tau, omega, lam in itertools.product(axis, repeat=4):
            p = DeltaShellParams(eta, tau, omega, lam)
            pair = delta_shell_pair(p, ch, fr).pair
            assert trans_self_adjoint(pair), p
            if surface_distance(p) <= 1e-4:
                continue
            assert trans_sl_check(pair, alternatives=False).regular is delta_shell_regular(p), p
            compared += 1
    assert compared > 9000


def failing_pair(fr, rng):
    """Random full-rank pair whose image meets E_{+i}(a(k)) ⊕ E_{+i}(a(k)) at a random k."""
    n = fr.rep.N
    b1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    k = fr.covector(unit(rng, fr.rep.d - 1))
    a = principal_symbol(fr, k)
    x = skew_eigenspace(a, -1j).frame @ (rng.standard_normal(n // 2) + 1j * rng.standard_normal(n // 2))
    y = skew_eigenspace(a, 1j).frame @ (rng.standard_normal(n // 2) + 1j * rng.standard_normal(n // 2))
    phi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    pp = phi.conj() / np.vdot(phi, phi)
    return TransmissionPair(fr, b1 + np.outer(x - b1 @ phi, pp), b2 + np.outer(y - b2 @ phi, pp))


def test_criterion_10_transmission_equivalence():
    rng = np.random.default_rng(10)
    fr = BoundaryFrame.standard(build_rep(3, 4))
    n = fr.rep.N
    with Budget(20):
        v = trans_sl_check(TransmissionPair(fr, np.eye(n), np.eye(n)))
        assert v.regular is True
        fails = 0
        for i in range(500):
            if i % 2:
                tp = failing_pair(fr, rng)
            else:
                tp = TransmissionPair(fr, *(rng.standard_normal((2, n, n)) + 1j * rng.standard_normal((2, n, n))))
            v = trans_sl_check(tp)
            assert "alt_fails" in v.extra, "pair not full rank"
            image_fails = v.regular is not True
            assert v.extra["alt_fails"] == image_fails == v.extra["alt2_fails"], (i, v.regular, v.extra)
            fails += image_fails
        assert fails >= 250


def zigzag():
    return classify_d2n2(0.0)


def chiral_bag():
    fr = BoundaryFrame.standard(build_rep(3, 2))
    bc = tangent_lambda(fr, fr.covector([1.0, 0.0]))
    return bc, sl_check_sampled(bc)


def test_criterion_11_witness_growth():
    with Budget(30):
        for make in (chiral_bag, zigzag):
            bc, v = make()
            rep = witness_report(witness_build(bc, v), (4, 16, 64, 256))
            assert abs(rep["l2_slope"] + 1) <= 0.15, rep
            assert rep["graph_ratio"] <= 2.0, rep
            assert abs(rep["h1_graph_slope"] - 1) <= 0.2, rep


def test_criterion_12_cli_determinism(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"version": 1, "rep": {"d": 2, "N": 2}, "condition": {"family": "berry_mondragon", "params": {"B": 0.0}}}))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"version": 1, "rep": {"d": 3, "N": 4},
                               "frame": {"nu": [0, 0, 2], "tangent": [[1, 0, 0], [0, 1, 0]]},
                               "condition": {"family": "mit_bag"}}))
    runs = [
        ["check", str(good), "--json", "--cross-check"],
        ["check", str(good)],
        ["sweep", "generalized_mit", "--grid", "theta=0:6.283185307179586:41", "--json"],
        ["sweep", "delta_shell", "--grid", "eta=-3:3:7", "--grid", "lam=-3:3:7", "--set", "tau=0.5"],
    ]
    with Budget(5):
        for argv in runs:
            outs = []
            for _ in range(3):
                code = main(argv)
                out, _ = capsys.readouterr()
                assert code == 0
                outs.append(out)
            assert outs[0] and outs.count(outs[0]) == 3, argv
        for argv in (["check", str(bad)], ["check", str(tmp_path / "missing.json")], ["sweep", "berry_mondragon", "--grid", "B"]):
            assert main(argv) == 2
            capsys.readouterr()
