import json
import math

import numpy as np
import pytest

import tpdo


def test_catalog_and_symbol_access():
    assert set(tpdo.catalog_names()) >= {"constant", "bump", "analytic-pole"}
    s = tpdo.Symbol.from_expression("exp(i*x1)/(1+abs(j))", 1, 16, 4)
    assert (s.dim, s.cutoff, s.points) == (1, 4, 16)
    c = s.coefficients([2])
    # Centered layout: index N/2 + k holds mode k; hat e_1(1) = 2 pi.
    assert c[8 + 1] == pytest.approx(2 * math.pi / 3)
    assert np.abs(np.delete(c, 9)).max() < 1e-14
    x = 2 * np.pi * np.arange(16) / 16
    assert np.allclose(s.values([2]), np.exp(1j * x) / 3)


def test_apply_matches_pointwise_product():
    s = tpdo.Symbol.from_expression("cos(x1)", 1, 16, 8)
    u = np.zeros(16, complex)
    u[8 + 1] = 2 * math.pi  # u = e^{ix}
    out = tpdo.apply(s, u)
    # cos(x) e^{ix} = (1 + e^{2ix}) / 2
    want = np.zeros(16, complex)
    want[8 + 0] = want[8 + 2] = math.pi
    assert np.abs(out - want).max() < 1e-12


def test_quantization_round_trip():
    s = tpdo.Symbol.from_catalog("random-trig", cutoff=12)
    op = tpdo.to_matrix(s, 12)
    assert op.matrix.shape == (25, 25)
    assert op.basis[0] == [0]
    back = tpdo.extract_symbol(op, 4, s.points, 8)
    assert tpdo.interior_symbol_diff(back, s, 4, 8) < 1e-12


def test_norm_bound_and_lattice_constant():
    c1 = tpdo.lattice_constant(1, 1)
    assert abs(c1["value"] - math.pi / math.tanh(math.pi)) < 1e-9
    s = tpdo.Symbol.from_catalog("analytic-pole", cutoff=16)
    rec = tpdo.norm_bound_check(s, 1, 12)
    assert rec["holds"]
    svd = np.linalg.svd(tpdo.to_matrix(s, 12).matrix, compute_uv=False)[0]
    assert rec["measured"] == pytest.approx(svd, rel=1e-8)


def test_orbit_paths_and_richardson():
    s = tpdo.Symbol.from_catalog("analytic-pole", cutoff=16)
    y = [1.234]
    a = tpdo.orbit_eval(s, y, 10).matrix
    b = tpdo.conjugate_translation(tpdo.to_matrix(s, 10), y).matrix
    assert np.abs(a - b).max() < 1e-12
    r = tpdo.richardson_check(s, [1], y, 1e-2, 10)
    assert r["resolved"] and 12 <= r["ratio"] <= 20


def test_analyticity_verdicts():
    pole = tpdo.Symbol.from_catalog("analytic-pole", cutoff=20, points=256)
    bump = tpdo.Symbol.from_catalog("bump", cutoff=20)
    assert tpdo.analyticity_fit(pole, 10)["fit"]["verdict"] == "uniformly-analytic"
    assert tpdo.orbit_growth_table(bump, 10, 20)["fit"]["verdict"] == "not-analytic"


def test_recovery_and_mu():
    s = tpdo.Symbol.from_catalog("j-decay", cutoff=8, points=64)
    back = tpdo.recover_symbol(tpdo.bbeta_build(s, [2]), [2])
    assert tpdo.interior_symbol_diff(back, s, 8, 8) < 1e-12
    mu = tpdo.mu_constant(1)
    assert mu["verified"] and abs(mu["mu"] - mu["scan_mu"]) < 1e-8 * mu["mu"]
    assert tpdo.bound_chain_check(s, [2], 8)["holds"]


def test_run_is_deterministic():
    cfg = {"symbol": {"catalog": "constant"}, "norms": {"p": [1]}}
    s1, r1 = tpdo.run("norms", cfg)
    s2, r2 = tpdo.run("norms", cfg)
    assert s1 == "pass" and r1 == r2
    slack = r1["records"]["norm_bounds"][0]["slack"]
    assert slack == pytest.approx(math.pi / math.tanh(math.pi) - 1, abs=1e-8)
    assert json.loads(tpdo.default_config())["dimension"] == 1


def test_errors_are_python_exceptions():
    with pytest.raises(tpdo.TpdoError, match="syntax"):
        tpdo.Symbol.from_expression("1 +", 1, 16, 4)
    with pytest.raises(tpdo.TpdoError, match="cutoffs.symbl"):
        tpdo.run("norms", {"cutoffs": {"symbl": 3}})
    with pytest.raises(ValueError):
        tpdo.Symbol.from_catalog("no-such-entry")
