"""Smoke tests for the python bindings."""

import math

import pytest

import onecircuit as oc


def test_asc_measure_and_moments():
    beta = oc.asc_measure(0.5, 0.25, atoms=40)
    assert beta["atoms"][0][0] == 1.0
    assert beta["atoms"][1][0] == 4.0
    moments = oc.measure_moments(beta, 4)
    assert moments["values"][0] == pytest.approx(1.0, abs=1e-12)
    assert moments["values"][1] == pytest.approx(1.5, abs=1e-10)
    assert oc.asc_moment(0.5, 0.25, 1) == pytest.approx(1.5, abs=1e-14)


def test_quartic_pair_constants():
    zeta, rho = oc.quartic_pair(12)
    z0 = zeta["atoms"][0][1]
    assert z0 == pytest.approx(0.9138931620889273, abs=1e-12)
    mass = sum(m for _, m in rho["atoms"])
    assert mass == pytest.approx(1.0, abs=1e-10)


def test_hankel_and_dominance():
    values = [0.5 * (0.5**n + 2.0**n) for n in range(9)]
    rep = oc.hankel_report(values)
    assert rep["verdict"] == "StieltjesConsistent"
    dom = oc.shift_dominance(values)
    assert not dom["pass"]
    assert dom["failing_order"] == 1
    assert dom["failing_minor_det"] == pytest.approx(-0.28125, abs=1e-12)


def test_transform_inverse_round_trip():
    values = [1.0, 0.3, -2.0, 5.0]
    fwd = oc.transform(values, 2.0, 1.0)
    back = oc.transform(fwd, 2.0, 1.0, direction="inverse")
    assert back == pytest.approx(values, abs=1e-12)


def test_graph_preimage():
    verts = oc.iterated_preimage(2, 1, 10, 3)
    assert sorted(verts) == ["x0", "x1,1", "x1,3", "x2,1", "x2,3"]


def test_build_and_verify_family():
    seed = {"atoms": [[2.0, 1.0]], "tail_mass_bound": 0.0,
            "tail_degree": 0, "tail_moment_bound": 0.0}
    build = oc.build_subnormal([seed], kappa=0, weights=[1.0], mu_x0=2.0, branch_depth=12)
    assert build["Theta"] == pytest.approx(0.5, abs=1e-15)
    check = oc.verify_cc(build["model"], build["family"])
    assert check["max_residual"] <= 1e-10
    table = oc.h_table(build["model"], 6)
    x0_row = next(r for r in table if r["vertex"] == "x0")
    for n, h in enumerate(x0_row["h"]):
        assert h == pytest.approx(0.5 * (2.0**n + 1), rel=1e-12)


def test_exotic_pipeline():
    rep = oc.exotic_pipeline(eta=2, source="quartic", atoms=12)
    assert rep["verdict"] == "NotHyponormal"
    assert rep["id_violated"]
    assert rep["xi"] < 0
    assert rep["beta_min_atom_mass"] > 11.5
    assert all(v == "StieltjesConsistent" for _, v in rep["hankel_evidence"])
    hypo = oc.check_hyponormal(rep["model"])
    assert hypo["verdict"] == "NotHyponormal"


def test_lambda_and_euler():
    zeta, rho = oc.quartic_pair(8)
    tau = oc.pushforward(rho, 1.0, 0.5)  # just needs support above 1
    res = oc.lambda_functional(tau, [list(range(len(tau["atoms"])))], tail_block=0)
    assert res["inf_bound"] <= res["value"] + 1e-12
    assert res["value"] <= res["sup_bound"] + 1e-12

    thr = oc.euler_threshold(2.0)
    assert thr["q0"] > 0
    assert thr["pentagonal_ok"]
