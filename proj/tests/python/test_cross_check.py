"""Cross-checks of the pipeline against an independent mpmath oracle.

Everything here is recomputed from closed forms (gamma function, sinh
series, raw model weights) without touching the C++ code paths being
tested.
"""

import pytest
from mpmath import mp, mpf, gamma, pi, sqrt, sinh

import onecircuit as oc

mp.dps = 40

G14 = gamma(mpf(1) / 4)
K0 = G14**2 / (4 * sqrt(pi))
Z0 = pi / K0**2          # mass of the even measure at 0
R = 1 / (1 - Z0)         # scaling that normalizes the remaining mass


def test_quartic_atoms_against_closed_forms():
    zeta, rho = oc.quartic_pair(12)
    assert zeta["atoms"][0][0] == 0.0
    assert zeta["atoms"][0][1] == pytest.approx(float(Z0), rel=1e-14)
    for n, (loc, mass) in enumerate(rho["atoms"]):
        k = 2 * n + 1
        assert loc == pytest.approx(float((k * pi / K0) ** 4), rel=1e-13)
        assert mass == pytest.approx(float(4 * pi / K0**2 * (k * pi) / sinh(k * pi)), rel=1e-13)


def test_pipeline_identities_from_raw_weights():
    rep = oc.exotic_pipeline(eta=2, source="quartic", atoms=12)

    # the budget gap equals minus the transplanted mass at 1
    assert rep["xi"] == pytest.approx(float(-R * Z0), rel=1e-12)
    assert rep["id_defect"] == pytest.approx(float(R * Z0), rel=1e-9)
    assert rep["beta_min_atom_mass"] == pytest.approx(
        float(64 * pi**3 / ((G14**4 - 16 * pi**2) * sinh(pi))), rel=1e-12
    )

    # recompute the loop slack directly from the emitted weights
    mu = dict((k, v) for k, v in rep["model"]["mu"])
    assert mu["x0"] == 1.0
    roots = [mu["x1,1"], mu["x2,1"]]
    seconds = [mu["x1,2"], mu["x2,2"]]
    total = 1.0 + sum(roots)
    slack = 1.0 - (1.0 / total + sum(w * w / s for w, s in zip(roots, seconds)))
    assert rep["worst_slack"] == pytest.approx(slack, rel=1e-12)
    assert slack < 0


def test_asc_moment_against_mpmath_sum():
    # m_n = sum_k (q;q)_n q^{k(k-n)} / ((q;q)_k (q;q)_{n-k}) a^k
    a, q = mpf(2), mpf("0.3")

    def qq(n):
        out = mpf(1)
        for j in range(1, n + 1):
            out *= 1 - q**j
        return out

    for n in range(0, 10):
        expect = sum(qq(n) * q ** (k * (k - n)) / (qq(k) * qq(n - k)) * a**k
                     for k in range(n + 1))
        assert oc.asc_moment(2.0, 0.3, n) == pytest.approx(float(expect), rel=1e-13)
