import math

import pytest

from ztel.nullity import (
    Family,
    decay_experiment,
    eta_estimate,
    euclidean_baseline,
    smallness,
)
from ztel.algebra import Automorphism, GroupElement
from ztel.telescope import fundamental_domain


def test_eta_level_zero(heis, heis_eta):
    # identity translate of the unit cylinder already has l1-diameter >= 3
    assert heis_eta(0.0) >= 3.0
    # measured value includes the seam at r = 1 twisting one face
    assert heis_eta(0.0) == 4.0


def test_eta_monotone_unbounded(heis_eta, sol_eta):
    for eta in (heis_eta, sol_eta):
        values = [eta(float(k)) for k in range(0, 81, 4)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert eta(200.0) > eta(80.0) + 100.0  # linear floor keeps it unbounded


def test_eta_heisenberg_linear_bound(heis_eta):
    # parabolic twist: translate diameters grow linearly, so after the +k
    # floor the table stays under a fixed linear envelope
    for k in range(1, 81):
        assert heis_eta(float(k)) <= 3.0 * k + 6.0
        assert heis_eta(float(k)) >= float(k)


def test_eta_sol_exponential_rate(sol_eta):
    # hyperbolic twist: growth rate equals the expanding eigenvalue
    lam = (3.0 + math.sqrt(5.0)) / 2.0
    ratios = [sol_eta(float(k)) / lam**k for k in range(4, 13)]
    assert all(1.0 <= r <= 8.0 for r in ratios)
    spread = max(ratios) / min(ratios)
    assert spread < 3.0


def test_smallness_identity_is_unfittable(heis, heis_spec, heis_domain):
    # the untranslated domain touches the base region; nothing small covers it
    assert smallness(heis_spec, heis, heis.identity(), heis_domain) == math.inf


def test_smallness_t_power(heis, heis_spec, heis_domain):
    delta = smallness(heis_spec, heis, heis.t_power(20), heis_domain)
    assert delta <= 0.06


def test_smallness_axis_decay(heis, heis_spec, heis_domain):
    d_small = smallness(heis_spec, heis, heis.embed((0, 100)), heis_domain)
    d_large = smallness(heis_spec, heis, heis.embed((0, 10_000)), heis_domain)
    assert d_large < d_small


def test_decay_families_both_fixtures(
    heis, heis_spec, heis_domain, sol, sol_spec, sol_domain
):
    heis_fams = [
        Family("t", "t_power", (4, 8, 16, 32, 64), final_delta_max=0.05),
        Family("axis", "axis", (81, 729, 6561), axis=2, final_delta_max=0.5),
        Family("mixed", "mixed", (81, 729, 6561), axis=2, t_power=3, final_delta_max=0.5),
    ]
    sol_fams = [
        Family("t", "t_power", (4, 8, 16, 32, 64), final_delta_max=0.05),
        Family("axis", "axis", (81, 729, 6561), axis=2, final_delta_max=2.5),
        Family(
            "mixed", "mixed", (81, 729, 6561), axis=2,
            t_scales=(4, 16, 64), final_delta_max=0.05,
        ),
    ]
    for aut, spec, dom, fams in (
        (heis, heis_spec, heis_domain, heis_fams),
        (sol, sol_spec, sol_domain, sol_fams),
    ):
        curve, verdicts = decay_experiment(spec, aut, dom, fams)
        assert verdicts["all_passed"], verdicts
        for fam in fams:
            deltas = [d for _, d in curve.family(fam.name)]
            assert deltas[-1] < deltas[0]
            assert verdicts[fam.name]["strictly_decreasing"]


def test_decay_verdict_failure_on_tight_threshold(heis, heis_spec, heis_domain):
    fams = [Family("t", "t_power", (4, 8), final_delta_max=1e-9)]
    _, verdicts = decay_experiment(heis_spec, heis, heis_domain, fams)
    assert not verdicts["all_passed"]


def test_threaded_evaluation_matches(heis, heis_spec, heis_domain, monkeypatch):
    fams = [Family("t", "t_power", (4, 8, 16))]
    base, _ = decay_experiment(heis_spec, heis, heis_domain, fams)
    monkeypatch.setenv("ZTEL_THREADS", "4")
    threaded, _ = decay_experiment(heis_spec, heis, heis_domain, fams)
    assert base.entries == threaded.entries


def test_family_validation():
    with pytest.raises(ValueError):
        Family("bad", "nope", (1, 2))
    with pytest.raises(ValueError):
        Family("bad", "t_power", (4, 4))
    with pytest.raises(ValueError):
        Family("bad", "mixed", (1, 2), t_scales=(1,))


def test_family_elements(heis):
    fam = Family("m", "mixed", (5, 9), axis=1, t_scales=(2, 3))
    assert fam.element(heis, 0) == GroupElement(2, (5, 0))
    assert fam.element(heis, 1) == GroupElement(3, (9, 0))


def test_baseline_t_powers_stay_large(heis, heis_domain):
    fams = [Family("t", "t_power", (8, 16, 32, 64))]
    curve = euclidean_baseline(heis, heis_domain, fams)
    deltas = [d for _, d in curve.family("t")]
    # shadows on the visual sphere do not shrink: bounded below, near-constant
    assert min(deltas) > 0.3
    assert max(deltas) / min(deltas) < 2.0


def test_baseline_axis_translates_shrink(heis, heis_domain):
    fams = [Family("axis", "axis", (100, 1000, 10_000), axis=2)]
    curve = euclidean_baseline(heis, heis_domain, fams)
    deltas = [d for _, d in curve.family("axis")]
    assert all(b < a for a, b in zip(deltas, deltas[1:]))
    assert deltas[-1] < 0.01


def test_baseline_direct_product_control():
    prod = Automorphism(((1, 0), (0, 1)))
    dom = fundamental_domain(prod, 0.25)
    fams = [
        Family("t", "t_power", (8, 16, 32, 64)),
        Family("axis", "axis", (100, 1000, 10_000), axis=2),
    ]
    curve = euclidean_baseline(prod, dom, fams)
    for name in ("t", "axis"):
        deltas = [d for _, d in curve.family(name)]
        assert all(b < a for a, b in zip(deltas, deltas[1:]))
        assert deltas[-1] < 0.05


def test_baseline_contrast_ten_fold(heis, heis_spec, heis_domain):
    fams = [Family("t", "t_power", (8, 16, 32, 64))]
    slope_curve, _ = decay_experiment(heis_spec, heis, heis_domain, fams)
    euclid_curve = euclidean_baseline(heis, heis_domain, fams)
    slope_final = slope_curve.family("t")[-1][1]
    euclid_final = euclid_curve.family("t")[-1][1]
    assert euclid_final > 10.0 * slope_final


def test_curve_csv(tmp_path, heis, heis_spec, heis_domain):
    fams = [Family("t", "t_power", (4, 8))]
    curve, _ = decay_experiment(heis_spec, heis, heis_domain, fams)
    path = tmp_path / "decay.csv"
    curve.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "family,scale,delta"
    assert len(lines) == 3


def test_eta_small_domain_coarser_grid(sol):
    # a coarser sampling still produces a usable monotone table
    dom = fundamental_domain(sol, 0.5)
    eta = eta_estimate(sol, dom, 10)
    assert eta(0.0) >= 3.0
    assert eta(10.0) > eta(5.0) > eta(1.0)
