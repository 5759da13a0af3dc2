import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aitax import symmetric_economy, validate_config
from aitax.economy import SWEEP_PARAMS, effective_labor, with_param
from aitax.errors import DomainError


def test_symmetric_baseline_validates():
    report = validate_config(symmetric_economy())
    assert report.ok
    assert report.failures == ()


def test_population_shares_must_sum_to_one():
    cfg = symmetric_economy()
    cfg = dataclasses.replace(
        cfg,
        cognitive=dataclasses.replace(cfg.cognitive, pi=0.7),
        manual=dataclasses.replace(cfg.manual, pi=0.7),
    )
    report = validate_config(cfg)
    assert not report.ok
    assert any("sum" in msg for msg in report.messages())


def test_beta_boundary_rejected():
    cfg = symmetric_economy()
    cfg = dataclasses.replace(cfg, prefs=dataclasses.replace(cfg.prefs, beta=1.0))
    report = validate_config(cfg)
    assert not report.ok
    assert any("discount" in msg for msg in report.messages())


@pytest.mark.parametrize("field,value,fragment", [
    ("a", -1.0, "scale"),
    ("a_ai", 0.0, "AI productivity"),
    ("mu_top", 1.0, "share"),
    ("lambda_c", 0.0, "share"),
    ("sigma_top", 1.5, "exponent"),
    ("delta_k", 1.1, "depreciation"),
])
def test_tech_field_violations(field, value, fragment):
    cfg = symmetric_economy()
    cfg = dataclasses.replace(cfg, tech=dataclasses.replace(cfg.tech, **{field: value}))
    report = validate_config(cfg)
    assert not report.ok
    assert any(fragment in msg for msg in report.messages())


def test_complements_nesting_order_enforced():
    # within-nest exponents must lie below the across-nest exponent
    cfg = symmetric_economy()
    bad = dataclasses.replace(cfg.tech, rho_c=0.9, sigma_top=0.5)
    report = validate_config(dataclasses.replace(cfg, tech=bad))
    assert any("rho_c" in name for name, _ in report.failures)


def test_effective_labor_examples():
    assert effective_labor(0.5, 1.0, 2.0) == 1.0
    assert effective_labor(0.5, 0.0, 2.0) == 0.0
    assert effective_labor(0.25, 2.0, 1.0) == 0.5


def test_effective_labor_domain():
    with pytest.raises(DomainError):
        effective_labor(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        effective_labor(0.5, -1.0, 1.0)
    with pytest.raises(DomainError):
        effective_labor(0.5, 1.0, 0.0)


@given(
    pi=st.floats(1e-6, 1.0 - 1e-6),
    l=st.floats(0.0, 1e6),
    z=st.floats(1e-6, 1e6),
    scale=st.floats(1e-3, 1e3),
)
def test_effective_labor_linear_in_l_and_z(pi, l, z, scale):
    base = effective_labor(pi, l, z)
    assert effective_labor(pi, scale * l, z) == pytest.approx(scale * base, rel=1e-12)
    assert effective_labor(pi, l, scale * z) == pytest.approx(scale * base, rel=1e-12)


def test_with_param_replaces_only_target():
    cfg = symmetric_economy()
    for name in SWEEP_PARAMS:
        changed = with_param(cfg, name, 0.42 if name != "delta_AI" else 0.05)
        assert changed != cfg
        # round-trip back to the original value restores equality
        section, fld = SWEEP_PARAMS[name]
        original = getattr(getattr(cfg, section), fld)
        assert with_param(changed, name, original) == cfg


def test_with_param_unknown_name():
    with pytest.raises(DomainError, match="unknown sweep parameter"):
        with_param(symmetric_economy(), "beta", 0.9)
