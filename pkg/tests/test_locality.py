import random
from fractions import Fraction as F

import pytest

from quivergrass.fgl import FormalGroupLaw
from quivergrass.locality import (
    DisjointnessError,
    PointConfig,
    is_m_tau_disjoint,
    pair_check_kernel,
    parse_point_config,
    shifted_diagonals,
    tau_point,
    verify_m_locality,
    verify_trivialization,
)
from quivergrass.quiver import DilationTorus, default_nakajima, stock_quiver
from quivergrass.thom import KernelContext

# Single-color contexts here use the dilation torus along the first weight
# axis, so the symplectic shift equals the tau coordinate itself and the
# worked numbers below stay small.
AXIS = DilationTorus(1, ((1,), (0,)))


def ctx_for(name, torus=None, law=None):
    q = stock_quiver(name)
    return KernelContext(q, default_nakajima(q), torus or AXIS,
                         law or FormalGroupLaw.additive())


def test_shifted_diagonal_families():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    ds = list(shifted_diagonals(ctx, {"1": 1}, {"1": 1}, tau))
    names = {d.name for d in ds}
    assert names == {"delta_1", "delta_1(tau)"}
    ctx2 = ctx_for("a2", torus=DilationTorus.diagonal())
    tau2 = tau_point(ctx2, [F(1)])
    ds2 = list(shifted_diagonals(ctx2, {"1": 1, "2": 0}, {"1": 0, "2": 1}, tau2))
    names2 = {d.name for d in ds2}
    assert names2 == {"delta_h1(tau)", "delta_h1*(tau)"}
    shifts = {d.name: d.shift for d in ds2}
    assert shifts["delta_h1(tau)"] == 1 and shifts["delta_h1*(tau)"] == 1


def test_tau_zero_degenerates_to_plain_diagonals():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(0)])
    ds = list(shifted_diagonals(ctx, {"1": 1}, {"1": 1}, tau))
    assert all(d.shift == 0 for d in ds)
    d1 = PointConfig({"1": [F(0)]})
    d2 = PointConfig({"1": [F(3)]})
    assert is_m_tau_disjoint(ctx, d1, d2, tau)
    assert not is_m_tau_disjoint(ctx, d1, PointConfig({"1": [F(0)]}), tau)


def test_disjointness_examples():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    assert is_m_tau_disjoint(ctx, PointConfig({"1": [F(0)]}), PointConfig({"1": [F(5)]}), tau)
    # 0 + 1 = 1 lands on the shifted diagonal
    assert not is_m_tau_disjoint(ctx, PointConfig({"1": [F(0)]}), PointConfig({"1": [F(1)]}), tau)
    assert not is_m_tau_disjoint(ctx, PointConfig({"1": [F(0)]}), PointConfig({"1": [F(0)]}), tau)


def test_disjointness_is_two_sided():
    # the reversed order must be rejected as well: D2 - tau hits D1
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    d1 = PointConfig({"1": [F(5)]})
    d2 = PointConfig({"1": [F(6)]})
    assert not is_m_tau_disjoint(ctx, d1, d2, tau)


def test_trivialization_exact_value():
    # oracle: (5-0+1)(0-5+1) / ((5-0)(0-5)) = 6 * (-4) / (-25) = 24/25
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    rep = verify_trivialization(ctx, PointConfig({"1": [F(0)]}), PointConfig({"1": [F(5)]}), tau)
    assert rep.disjoint and rep.trivializes
    assert rep.value == F(24, 25)


def test_trivialization_names_the_factor():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    rep = verify_trivialization(ctx, PointConfig({"1": [F(0)]}), PointConfig({"1": [F(1)]}), tau)
    assert not rep.disjoint
    assert rep.culprits and rep.ok
    kinds = {kind for kind, _ in rep.culprits}
    assert "zero" in kinds or "pole" in kinds
    # a plain collision produces a pole on the unshifted diagonal factor
    rep2 = verify_trivialization(ctx, PointConfig({"1": [F(2)]}), PointConfig({"1": [F(2)]}), tau)
    assert any(kind == "pole" for kind, _ in rep2.culprits)


def test_trivialization_empty_config():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    rep = verify_trivialization(ctx, PointConfig({"1": [F(1)]}), PointConfig({"1": []}), tau)
    assert rep.value == 1


def test_m_locality_identity_words():
    laws = [
        FormalGroupLaw.additive(),
        FormalGroupLaw.multiplicative(),
        FormalGroupLaw.series({(2, 1): F(-1), (1, 2): F(-1)}, 4),
    ]
    for law in laws:
        ctx = ctx_for("a1", torus=DilationTorus.diagonal(), law=law)
        assert verify_m_locality(ctx, ("1",), ("1",)).identity_holds
        ctx2 = ctx_for("a2", torus=DilationTorus.diagonal(), law=law)
        assert verify_m_locality(ctx2, ("1",), ("2",)).identity_holds
        assert verify_m_locality(ctx2, ("1", "2"), ("2", "1")).identity_holds
        assert verify_m_locality(ctx2, ("1", "2"), ()).identity_holds


def test_m_locality_requires_disjoint_configs():
    ctx = ctx_for("a1")
    tau = tau_point(ctx, [F(1)])
    with pytest.raises(DisjointnessError):
        verify_m_locality(
            ctx, ("1",), ("1",),
            PointConfig({"1": [F(0)]}), PointConfig({"1": [F(1)]}), tau,
        )


def test_pair_check_kernel_covers_every_family():
    ctx = ctx_for("a2", torus=DilationTorus.diagonal())
    k = pair_check_kernel(ctx, {"1": 1, "2": 1}, {"1": 1, "2": 1})
    families = {r.family for r, _ in k.records}
    assert families == {"rep_raise", "rep_lower", "gp_omega", "gp_inv"}
    arrow_dirs = {(r.family, r.slots) for r, _ in k.records if r.arrow == "h1"}
    assert ("rep_raise", (1, 2)) in arrow_dirs and ("rep_lower", (2, 1)) in arrow_dirs


def test_parse_point_config():
    d1, d2, tau = parse_point_config(
        {"tau": [1], "D1": {"1": [0]}, "D2": {"1": [5]}}
    )
    assert d1.coords == {"1": [F(0)]} and d2.coords == {"1": [F(5)]}
    assert tau == [F(1)]


def test_multiplicative_backend_disjointness():
    # multiplicative points live on the torus: shifts act by multiplication
    ctx = ctx_for("a1", law=FormalGroupLaw.multiplicative())
    tau = tau_point(ctx, [F(3)])
    d1 = PointConfig({"1": [F(2)]})
    assert not is_m_tau_disjoint(ctx, d1, PointConfig({"1": [F(6)]}), tau)  # 2 * 3 = 6
    assert is_m_tau_disjoint(ctx, d1, PointConfig({"1": [F(5)]}), tau)
