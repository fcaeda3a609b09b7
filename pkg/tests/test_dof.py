import math

import numpy as np
import pytest
from scipy.integrate import quad

from optiwalk.dof import (
    DoFDescriptor,
    DoFKind,
    FeasibilityLimits,
    bin_center,
    feasibility_check,
    orthogonality_report,
    time_bin_overlap,
)
from optiwalk.optics import builtin_coin
from optiwalk.walk import WalkConfig


def _pulse_overlap(c1, c2, tau):
    # field envelope exp(-(t-c)^2 / 2 tau^2), scaled to unit norm
    def amp(t, c):
        return (math.pi * tau**2) ** -0.25 * math.exp(-((t - c) ** 2) / (2 * tau**2))

    lo, hi = min(c1, c2) - 12 * tau, max(c1, c2) + 12 * tau
    return quad(lambda t: amp(t, c1) * amp(t, c2), lo, hi, epsabs=1e-13, limit=200)[0]


def test_bin_center():
    tb = DoFDescriptor.time_bin(delta_t=2e-9, tau=1e-10, t0=5e-9)
    assert bin_center(tb, 0) == 5e-9
    assert bin_center(tb, -3) == pytest.approx(-1e-9)


def test_overlap_examples():
    tb = DoFDescriptor.time_bin(delta_t=1.0, tau=1.0)
    assert time_bin_overlap(tb, 0, 0) == 1.0
    assert time_bin_overlap(tb, 0, 2) == pytest.approx(math.exp(-1))
    assert time_bin_overlap(tb, 0, 4) == pytest.approx(math.exp(-4))
    assert time_bin_overlap(tb, 3, 1) == time_bin_overlap(tb, 1, 3)


def test_overlap_one_sixteenth():
    # separation 2 tau sqrt(ln 16) gives exactly 1/16
    tau = 0.7
    tb = DoFDescriptor.time_bin(delta_t=2 * tau * math.sqrt(math.log(16)), tau=tau)
    assert time_bin_overlap(tb, 0, 1) == pytest.approx(1 / 16, rel=1e-12)


@pytest.mark.parametrize("ratio", [0.25, 0.5, 1.0, 2.0, 3.0, 5.0])
def test_overlap_matches_quadrature(ratio):
    tau = 1.3e-10
    tb = DoFDescriptor.time_bin(delta_t=ratio * tau, tau=tau)
    got = time_bin_overlap(tb, 0, 1)
    want = _pulse_overlap(0.0, ratio * tau, tau)
    assert got == pytest.approx(want, abs=1e-8)


def test_overlap_monotone_in_separation():
    tb = DoFDescriptor.time_bin(delta_t=1.0, tau=0.8)
    vals = [time_bin_overlap(tb, 0, k) for k in range(8)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_orthogonality_report():
    tight = DoFDescriptor.time_bin(delta_t=1.0, tau=1.0)
    wide = DoFDescriptor.time_bin(delta_t=10.0, tau=1.0)
    rep = orthogonality_report([tight, DoFDescriptor.oam(), wide], (3, 3, 3))
    assert [e.dim for e in rep.entries] == [1, 3]
    assert not rep.entries[0].passed and rep.entries[1].passed
    assert not rep.passed
    assert rep.entries[0].worst_overlap == pytest.approx(math.exp(-0.25))
    assert orthogonality_report([wide], [(-2, 5)]).passed
    assert orthogonality_report([DoFDescriptor.position()], (4,)).entries == ()


def test_orthogonality_single_bin_window():
    tb = DoFDescriptor.time_bin(delta_t=1.0, tau=1.0)
    assert orthogonality_report([tb], (0,)).passed


def test_descriptor_validation_and_roundtrip():
    with pytest.raises(ValueError):
        DoFDescriptor(DoFKind.TIME_BIN, {"tau": 1.0})
    with pytest.raises(ValueError):
        DoFDescriptor.time_bin(delta_t=-1.0, tau=1.0)
    with pytest.raises(ValueError):
        DoFDescriptor("Spin")
    with pytest.raises(ValueError):
        time_bin_overlap(DoFDescriptor.oam(), 0, 1)
    for desc in (DoFDescriptor.time_bin(1e-9, 1e-10), DoFDescriptor.oam(2), DoFDescriptor("Frequency")):
        assert DoFDescriptor.from_dict(desc.to_dict()) == desc


def _config(d, steps, initial=None):
    return WalkConfig(d, steps, builtin_coin("grover", d), initial or [])


def test_feasibility_only_position_flagged():
    dims = [DoFDescriptor.oam(), DoFDescriptor.time_bin(1e-9, 1e-10), DoFDescriptor.position()]
    warns = feasibility_check(_config(3, 15), dims)
    assert [(w.dim, w.kind) for w in warns] == [(3, DoFKind.POSITION)]
    assert warns[0].required == 15 and warns[0].limit == 10
    assert "Position" in str(warns[0])


def test_feasibility_short_walk_clean():
    dims = [DoFDescriptor.oam(), DoFDescriptor.time_bin(1e-9, 1e-10), DoFDescriptor.position()]
    assert feasibility_check(_config(3, 5), dims) == []


def test_feasibility_long_time_bins():
    dims = [DoFDescriptor.time_bin(1e-9, 1e-10), DoFDescriptor("Frequency")]
    warns = feasibility_check(_config(2, 60), dims)
    assert [(w.dim, w.kind, w.required) for w in warns] == [(1, DoFKind.TIME_BIN, 60)]


def test_feasibility_oam_counts_modes():
    dims = [DoFDescriptor.oam()]
    assert feasibility_check(_config(1, 49), dims) == []  # 99 modes
    (w,) = feasibility_check(_config(1, 50), dims)  # 101 modes
    assert w.required == 101 and w.limit == 100
    # a start away from the origin needs more modes
    (w,) = feasibility_check(_config(1, 48, [((2,), 0, 1.0)]), dims)
    assert w.required == 101


def test_feasibility_custom_limits_and_no_mutation():
    dims = [DoFDescriptor.position(), DoFDescriptor.position()]
    cfg = _config(2, 4)
    before = (cfg.steps, list(cfg.initial))
    assert len(feasibility_check(cfg, dims, FeasibilityLimits(max_position_steps=3))) == 2
    assert (cfg.steps, list(cfg.initial)) == before
    with pytest.raises(ValueError):
        feasibility_check(cfg, dims[:1])


def test_overlap_grid_against_quadrature():
    tau = 1.0
    tb = DoFDescriptor.time_bin(delta_t=0.5, tau=tau)
    for a in range(-2, 3):
        for b in range(-2, 3):
            want = _pulse_overlap(bin_center(tb, a), bin_center(tb, b), tau)
            assert abs(time_bin_overlap(tb, a, b) - want) < 1e-8
    assert np.isclose(_pulse_overlap(0, 0, tau), 1.0)
