"""Compact electrical models for the JJFET and the nTron.

Both devices are piecewise-linear in current: each holds a discrete state
that selects a gate-dependent resistance, and a state condition that decides
which state is consistent with the branch quantities.  All parameter objects
are frozen and hashable so they can be shared and used as cache keys.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

__all__ = [
    "DeviceState",
    "LookupTable1D",
    "JjfetParams",
    "NtronParams",
    "InvalidTableError",
    "DeviceStateError",
    "UndefinedGainError",
    "lut_eval",
    "jjfet_critical_current",
    "jjfet_resistance",
    "jjfet_branch_voltage",
    "jjfet_state_condition",
    "ntron_switching_current",
    "ntron_gate_threshold",
    "ntron_channel_voltage",
    "ntron_state_condition",
    "gain_factor",
]


class InvalidTableError(ValueError):
    pass


class DeviceStateError(ValueError):
    """A device was asked to operate in a state that belongs to another device kind."""


class UndefinedGainError(ValueError):
    pass


class DeviceState(enum.Enum):
    JJFET_SUBGAP = "JjfetSubGap"
    JJFET_NORMAL = "JjfetNormal"
    NTRON_SUPERCONDUCTING = "NtronSuperconducting"
    NTRON_RESISTIVE = "NtronResistive"

    @property
    def is_jjfet(self) -> bool:
        return self in (DeviceState.JJFET_SUBGAP, DeviceState.JJFET_NORMAL)

    @property
    def is_ntron(self) -> bool:
        return self in (DeviceState.NTRON_SUPERCONDUCTING, DeviceState.NTRON_RESISTIVE)


@dataclass(frozen=True)
class LookupTable1D:
    """Piecewise-linear table with clamped extrapolation.

    Parameters
    ----------
    xs, ys : tuple of float
        Breakpoints; ``xs`` strictly increasing, ``ys`` finite and positive.
    """

    xs: Tuple[float, ...]
    ys: Tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ys = tuple(float(y) for y in self.ys)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if len(xs) != len(ys):
            raise InvalidTableError("xs and ys differ in length")
        if len(xs) < 2:
            raise InvalidTableError("a lookup table needs at least 2 entries")
        if not all(math.isfinite(x) for x in xs):
            raise InvalidTableError("non-finite breakpoint")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InvalidTableError("breakpoints must be strictly increasing")
        if not all(math.isfinite(y) and y > 0 for y in ys):
            raise InvalidTableError("table values must be finite and > 0")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "LookupTable1D":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def constant(cls, value: float, lo: float = -1.0, hi: float = 2.0) -> "LookupTable1D":
        return cls((lo, hi), (value, value))

    @property
    def pairs(self):
        return list(zip(self.xs, self.ys))

    def __call__(self, x: float) -> float:
        return lut_eval(self, x)


def lut_eval(table: LookupTable1D, x: float) -> float:
    """Interpolate ``table`` at ``x``; constant beyond the first/last breakpoint."""
    xs, ys = table.xs, table.ys
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    i = bisect.bisect_right(xs, x)
    x0, x1 = xs[i - 1], xs[i]
    y0, y1 = ys[i - 1], ys[i]
    if x == x0:
        return y0
    y = y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    lo, hi = (y0, y1) if y0 <= y1 else (y1, y0)
    return min(max(y, lo), hi)


@dataclass(frozen=True)
class JjfetParams:
    """Calibration card for one JJFET.

    ``r_sg`` and ``r_n`` are indexed by gate overdrive ``V_G - v_t``.
    ``delta_gap`` (superconducting gap, eV) is only needed by :func:`gain_factor`.
    """

    r_sg: LookupTable1D
    r_n: LookupTable1D
    v_t: float = -0.7
    v_crit: float = 0.24
    ic_a0: float = 2.886e-7
    ic_a1: float = 3.21e-7
    delta_gap: Optional[float] = None

    def __post_init__(self):
        if not self.v_crit > 0:
            raise ValueError("v_crit must be > 0")
        if self.ic_a0 < 0 or self.ic_a1 < 0:
            raise ValueError("critical-current coefficients must be >= 0")
        lo = max(self.r_sg.xs[0], self.r_n.xs[0])
        hi = min(self.r_sg.xs[-1], self.r_n.xs[-1])
        # Both tables are piecewise linear, so checking every breakpoint of
        # either table inside the overlap covers the whole overlap.
        probes = {lo, hi}
        probes.update(x for x in self.r_sg.xs + self.r_n.xs if lo <= x <= hi)
        for x in sorted(probes):
            if not lut_eval(self.r_n, x) > lut_eval(self.r_sg, x):
                raise ValueError(f"r_n must exceed r_sg everywhere; fails at v_gt={x!r}")


@dataclass(frozen=True)
class NtronParams:
    """nTron card: channel resistance and switching current versus gate current."""

    i_sw: LookupTable1D
    r_channel: float = 20e3
    latching: bool = False

    def __post_init__(self):
        if not self.r_channel > 0:
            raise ValueError("r_channel must be > 0")
        ys = self.i_sw.ys
        if any(b > a for a, b in zip(ys, ys[1:])):
            raise InvalidTableError("i_sw must be non-increasing in gate current")


DeviceParams = Union[JjfetParams, NtronParams]


def jjfet_critical_current(v_gt: float, p: JjfetParams) -> float:
    # right-continuous step: full I_C already at v_gt == v_crit
    if v_gt >= p.v_crit:
        return p.ic_a0 + p.ic_a1 * v_gt
    return 0.0


def jjfet_resistance(v_gt: float, state: DeviceState, p: JjfetParams) -> float:
    if state is DeviceState.JJFET_SUBGAP:
        return lut_eval(p.r_sg, v_gt)
    if state is DeviceState.JJFET_NORMAL:
        return lut_eval(p.r_n, v_gt)
    raise DeviceStateError(f"{state.value} is not a JJFET state")


def jjfet_branch_voltage(i_d: float, v_gt: float, state: DeviceState, p: JjfetParams) -> float:
    """Drain-source voltage for drain current ``i_d`` in ``state``."""
    return i_d * jjfet_resistance(v_gt, state, p)


def jjfet_state_condition(i_d: float, v_gt: float, p: JjfetParams) -> DeviceState:
    if abs(i_d) < jjfet_critical_current(v_gt, p):
        return DeviceState.JJFET_SUBGAP
    return DeviceState.JJFET_NORMAL


def ntron_switching_current(i_g: float, p: NtronParams) -> float:
    return lut_eval(p.i_sw, abs(i_g))


def ntron_gate_threshold(i_ch: float, p: NtronParams) -> float:
    """Smallest gate current that switches a channel carrying ``i_ch``.

    Inverts the (non-increasing) switching-current table.  Returns ``0.0`` if
    the channel switches even without gate current and ``math.inf`` if no
    tabulated gate current suppresses the switching current far enough.
    """
    i_ch = abs(i_ch)
    xs, ys = p.i_sw.xs, p.i_sw.ys
    if ys[0] <= i_ch:
        return 0.0
    if ys[-1] > i_ch:
        return math.inf
    for k in range(1, len(xs)):
        if ys[k] <= i_ch:
            x0, x1, y0, y1 = xs[k - 1], xs[k], ys[k - 1], ys[k]
            if ys[k] == i_ch:
                return x1
            return x0 + (x1 - x0) * (y0 - i_ch) / (y0 - y1)
    return math.inf  # pragma: no cover


def ntron_channel_voltage(i_ch: float, state: DeviceState, p: NtronParams) -> float:
    if state is DeviceState.NTRON_SUPERCONDUCTING:
        return 0.0
    if state is DeviceState.NTRON_RESISTIVE:
        return i_ch * p.r_channel
    raise DeviceStateError(f"{state.value} is not an nTron state")


def ntron_state_condition(
    i_ch: float, i_g: float, previous: DeviceState, p: NtronParams
) -> DeviceState:
    if not previous.is_ntron:
        raise DeviceStateError(f"{previous.value} is not an nTron state")
    if p.latching and previous is DeviceState.NTRON_RESISTIVE:
        return DeviceState.NTRON_RESISTIVE
    if abs(i_ch) >= ntron_switching_current(i_g, p):
        return DeviceState.NTRON_RESISTIVE
    return DeviceState.NTRON_SUPERCONDUCTING


def gain_factor(v_gt: float, p: JjfetParams) -> float:
    """Dimensionless supercurrent gain ``(dI_C/dV_G) * pi * delta / I_C``.

    Uses the analytic slope ``ic_a1`` of the critical-current fit.
    """
    if p.delta_gap is None:
        raise UndefinedGainError("delta_gap is not set on this card")
    ic = jjfet_critical_current(v_gt, p)
    if ic <= 0:
        raise UndefinedGainError(f"critical current vanishes at v_gt={v_gt!r}")
    return p.ic_a1 * math.pi * p.delta_gap / ic
