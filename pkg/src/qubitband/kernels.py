"""Interpolation kernels for bandpass signal reconstruction from interleaved samples.

A signal confined to the band [f_low, f_low + B] can be rebuilt from two
uniform sample series, each taken at rate B (interval dt = 1/B) and offset
from one another by 0 < k < dt.  The interpolation kernel is S = S0 + S1 with

    S0(t) = cos(2*pi*(r*B - f_low)*t - r*pi*B*k) - cos(2*pi*f_low*t - r*pi*B*k)
            -----------------------------------------------------------------
                            2*pi*B*t * sin(r*pi*B*k)

    S1(t) = cos(2*pi*(f_low + B)*t - (r+1)*pi*B*k) - cos(2*pi*(r*B - f_low)*t - (r+1)*pi*B*k)
            ---------------------------------------------------------------------------------
                            2*pi*B*t * sin((r+1)*pi*B*k)

where r is the smallest integer strictly larger than 2*f_low/B.  S satisfies
S(0) = 1 and vanishes on both sample lattices: S(n*dt) = 0 for n != 0 and
S(n*dt + k) = 0 for every integer n.

When 2*f_low/B is exactly the integer r - 1 (the band edge sits on the
sampling lattice, e.g. f_low = 0, or f_low = 0.8 with B = 0.4) the two
cosines in S1 share one frequency, the S1 numerator vanishes identically,
and S reduces to S0 alone; in that case the sin((r+1)*pi*B*k) factor is
allowed to be zero.  Every other zero of either sine factor makes the
kernel singular and is rejected.

The t -> 0 limit of the shared 1/t factor is removable; below |t| < 1e-7 the
numerators are evaluated by series expansion, where the truncation error is
smaller than the rounding error of the direct form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SIN_TOLERANCE = 1e-6
SERIES_CUTOFF = 1e-7


class KernelSingular(ValueError):
    """Raised when a kernel sine factor required by the offset k is (near) zero."""


def interleave_order(f_low: float, bandwidth: float) -> int:
    """Smallest integer strictly larger than 2*f_low/bandwidth.

    Returns n + 1 when the ratio is exactly the integer n.
    """
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    if f_low < 0:
        raise ValueError(f"lower band edge must be >= 0, got {f_low}")
    return math.floor(2.0 * f_low / bandwidth) + 1


@dataclass(frozen=True)
class InterleaveKernelParams:
    """Band, offset and derived interleave order for the kernel S."""

    f_low: float
    bandwidth: float
    k: float
    r: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", interleave_order(self.f_low, self.bandwidth))
        dt = 1.0 / self.bandwidth
        if not 0.0 < self.k < dt:
            raise ValueError(f"offset k must lie strictly inside (0, {dt:.6g}), got {self.k}")
        if abs(self.sin_r) <= SIN_TOLERANCE:
            raise KernelSingular(
                f"sin(r*pi*B*k) = {self.sin_r:.3e} with r={self.r}; "
                f"offset k={self.k:.6g} sits on a kernel singularity"
            )
        if not self.second_branch_degenerate and abs(self.sin_r1) <= SIN_TOLERANCE:
            raise KernelSingular(
                f"sin((r+1)*pi*B*k) = {self.sin_r1:.3e} with r={self.r}; "
                f"offset k={self.k:.6g} sits on a kernel singularity"
            )

    @property
    def sin_r(self) -> float:
        return math.sin(self.r * math.pi * self.bandwidth * self.k)

    @property
    def sin_r1(self) -> float:
        return math.sin((self.r + 1) * math.pi * self.bandwidth * self.k)

    @property
    def second_branch_degenerate(self) -> bool:
        """True when 2*f_low/B == r - 1 exactly, making the S1 numerator vanish."""
        return 2.0 * self.f_low / self.bandwidth == float(self.r - 1)


def _branch(t: np.ndarray, freq_a: float, freq_b: float, phase: float,
            bandwidth: float, sin_factor: float) -> np.ndarray:
    """One kernel branch [cos(a*t - c) - cos(b*t - c)] / (2*pi*B*t*sin_factor)."""
    a = 2.0 * math.pi * freq_a
    b = 2.0 * math.pi * freq_b
    out = np.empty_like(t)
    small = np.abs(t) < SERIES_CUTOFF
    ts = t[~small]
    out[~small] = (np.cos(a * ts - phase) - np.cos(b * ts - phase)) / (
        2.0 * math.pi * bandwidth * ts * sin_factor
    )
    # numerator ~ (a-b)*sin(c)*t - (a^2-b^2)*cos(c)*t^2/2 - (a^3-b^3)*sin(c)*t^3/6
    tt = t[small]
    num = (
        (a - b) * math.sin(phase)
        - (a**2 - b**2) * math.cos(phase) * tt / 2.0
        - (a**3 - b**3) * math.sin(phase) * tt**2 / 6.0
    )
    out[small] = num / (2.0 * math.pi * bandwidth * sin_factor)
    return out


def kernel_S(t, params: InterleaveKernelParams):
    """Evaluate the interleaved interpolation kernel S = S0 + S1 at time(s) t.

    Accepts a scalar or array; S(0) = 1 exactly.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    r, fl, bw, k = params.r, params.f_low, params.bandwidth, params.k
    phase0 = r * math.pi * bw * k
    out = _branch(t_arr, r * bw - fl, fl, phase0, bw, params.sin_r)
    if not params.second_branch_degenerate:
        phase1 = (r + 1) * math.pi * bw * k
        out = out + _branch(t_arr, fl + bw, r * bw - fl, phase1, bw, params.sin_r1)
    out[t_arr == 0.0] = 1.0
    return float(out[0]) if scalar else out


def default_offset(f_low: float, bandwidth: float, points: int = 4096) -> float:
    """Offset k in (0, dt) with the best margin from kernel singularities.

    When the second kernel branch is degenerate, only |sin(r*pi*B*k)| matters
    and the offset nearest dt/2 with |sin| = 1 is returned (dt/2 itself for
    odd interleave order r).  Otherwise the offset maximizing
    min(|sin(r*pi*B*k)|, |sin((r+1)*pi*B*k)|) is found on a uniform grid
    over (0, dt).
    """
    r = interleave_order(f_low, bandwidth)
    dt = 1.0 / bandwidth
    degenerate = 2.0 * f_low / bandwidth == float(r - 1)
    if degenerate:
        j = (r - 1) // 2
        return (2 * j + 1) * dt / (2 * r)
    grid = dt * np.arange(1, points) / points
    margin = np.minimum(
        np.abs(np.sin(r * math.pi * bandwidth * grid)),
        np.abs(np.sin((r + 1) * math.pi * bandwidth * grid)),
    )
    return float(grid[np.argmax(margin)])
