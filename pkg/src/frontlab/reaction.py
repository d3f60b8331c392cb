"""Reaction terms for the 1D reaction-diffusion model.

The central family is the weakly monostable one,

    f(s) = r * s * (1 - s) / (1 + |ln s|)**alpha,

whose per-capita rate sits between the logistic (KPP) rate r*(1-s) and the
degenerate Allee rate r*s**alpha*(1-s) near s = 0.  Both reference families
are provided for comparison plots, and ``verify_hypothesis_bounds`` checks
an arbitrary scalar reaction against the two-sided per-capita envelope

    f(s) <= r*s/(1+|ln s|)**alpha                 on (0, 1),
    f(s) >= r*s/(1+|ln s|)**alpha * (1 - K*s)     on (0, s0].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InputError, ParameterError

# Below this, ln(s) is not worth evaluating: the true rate is under 1e-298
# and the limit value is 0.  Also keeps subnormals out of the power kernel.
UNDERFLOW_CUTOFF = 1e-300


class ReactionKind(Enum):
    WEAKLY_MONOSTABLE = "weakly_monostable"
    KPP = "kpp"
    ALLEE = "allee"


@dataclass(frozen=True)
class ReactionParams:
    """Growth rate r, degeneracy exponent alpha, and lower-bound data (K, s0)."""

    r: float = 1.0
    alpha: float = 0.4
    K: float = 1.0
    s0: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise ParameterError(f"growth rate r must be > 0, got {self.r}")
        if not self.alpha > 0:
            raise ParameterError(f"exponent alpha must be > 0, got {self.alpha}")
        if self.K < 0:
            raise ParameterError(f"correction coefficient K must be >= 0, got {self.K}")
        if not 0 < self.s0 <= 1:
            raise ParameterError(f"threshold s0 must be in (0, 1], got {self.s0}")


@dataclass(frozen=True)
class ReactionFamily:
    kind: ReactionKind
    params: ReactionParams

    def __call__(self, s):
        return eval_f(self, s)


def weakly_monostable(alpha: float, r: float = 1.0, K: float = 1.0,
                      s0: float = 1.0) -> ReactionFamily:
    return ReactionFamily(ReactionKind.WEAKLY_MONOSTABLE, ReactionParams(r, alpha, K, s0))


def kpp(alpha: float, r: float = 1.0) -> ReactionFamily:
    return ReactionFamily(ReactionKind.KPP, ReactionParams(r, alpha))


def allee(alpha: float, r: float = 1.0) -> ReactionFamily:
    return ReactionFamily(ReactionKind.ALLEE, ReactionParams(r, alpha))


def _rate_array(kind: ReactionKind, p: ReactionParams, s: np.ndarray) -> np.ndarray:
    """Reaction rate on a validated array in [0, 1].  No domain checks."""
    if kind is ReactionKind.KPP:
        return p.r * s * (1.0 - s)
    out = np.zeros_like(s)
    live = s > UNDERFLOW_CUTOFF
    sv = s[live]
    if kind is ReactionKind.WEAKLY_MONOSTABLE:
        # |ln s| = -ln s on (0, 1]; at s = 1 the factor (1 - s) gives exactly 0.
        out[live] = p.r * sv * (1.0 - sv) / (1.0 - np.log(sv)) ** p.alpha
    elif kind is ReactionKind.ALLEE:
        out[live] = p.r * sv ** (p.alpha + 1.0) * (1.0 - sv)
    else:  # pragma: no cover - enum is closed
        raise ParameterError(f"unknown reaction kind {kind}")
    return out


def eval_f(family: ReactionFamily, s):
    """Evaluate the reaction rate at state value(s) ``s`` in [0, 1].

    Accepts scalars or arrays.  Raises ``DomainError`` for values outside
    [0, 1].  Exactly 0 is returned at s = 0 and s = 1 (continuous limits;
    no logarithm of zero is ever taken).
    """
    arr = np.asarray(s, dtype=float)
    if arr.size and (np.nanmin(arr) < 0.0 or np.nanmax(arr) > 1.0):
        bad = arr[(arr < 0.0) | (arr > 1.0)].flat[0]
        raise DomainError(f"state value {bad} outside [0, 1]")
    out = _rate_array(family.kind, family.params, arr)
    if np.isscalar(s) or arr.ndim == 0:
        return float(out)
    return out


def percapita_bound(params: ReactionParams, s: np.ndarray) -> np.ndarray:
    """Upper envelope r*s/(1+|ln s|)**alpha for s strictly inside (0, 1)."""
    return params.r * s / (1.0 - np.log(s)) ** params.alpha


@dataclass(frozen=True)
class BoundViolation:
    s: float
    f_value: float
    bound: float


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the two-sided per-capita bound check."""

    upper_ok: bool
    lower_ok: bool
    n_checked: int
    n_lower_checked: int
    upper_violation: BoundViolation | None = None
    lower_violation: BoundViolation | None = None

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.lower_ok


def verify_hypothesis_bounds(params: ReactionParams,
                             f: Callable[[np.ndarray], np.ndarray],
                             grid: Sequence[float]) -> HypothesisReport:
    """Check ``f`` against the per-capita envelope on sample points in (0, 1).

    The upper bound is tested at every grid point; the lower bound only at
    points <= s0.  On failure the report carries the worst witness (largest
    excess / deficit) with both sides of the inequality.
    """
    s = np.asarray(grid, dtype=float)
    if s.size == 0:
        raise InputError("empty sample grid")
    if np.any(s <= 0.0) or np.any(s >= 1.0):
        raise InputError("sample points must lie strictly inside (0, 1)")

    try:
        fs = np.asarray(f(s), dtype=float)
        if fs.shape != s.shape:
            raise ValueError
    except Exception:
        fs = np.array([float(f(x)) for x in s])

    upper = percapita_bound(params, s)
    excess = fs - upper
    upper_ok = bool(np.all(excess <= 0.0))
    upper_witness = None
    if not upper_ok:
        i = int(np.argmax(excess))
        upper_witness = BoundViolation(float(s[i]), float(fs[i]), float(upper[i]))

    low_mask = s <= params.s0
    s_low = s[low_mask]
    # same evaluation order as the canonical rate so K = 1 gives exact equality
    lower = (params.r * s_low * (1.0 - params.K * s_low)
             / (1.0 - np.log(s_low)) ** params.alpha)
    deficit = lower - fs[low_mask]
    lower_ok = bool(np.all(deficit <= 0.0))
    lower_witness = None
    if not lower_ok:
        j = int(np.argmax(deficit))
        sj = s[low_mask][j]
        lower_witness = BoundViolation(float(sj), float(fs[low_mask][j]), float(lower[j]))

    return HypothesisReport(upper_ok, lower_ok, int(s.size), int(low_mask.sum()),
                            upper_witness, lower_witness)


def log_sample_grid(n: int = 10_000, lo: float = 1e-12, hi: float = 1.0 - 1e-12) -> np.ndarray:
    """Log-spaced sample grid in (0, 1) used by the default bound checks."""
    if n < 2:
        raise InputError("need at least 2 grid points")
    return np.geomspace(lo, hi, n)


@dataclass(frozen=True)
class FamilyComparison:
    """Per-capita and absolute rates of the three families on a common grid."""

    s: np.ndarray
    percapita_kpp: np.ndarray
    percapita_weak: np.ndarray
    percapita_allee: np.ndarray
    f_kpp: np.ndarray
    f_weak: np.ndarray
    f_allee: np.ndarray
    ordering_ok: bool

    def rows(self):
        for i in range(self.s.size):
            yield (self.s[i], self.percapita_kpp[i], self.percapita_weak[i],
                   self.percapita_allee[i], self.f_kpp[i], self.f_weak[i],
                   self.f_allee[i])


def compare_families_near_zero(params: ReactionParams, s_values) -> FamilyComparison:
    """Tabulate KPP / weakly-monostable / Allee rates near s = 0.

    For every sample in (0, 1) the per-capita ordering KPP >= weak >= Allee
    holds (s*(1+|ln s|) < 1 there); ``ordering_ok`` records the sampled check.
    """
    s = np.asarray(s_values, dtype=float)
    f_k = eval_f(ReactionFamily(ReactionKind.KPP, params), s)
    f_w = eval_f(ReactionFamily(ReactionKind.WEAKLY_MONOSTABLE, params), s)
    f_a = eval_f(ReactionFamily(ReactionKind.ALLEE, params), s)
    with np.errstate(divide="ignore", invalid="ignore"):
        pc_k = np.where(s > 0, f_k / s, params.r)
        pc_w = np.where(s > 0, f_w / s, 0.0)
        pc_a = np.where(s > 0, f_a / s, 0.0)
    ordering = bool(np.all(pc_k >= pc_w) and np.all(pc_w >= pc_a))
    return FamilyComparison(s, pc_k, pc_w, pc_a, f_k, f_w, f_a, ordering)
