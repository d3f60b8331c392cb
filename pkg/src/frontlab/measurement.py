"""Level-set extraction and propagation-rate fitting.

The front position at level lambda is the rightmost downward crossing of the
solution through lambda (the supremum of the level set).  Traces of (t, x)
pairs are fitted against three rate models,

    linear:     x = a*t + b
    power:      x = c*t**p + b
    exp-power:  x = c*exp(slope * s) + b,   s = (r*(alpha+1)*t)**(1/(alpha+1))

each linear after its coordinate transform; additive offsets b are nuisance
parameters scanned over a coarse grid.  ``select_model`` ranks the three by
a common relative-deviation residual with a complexity preference margin.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .envelope import Regime
from .errors import (AnalysisError, BelowLevelError, FrontExitedDomainError,
                     InputError, OffsetError, ParameterError)

# candidate offsets scanned when b is fitted
OFFSET_GRID_SIZE = 51
# a more complex model must beat a simpler one by this factor to be selected
COMPLEXITY_MARGIN = 1.10


def extract_level_position(grid, values, lam: float) -> float:
    """Rightmost lambda-crossing of ``values`` on ``grid``, interpolated linearly.

    Scans from the right for the first pair (v[i] >= lam, v[i+1] < lam).
    Raises ``BelowLevelError`` when the level set is empty and
    ``FrontExitedDomainError`` when the rightmost value still exceeds lam.
    """
    if not 0 < lam < 1:
        raise ParameterError(f"level must be in (0, 1), got {lam}")
    g = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    if g.shape != v.shape or g.size < 2:
        raise InputError("grid and values must be equal-length, size >= 2")
    if v[-1] >= lam:
        raise FrontExitedDomainError(
            f"rightmost value {v[-1]} >= level {lam}: front left the domain")
    crossings = np.nonzero((v[:-1] >= lam) & (v[1:] < lam))[0]
    if crossings.size == 0:
        raise BelowLevelError(f"no value reaches level {lam}")
    i = int(crossings[-1])
    return float(g[i] + (g[i + 1] - g[i]) * (v[i] - lam) / (v[i] - v[i + 1]))


@dataclass(frozen=True)
class LevelSetTrace:
    """Sampled front positions (t, x_lambda) for one level."""

    lam: float
    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.positions, dtype=float)
        if t.shape != x.shape:
            raise InputError("times and positions must have equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise InputError("trace times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", x)

    def window(self, t_start: float, t_end: float) -> "LevelSetTrace":
        m = (self.times >= t_start) & (self.times <= t_end)
        return LevelSetTrace(self.lam, self.times[m], self.positions[m])

    def default_window(self) -> tuple[float, float]:
        """Last half of the trace; transients are discarded."""
        t0, t1 = float(self.times[0]), float(self.times[-1])
        return t0 + 0.5 * (t1 - t0), t1

    def to_csv(self, target) -> None:
        """Write header t,x_lambda and one full-precision row per sample."""
        if isinstance(target, (str,)) or hasattr(target, "__fspath__"):
            with open(target, "w", encoding="ascii", newline="\n") as fh:
                self.to_csv(fh)
            return
        target.write("t,x_lambda\n")
        for t, x in zip(self.times, self.positions):
            target.write(f"{float(t)!r},{float(x)!r}\n")

    @classmethod
    def from_csv(cls, source, lam: float) -> "LevelSetTrace":
        if isinstance(source, (str,)) or hasattr(source, "__fspath__"):
            with open(source, "r", encoding="ascii") as fh:
                return cls.from_csv(fh, lam)
        header = source.readline().strip()
        if header != "t,x_lambda":
            raise InputError(f"unexpected trace header {header!r}")
        data = np.loadtxt(source, delimiter=",", ndmin=2)
        return cls(lam, data[:, 0], data[:, 1])

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class FitResult:
    """One fitted rate model.

    ``coeffs`` holds the model parameters (and, for exp-power, the transform
    constants alpha and r).  ``residual`` is the RMS misfit in the model's
    own transformed coordinates; ``r_squared`` the goodness there.
    """

    model: str
    coeffs: dict
    window: tuple[float, float]
    residual: float
    r_squared: float

    @property
    def exponent(self) -> float:
        """Headline rate parameter: slope (linear/exp-power) or power p."""
        if self.model == "linear":
            return self.coeffs["a"]
        if self.model == "power":
            return self.coeffs["p"]
        return self.coeffs["slope"]

    def predict(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        c = self.coeffs
        if self.model == "linear":
            return c["a"] * t + c["b"]
        if self.model == "power":
            return c["c"] * t ** c["p"] + c["b"]
        a1 = c["alpha"] + 1.0
        s = (c["r"] * a1 * t) ** (1.0 / a1)
        return c["c"] * np.exp(c["slope"] * s) + c["b"]


def _windowed(trace: LevelSetTrace, window):
    if window is None:
        window = trace.default_window()
    t0, t1 = window
    m = (trace.times >= t0) & (trace.times <= t1)
    t, x = trace.times[m], trace.positions[m]
    if t.size < 10:
        raise InputError(f"need >= 10 samples in window, got {t.size}")
    return t, x, (float(t0), float(t1))


def _ols(u, y):
    # least squares y = slope*u + intercept, plus rms residual and r^2
    A = np.vstack([u, np.ones_like(u)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * u + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), rms, r2


def fit_linear(trace: LevelSetTrace, window=None) -> FitResult:
    """Ordinary least squares x = a*t + b on the window."""
    t, x, win = _windowed(trace, window)
    a, b, rms, r2 = _ols(t, x)
    return FitResult("linear", {"a": a, "b": b}, win, rms, r2)


def _offset_candidates(x, offset):
    if offset is not None:
        return [float(offset)]
    # 51 candidates spanning [0, min x) keep x - b positive throughout
    top = float(np.min(x))
    if top <= 0:
        raise OffsetError("window contains nonpositive positions; fix an offset")
    return [float(b) for b in np.linspace(0.0, top, OFFSET_GRID_SIZE, endpoint=False)]


def _fit_transformed(u, x, offset, model, win, extra):
    best = None
    for b in _offset_candidates(x, offset):
        shifted = x - b
        if np.any(shifted <= 0):
            if offset is not None:
                raise OffsetError(f"offset {b} makes x - b nonpositive in the window")
            continue
        slope, intercept, rms, r2 = _ols(u, np.log(shifted))
        if best is None or rms < best[0]:
            best = (rms, slope, intercept, b, r2)
    if best is None:
        raise OffsetError("no admissible offset found")
    rms, slope, intercept, b, r2 = best
    if model == "power":
        coeffs = {"c": float(np.exp(intercept)), "p": slope, "b": b}
    else:
        coeffs = {"c": float(np.exp(intercept)), "slope": slope, "b": b, **extra}
    return FitResult(model, coeffs, win, rms, r2)


def fit_power(trace: LevelSetTrace, window=None, offset=None) -> FitResult:
    """Fit x = c*t**p + b by regressing ln(x - b) on ln t.

    ``offset`` fixes b; None scans the coarse candidate grid and keeps the
    smallest transformed residual.  Headline parameter: the exponent p.
    """
    t, x, win = _windowed(trace, window)
    if np.any(t <= 0):
        raise InputError("power fit needs strictly positive times")
    return _fit_transformed(np.log(t), x, offset, "power", win, {})


def fit_exp_power(trace: LevelSetTrace, alpha: float, r: float,
                  window=None, offset=None) -> FitResult:
    """Fit x = c*exp(slope*s) + b against s = (r*(alpha+1)*t)**(1/(alpha+1)).

    The slope estimates 1/beta for algebraic tails; intercept gives ln c.
    """
    t, x, win = _windowed(trace, window)
    a1 = alpha + 1.0
    s = (r * a1 * t) ** (1.0 / a1)
    return _fit_transformed(s, x, offset, "exp_power", win, {"alpha": alpha, "r": r})


_MODEL_ORDER = ("linear", "power", "exp_power")  # increasing complexity
_MODEL_REGIME = {
    "linear": Regime.FINITE_SPEED,
    "power": Regime.POWER,
    "exp_power": Regime.EXP_POWER,
}


def selection_residual(fit: FitResult, trace: LevelSetTrace) -> float:
    """RMS relative deviation of the fit on its own window.

    Common yardstick across the three models (their native transformed
    residuals live in different coordinates).
    """
    t0, t1 = fit.window
    m = (trace.times >= t0) & (trace.times <= t1)
    t, x = trace.times[m], trace.positions[m]
    pred = fit.predict(t)
    denom = np.maximum(np.abs(x), 1e-12)
    return float(np.sqrt(np.mean(((pred - x) / denom) ** 2)))


def select_model(trace: LevelSetTrace, alpha: float, r: float,
                 window=None) -> tuple[FitResult, Regime]:
    """Fit all three models (offsets fitted) and pick by residual.

    The least complex model within ``COMPLEXITY_MARGIN`` of the smallest
    relative residual wins, so the flexible exp-power fit cannot claim
    linear data on noise alone.
    """
    fits: dict[str, FitResult] = {}
    for model in _MODEL_ORDER:
        try:
            if model == "linear":
                fits[model] = fit_linear(trace, window)
            elif model == "power":
                fits[model] = fit_power(trace, window)
            else:
                fits[model] = fit_exp_power(trace, alpha, r, window)
        except (InputError, OffsetError):
            continue
    if not fits:
        raise AnalysisError("no rate model could be fitted to the trace")
    scores = {m: selection_residual(f, trace) for m, f in fits.items()}
    best_score = min(scores.values())
    for model in _MODEL_ORDER:
        if model in scores and scores[model] <= COMPLEXITY_MARGIN * best_score:
            return fits[model], _MODEL_REGIME[model]
    raise AnalysisError("model selection failed")  # pragma: no cover
