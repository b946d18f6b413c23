"""Monte Carlo estimates, suppression fits and the pseudo-threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import InsufficientData, NoCrossing

CSV_HEADER = "experiment,code,level,p,trials,failures,p_logical,stderr,seed"


@dataclass(frozen=True)
class McEstimate:
    p: float
    trials: int
    failures: int
    seed: int = 0
    experiment: str = "memory"
    code: str = "bs9"
    level: int = 1
    fallbacks: int = 0

    def __post_init__(self):
        if not (0 <= self.failures <= self.trials):
            raise ValueError("need 0 <= failures <= trials")

    @property
    def p_logical(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def stderr(self) -> float:
        if not self.trials:
            return 0.0
        q = self.p_logical
        return math.sqrt(q * (1 - q) / self.trials)

    def csv_row(self) -> str:
        return (f"{self.experiment},{self.code},{self.level},{self.p:.6g},{self.trials},"
                f"{self.failures},{self.p_logical:.6g},{self.stderr:.6g},{self.seed}")


@dataclass(frozen=True)
class FitResult:
    exponent: float
    coefficient: float
    r_squared: float
    points: int


def _loglog(ps, qs):
    x, y = np.log(np.asarray(ps, float)), np.log(np.asarray(qs, float))
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(math.exp(icpt)), r2


def fit_suppression(estimates: Sequence[McEstimate], min_failures: int = 10) -> FitResult:
    """Least squares of log p_logical against log p: p_logical = A p^e."""
    if len(estimates) < 3:
        raise InsufficientData(f"need at least 3 sweep points, got {len(estimates)}")
    low = [e.p for e in estimates if e.failures < min_failures]
    if low:
        raise InsufficientData(f"fewer than {min_failures} failures at p = {low}")
    e, a, r2 = _loglog([x.p for x in estimates], [x.p_logical for x in estimates])
    return FitResult(e, a, r2, len(estimates))


def fit_arrays(ps: Sequence[float], qs: Sequence[float]) -> FitResult:
    """Fit on raw (p, p_logical) pairs; used for synthetic checks."""
    if len(ps) < 3:
        raise InsufficientData("need at least 3 points")
    e, a, r2 = _loglog(ps, qs)
    return FitResult(e, a, r2, len(ps))


def crossing(fit: FitResult) -> float:
    """Solve A p^e = p."""
    # a unit exponent from rounding must not produce a huge spurious crossing
    if fit.exponent <= 1.0 + 1e-9 or fit.coefficient <= 0:
        raise NoCrossing(f"exponent {fit.exponent:.3f} never crosses the identity line")
    return fit.coefficient ** (-1.0 / (fit.exponent - 1.0))


def pseudo_threshold(estimates: Sequence[McEstimate]) -> float:
    """Crossing of the fitted power law with p_logical = p."""
    return crossing(fit_suppression(estimates))


def pseudo_threshold_ci(estimates: Sequence[McEstimate], n_boot: int = 2000, level: float = 0.95,
                        rng: Optional[np.random.Generator] = None) -> tuple[float, float]:
    """Parametric bootstrap interval: failures are redrawn from
    Binomial(trials, p_logical) at every point and the crossing refitted."""
    rng = rng if rng is not None else np.random.default_rng(0)
    ps = np.array([e.p for e in estimates])
    ns = np.array([e.trials for e in estimates])
    qs = np.array([e.p_logical for e in estimates])
    vals = []
    for _ in range(n_boot):
        f = rng.binomial(ns, qs)
        if (f == 0).any():
            continue
        e, a, _ = _loglog(ps, f / ns)
        if e > 1.0:
            vals.append(a ** (-1.0 / (e - 1.0)))
    if len(vals) < n_boot // 2:
        raise NoCrossing("bootstrap rarely finds a crossing")
    lo, hi = np.quantile(vals, [(1 - level) / 2, (1 + level) / 2])
    return float(lo), float(hi)
