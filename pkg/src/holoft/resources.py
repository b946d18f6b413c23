"""Control counts and concatenation depths for the three architectures.

``sg`` is the semi-global layout, ``uAdd`` a fully addressable layout running
the same measurement-free gadgets, ``mAdd`` a fully addressable layout with
measurement-based gadgets. All real arithmetic runs in mpmath at 50 digits;
control counts are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Optional

import mpmath

from .errors import ConcatHarmful, DomainError

_mp = mpmath.MPContext()
_mp.dps = 50
mpf = _mp.mpf


@dataclass(frozen=True)
class ThresholdConstants:
    p_thresh_toffoli: float = 3.76e-5
    p_thresh_two_qubit: float = 2.68e-5
    p_meas_thresh: float = 1 / 3
    p_i_anc_thresh: float = 0.5
    p_thresh_measured: float = 1.2e-4

    @property
    def p_h_anc_thresh(self) -> float:
        return math.sin(math.pi / 8) ** 2


THRESHOLDS = ThresholdConstants()


@dataclass(frozen=True)
class ResourceParams:
    """Inputs of a resource estimate.

    ``beta`` and ``t`` give the logical circuit size f = beta * n_c**t;
    ``pulse_factor`` multiplies it for the semi-global layout (default
    4 * n_c). ``bits`` is only used to attach the matching printed values
    to the warnings.
    """

    n_c: int
    epsilon: float = 0.03
    p0: float = 1e-6
    beta: float = 8.0
    t: float = 4.0
    n_ec: int = 9
    n_a: int = 18
    n_b: int = 6
    n_a_prime: int = 18
    p_thresh: float = THRESHOLDS.p_thresh_toffoli
    p_thresh_prime: float = THRESHOLDS.p_thresh_measured
    pulse_factor: Optional[float] = None
    bits: Optional[int] = None

    def __post_init__(self):
        if self.n_c < 1:
            raise ValueError("n_c must be at least 1")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie in (0, 1)")
        if not (0 < self.p0 < self.p_thresh):
            raise ValueError("need 0 < p0 < p_thresh")

    @property
    def f(self):
        return mpf(self.beta) * mpf(self.n_c) ** mpf(self.t)

    @property
    def factor(self):
        return mpf(self.pulse_factor) if self.pulse_factor is not None else 4 * mpf(self.n_c)


@dataclass(frozen=True)
class ResourceReport:
    params: ResourceParams
    k_uadd_real: float
    k_uadd: int
    k_sg_real: float
    k_sg: int
    k_prime_real: float
    k_prime: int
    delta_k: float
    delta_k_prime: float
    Delta_k: int
    Delta_k_prime: int
    n_uadd: int
    n_sg: int
    n_madd: int
    ratio_uadd: float
    ratio_uadd_derived: float
    ratio_uadd_printed: float
    ratio_madd: float
    significant_advantage: bool
    warnings: tuple = field(default_factory=tuple)

    def to_text(self) -> str:
        """Stable key=value document; warnings last, one per line."""
        p = self.params
        lines = [f"n_c={p.n_c}", f"f={float(p.f):.6e}", f"epsilon={p.epsilon}", f"p0={p.p0}",
                 f"p_thresh={p.p_thresh}", f"p_thresh_prime={p.p_thresh_prime}"]
        for name in ("k_uadd_real", "k_uadd", "k_sg_real", "k_sg", "k_prime_real", "k_prime",
                     "delta_k", "delta_k_prime", "Delta_k", "Delta_k_prime", "n_uadd", "n_sg",
                     "n_madd", "ratio_uadd", "ratio_uadd_derived", "ratio_uadd_printed",
                     "ratio_madd", "significant_advantage"):
            v = getattr(self, name)
            lines.append(f"{name}={v:.6f}" if isinstance(v, float) else f"{name}={v}")
        lines.append(f"warnings={len(self.warnings)}")
        lines += [f"warning={w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


CSV_HEADER = ("bits,n_c,k_uadd_real,k_uadd,k_sg_real,k_sg,Delta_k,k_prime_real,k_prime,"
              "n_uadd,n_sg,n_madd,ratio_uadd,ratio_madd")


def csv_row(r: ResourceReport) -> str:
    return (f"{r.params.bits if r.params.bits is not None else ''},{r.params.n_c},"
            f"{r.k_uadd_real:.6f},{r.k_uadd},{r.k_sg_real:.6f},{r.k_sg},{r.Delta_k},"
            f"{r.k_prime_real:.6f},{r.k_prime},{r.n_uadd},{r.n_sg},{r.n_madd},"
            f"{r.ratio_uadd:.6f},{r.ratio_madd:.6f}")


# ---------------------------------------------------------------------------
# concatenation depth

def concat_level(epsilon, p0, p_thresh, f):
    """Real concatenation level k with p_thresh (p0/p_thresh)**(2**k) = epsilon/f.

    Raises ConcatHarmful when p0 >= p_thresh or when epsilon/f is not below
    p_thresh (no level reaches the target, or none is needed).
    """
    epsilon, p0, p_thresh, f = mpf(epsilon), mpf(p0), mpf(p_thresh), mpf(f)
    if not (0 < p0 < p_thresh):
        raise ConcatHarmful(f"p0={p0} is not below p_thresh={p_thresh}")
    target = epsilon / f
    if not (0 < target < p_thresh):
        raise ConcatHarmful(f"epsilon/f={target} is not below p_thresh={p_thresh}")
    return _mp.log(_mp.log(target / p_thresh) / _mp.log(p0 / p_thresh), 2)


def recursion_check(p0, p_thresh, k: int, A=None):
    """Closed-form level-k error rate (A p0)**(2**k) / A with A = 1/p_thresh
    unless overridden."""
    if k < 0:
        raise ValueError("k must be non-negative")
    A = 1 / mpf(p_thresh) if A is None else mpf(A)
    return (A * mpf(p0)) ** (2 ** k) / A


def recursion_iterate(p0, p_thresh, k: int, A=None):
    """Same quantity by iterating p <- A p**2."""
    A = 1 / mpf(p_thresh) if A is None else mpf(A)
    p = mpf(p0)
    for _ in range(k):
        p = A * p * p
    return p


def levels_by_iteration(epsilon, p0, p_thresh, f) -> int:
    """Smallest integer k whose iterated error rate meets epsilon/f."""
    target = mpf(epsilon) / mpf(f)
    p, k = mpf(p0), 0
    while p > target:
        p = p * p / mpf(p_thresh)
        k += 1
        if k > 64:
            raise ConcatHarmful("iteration does not converge")
    return k


# ---------------------------------------------------------------------------
# control counts

def controls_semiglobal(k: int, n_ec: int = 9, n_a: int = 18, n_b: int = 6) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    return (n_ec + n_a) * 9 ** (k - 1) + n_b * 3 ** (k - 1)


def controls_uadd(n_c: int, k: int, n_ec: int = 9, n_a: int = 18, n_b: int = 6) -> int:
    return n_c * controls_semiglobal(k, n_ec, n_a, n_b)


def controls_madd(n_c: int, k_prime: int, n_ec: int = 9, n_a_prime: int = 18) -> int:
    if k_prime < 1:
        raise ValueError("k' must be at least 1")
    return n_c * (n_ec + n_a_prime) * 9 ** (k_prime - 1)


# ---------------------------------------------------------------------------
# level differences

def delta_k(n_c, beta, t, p_thresh, epsilon, factor=None):
    """k_sg - k_uAdd in closed form: log2[1 + log(4 n_c) / log(f p_thresh / eps)]."""
    f = mpf(beta) * mpf(n_c) ** mpf(t)
    factor = 4 * mpf(n_c) if factor is None else mpf(factor)
    denom = _mp.log(f * mpf(p_thresh) / mpf(epsilon))
    if denom <= 0 or factor <= 0:
        raise DomainError("need f p_thresh / epsilon > 1 and a positive pulse factor")
    arg = 1 + _mp.log(factor) / denom
    if arg <= 0:
        raise DomainError("log argument is not positive")
    return _mp.log(arg, 2)


def delta_k_prime(params: ResourceParams):
    """k_sg - k' with both logs written as in the level equation.

    -log2[ log(eps/(p' f)) / log(eps/(p f_sg)) * log(p0/p) / log(p0/p') ],
    where f_sg = factor * f and f is shared by both addressable layouts.
    """
    eps, p0 = mpf(params.epsilon), mpf(params.p0)
    p, pp = mpf(params.p_thresh), mpf(params.p_thresh_prime)
    f = params.f
    num = _mp.log(eps / (pp * f))
    den = _mp.log(eps / (p * f * params.factor))
    if not (p0 < pp) or num >= 0 or den >= 0:
        raise DomainError("delta k' needs p0 below both thresholds and eps/f below them")
    return -_mp.log((num / den) * (_mp.log(p0 / p) / _mp.log(p0 / pp)), 2)


def significant_advantage(params: ResourceParams) -> bool:
    """log 4 <= log(beta n_c**(t-1) p_thresh / eps)."""
    v = mpf(params.beta) * mpf(params.n_c) ** (mpf(params.t) - 1) * mpf(params.p_thresh) / mpf(params.epsilon)
    return bool(_mp.log(4) <= _mp.log(v))


def ratio_printed_form(n_c: int, k_u: int, k_s: int) -> float:
    """The printed closed form N_C 3**-dk (2 + 3**(2+k_u)) / (2 + 3**(2+k_s))."""
    return float(mpf(n_c) / mpf(3) ** (k_s - k_u) * (2 + mpf(3) ** (2 + k_u)) / (2 + mpf(3) ** (2 + k_s)))


def ratio_derived_form(n_c: int, k_u: int, k_s: int) -> float:
    """Closed form that follows from the count formula with n_ec + n_a = 27,
    n_b = 6: N_C 3**-dk (2 + 3**(k_u+1)) / (2 + 3**(k_s+1))."""
    return float(mpf(n_c) / mpf(3) ** (k_s - k_u) * (2 + mpf(3) ** (k_u + 1)) / (2 + mpf(3) ** (k_s + 1)))


# printed values: (n_uAdd or n'_mAdd numerator, printed quotient)
PRINTED = {
    768: {"uadd": (40.6e6, 768), "madd": (1.68e6, 84), "Delta_k": 1},
    2048: {"uadd": (4.59e6, 2048), "madd": (4.48e6, 225), "Delta_k": 0},
    4096: {"uadd": (81.3e6, 4096), "madd": (8.96e6, 451), "Delta_k": 1},
}


def shor_params(bits: int, **overrides) -> ResourceParams:
    """Shor factoring of a ``bits``-bit integer: n_c = 2N + 4, f = 8 N**4
    (written as beta n_c**4), epsilon = 0.03, p0 = 1e-6."""
    if bits < 1:
        raise ValueError("bits must be positive")
    n_c = 2 * bits + 4
    beta = float(mpf(8) * mpf(bits) ** 4 / mpf(n_c) ** 4)
    return ResourceParams(n_c=n_c, beta=beta, t=4.0, epsilon=0.03, p0=1e-6, bits=bits, **overrides)


def report(params: ResourceParams) -> ResourceReport:
    f = params.f
    k_u = concat_level(params.epsilon, params.p0, params.p_thresh, f)
    k_s = concat_level(params.epsilon, params.p0, params.p_thresh, f * params.factor)
    k_p = concat_level(params.epsilon, params.p0, params.p_thresh_prime, f)
    ku, ks, kp = (max(1, int(_mp.ceil(v))) for v in (k_u, k_s, k_p))
    dk = delta_k(params.n_c, params.beta, params.t, params.p_thresh, params.epsilon, params.factor)
    dkp = delta_k_prime(params)
    n_sg = controls_semiglobal(ks, params.n_ec, params.n_a, params.n_b)
    n_u = controls_uadd(params.n_c, ku, params.n_ec, params.n_a, params.n_b)
    n_m = controls_madd(params.n_c, kp, params.n_ec, params.n_a_prime)
    ratio = n_u / n_sg
    derived = ratio_derived_form(params.n_c, ku, ks)
    printed = ratio_printed_form(params.n_c, ku, ks)
    warnings = []
    if abs(printed - ratio) > 1e-9 * ratio:
        warnings.append(f"ratio_uadd closed form with (2+3^(2+k)) gives {printed:.4f}; "
                        f"direct count ratio is {ratio:.4f}")
    if abs(derived - ratio) > 1e-9 * ratio:
        warnings.append(f"derived closed form {derived:.6f} differs from the count ratio {ratio:.6f}")
    if params.bits in PRINTED:
        pr = PRINTED[params.bits]
        num, q = pr["uadd"]
        warnings.append(f"printed N_uAdd/N_sg ~ {num:.3g}/19845 = {q}; formulas give "
                        f"{n_u}/{n_sg} = {ratio:.4f}")
        num, q = pr["madd"]
        warnings.append(f"printed N'_mAdd/N_sg ~ {num:.3g}/19845 ~ {q}; formulas give "
                        f"{n_m}/{n_sg} = {n_m / n_sg:.4f}")
        if pr["Delta_k"] != ks - ku:
            warnings.append(f"printed Delta k = {pr['Delta_k']}; formulas give {ks - ku}")
    return ResourceReport(params, float(k_u), ku, float(k_s), ks, float(k_p), kp, float(dk), float(dkp),
                          ks - ku, ks - kp, n_u, n_sg, n_m, float(ratio), derived, printed,
                          float(n_m / n_sg), significant_advantage(params), tuple(warnings))


def params_from_mapping(data: dict) -> ResourceParams:
    """Build params from a key/value mapping (unknown keys are rejected)."""
    names = {f.name for f in fields(ResourceParams)}
    bad = set(data) - names
    if bad:
        raise ValueError(f"unknown parameter(s): {sorted(bad)}")
    if "n_c" not in data:
        raise ValueError("n_c is required")
    return ResourceParams(**data)
