"""Pointwise inequality checkers.

Each checker evaluates both sides of one scalar inequality and returns a
:class:`Residual` oriented so that ``residual >= 0`` means the inequality
holds.  Batch variants evaluate millions of random tuples; they certify
the (C2, C3) pair fed to the quadrature and verification layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import constants_C2_C3

#: a batch sample counts as a violation below -VIOLATION_RTOL * scale,
#: scale = max(1, |lhs|, |rhs|)
VIOLATION_RTOL = 1e-9


@dataclass(frozen=True)
class Residual:
    lhs: float
    rhs: float
    residual: float
    equality_expected: bool = False


def j_p(t, p: float):
    """|t|^(p-2) t with J_p(0) = 0; works on scalars and arrays."""
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t == 0.0, 0.0, np.abs(t) ** (p - 2.0) * t)
    return float(out) if out.ndim == 0 else out


def _positive(name, *vals):
    for v in vals:
        if not np.all(np.asarray(v) > 0.0):
            raise ValueError(f"{name} requires strictly positive inputs")


def _nonnegative(name, *vals):
    for v in vals:
        if not np.all(np.asarray(v) >= 0.0):
            raise ValueError(f"{name} requires nonnegative inputs")


# -- logarithmic lower bound -------------------------------------------------

def log_inequality_sides(a, b, p):
    lhs = j_p(a - b, p) * (b ** (1.0 - p) - a ** (1.0 - p))
    rhs = (p - 1.0) * np.abs(np.log(b) - np.log(a)) ** p
    return lhs, rhs


def check_log_inequality(a: float, b: float, p: float) -> Residual:
    """J_p(a-b)(b^(1-p) - a^(1-p)) >= (p-1)|log b - log a|^p, equality iff a = b."""
    _positive("check_log_inequality", a, b)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    lhs, rhs = log_inequality_sides(a, b, p)
    return Residual(float(lhs), float(rhs), float(lhs - rhs), equality_expected=(a == b))


# -- normalized difference vs log difference ---------------------------------

def fraction_vs_log_sides(a, b):
    lhs = np.abs(a - b) / (a + b)
    rhs = np.abs(np.log(a) - np.log(b))
    return lhs, rhs


def check_fraction_vs_log(a: float, b: float) -> Residual:
    """|a-b|/(a+b) <= |log a - log b|, equality iff a = b."""
    _positive("check_fraction_vs_log", a, b)
    lhs, rhs = fraction_vs_log_sides(a, b)
    return Residual(float(lhs), float(rhs), float(rhs - lhs), equality_expected=(a == b))


# -- log-free combination of the two -------------------------------------------

def ratio_bound_sides(a, b, p):
    lhs = j_p(a - b, p) * (b ** (1.0 - p) - a ** (1.0 - p))
    rhs = (p - 1.0) * np.abs((a - b) / (a + b)) ** p
    return lhs, rhs


def check_ratio_lower_bound(a: float, b: float, p: float) -> Residual:
    """J_p(a-b)(b^(1-p) - a^(1-p)) >= (p-1)|(a-b)/(a+b)|^p."""
    _positive("check_ratio_lower_bound", a, b)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    lhs, rhs = ratio_bound_sides(a, b, p)
    return Residual(float(lhs), float(rhs), float(lhs - rhs), equality_expected=(a == b))


# -- concavity gap for fractional powers ---------------------------------------

def power_ratio_sides(a, b, s):
    num = np.abs(a ** s - b ** s)
    lhs = num / (a ** s + b ** s)
    rhs = (s / 2.0) * np.abs(a - b) / np.maximum(a, b)
    return lhs, rhs


def check_power_ratio_gap(a: float, b: float, s: float) -> Residual:
    """|a^s - b^s| / (a^s + b^s) >= (s/2) |a-b| / max(a, b)."""
    _positive("check_power_ratio_gap", a, b)
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    lhs, rhs = power_ratio_sides(a, b, s)
    return Residual(float(lhs), float(rhs), float(lhs - rhs), equality_expected=(a == b))


# -- discrete Picone inequality ------------------------------------------------

def picone_sides(a, b, c, d, p):
    lhs = j_p(a - b, p) * (c ** p / a ** (p - 1.0) - d ** p / b ** (p - 1.0))
    rhs = np.abs(c - d) ** p
    return lhs, rhs


def check_picone_discrete(a: float, b: float, c: float, d: float, p: float) -> Residual:
    """J_p(a-b)(c^p/a^(p-1) - d^p/b^(p-1)) <= |c-d|^p."""
    _positive("check_picone_discrete", a, b)
    _nonnegative("check_picone_discrete", c, d)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    lhs, rhs = picone_sides(a, b, c, d, p)
    return Residual(float(lhs), float(rhs), float(rhs - lhs))


# -- fundamental four-point inequality ----------------------------------------

def fundamental_sides(a, b, c, d, p, C2, C3):
    lhs = (j_p(a - b, p) * (c ** p / a ** (p - 1.0) - d ** p / b ** (p - 1.0))
           + C2 * np.abs((a - b) / (a + b)) ** p * (c ** p + d ** p))
    rhs = C3 * np.abs(c - d) ** p
    return lhs, rhs


def check_fundamental(a: float, b: float, c: float, d: float, p: float,
                      C2: float, C3: float) -> Residual:
    """Four-point bound with symmetric correction term; holds for the
    computed (C2, C3) pair."""
    _positive("check_fundamental", a, b)
    _nonnegative("check_fundamental", c, d)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    if C2 <= 0.0 or C3 <= 1.0:
        raise ValueError("need C2 > 0 and C3 > 1")
    lhs, rhs = fundamental_sides(a, b, c, d, p, C2, C3)
    return Residual(float(lhs), float(rhs), float(rhs - lhs))


# -- Taylor-remainder bound used for 1 < p <= 2 --------------------------------

def remainder_sides(s, A, p):
    lhs = (p - 2.0) * (s ** p - A ** p) / (1.0 - s) - p * A ** p / s
    rhs = -p * (p - 1.0) * A ** p
    return lhs, rhs


def check_remainder_bound(s: float, A: float, p: float) -> Residual:
    """(p-2)(s^p - A^p)/(1-s) - p A^p / s <= -p(p-1) A^p for 1 < p <= 2."""
    if not 1.0 < p <= 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p!r}")
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    if not 0.0 <= A <= 1.0:
        raise ValueError(f"A must lie in [0, 1], got {A!r}")
    lhs, rhs = remainder_sides(s, A, p)
    return Residual(float(lhs), float(rhs), float(rhs - lhs))


# -- randomized suites ----------------------------------------------------------

INEQUALITIES = ("log", "fraction_vs_log", "ratio", "power_ratio",
                "picone", "fundamental", "remainder")


@dataclass(frozen=True)
class InequalityStats:
    inequality: str
    p: float
    samples: int
    violations: int
    worst_relative_residual: float


def _relative_residuals(lhs, rhs, oriented):
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return oriented / scale


def _sample_ab(rng, n):
    # log-uniform over 12 decades probes the regimes where the bounds are tight
    return (10.0 ** rng.uniform(-6.0, 6.0, size=n),
            10.0 ** rng.uniform(-6.0, 6.0, size=n))


def _open_unit(rng, n):
    return rng.uniform(1e-12, 1.0 - 1e-12, size=n)


def run_inequality_batch(inequality: str, p: float, samples: int,
                         seed: int) -> InequalityStats:
    """Evaluate one inequality on `samples` seeded random tuples."""
    if inequality not in INEQUALITIES:
        raise ValueError(f"unknown inequality {inequality!r}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(
        entropy=(int(seed), INEQUALITIES.index(inequality), int(round(p * 1e6))))))
    a, b = _sample_ab(rng, samples)
    if inequality == "log":
        lhs, rhs = log_inequality_sides(a, b, p)
        rel = _relative_residuals(lhs, rhs, lhs - rhs)
    elif inequality == "fraction_vs_log":
        lhs, rhs = fraction_vs_log_sides(a, b)
        rel = _relative_residuals(lhs, rhs, rhs - lhs)
    elif inequality == "ratio":
        lhs, rhs = ratio_bound_sides(a, b, p)
        rel = _relative_residuals(lhs, rhs, lhs - rhs)
    elif inequality == "power_ratio":
        s = _open_unit(rng, samples)
        lhs, rhs = power_ratio_sides(a, b, s)
        rel = _relative_residuals(lhs, rhs, lhs - rhs)
    elif inequality == "picone":
        c = rng.uniform(0.0, 1e3, size=samples)
        d = rng.uniform(0.0, 1e3, size=samples)
        lhs, rhs = picone_sides(a, b, c, d, p)
        rel = _relative_residuals(lhs, rhs, rhs - lhs)
    elif inequality == "fundamental":
        c = rng.uniform(0.0, 1e3, size=samples)
        d = rng.uniform(0.0, 1e3, size=samples)
        C2, C3 = constants_C2_C3(p)
        lhs, rhs = fundamental_sides(a, b, c, d, p, C2, C3)
        rel = _relative_residuals(lhs, rhs, rhs - lhs)
    else:  # remainder bound, restricted to p <= 2
        if p > 2.0:
            raise ValueError("the remainder bound only applies for p <= 2")
        s = _open_unit(rng, samples)
        A = rng.uniform(0.0, 1.0, size=samples)
        lhs, rhs = remainder_sides(s, A, p)
        rel = _relative_residuals(lhs, rhs, rhs - lhs)
    violations = int(np.count_nonzero(rel < -VIOLATION_RTOL))
    return InequalityStats(inequality=inequality, p=float(p), samples=samples,
                           violations=violations,
                           worst_relative_residual=float(np.min(rel)))


def run_inequality_suite(p_values, samples: int, seed: int) -> list[InequalityStats]:
    """Every inequality at every p (the remainder bound only for p <= 2)."""
    stats = []
    for p in p_values:
        for inequality in INEQUALITIES:
            if inequality == "remainder" and p > 2.0:
                continue
            stats.append(run_inequality_batch(inequality, float(p), samples, seed))
    return stats
