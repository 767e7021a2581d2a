"""Explicit constants of the fractional Hardy inequality on convex sets.

Everything here is a pure function of (N, p) plus one tunable C3 > 1 used
for p <= 2.  The chain is

    C1(N, p)      cap-cone lower bound constant,
    C2(p), C3(p)  constants of the fundamental four-point inequality,
    A             = C1 / 2^(p-1) * C2 / C3,
    B             = (1/p) * (N omega_N / 2) * 3^(-N-p),
    curly_c       = min over sigma in (0, 1) of (A sigma^(p+1) + (1-sigma) B) / 2,

together with the sphere integrals alpha(N, p), beta(N, p) governing the
s -> 1 and s -> 0 limits of the Gagliardo seminorm, and the sharp constant
((p-1)/p)^p of the local inequality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

_QUAD_REL = 1e-12


def unit_ball_volume(N: int) -> float:
    """omega_N = pi^(N/2) / Gamma(N/2 + 1)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return float(np.pi ** (N / 2.0) / gamma(N / 2.0 + 1.0))


def sphere_surface(m: int) -> float:
    """Surface measure of the unit m-sphere; the 0-sphere counts two points."""
    if m < 0:
        raise ValueError("sphere dimension must be >= 0")
    if m == 0:
        return 2.0
    return float(2.0 * np.pi ** ((m + 1) / 2.0) / gamma((m + 1) / 2.0))


def spherical_cap_measure(N: int, sigma: float) -> float:
    """Surface measure of the cap {w on the unit sphere : w_1 > sigma}.

    N = 1 uses the counting measure on the two-point sphere, giving 1.
    For N >= 2 the zonal slice integral is evaluated adaptively to
    relative accuracy 1e-12.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    if N == 1:
        return 1.0
    m = N - 2
    val, _ = quad(lambda t: np.sin(t) ** m, 0.0, np.arccos(sigma),
                  epsabs=0.0, epsrel=_QUAD_REL, limit=200)
    return sphere_surface(m) * val


def _cap_objective(N: int, p: float, sigma: float) -> float:
    return sigma ** p * spherical_cap_measure(N, sigma)


def constant_C1(N: int, p: float) -> tuple[float, float]:
    """(C1, sigma*) with C1 = (1/p) sup over sigma in (0,1) of sigma^p f(sigma).

    f is the cap measure.  For N = 1 the objective increases to 1 as
    sigma -> 1, so the supremum 1/p is reported with boundary maximizer 1.
    For N >= 2 a coarse scan brackets the maximum and golden-section search
    refines sigma to absolute tolerance 1e-10.
    """
    if N == 1:
        return 1.0 / p, 1.0
    scan = np.linspace(1e-6, 1.0 - 1e-6, 2001)
    vals = [_cap_objective(N, p, s) for s in scan]
    i = int(np.argmax(vals))
    lo = scan[max(i - 1, 0)]
    hi = scan[min(i + 1, len(scan) - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = _cap_objective(N, p, c)
    fd = _cap_objective(N, p, d)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _cap_objective(N, p, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _cap_objective(N, p, d)
    sigma_star = 0.5 * (a + b)
    return _cap_objective(N, p, sigma_star) / p, float(sigma_star)


def constants_C2_C3(p: float, C3_choice: float = 2.0) -> tuple[float, float]:
    """Constants of the four-point fundamental inequality.

    For 1 < p <= 2 any C3 > 1 works and C2 = 2^-(p+1) min(p (p-1)^2 / 4, C3 - 1).
    For p > 2 the concavity argument fixes C3 = 1 + (p-1) 2^(1/(p-1)) / 2^p + 2^-p
    and C2 is the minimum of the per-case requirements
    (p-1)/2, (C3-1)/2^(p+1) and 2^-(p+2); C3_choice is ignored there.
    """
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    if p <= 2.0:
        if C3_choice <= 1.0:
            raise ValueError(f"C3_choice must exceed 1 for p <= 2, got {C3_choice!r}")
        c3 = float(C3_choice)
        c2 = 2.0 ** (-(p + 1.0)) * min(p * (p - 1.0) ** 2 / 4.0, c3 - 1.0)
        return c2, c3
    c3 = 1.0 + (p - 1.0) * 2.0 ** (1.0 / (p - 1.0)) / 2.0 ** p + 2.0 ** (-p)
    c2 = min((p - 1.0) / 2.0, (c3 - 1.0) / 2.0 ** (p + 1.0), 2.0 ** (-(p + 2.0)))
    return c2, c3


def constant_A(N: int, p: float, C3_choice: float = 2.0) -> float:
    """A = C1 / 2^(p-1) * C2 / C3."""
    c1, _ = constant_C1(N, p)
    c2, c3 = constants_C2_C3(p, C3_choice)
    return c1 / 2.0 ** (p - 1.0) * c2 / c3


def constant_B(N: int, p: float) -> float:
    """B = (1/p) * (N omega_N / 2) * 3^(-N-p)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    return (1.0 / p) * (N * unit_ball_volume(N) / 2.0) * 3.0 ** (-(N + p))


def curly_c_from_AB(A: float, B: float, p: float) -> tuple[float, float]:
    """(value, minimizer) of Phi(sigma)/2, Phi(sigma) = A sigma^(p+1) + (1-sigma) B.

    The unique interior critical point sigma* = (B / ((p+1) A))^(1/p) applies
    when B < (p+1) A; otherwise Phi decreases on (0, 1) and the infimum A/2
    sits at the right endpoint.
    """
    if B < (p + 1.0) * A:
        s_star = (B / ((p + 1.0) * A)) ** (1.0 / p)
        value = 0.5 * B * (1.0 - p / (p + 1.0) * s_star)
        return value, float(s_star)
    return 0.5 * A, 1.0


def constant_curly_C(N: int, p: float, C3_choice: float = 2.0) -> tuple[float, float]:
    """Main Hardy-bound constant: (curly_c, minimizer s*) from the closed form."""
    return curly_c_from_AB(constant_A(N, p, C3_choice), constant_B(N, p), p)


def curly_c_grid_minimum(A: float, B: float, p: float,
                         total_points: int = 100_000, passes: int = 4) -> tuple[float, float]:
    """Independent grid-search minimum of Phi(sigma)/2 over (0, 1].

    Spends `total_points` evaluations across `passes` uniformly refined
    grids; each pass zooms into one cell around the current best.  The
    right endpoint is included so boundary infima are hit exactly.
    """
    per = total_points // passes
    lo, hi = 0.0, 1.0
    best_val = np.inf
    best_s = 1.0
    for _ in range(passes):
        step = (hi - lo) / per
        s = lo + step * np.arange(1, per + 1)
        vals = 0.5 * (A * s ** (p + 1.0) + (1.0 - s) * B)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_s = float(s[i])
        lo = max(0.0, best_s - step)
        hi = min(1.0, best_s + step)
    return best_val, best_s


def alpha_const(N: int, p: float) -> float:
    """alpha = (1/p) integral of |w_1|^p over the unit sphere (s -> 1 limit factor)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    if N == 1:
        return 2.0 / p
    m = N - 2
    val, _ = quad(lambda t: np.abs(np.cos(t)) ** p * np.sin(t) ** m, 0.0, np.pi,
                  epsabs=0.0, epsrel=_QUAD_REL, limit=200)
    return sphere_surface(m) * val / p


def beta_const(N: int, p: float) -> float:
    """beta = 2 N omega_N / p (s -> 0 limit factor)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    return 2.0 * N * unit_ball_volume(N) / p


def local_sharp_constant(p: float) -> float:
    """((p-1)/p)^p, the sharp constant of the local convex-set inequality."""
    if p <= 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    return ((p - 1.0) / p) ** p


@dataclass(frozen=True)
class ConstantBundle:
    """All explicit constants for one (N, p, C3_choice) triple."""

    N: int
    p: float
    C3_choice: float
    c1: float
    sigma_star: float
    c2: float
    c3: float
    a_const: float
    b_const: float
    curly_c: float
    s_star: float
    alpha: float
    beta: float
    local_sharp: float
    omega_n: float

    def __post_init__(self):
        if not self.c3 > 1.0:
            raise ValueError("c3 must exceed 1")
        if not self.c2 > 0.0:
            raise ValueError("c2 must be positive")
        expected_a = self.c1 / 2.0 ** (self.p - 1.0) * self.c2 / self.c3
        if not np.isclose(self.a_const, expected_a, rtol=1e-12, atol=0.0):
            raise ValueError("a_const inconsistent with c1, c2, c3")
        vals = [self.c1, self.c2, self.c3, self.a_const, self.b_const, self.curly_c,
                self.alpha, self.beta, self.local_sharp, self.omega_n]
        if not all(np.isfinite(v) and v > 0 for v in vals):
            raise ValueError("all constants must be finite and positive")
        if self.curly_c > self.local_sharp * self.alpha:
            raise ValueError("curly_c exceeds local_sharp * alpha")

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "p": self.p,
            "C3_choice": self.C3_choice,
            "C1": self.c1,
            "sigma_star": self.sigma_star,
            "C2": self.c2,
            "C3": self.c3,
            "A": self.a_const,
            "B": self.b_const,
            "curly_C": self.curly_c,
            "s_star": self.s_star,
            "alpha": self.alpha,
            "beta": self.beta,
            "local_sharp": self.local_sharp,
            "omega_N": self.omega_n,
        }


#: formula provenance attached to CLI output, keyed like ``as_dict``
FORMULAS = {
    "C1": "C1 = (1/p) * sup_{0<sigma<1} sigma^p * capmeasure(N, sigma)",
    "C2": "p<=2: C2 = 2^-(p+1) * min(p(p-1)^2/4, C3-1); p>2: min((p-1)/2, (C3-1)/2^(p+1), 2^-(p+2))",
    "C3": "p<=2: C3 = C3_choice; p>2: C3 = 1 + (p-1)*2^(1/(p-1))/2^p + 2^-p",
    "A": "A = C1/2^(p-1) * C2/C3",
    "B": "B = (1/p) * (N*omega_N/2) * 3^-(N+p)",
    "curly_C": "curly_C = min_{0<sigma<1} (A*sigma^(p+1) + (1-sigma)*B) / 2",
    "alpha": "alpha = (1/p) * int_{unit sphere} |w_1|^p",
    "beta": "beta = 2*N*omega_N/p",
    "local_sharp": "((p-1)/p)^p",
    "omega_N": "omega_N = pi^(N/2)/Gamma(N/2+1)",
}


def compute_bundle(N: int, p: float, C3_choice: float = 2.0) -> ConstantBundle:
    """Evaluate the full constant chain for one parameter triple."""
    c1, sigma_star = constant_C1(N, p)
    c2, c3 = constants_C2_C3(p, C3_choice)
    a = c1 / 2.0 ** (p - 1.0) * c2 / c3
    b = constant_B(N, p)
    cc, s_star = curly_c_from_AB(a, b, p)
    return ConstantBundle(
        N=N, p=float(p), C3_choice=float(C3_choice),
        c1=c1, sigma_star=sigma_star, c2=c2, c3=c3,
        a_const=a, b_const=b, curly_c=cc, s_star=s_star,
        alpha=alpha_const(N, p), beta=beta_const(N, p),
        local_sharp=local_sharp_constant(p), omega_n=unit_ball_volume(N),
    )
