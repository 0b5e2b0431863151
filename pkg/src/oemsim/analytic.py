"""Closed-form probe response and its pole structure.

Under the rotating-wave approximation, at two-photon resonance
(Delta_1 = Delta_2 = omega_m), the normalized cavity-1 output field is the
nested continued fraction

    E_L(x) = 2i*kappa1 / ( (x + i*kappa1)
                           - s1 / ( (x + i*gamma_m/2)
                                    - s2 / (x + i*kappa2) ) )

with x the probe detuning from the shifted cavity resonance, and the
radiation-pressure weights s_i = g_i^2 |a_i0|^2 / 2.  Clearing denominators
gives the cubic

    p(x) = (x + i*kappa1)(x + i*gamma_m/2)(x + i*kappa2)
           - s1 (x + i*kappa2) - s2 (x + i*kappa1),

whose roots are the response poles: all purely imaginary below the critical
drive (overdamped interference regime -- the transparency window and, with
s2 > 0, the narrow absorption peak inside it), acquiring real parts above it
(normal-mode splitting).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from .errors import SingularResponseError
from .params import _require_non_negative, _require_positive

EIT_REGIME = "EIT_regime"
NMS_REGIME = "NMS_regime"

# "purely imaginary" classification: |Re| <= tol * max(|Im|, gamma_m).
# An exact-zero test is meaningless after companion-matrix eigensolves.
PURE_IMAG_TOL = 1e-6


@dataclass(frozen=True)
class RwaCoefficients:
    """Rates and drive weights entering the closed-form response.

    s1 = g1^2 |a10|^2 / 2 and s2 = g2^2 |a20|^2 / 2, in rad^2/s^2.
    """

    kappa1: float
    kappa2: float
    gamma_m: float
    s1: float
    s2: float

    def __post_init__(self):
        _require_positive(self.kappa1, "kappa1")
        _require_positive(self.kappa2, "kappa2")
        _require_positive(self.gamma_m, "gamma_m")
        _require_non_negative(self.s1, "s1")
        _require_non_negative(self.s2, "s2")

    @classmethod
    def from_working_point(cls, wp, params) -> "RwaCoefficients":
        return cls(
            kappa1=params.kappa1,
            kappa2=params.kappa2,
            gamma_m=params.gamma_m,
            s1=params.g1**2 * wp.n1 / 2.0,
            s2=params.g2**2 * wp.n2 / 2.0,
        )

    @classmethod
    def from_cooperativities(
        cls, c1: float, c2: float, kappa1: float, kappa2: float, gamma_m: float
    ) -> "RwaCoefficients":
        """Map cooperativities to drive weights via s_i = C_i * kappa_i * gamma_m / 2."""
        _require_non_negative(c1, "c1")
        _require_non_negative(c2, "c2")
        return cls(
            kappa1=kappa1,
            kappa2=kappa2,
            gamma_m=gamma_m,
            s1=c1 * kappa1 * gamma_m / 2.0,
            s2=c2 * kappa2 * gamma_m / 2.0,
        )

    def cooperativities(self) -> tuple[float, float]:
        return (
            2.0 * self.s1 / (self.kappa1 * self.gamma_m),
            2.0 * self.s2 / (self.kappa2 * self.gamma_m),
        )


@dataclass(frozen=True)
class PoleSet:
    """The three response poles, ordered by ascending |Im|.

    classification is EIT_regime when every root is purely imaginary within
    tolerance, NMS_regime when a pair has acquired real parts.  The widths
    property returns the decay rates -Im(root) (half-widths at half maximum
    of the corresponding Lorentzian factors).
    """

    roots: tuple[complex, complex, complex]
    classification: str

    @property
    def widths(self) -> tuple[float, float, float]:
        return tuple(-r.imag for r in self.roots)


def response_rwa(x, c: RwaCoefficients):
    """Evaluate the nested-fraction response E_L(x); accepts scalar or array x.

    Raises SingularResponseError if x sits exactly on a pole (only possible
    for complex x; the response is pole-free on the real axis since every
    level of the fraction keeps a positive imaginary part).
    """
    x_arr = np.asarray(x, dtype=complex)
    inner = x_arr + 1j * c.kappa2
    if np.any(inner == 0):
        raise SingularResponseError("x + i*kappa2 vanished", delta=None)
    mid = (x_arr + 0.5j * c.gamma_m) - c.s2 / inner
    if np.any(mid == 0):
        raise SingularResponseError("middle level of the response fraction vanished")
    outer = (x_arr + 1j * c.kappa1) - c.s1 / mid
    if np.any(outer == 0):
        raise SingularResponseError("response evaluated exactly on a pole")
    result = 2j * c.kappa1 / outer
    if np.isscalar(x) or np.ndim(x) == 0:
        return complex(result)
    return result


def _cubic_coeffs_normalized(c: RwaCoefficients):
    """Real cubic q(y) for x = -i*gamma_m*y: roots y are decay rates / gamma_m.

    q(y) = (y - k1)(y - gh)(y - k2) + s1n (y - k2) + s2n (y - k1) with all
    rates normalized by gamma_m, keeping the coefficients O(1)-O(1e4) for the
    three-decade-separated rates of interest.
    """
    g = c.gamma_m
    k1 = c.kappa1 / g
    k2 = c.kappa2 / g
    gh = 0.5
    s1 = c.s1 / g**2
    s2 = c.s2 / g**2
    return np.array(
        [
            1.0,
            -(k1 + k2 + gh),
            k1 * gh + k1 * k2 + gh * k2 + s1 + s2,
            -(k1 * gh * k2 + s1 * k2 + s2 * k1),
        ]
    )


def _polish_newton(coeffs, y):
    p = np.polyval(coeffs, y)
    dp = np.polyval(np.polyder(coeffs), y)
    if dp != 0:
        y = y - p / dp
    return y


def denominator_roots(c: RwaCoefficients) -> PoleSet:
    """Poles of the closed-form response via companion-matrix eigenvalues.

    The cubic is solved in the rotated variable y = i*x/gamma_m, which has
    real coefficients, so purely imaginary x-roots come out with exactly
    real y and the EIT-regime classification is numerically clean.  Each
    eigenvalue gets one Newton polish.
    """
    coeffs = _cubic_coeffs_normalized(c)
    y_roots = np.roots(coeffs)  # companion-matrix eigenvalues
    y_roots = np.array([_polish_newton(coeffs, y) for y in y_roots])
    x_roots = -1j * y_roots * c.gamma_m
    order = np.lexsort((x_roots.real, np.abs(x_roots.imag)))
    x_roots = x_roots[order]

    pure = all(
        abs(r.real) <= PURE_IMAG_TOL * max(abs(r.imag), c.gamma_m) for r in x_roots
    )
    return PoleSet(
        roots=tuple(complex(r) for r in x_roots),
        classification=EIT_REGIME if pure else NMS_REGIME,
    )


def root_trajectories(coeff_sets: Sequence[RwaCoefficients]) -> np.ndarray:
    """Track the three poles along a parameter sweep.

    Returns an (n, 3) complex array.  Column identity is fixed by
    nearest-neighbor matching in the complex plane to the previous sweep
    point, starting from ascending-|Im| order, so each column is one
    continuous trajectory.
    """
    out = np.empty((len(coeff_sets), 3), dtype=complex)
    prev = None
    for i, c in enumerate(coeff_sets):
        roots = np.array(denominator_roots(c).roots)
        if prev is None:
            out[i] = roots
        else:
            best = min(
                permutations(range(3)),
                key=lambda p: sum(abs(roots[list(p)] - prev) ** 2),
            )
            out[i] = roots[list(best)]
        prev = out[i]
    return out


@dataclass(frozen=True)
class EiaSplitting:
    """Splitting of the transparency-window pole by the second coupling tone.

    gamma_plus/gamma_minus are the two descendants of Gamma_EIT (complex when
    the discriminant goes negative); gamma_eia_approx = kappa2 + s2/Gamma_EIT
    is the small-coupling estimate of the absorption-peak half-width, valid
    when 4*s2/Gamma_EIT^2 << 1 (narrow_coupling flag, threshold 0.1).
    """

    gamma_plus: complex
    gamma_minus: complex
    gamma_eia_approx: float
    narrow_coupling: bool


def eia_splitting(gamma_eit: float, s2: float, kappa2: float) -> EiaSplitting:
    """Split Gamma_EIT into Gamma_+/- = Gamma_EIT/2 +/- sqrt(Gamma_EIT^2 - 4 s2)/2.

    All Gamma quantities are half-widths (pole decay rates).  s2 is the
    cavity-2 drive weight g2^2 |a20|^2 / 2, so the discriminant reads
    Gamma_EIT^2 - 2 g2^2 |a20|^2.
    """
    _require_positive(gamma_eit, "gamma_eit")
    _require_non_negative(s2, "s2")
    _require_positive(kappa2, "kappa2")
    disc = complex(gamma_eit**2 - 4.0 * s2)
    root = np.sqrt(disc)
    gamma_plus = 0.5 * (gamma_eit + root)
    gamma_minus = 0.5 * (gamma_eit - root)
    if abs(gamma_plus.imag) < 1e-12 * gamma_eit:
        gamma_plus = complex(gamma_plus.real)
        gamma_minus = complex(gamma_minus.real)
    return EiaSplitting(
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        gamma_eia_approx=kappa2 + s2 / gamma_eit,
        narrow_coupling=4.0 * s2 / gamma_eit**2 <= 0.1,
    )


@dataclass(frozen=True)
class PeakHeight:
    """Line-center response height: exact x=0 value and its large-C estimate."""

    exact: float
    large_c_approx: float | None


def peak_height(c1: float, c2: float) -> PeakHeight:
    """Height of the line-center feature, E_L(0).

    exact = 2 (1 + C2) / (1 + C1 + C2); for C2 = 0 this is the transparency
    dip depth 2/(1 + C1).  large_c_approx = 2 / (1 + C1/C2) (undefined at
    C2 = 0, returned as None); both tend to 1 at C1 = C2, the perfect
    absorption/routing point.
    """
    _require_non_negative(c1, "c1")
    _require_non_negative(c2, "c2")
    exact = 2.0 * (1.0 + c2) / (1.0 + c1 + c2)
    approx = None if c2 == 0.0 else 2.0 / (1.0 + c1 / c2)
    return PeakHeight(exact=exact, large_c_approx=approx)
