"""First-order probe response: sideband amplitudes, output fields, spectra.

Writing every mean value as A = sum_n A_n exp(-i n delta t) and keeping terms
first order in the probe amplitude E_p closes the dynamics on five unknowns:
the upper/lower sidebands of both cavities and the mechanical coherence Q_+.
The full model solves that 5x5 complex system.  With ``rwa=True`` the
counter-rotating (lower-sideband) unknowns are dropped *and* the mechanical
susceptibility is linearized about omega_m,

    (omega_m^2 - delta^2 - i delta gamma_m)  ->  -2 omega_m (x + i gamma_m/2),
    x = delta - omega_m,

which turns the mechanical coherence into a rotating-wave oscillator with
half damping.  The reduced 3x3 system is then algebraically identical to the
closed-form nested-fraction response (see ``analytic``) at
Delta_1 = Delta_2 = omega_m, and conserves probe photon flux exactly across
its three decay channels.

All sideband amplitudes are normalized per unit probe amplitude (E_p = 1
internally); thermal occupations are taken as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SingularResponseError
from .params import DriveConfig, SystemParams
from .working_point import WorkingPoint, solve_working_point

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SidebandSolution:
    """Complex sideband amplitudes at one probe detuning, per unit E_p.

    a1_plus/a2_plus sit at omega_ci + delta (the cavity-1 upper sideband is
    the probe frequency itself), a1_minus/a2_minus at omega_ci - delta, and
    q_plus is the mechanical coherence at +delta (Q_- = conj(Q_+)).
    ``residual`` is the relative re-substitution error of the linear solve.
    """

    a1_plus: complex
    a1_minus: complex
    a2_plus: complex
    a2_minus: complex
    q_plus: complex
    delta: float
    rwa: bool
    residual: float


@dataclass(frozen=True)
class ProbeResponse:
    """Observables at one probe detuning, flux-normalized to the probe input.

    x = delta - omega_m.  e_l and e_r are the normalized output-field
    amplitudes 2 kappa_i a_i+ / E_p; the physical cavity-1 output at the
    probe frequency is e_l - 1.  reflect_flux = |e_l - 1|^2 and
    transmit_flux = (kappa1/kappa2) |e_r|^2 are photon-flux fractions;
    mech_intensity = |Q_+|^2 / E_p^2.  flux_budget sums reflection,
    transmission, lower-sideband output and mechanical-bath absorption; it
    is exactly 1 for the RWA model.  transduced_frequency is where the
    cavity-2 upper sideband emerges: omega_c2 + (omega_p - omega_c1).
    """

    x: float
    e_l: complex
    e_r: complex
    reflect_flux: float
    transmit_flux: float
    mech_intensity: float
    lower_sideband_flux1: float
    lower_sideband_flux2: float
    bath_flux: float
    flux_budget: float
    transduced_frequency: float


def _build_system(wp: WorkingPoint, params: SystemParams, delta: float, rwa: bool):
    k1, k2 = params.kappa1, params.kappa2
    g1, g2 = params.g1, params.g2
    a10, a20 = wp.a10, wp.a20
    d1, d2 = wp.delta1, wp.delta2
    gm, wm = params.gamma_m, params.omega_m

    if rwa:
        # unknowns (a1+, a2+, Q+); mechanical row linearized about omega_m
        a = np.array(
            [
                [-1j * (delta - d1) + k1, 0.0, -1j * g1 * a10],
                [0.0, -1j * (delta - d2) + k2, 1j * g2 * a20],
                [g1 * np.conj(a10), -g2 * np.conj(a20), 2.0 * ((delta - wm) + 0.5j * gm)],
            ],
            dtype=complex,
        )
        b = np.array([1.0, 0.0, 0.0], dtype=complex)
    else:
        # unknowns (a1+, conj(a1-), a2+, conj(a2-), Q+); mechanical row kept
        # quadratic, scaled by 1/(2 omega_m) to match the cavity-row magnitudes
        mech = (wm**2 - delta**2 - 1j * delta * gm) / (2.0 * wm)
        a = np.array(
            [
                [-1j * (delta - d1) + k1, 0.0, 0.0, 0.0, -1j * g1 * a10],
                [0.0, -1j * (delta + d1) + k1, 0.0, 0.0, 1j * g1 * np.conj(a10)],
                [0.0, 0.0, -1j * (delta - d2) + k2, 0.0, 1j * g2 * a20],
                [0.0, 0.0, 0.0, -1j * (delta + d2) + k2, -1j * g2 * np.conj(a20)],
                [
                    -0.5 * g1 * np.conj(a10),
                    -0.5 * g1 * a10,
                    0.5 * g2 * np.conj(a20),
                    0.5 * g2 * a20,
                    mech,
                ],
            ],
            dtype=complex,
        )
        b = np.array([1.0, 0.0, 0.0, 0.0, 0.0], dtype=complex)
    return a, b


def solve_sidebands(
    wp: WorkingPoint, params: SystemParams, delta: float, rwa: bool = False
) -> SidebandSolution:
    """Solve the sideband linear system at probe-coupling detuning delta.

    Direct dense solve with partial pivoting (the systems are 3x3/5x5).
    Raises SingularResponseError if the system is singular or the
    re-substitution residual exceeds 1e-10, reporting the offending detuning.
    """
    a, b = _build_system(wp, params, delta, rwa)
    try:
        z = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularResponseError(
            f"sideband system singular at delta = {delta:.6e} rad/s", delta=delta
        ) from exc

    # per-row relative re-substitution check
    row_scale = np.abs(a) @ np.abs(z) + np.abs(b)
    residual = float(np.max(np.abs(a @ z - b) / np.where(row_scale > 0, row_scale, 1.0)))
    if residual > RESIDUAL_TOL:
        raise SingularResponseError(
            f"sideband solve residual {residual:.2e} exceeds {RESIDUAL_TOL:.0e} "
            f"at delta = {delta:.6e} rad/s (near-singular system)",
            delta=delta,
        )

    if rwa:
        a1p, a2p, qp = z
        a1m = a2m = 0.0j
    else:
        a1p, b1, a2p, b2, qp = z
        a1m, a2m = np.conj(b1), np.conj(b2)
    return SidebandSolution(
        a1_plus=complex(a1p),
        a1_minus=complex(a1m),
        a2_plus=complex(a2p),
        a2_minus=complex(a2m),
        q_plus=complex(qp),
        delta=delta,
        rwa=rwa,
        residual=residual,
    )


def solve_sidebands_closed_form(
    wp: WorkingPoint, params: SystemParams, delta: float
) -> SidebandSolution:
    """RWA sideband amplitudes by nested elimination instead of a matrix solve.

    Independent evaluation route for the same reduced model: eliminate a2+
    into the mechanical row, then the mechanical coherence into the cavity-1
    row.  Agrees with ``solve_sidebands(..., rwa=True)`` to rounding error.
    """
    k1, k2 = params.kappa1, params.kappa2
    g1, g2 = params.g1, params.g2
    d_1 = k1 - 1j * (delta - wp.delta1)
    d_2 = k2 - 1j * (delta - wp.delta2)
    d_m = 2.0 * ((delta - params.omega_m) + 0.5j * params.gamma_m)
    if d_2 == 0 or d_m == 0:
        raise SingularResponseError("closed-form elimination hit a zero pivot", delta=delta)

    m_mech = d_m + 1j * g2**2 * wp.n2 / d_2
    denom = d_1 + 1j * g1**2 * wp.n1 / m_mech
    if m_mech == 0 or denom == 0:
        raise SingularResponseError("closed-form response evaluated on a pole", delta=delta)
    a1p = 1.0 / denom
    qp = -g1 * np.conj(wp.a10) * a1p / m_mech
    a2p = -1j * g2 * wp.a20 * qp / d_2
    return SidebandSolution(
        a1_plus=complex(a1p),
        a1_minus=0.0j,
        a2_plus=complex(a2p),
        a2_minus=0.0j,
        q_plus=complex(qp),
        delta=delta,
        rwa=True,
        residual=0.0,
    )


def probe_outputs(
    sol: SidebandSolution, wp: WorkingPoint, params: SystemParams
) -> ProbeResponse:
    """Assemble the flux-normalized observables from a sideband solution.

    Flux bookkeeping (probe input flux = E_p^2/(2 kappa1) photons/s):
    reflection |e_l - 1|^2, transmission 4 k1 k2 |a2+|^2, lower sidebands
    4 k1^2 |a1-|^2 and 4 k1 k2 |a2-|^2, mechanical bath 4 k1 gamma_m |Q+|^2
    (times (delta/omega_m)^2 for the full model, the cycle-averaged
    dissipation of the momentum-damped oscillator; the RWA coherence
    dissipates flat).  The mechanical rotating-frame amplitude is
    sqrt(2) Q_+, which is where the factor 4 = 2*2 comes from.
    """
    k1, k2 = params.kappa1, params.kappa2
    e_l = 2.0 * k1 * sol.a1_plus
    e_r = 2.0 * k2 * sol.a2_plus
    reflect = abs(e_l - 1.0) ** 2
    transmit = 4.0 * k1 * k2 * abs(sol.a2_plus) ** 2
    low1 = 4.0 * k1 * k1 * abs(sol.a1_minus) ** 2
    low2 = 4.0 * k1 * k2 * abs(sol.a2_minus) ** 2
    q2 = abs(sol.q_plus) ** 2
    if sol.rwa:
        bath = 4.0 * k1 * params.gamma_m * q2
    else:
        bath = 4.0 * k1 * params.gamma_m * q2 * (sol.delta / params.omega_m) ** 2
    return ProbeResponse(
        x=sol.delta - params.omega_m,
        e_l=e_l,
        e_r=e_r,
        reflect_flux=reflect,
        transmit_flux=transmit,
        mech_intensity=q2,
        lower_sideband_flux1=low1,
        lower_sideband_flux2=low2,
        bath_flux=bath,
        flux_budget=reflect + transmit + low1 + low2 + bath,
        transduced_frequency=params.omega_c2 + sol.delta,
    )


def sweep_probe(
    params: SystemParams,
    drives: DriveConfig,
    x_min: float,
    x_max: float,
    n_points: int,
    rwa: bool = False,
    detuning_mode: str = "effective",
) -> list[ProbeResponse]:
    """Probe spectrum on a uniform grid of x = delta - omega_m.

    The working point is solved once and reused for every grid point; rows
    come back ordered by x.  Solver failures are re-raised with the failing
    row index and x attached.
    """
    if n_points < 2:
        raise InvalidParameterError(f"n_points must be >= 2, got {n_points}")
    if not x_min < x_max:
        raise InvalidParameterError("x_min must be < x_max")
    wp = solve_working_point(params, drives, detuning_mode=detuning_mode)
    xs = np.linspace(x_min, x_max, n_points)
    rows = []
    for i, x in enumerate(xs):
        try:
            sol = solve_sidebands(wp, params, params.omega_m + x, rwa=rwa)
        except SingularResponseError as exc:
            raise SingularResponseError(
                f"row {i} (x = {x:.6e} rad/s): {exc}", delta=params.omega_m + x
            ) from exc
        rows.append(probe_outputs(sol, wp, params))
    return rows
