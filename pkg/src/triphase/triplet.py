"""Parametrized standard-triplet family of two-photon polarization qutrits.

Provides the family's four constituent qubit states, the analytic phase
formulas and their continuous (branch-tracked) extension, adaptive sweeps
over the rotation angle with jump diagnostics, and circular least-squares
offset fitting of measured phase data against a theory curve.

The family is controlled by three angles (degrees at every interface):
``theta`` (half-angle between the two anchor states), ``chi`` (opening angle
between the analyzer pair), and ``phi`` (rotation of the analyzer pair).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.signal import find_peaks

from .core import QubitState, SymmetricState, symmetrize, wrap_angle

TWO_PI = 2.0 * math.pi


class GridTooCoarse(RuntimeError):
    """Adaptive refinement hit the depth limit without resolving the curve."""


class InsufficientData(ValueError):
    """Not enough measured points inside the theory curve's range."""


@dataclass(frozen=True)
class TripletParams:
    """Angles of the standard-triplet family, in degrees."""

    theta_deg: float
    chi_deg: float
    phi_deg: float

    def __post_init__(self):
        if not 0.0 <= self.theta_deg < 180.0:
            raise ValueError(f"theta_deg must lie in [0, 180), got {self.theta_deg}")
        if not 0.0 <= self.chi_deg < 360.0:
            raise ValueError(f"chi_deg must lie in [0, 360), got {self.chi_deg}")
        if not 0.0 <= self.phi_deg < 360.0:
            raise ValueError(f"phi_deg must lie in [0, 360), got {self.phi_deg}")


def make_states(p: TripletParams) -> tuple[QubitState, QubitState, QubitState, QubitState]:
    """The four constituent qubit states (psi1, psi2, psi3, psi3_mirror).

    psi1/psi2 are the +-i anchor pair at half-angle theta from H; psi3 and
    its mirror are linear polarizations at chi/4 +- phi/2 from horizontal
    (the mirror with the opposite V sign).
    """
    th = math.radians(p.theta_deg)
    c, s = math.cos(th / 2.0), math.sin(th / 2.0)
    a = math.radians(p.chi_deg / 4.0 + p.phi_deg / 2.0)
    b = math.radians(p.chi_deg / 4.0 - p.phi_deg / 2.0)
    psi1 = QubitState(c, 1j * s)
    psi2 = QubitState(c, -1j * s)
    psi3 = QubitState(math.cos(a), math.sin(a))
    psi3_mirror = QubitState(math.cos(b), -math.sin(b))
    return psi1, psi2, psi3, psi3_mirror


def make_triplet(p: TripletParams) -> tuple[SymmetricState, SymmetricState, SymmetricState]:
    """The standard triplet: two coincident-pair states and the symmetrized pair."""
    psi1, psi2, psi3, psi3_mirror = make_states(p)
    return symmetrize(psi1, psi1), symmetrize(psi2, psi2), symmetrize(psi3, psi3_mirror)


def analytic_qubit_phase(theta_deg, chi_deg, phi_deg, mirrored: bool = False):
    """Closed-form three-vertex phase of (psi1, psi2, psi3 or mirror).

    Unmirrored: -2*atan(tan(theta/2) * tan(chi/4 + phi/2));
    mirrored:   +2*atan(tan(theta/2) * tan(chi/4 - phi/2)).
    Returns the formula's principal branch (in (-pi, pi)); at the tangent
    poles floating point lands on the left one-sided limit.  Broadcasts over
    array inputs.
    """
    t = np.tan(np.radians(np.asarray(theta_deg, dtype=float)) / 2.0)
    if mirrored:
        arg = np.radians(np.asarray(chi_deg, dtype=float) / 4.0 - np.asarray(phi_deg, dtype=float) / 2.0)
        out = 2.0 * np.arctan(t * np.tan(arg))
    else:
        arg = np.radians(np.asarray(chi_deg, dtype=float) / 4.0 + np.asarray(phi_deg, dtype=float) / 2.0)
        out = -2.0 * np.arctan(t * np.tan(arg))
    return float(out) if np.ndim(out) == 0 else out


def analytic_total_phase(theta_deg, chi_deg, phi_deg):
    """Qutrit three-vertex phase of the standard triplet: sum of the two
    qubit phases.  Principal-branch value in (-2pi, 2pi); broadcasts."""
    return analytic_qubit_phase(theta_deg, chi_deg, phi_deg) + analytic_qubit_phase(
        theta_deg, chi_deg, phi_deg, mirrored=True
    )


def pole_positions(chi_deg: float, lo: float, hi: float) -> list[float]:
    """Distinct branch-pole locations of the analytic formulas in [lo, hi] (degrees)."""
    out = set()
    for p0 in (180.0 - chi_deg / 2.0, 180.0 + chi_deg / 2.0):
        k0 = math.ceil((lo - p0) / 360.0 - 1e-12)
        k1 = math.floor((hi - p0) / 360.0 + 1e-12)
        for k in range(k0, k1 + 1):
            pos = p0 + 360.0 * k
            if lo - 1e-9 <= pos <= hi + 1e-9:
                out.add(pos)
    return sorted(out)


def _pole_crossings(phi_deg, p0: float):
    """Signed count of poles p0 + 360k strictly between 0 and phi (vectorized)."""
    phi = np.asarray(phi_deg, dtype=float)
    eps = 1e-9
    up = np.floor((phi - eps - p0) / 360.0) - math.ceil((eps - p0) / 360.0) + 1.0
    dn = math.floor((-eps - p0) / 360.0) - np.ceil((phi + eps - p0) / 360.0) + 1.0
    return np.where(phi >= 0.0, np.maximum(up, 0.0), -np.maximum(dn, 0.0))


def total_phase_continuous(theta_deg, chi_deg, phi_deg):
    """Continuous-branch total phase, anchored to 0 at phi = 0.

    Equal to the principal analytic value minus 2pi per formula pole crossed
    between 0 and phi; each crossing drops the curve by 2pi, so a full 360
    degree period changes the phase by exactly -4pi.  Broadcasts over phi.
    """
    base = analytic_total_phase(theta_deg, chi_deg, phi_deg)
    n = _pole_crossings(phi_deg, 180.0 - chi_deg / 2.0) + _pole_crossings(
        phi_deg, 180.0 + chi_deg / 2.0
    )
    out = base - TWO_PI * n
    return float(out) if np.ndim(out) == 0 else out


def phase_slope(theta_deg, chi_deg, phi_deg):
    """d(gamma)/d(phi) of the continuous curve, in rad per rad; broadcasts.

    Strictly negative for 0 < theta < 180: the curve is monotone decreasing.
    """
    t = np.tan(np.radians(np.asarray(theta_deg, dtype=float)) / 2.0)
    a = np.radians(np.asarray(chi_deg, dtype=float) / 4.0 + np.asarray(phi_deg, dtype=float) / 2.0)
    b = np.radians(np.asarray(chi_deg, dtype=float) / 4.0 - np.asarray(phi_deg, dtype=float) / 2.0)

    def g(x):
        return t / (np.cos(x) ** 2 + (t * np.sin(x)) ** 2)

    out = -(g(a) + g(b))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PhaseJump:
    """One rapid 2pi-multiple change of the unwrapped curve."""

    phi_center_deg: float
    rise_rad: float
    width_deg: float


@dataclass(frozen=True)
class PhaseCurve:
    """Unwrapped phase samples over a phi grid, plus jump diagnostics."""

    theta_deg: float
    chi_deg: float
    phi_deg: np.ndarray
    gamma_rad: np.ndarray
    jumps: list[PhaseJump]

    @property
    def net_change_rad(self) -> float:
        return float(self.gamma_rad[-1] - self.gamma_rad[0])


def _seed_points(theta_deg: float, chi_deg: float, lo: float, hi: float) -> np.ndarray:
    """Extra samples clustered around each formula pole.

    A coarse user grid can alias a steep jump (the wrapped step looks small);
    seeding the pole neighborhoods at the jump's own width scale guarantees
    the unwrapper sees the full descent.
    """
    width_deg = math.degrees(math.tan(math.radians(theta_deg) / 2.0))
    width_deg = min(max(width_deg, 1e-12), 45.0)
    offsets = width_deg * np.geomspace(1e-3, 64.0, 20)
    pts = []
    for pole in pole_positions(chi_deg, lo, hi):
        pts.append(pole)
        pts.extend(pole + offsets)
        pts.extend(pole - offsets)
    pts = [x for x in pts if lo <= x <= hi]
    return np.asarray(pts, dtype=float)


def _unwrap(values: np.ndarray) -> np.ndarray:
    steps = wrap_angle(np.diff(values))
    return values[0] + np.concatenate([[0.0], np.cumsum(steps)])


def _detect_jumps(theta_deg: float, chi_deg: float, nodes: np.ndarray) -> list[PhaseJump]:
    lo, hi = float(nodes[0]), float(nodes[-1])
    span = hi - lo
    periods = round(span / 360.0)
    periodic = periods >= 1 and abs(span - 360.0 * periods) < 1e-9

    mag = -np.asarray(phase_slope(theta_deg, chi_deg, nodes))
    spread = float(mag.max() - mag.min())
    if spread < 0.05 * float(mag.max()):
        return []  # slope is essentially uniform; no localized jumps
    if periodic:
        # pad one period on each side so a peak straddling the range ends
        # (jumps merged across the periodic boundary) is still seen
        core_phi, core_mag = nodes[:-1], mag[:-1]
        ext_phi = np.concatenate([core_phi - span, nodes, core_phi[1:] + span])
        ext_mag = np.concatenate([core_mag, mag, core_mag[1:]])
        first, last = core_phi.size, core_phi.size + nodes.size - 1
    else:
        ext_phi, ext_mag = nodes, mag
        first, last = 0, nodes.size - 1
    peak_idx, _ = find_peaks(ext_mag, prominence=0.25 * spread)
    centers = []
    for i in peak_idx:
        if not first <= i <= last:
            continue
        a, b = float(ext_phi[i - 1]), float(ext_phi[i + 1])
        res = minimize_scalar(
            lambda f: float(phase_slope(theta_deg, chi_deg, f)),
            bounds=(a, b),
            method="bounded",
            options={"xatol": 1e-10},
        )
        center = float(res.x)
        if periodic:
            center = lo + (center - lo) % span
        centers.append(center)
    centers = sorted(centers)
    # a peak at the periodic boundary is seen once per copy; drop duplicates
    deduped = []
    for c in centers:
        if deduped and c - deduped[-1] < 1e-6:
            continue
        if periodic and deduped and (deduped[0] + span) - c < 1e-6:
            continue
        deduped.append(c)
    centers = deduped
    if not centers:
        return []

    # Window each jump by the midpoints to its cyclic neighbors.  For a
    # whole number of periods the continuous branch is evaluated beyond the
    # range ends (it is globally defined), so the wrap-around window stays
    # symmetric and the measured rises come out as exact 2-pi multiples;
    # partial ranges fall back to clipped windows.
    n = len(centers)
    bounds = []
    for j in range(n):
        if j == 0:
            left = (centers[-1] - span + centers[0]) / 2.0 if periodic else lo
        else:
            left = (centers[j - 1] + centers[j]) / 2.0
        if j == n - 1:
            right = (centers[-1] + centers[0] + span) / 2.0 if periodic else hi
        else:
            right = (centers[j] + centers[j + 1]) / 2.0
        if not periodic:
            left, right = max(left, lo), min(right, hi)
        bounds.append((left, right))

    jumps = []
    for center, (left, right) in zip(centers, bounds):
        g_left = total_phase_continuous(theta_deg, chi_deg, left)
        g_right = total_phase_continuous(theta_deg, chi_deg, right)
        rise = g_right - g_left

        def level_crossing(level):
            f = lambda x: total_phase_continuous(theta_deg, chi_deg, x) - level
            return brentq(f, left, right, xtol=1e-12)

        phi_10 = level_crossing(g_left + 0.1 * rise)
        phi_90 = level_crossing(g_left + 0.9 * rise)
        jumps.append(PhaseJump(center, float(rise), float(phi_90 - phi_10)))
    return jumps


def sweep_phi(
    theta_deg: float,
    chi_deg: float,
    phi_grid_deg,
    max_depth: int = 24,
) -> PhaseCurve:
    """Evaluate the analytic total phase over a phi grid and unwrap it.

    Unwraps by nearest-branch continuation, adaptively bisecting any interval
    whose unwrapped step reaches pi/2 (plus pole-neighborhood seeding, see
    _seed_points).  The result is cross-checked against the closed-form
    continuous branch; any residual inconsistency raises GridTooCoarse, as
    does exceeding the bisection depth limit (pathologically steep jumps,
    theta close to 0).
    """
    if not 0.0 < theta_deg < 180.0:
        raise ValueError(f"theta_deg must lie in (0, 180) for a sweep, got {theta_deg}")
    grid = np.asarray(phi_grid_deg, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("phi grid must be one-dimensional with at least 3 points")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("phi grid must be strictly increasing")

    lo, hi = float(grid[0]), float(grid[-1])
    nodes = np.unique(np.concatenate([grid, _seed_points(theta_deg, chi_deg, lo, hi)]))

    depth = 0
    while True:
        gamma = _unwrap(np.asarray(analytic_total_phase(theta_deg, chi_deg, nodes)))
        bad = np.abs(np.diff(gamma)) >= math.pi / 2.0
        if not bad.any():
            break
        depth += 1
        if depth > max_depth:
            raise GridTooCoarse(
                f"refinement depth {max_depth} exceeded; the curve is too steep "
                f"for reliable unwrapping (theta_deg = {theta_deg})"
            )
        idx = np.nonzero(bad)[0]
        mids = 0.5 * (nodes[idx] + nodes[idx + 1])
        nodes = np.unique(np.concatenate([nodes, mids]))

    ref = np.asarray(total_phase_continuous(theta_deg, chi_deg, nodes))
    mismatch = np.max(np.abs((gamma - gamma[0]) - (ref - ref[0])))
    if mismatch > 1e-6:
        raise GridTooCoarse(
            f"unwrapped curve deviates from the continuous branch by {mismatch:.3e}"
        )

    return PhaseCurve(
        theta_deg=theta_deg,
        chi_deg=chi_deg,
        phi_deg=nodes,
        gamma_rad=gamma,
        jumps=_detect_jumps(theta_deg, chi_deg, nodes),
    )


class OffsetFit(NamedTuple):
    offset_rad: float
    rms_rad: float


def _golden_min(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Golden-section minimizer on [a, b] for a unimodal objective."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def fit_offset(measured, theory: PhaseCurve) -> OffsetFit:
    """Constant offset minimizing the wrapped squared residuals.

    ``measured`` is a sequence of (phi_deg, gamma_rad) pairs; the theory curve
    is linearly interpolated at the measured phi.  The circular objective
    sum(wrap(measured - theory - c)^2) is scanned on a 1 degree grid and
    refined by golden section; the offset is reported in (-pi, pi] together
    with the residual RMS.
    """
    arr = np.asarray(measured, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("measured must be a sequence of (phi_deg, gamma_rad) pairs")
    inside = (arr[:, 0] >= theory.phi_deg[0]) & (arr[:, 0] <= theory.phi_deg[-1])
    if int(inside.sum()) < 2:
        raise InsufficientData(
            f"need at least 2 measured points inside the theory range, got {int(inside.sum())}"
        )
    phi_m = arr[inside, 0]
    gam_m = arr[inside, 1]
    resid = gam_m - np.interp(phi_m, theory.phi_deg, theory.gamma_rad)

    def cost(c):
        return float(np.sum(np.asarray(wrap_angle(resid - c)) ** 2))

    coarse = np.radians(np.arange(-179.0, 181.0, 1.0))
    costs = np.sum(np.asarray(wrap_angle(resid[None, :] - coarse[:, None])) ** 2, axis=1)
    c0 = float(coarse[int(np.argmin(costs))])
    half = math.radians(1.5)
    c_best = _golden_min(cost, c0 - half, c0 + half)
    return OffsetFit(wrap_angle(c_best), math.sqrt(cost(c_best) / resid.size))
