"""Exact complex-arithmetic primitives for polarization qubits and
symmetrized two-photon (qutrit) states.

Conventions used throughout the package:

* ``|H> = (1, 0)``, ``|V> = (0, 1)``; inner products conjugate the first
  argument.
* Qutrit basis: ``{|HH>, (|HV>+|VH>)/sqrt(2), |VV>}``.
* Bloch map: ``|H> -> +z``, ``(|H>+|V>)/sqrt(2) -> +x``,
  ``(|H>+i|V>)/sqrt(2) -> +y``.
* All phase angles are reported in ``(-pi, pi]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
# Below this product magnitude the argument of the overlap product is
# dominated by rounding noise, so the phase is treated as undefined.
PHASE_SINGULAR_TOL = 1e-12
ANTIPODAL_TOL = 1e-9


class UndefinedPhase(ValueError):
    """The overlap product is (numerically) zero, so its phase is singular."""


class DegenerateTriangle(ValueError):
    """Two spherical-triangle vertices are antipodal; geodesics are ill-defined."""


def wrap_angle(x):
    """Wrap an angle (or array of angles) into (-pi, pi]."""
    w = math.pi - np.mod(math.pi - np.asarray(x, dtype=float), 2.0 * math.pi)
    if np.ndim(x) == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class QubitState:
    """Normalized single-photon polarization state in the H/V basis."""

    amp_h: complex
    amp_v: complex

    def __post_init__(self):
        object.__setattr__(self, "amp_h", complex(self.amp_h))
        object.__setattr__(self, "amp_v", complex(self.amp_v))
        n = abs(self.amp_h) ** 2 + abs(self.amp_v) ** 2
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"qubit amplitudes are not normalized: |psi|^2 = {n}")

    @classmethod
    def of(cls, amp_h: complex, amp_v: complex) -> "QubitState":
        """Build a normalized state from arbitrary non-zero amplitudes."""
        n = math.sqrt(abs(amp_h) ** 2 + abs(amp_v) ** 2)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(amp_h) / n, complex(amp_v) / n)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)


@dataclass(frozen=True)
class SymmetricState:
    """Normalized two-photon state in the symmetric (qutrit) basis.

    ``amp_sym`` multiplies the normalized basis vector (|HV>+|VH>)/sqrt(2),
    so the antisymmetric component is structurally impossible.
    """

    amp_hh: complex
    amp_sym: complex
    amp_vv: complex

    def __post_init__(self):
        object.__setattr__(self, "amp_hh", complex(self.amp_hh))
        object.__setattr__(self, "amp_sym", complex(self.amp_sym))
        object.__setattr__(self, "amp_vv", complex(self.amp_vv))
        n = abs(self.amp_hh) ** 2 + abs(self.amp_sym) ** 2 + abs(self.amp_vv) ** 2
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"qutrit amplitudes are not normalized: |Psi|^2 = {n}")

    @classmethod
    def of(cls, amp_hh: complex, amp_sym: complex, amp_vv: complex) -> "SymmetricState":
        n = math.sqrt(abs(amp_hh) ** 2 + abs(amp_sym) ** 2 + abs(amp_vv) ** 2)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(amp_hh) / n, complex(amp_sym) / n, complex(amp_vv) / n)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.amp_hh, self.amp_sym, self.amp_vv], dtype=complex)

    @property
    def product_basis_vec(self) -> np.ndarray:
        """Amplitudes in the product basis (|HH>, |HV>, |VH>, |VV>)."""
        s = self.amp_sym / math.sqrt(2.0)
        return np.array([self.amp_hh, s, s, self.amp_vv], dtype=complex)


@dataclass(frozen=True)
class BlochVector:
    """Unit vector on the Bloch (Poincare) sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = self.x**2 + self.y**2 + self.z**2
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"Bloch vector is not unit length: |v|^2 = {n}")

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def qubit_inner(a: QubitState, b: QubitState) -> complex:
    """<a|b> with conjugation on the first argument."""
    return a.amp_h.conjugate() * b.amp_h + a.amp_v.conjugate() * b.amp_v


def qutrit_inner(a: SymmetricState, b: SymmetricState) -> complex:
    """<a|b> in the three-dimensional symmetric subspace."""
    return (
        a.amp_hh.conjugate() * b.amp_hh
        + a.amp_sym.conjugate() * b.amp_sym
        + a.amp_vv.conjugate() * b.amp_vv
    )


def _phase_of_product(product: complex) -> float:
    if abs(product) < PHASE_SINGULAR_TOL:
        raise UndefinedPhase(
            f"overlap product magnitude {abs(product):.3e} is below "
            f"{PHASE_SINGULAR_TOL:.0e}; the phase is singular"
        )
    return wrap_angle(cmath.phase(product))


def three_vertex_phase_qubit(a: QubitState, b: QubitState, c: QubitState) -> float:
    """arg <a|c><c|b><b|a>, in (-pi, pi].

    Invariant under global phases of any argument, cyclic in (a, b, c), and
    antisymmetric under swapping any two arguments.  Raises UndefinedPhase
    when some pair is (numerically) orthogonal.
    """
    return _phase_of_product(qubit_inner(a, c) * qubit_inner(c, b) * qubit_inner(b, a))


def three_vertex_phase_qutrit(a: SymmetricState, b: SymmetricState, c: SymmetricState) -> float:
    """Same contract as the qubit version, with three-component inner products."""
    return _phase_of_product(qutrit_inner(a, c) * qutrit_inner(c, b) * qutrit_inner(b, a))


def symmetrize(p: QubitState, q: QubitState) -> SymmetricState:
    """Normalized symmetrization of |p>|q> + |q>|p>.

    Always well defined: the squared norm before normalization is
    2(1 + |<p|q>|^2) >= 2.  Exactly symmetric in its arguments.
    """
    return SymmetricState.of(
        2.0 * p.amp_h * q.amp_h,
        math.sqrt(2.0) * (p.amp_h * q.amp_v + p.amp_v * q.amp_h),
        2.0 * p.amp_v * q.amp_v,
    )


def _qubit_from_root(w: complex) -> QubitState:
    """Map a root of the characteristic quadratic to its constituent state."""
    return QubitState.of(1.0, -w)


def majorana_decompose(s: SymmetricState) -> tuple[QubitState, QubitState]:
    """Unordered constituent pair {p, q} with symmetrize(p, q) == s up to phase.

    Roots of amp_hh*w^2 + sqrt(2)*amp_sym*w + amp_vv = 0 map to the pair via
    w -> (|H> - w|V>)/norm; a degree drop (amp_hh -> 0) contributes the state
    |V> (the root at infinity).  Degenerate states return a coincident pair.
    """
    a = s.amp_hh
    b = math.sqrt(2.0) * s.amp_sym
    c = s.amp_vv
    if abs(a) < 1e-14:
        if abs(b) < 1e-14:
            return QubitState(0.0, 1.0), QubitState(0.0, 1.0)
        return _qubit_from_root(-c / b), QubitState(0.0, 1.0)
    disc = b * b - 4.0 * a * c
    # Near-degenerate discriminants lose the root splitting to rounding;
    # the coincident pair is then the accurate reconstruction.
    if abs(disc) < 1e-24 * max(abs(b * b), abs(4.0 * a * c), 1e-30):
        w = -b / (2.0 * a)
        return _qubit_from_root(w), _qubit_from_root(w)
    sq = cmath.sqrt(disc)
    if (b.conjugate() * sq).real < 0.0:
        sq = -sq
    t = -(b + sq) / 2.0
    if t == 0.0:
        w = -b / (2.0 * a)
        return _qubit_from_root(w), _qubit_from_root(w)
    return _qubit_from_root(t / a), _qubit_from_root(c / t)


def bloch_from_qubit(p: QubitState) -> BlochVector:
    """Bloch map with |H> at the +z pole."""
    cross = p.amp_h.conjugate() * p.amp_v
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(p.amp_h) ** 2 - abs(p.amp_v) ** 2,
    )


def qubit_from_bloch(v: BlochVector) -> QubitState:
    """Inverse Bloch map (up to global phase)."""
    half = 0.5 * math.acos(min(1.0, max(-1.0, v.z)))
    azimuth = math.atan2(v.y, v.x)
    return QubitState.of(math.cos(half), math.sin(half) * cmath.exp(1j * azimuth))


def spherical_triangle_signed_area(v1: BlochVector, v2: BlochVector, v3: BlochVector) -> float:
    """Oriented solid angle of the geodesic triangle (v1, v2, v3), in (-2pi, 2pi].

    Sign convention: Omega(+z, +x, +y) = +pi/2, matching the phase-area law
    gamma(a, b, c) = -Omega/2 (mod 2pi) for the Bloch images of the states.
    Uses the two-argument arctangent (Van Oosterom-Strackee) form.
    """
    a, b, c = v1.vec, v2.vec, v3.vec
    for u, w in ((a, b), (b, c), (c, a)):
        if float(np.dot(u, w)) <= -1.0 + ANTIPODAL_TOL:
            raise DegenerateTriangle("two vertices are antipodal within tolerance")
    num = float(np.dot(a, np.cross(b, c)))
    den = 1.0 + float(np.dot(a, b)) + float(np.dot(b, c)) + float(np.dot(c, a))
    return 2.0 * math.atan2(num, den)


def random_qubit(rng: np.random.Generator) -> QubitState:
    """Haar-random qubit state."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.of(z[0], z[1])


def random_symmetric(rng: np.random.Generator) -> SymmetricState:
    """Haar-random state of the symmetric subspace."""
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    return SymmetricState.of(z[0], z[1], z[2])
