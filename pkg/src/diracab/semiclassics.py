"""Closed-form physics layer: phase accumulation, level prediction,
plane-wave boundary reflection, boundary spin, and symmetry operations.

Units are normalized hbar = v_F = 1 throughout, so every energy is a
wavevector.

Level prediction.  A scar on an orbit of length L, Maslov index sigma
(= bounce count here), winding W about the flux line, and boundary-spin
phase 2 pi beta quantizes at

    k = (2 pi / L) (n - W alpha + sigma/4 - beta),      n integer,

with W signed by the traversal sense and beta depending on the orbit and
orientation.  beta is computed, not tabulated: walking the orbit and
adding the reflection phase delta = (pi + 2 theta~(s) - 2 theta_in)/2 per
bounce (angles on the branch that rotates counterclockwise) accumulates a
total Delta = m pi; beta = Delta / 2 pi mod 1.  Reversing the orbit gives
Delta' = -Delta + N pi, so odd-bounce orbits carry the chirality gap of pi
and even-bounce orbits none.

Plane-wave reflection.  A spinor plane wave hitting a straight mass wall
V > E > 0 totally reflects (|R| = 1) with an evanescent transmitted tail;
the boundary superposition is an exact eigenvector of S_y with eigenvalue
+hbar/2 for V -> +infinity regardless of incidence direction, which is the
microscopic time-reversal breaking.  The four sign cases (+-E, +-V) have
their own transmitted spinors and momentum bookkeeping; all of them are
solved here by matching the two spinor components at the wall.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .confmap import BilliardShape
from .orbits import Orbit
from .spectral import WaveField

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# orbit phase accumulation and level prediction

def _walk_phases(normals: np.ndarray, directions: np.ndarray) -> float:
    """Total boundary phase Delta for one traversal.

    normals[i] is the outward normal angle at the bounce closing chord i;
    directions[i] is the propagation angle of chord i.  Each bounce turns
    the direction counterclockwise by (pi + 2 theta~ - 2 theta_in) mod 2pi
    in (0, 2 pi]; the phase gain is half the turn.
    """
    theta = directions[0]
    for i in range(len(normals)):
        turn = (math.pi + 2.0 * normals[i] - 2.0 * theta) % TWO_PI
        if turn <= 0.0:
            turn += TWO_PI
        theta_next = theta + turn
        # consistency: the turned direction must be the next chord
        expected = directions[(i + 1) % len(directions)]
        if abs((theta_next - expected + math.pi) % TWO_PI - math.pi) > 1e-6:
            raise ValueError("reflection walk left the orbit; bad geometry")
        theta = theta_next
    return 0.5 * (theta - directions[0])


def accumulate_phase(orbit: Orbit, orientation: str = "ccw") -> tuple[float, float]:
    """(Delta for the requested traversal, chiral gap (Delta+ - Delta-) mod 2pi).

    Delta comes out as an integer multiple of pi (asserted); the gap is pi
    for odd bounce counts and 0 for even ones.
    """
    def one_way(o: Orbit) -> float:
        v = o.vertices
        chords = np.roll(v, -1) - v
        directions = np.angle(chords)
        normals = np.roll(o.normal_angles(), -1)  # bounce i closes chord i
        return _walk_phases(normals, directions)

    fwd = orbit if orbit.orientation == "ccw" else orbit.reversed()
    delta_plus = one_way(fwd)
    delta_minus = one_way(fwd.reversed())
    for d in (delta_plus, delta_minus):
        if abs(d / math.pi - round(d / math.pi)) > 1e-8:
            raise ValueError("accumulated phase is not a multiple of pi")
    gap = (delta_plus - delta_minus) % TWO_PI
    delta = delta_plus if orientation == "ccw" else delta_minus
    return delta, gap


@dataclass(frozen=True)
class OrbitPhaseData:
    """Spin-reflection phases and predicted level offsets of one orbit."""

    orbit: Orbit
    sigma: int
    beta_ccw: float          # in turns, [0, 1)
    beta_cw: float
    gamma_ccw: float         # mod(sigma/4 - beta, 1) per orientation
    gamma_cw: float

    def beta(self, orientation: str) -> float:
        return self.beta_ccw if orientation == "ccw" else self.beta_cw

    def gamma_pred(self, orientation: str) -> float:
        return self.gamma_ccw if orientation == "ccw" else self.gamma_cw


def phase_data(orbit: Orbit) -> OrbitPhaseData:
    delta_ccw, gap = accumulate_phase(orbit, "ccw")
    delta_cw, _ = accumulate_phase(orbit, "cw")
    beta_ccw = (delta_ccw / TWO_PI) % 1.0
    beta_cw = (delta_cw / TWO_PI) % 1.0
    sigma = orbit.maslov
    return OrbitPhaseData(
        orbit=orbit,
        sigma=sigma,
        beta_ccw=beta_ccw,
        beta_cw=beta_cw,
        gamma_ccw=(sigma / 4.0 - beta_ccw) % 1.0,
        gamma_cw=(sigma / 4.0 - beta_cw) % 1.0,
    )


def signed_winding(orbit: Orbit, orientation: str) -> int:
    """Winding of the traversal in the requested sense."""
    w = orbit.winding
    return w if orientation == "ccw" else -w


def predict_levels(
    data: OrbitPhaseData, alpha: float, n_range,
) -> list[tuple[int, str, float]]:
    """Semiclassical wavevectors for both orientations over integer n."""
    L = data.orbit.length
    out = []
    for orientation in ("ccw", "cw"):
        w = signed_winding(data.orbit, orientation)
        beta = data.beta(orientation)
        for n in n_range:
            k = (TWO_PI / L) * (n - w * alpha + data.sigma / 4.0 - beta)
            out.append((n, orientation, k))
    return out


def delta_k_reversed(orbit: Orbit, alpha: float, delta_n: int) -> float:
    """Wavevector difference between reversed scar pairs.

    Even bounce counts: 2 pi (dn - 2 W alpha)/L; odd ones get the extra
    chirality term delta beta = 1/2.
    """
    L = orbit.length
    w = abs(signed_winding(orbit, "ccw"))
    if orbit.bounces % 2 == 0:
        return TWO_PI * (delta_n - 2.0 * w * alpha) / L
    return TWO_PI * (delta_n - 2.0 * w * alpha + 0.5) / L


# ---------------------------------------------------------------------------
# plane-wave reflection at a straight mass wall

@dataclass(frozen=True)
class PlaneWaveScenario:
    """Incidence on the potential step V sigma_z filling x > 0.

    energy_sign and potential_sign select the four cases of the symmetry
    analysis; E and V are magnitudes with V > E > 0 (V may be inf).
    """

    E: float
    V: float
    incident_angle: float
    energy_sign: int = +1
    potential_sign: int = +1

    def __post_init__(self):
        if not (abs(self.incident_angle) < math.pi / 2):
            raise ValueError("incident angle must lie in (-pi/2, pi/2)")
        if self.E <= 0:
            raise ValueError("E is a positive magnitude; use energy_sign")
        if not self.V > self.E:
            raise ValueError("evanescent regime needs V > E")
        if self.energy_sign not in (+1, -1) or self.potential_sign not in (+1, -1):
            raise ValueError("signs must be +-1")


@dataclass(frozen=True)
class ReflectionResult:
    R: complex
    T: complex
    gamma_angle: float
    lambda_ratio: float
    lambda1: float
    lambda2: float
    K: float
    q_decay: float
    sigma_z: float           # local <sigma_z> of the evanescent tail at x=0


def _case_lambdas(s: PlaneWaveScenario, K: float, q: float) -> tuple[float, float]:
    E, V = s.E, s.V
    same_sign = s.energy_sign * s.potential_sign > 0
    if same_sign:
        lam1 = math.sqrt((V + E) * (q - K) / (V * q - E * K))
        lam2 = math.sqrt((V - E) * (q + K) / (V * q - E * K))
    else:
        lam1 = math.sqrt((V - E) * (q - K) / (V * q + E * K))
        lam2 = math.sqrt((V + E) * (q + K) / (V * q + E * K))
    return lam1, lam2


def reflect_plane_wave(s: PlaneWaveScenario) -> ReflectionResult:
    """Match incident+reflected against the evanescent transmitted wave.

    The boundary spinors are a(theta) = (e^{-i theta/2}, e^{i theta/2})
    with specular theta_1 = pi - theta_0; the transmitted spinor is
    (-i lambda_1, lambda_2) for +V and (+i lambda_1, lambda_2) for -V.
    Solving the 2x2 linear system gives R and T; |R| = 1 always in the
    evanescent regime.
    """
    th0 = s.incident_angle
    k = s.E
    K = s.energy_sign * k * math.sin(th0)
    q = math.sqrt(s.V**2 - s.E**2 + K**2)
    lam1, lam2 = _case_lambdas(s, K, q)

    th1 = math.pi - th0
    a0 = np.array([np.exp(-0.5j * th0), np.exp(0.5j * th0)])
    a1 = np.array([np.exp(-0.5j * th1), np.exp(0.5j * th1)])
    tr = np.array([-1j * s.potential_sign * lam1, lam2])
    # a0 + R a1 = T tr  ->  [a1, -tr] [R, T]^T = -a0
    mat = np.column_stack([a1, -tr])
    R, T = np.linalg.solve(mat, -a0)

    lam = lam2 / lam1
    gamma = math.atan2(1.0 - lam * math.sin(th0), lam * math.cos(th0))
    sigma_z = 0.5 * abs(T) ** 2 * (lam1**2 - lam2**2)
    return ReflectionResult(
        R=complex(R), T=complex(T), gamma_angle=gamma, lambda_ratio=lam,
        lambda1=lam1, lambda2=lam2, K=K, q_decay=q, sigma_z=sigma_z,
    )


def boundary_spin(s: PlaneWaveScenario) -> tuple[float, float]:
    """(S_y eigenvalue in units of hbar, local <sigma_z> at the wall).

    In the hard-wall limit R -> potential_sign * 1 and the boundary
    superposition a(theta_0) + R a(theta_1) is an exact S_y eigenvector
    with eigenvalue sign(V) hbar/2; the eigen-relation is asserted to
    machine precision.  <sigma_z> comes from the finite-V transmitted
    tail and vanishes as V -> infinity.
    """
    if math.isinf(s.V):
        sigma_z = 0.0
    else:
        sigma_z = reflect_plane_wave(s).sigma_z
    th0, th1 = s.incident_angle, math.pi - s.incident_angle
    a0 = np.array([np.exp(-0.5j * th0), np.exp(0.5j * th0)])
    a1 = np.array([np.exp(-0.5j * th1), np.exp(0.5j * th1)])
    psi = a0 + complex(s.potential_sign) * a1
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    eig = 0.5 * s.potential_sign
    resid = np.max(np.abs(sy @ psi - 2.0 * eig * psi))
    if resid > 1e-14 * np.max(np.abs(psi)):
        raise AssertionError("S_y eigen-relation violated; convention bug")
    return eig, sigma_z


# ---------------------------------------------------------------------------
# symmetry operations on wave fields

class SymmetryOp(enum.Enum):
    NEGATE_E = "negate_e"            # sigma_x K: (psi2*, psi1*)
    TIME_REVERSAL = "time_reversal"  # i sigma_y K: (psi2*, -psi1*)
    COMBINED = "combined"            # sigma_z: (psi1, -psi2), -E and -V
    PARITY = "parity"                # R_y sigma_x: swap + v -> -v
    MIRROR = "mirror"                # R_x K: conjugate + u -> -u


class GridSymmetryError(ValueError):
    """Reflection requested on a grid that does not map onto itself."""


def _flip_theta(a: np.ndarray) -> np.ndarray:
    # theta_j -> -theta_j is index j -> (n - j) mod n on a uniform grid
    return np.roll(a[:, ::-1], 1, axis=1)


def _flip_theta_pi(a: np.ndarray) -> np.ndarray:
    # theta_j -> pi - theta_j needs even n; it is flip then shift by n/2
    n = a.shape[1]
    if n % 2:
        raise GridSymmetryError("mirror needs an even angular grid")
    return np.roll(_flip_theta(a), n // 2, axis=1)


def symmetry_transform(field: WaveField, op: SymmetryOp) -> WaveField:
    """Apply one of the discrete symmetry operations to a spinor field.

    Pointwise spinor ops keep the billiard; the reflections return the
    state of the reflected billiard (same domain when the shape has the
    matching symmetry), sampled on the same polar grid.
    """
    p1, p2 = field.psi1, field.psi2
    shape = field.shape
    if op is SymmetryOp.NEGATE_E:
        q1, q2 = np.conj(p2), np.conj(p1)
    elif op is SymmetryOp.TIME_REVERSAL:
        q1, q2 = np.conj(p2), -np.conj(p1)
    elif op is SymmetryOp.COMBINED:
        q1, q2 = p1, -p2
    elif op is SymmetryOp.PARITY:
        q1, q2 = _flip_theta(p2), _flip_theta(p1)
        shape = field.shape.reflected()
    elif op is SymmetryOp.MIRROR:
        q1, q2 = np.conj(_flip_theta_pi(p1)), np.conj(_flip_theta_pi(p2))
        shape = field.shape.mirrored()
    else:
        raise ValueError(f"unknown symmetry op {op}")
    return WaveField(grid=field.grid, psi1=q1, psi2=q2, k=field.k,
                     state_index=field.state_index, shape=shape)


# ---------------------------------------------------------------------------
# the eight-case summary table

def _helicity(energy_sign: int) -> int:
    # <sigma . p>/|p| of the free spinor plane wave; -E states carry
    # momentum opposite to current
    th = 0.3
    a = np.array([np.exp(-0.5j * th), np.exp(0.5j * th)])
    k_dir = th if energy_sign > 0 else th + math.pi
    sig_k = np.array([
        [0.0, np.exp(-1j * k_dir)],
        [np.exp(1j * k_dir), 0.0],
    ])
    val = np.vdot(a, sig_k @ a).real / np.vdot(a, a).real
    return int(round(val))


_CASE_OPS = {
    (+1, +1): [],
    (+1, -1): [SymmetryOp.TIME_REVERSAL],
    (-1, +1): [SymmetryOp.NEGATE_E],
    (-1, -1): [SymmetryOp.COMBINED],
}


def _current_sign(e_sign: int, v_sign: int, mirrored: bool) -> int:
    """Circulation sign of a probe state pushed through the op chain."""
    from .confmap import DISK
    from .spectral import make_grid

    grid = make_grid(24, 64)
    r = grid.r[:, None]
    th = grid.theta[None, :]
    # analytic disk-like spinor with counterclockwise current
    psi1 = np.broadcast_to((1.0 - r) + 0.2, (grid.n_r, grid.n_theta)).astype(complex)
    psi2 = 1j * (r * (1.2 - r)) * np.exp(1j * th) + 0j
    field = WaveField(grid=grid, psi1=np.array(psi1), psi2=np.array(psi2),
                      k=1.0, state_index=0, shape=DISK)

    def circulation(f: WaveField) -> float:
        a = np.conj(f.psi1) * f.psi2          # z-plane current as complex
        tangent = 1j * np.exp(1j * th)        # CCW unit tangent on circles
        u_dot_t = 2.0 * (np.conj(tangent) * a).real
        i_mid = grid.n_r // 2
        return float(np.sum(u_dot_t[i_mid]))

    ops = list(_CASE_OPS[(e_sign, v_sign)])
    if mirrored:
        ops.append(SymmetryOp.MIRROR)
    out = field
    for op in ops:
        out = symmetry_transform(out, op)
    base = circulation(field)
    return int(np.sign(circulation(out) * base))


def symmetry_table(E: float = 1.0, V: float = 50.0,
                   theta0: float = 0.35) -> list[dict]:
    """Computed spin/current summary for all (+-E, +-V, mirror) cases.

    Every row is derived from the implementations above: the hard-wall
    reflection limit, free-particle helicity, scar-current sign relative
    to the (+E, +V, identity) case, the boundary S_y eigenvalue, and the
    sign of the finite-V <sigma_z>.  Mirror changes none of them.
    """
    rows = []
    for e_sign in (+1, -1):
        for v_sign in (+1, -1):
            for mirrored in (False, True):
                s_fin = PlaneWaveScenario(E=E, V=V, incident_angle=theta0,
                                          energy_sign=e_sign,
                                          potential_sign=v_sign)
                s_inf = PlaneWaveScenario(E=E, V=math.inf,
                                          incident_angle=theta0,
                                          energy_sign=e_sign,
                                          potential_sign=v_sign)
                R_limit = reflect_plane_wave(
                    PlaneWaveScenario(E=E, V=1e9 * E, incident_angle=theta0,
                                      energy_sign=e_sign,
                                      potential_sign=v_sign)
                ).R
                spin, _ = boundary_spin(s_inf)
                sigma_z = reflect_plane_wave(s_fin).sigma_z
                rows.append({
                    "energy_sign": e_sign,
                    "potential_sign": v_sign,
                    "mirror": mirrored,
                    "reflection_limit": int(round(R_limit.real)),
                    "helicity": _helicity(e_sign),
                    "current_sign": _current_sign(e_sign, v_sign, mirrored),
                    "spin_sign": int(np.sign(spin)),
                    "sigma_z_sign": int(np.sign(sigma_z)) if sigma_z else 0,
                })
    return rows
