"""Classical periodic orbits of the billiard by Birkhoff extremization.

A candidate orbit is a list of boundary parameters (disk angles phi); the
chord-length function Lambda(phi_1..phi_N) = sum |P_{i+1} - P_i| with
P(phi) = w(e^{i phi}) has a critical point exactly where every bounce is
specular.  We root-find the gradient from many quasi-random seeds, then
filter degenerate solutions (collapsed chords, repeated shorter orbits)
and deduplicate up to cyclic relabeling and reversal.

Orbit records are canonically counterclockwise (positive signed area of
the vertex polygon); the clockwise partner is the reversed vertex order.
Self-retracing orbits (zero signed area) keep their found order and are
flagged.  The winding number about the flux line at the origin is the
signed angle sum of the closed polygon over 2 pi; a chord that passes
through the origin makes that ill-defined, which is flagged and reported
as winding 0 (the bouncing-ball convention).

The Maslov index of these hard-wall orbits equals the bounce count; wall
reflections contribute phase only through the spin term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import root
from scipy.stats import qmc

from .confmap import BilliardShape, boundary

TWO_PI = 2.0 * np.pi

SPECULARITY_TOL = 1e-8       # radians, per-vertex residual bound
CLOSURE_TOL = 1e-8           # final chord must return to the start
DEGENERATE_CHORD_TOL = 1e-9  # chord-to-origin distance flagging winding
MIN_CHORD = 1e-4             # reject collapsed consecutive vertices


@dataclass(frozen=True)
class Orbit:
    """A periodic billiard orbit in the w plane."""

    shape: BilliardShape
    phis: tuple[float, ...]       # boundary parameters of the bounce points
    label: str = ""
    orientation: str = "ccw"
    degenerate_winding: bool = False

    @property
    def vertices(self) -> np.ndarray:
        return np.asarray(self.shape.map(np.exp(1j * np.array(self.phis))))

    @property
    def bounces(self) -> int:
        return len(self.phis)

    @property
    def maslov(self) -> int:
        return self.bounces

    @property
    def length(self) -> float:
        v = self.vertices
        return float(np.sum(np.abs(np.roll(v, -1) - v)))

    @property
    def winding(self) -> int:
        w, _ = polygon_winding(self.vertices)
        return w

    @property
    def signed_area(self) -> float:
        v = self.vertices
        return float(0.5 * np.sum((v * np.conj(np.roll(v, -1))).imag)) * -1.0

    def reversed(self) -> "Orbit":
        flipped = {"ccw": "cw", "cw": "ccw"}[self.orientation]
        return replace(self, phis=tuple(reversed(self.phis)),
                       orientation=flipped)

    def normal_angles(self) -> np.ndarray:
        z = np.exp(1j * np.array(self.phis))
        return np.angle(z * self.shape.dmap(z))

    def chord_points(self, per_unit_length: float = 64.0) -> np.ndarray:
        """Dense polyline samples along the chords, w-plane, closed."""
        v = self.vertices
        pts = []
        for a, b in zip(v, np.roll(v, -1)):
            n = max(int(np.ceil(abs(b - a) * per_unit_length)), 4)
            t = (np.arange(n) + 0.5) / n
            pts.append(a + (b - a) * t)
        return np.concatenate(pts)


def polygon_winding(vertices: np.ndarray) -> tuple[int, bool]:
    """Signed winding of the closed polygon about the origin.

    Returns (winding, degenerate); degenerate means some chord passes
    within DEGENERATE_CHORD_TOL of the origin, in which case winding is
    reported as 0 by convention.
    """
    v = np.asarray(vertices, dtype=complex)
    nxt = np.roll(v, -1)
    # distance from origin to each chord segment
    d = nxt - v
    t = np.clip(-(v.real * d.real + v.imag * d.imag) / np.abs(d) ** 2, 0, 1)
    closest = v + t * d
    if np.min(np.abs(closest)) < DEGENERATE_CHORD_TOL:
        return 0, True
    ang = np.angle(nxt / v)
    total = float(np.sum(ang))
    w = total / TWO_PI
    w_int = int(round(w))
    if abs(w - w_int) > 1e-6:
        raise ValueError("winding angle sum did not close to an integer")
    return w_int, False


def _positions(shape: BilliardShape, phis: np.ndarray) -> np.ndarray:
    return np.asarray(shape.map(np.exp(1j * phis)))


def _tangents(shape: BilliardShape, phis: np.ndarray) -> np.ndarray:
    # d/dphi w(e^{i phi}) = i e^{i phi} w'(e^{i phi})
    z = np.exp(1j * phis)
    return 1j * z * np.asarray(shape.dmap(z))


def length_gradient(shape: BilliardShape, phis: np.ndarray) -> np.ndarray:
    """Gradient of the Birkhoff chord-length function."""
    p = _positions(shape, phis)
    chords = np.roll(p, -1) - p          # chord i: vertex i -> i+1
    lengths = np.abs(chords)
    if np.any(lengths < 1e-14):
        return np.full(len(phis), np.nan)
    units = chords / lengths
    t = _tangents(shape, phis)
    # vertex i heads chord i-1 and tails chord i
    incoming = np.roll(units, 1)
    g = (incoming - units).real * t.real + (incoming - units).imag * t.imag
    return g


def specularity_residual(shape: BilliardShape, phis: np.ndarray) -> np.ndarray:
    """Per-vertex |angle(in, normal) - angle(normal, out)| in radians."""
    p = _positions(shape, phis)
    chords = np.roll(p, -1) - p
    units = chords / np.abs(chords)
    z = np.exp(1j * phis)
    normals = z * np.asarray(shape.dmap(z))
    normals = normals / np.abs(normals)
    res = np.empty(len(phis))
    for i in range(len(phis)):
        d_in = units[i - 1]
        d_out = units[i]
        n = normals[i]
        # reflect incoming direction about the wall tangent; specular
        # bounce means it equals the outgoing direction
        tangent = 1j * n
        reflected = tangent * np.conj(d_in / tangent)
        res[i] = abs(np.angle(d_out / reflected))
    return res


def _same_orbit(a: np.ndarray, b: np.ndarray, tol: float = 1e-5) -> bool:
    """True if phi-sequences match up to cyclic relabeling and reversal."""
    if len(a) != len(b):
        return False
    base = np.mod(a, TWO_PI)
    for seq in (np.mod(b, TWO_PI), np.mod(b[::-1], TWO_PI)):
        for shift in range(len(seq)):
            diff = base - np.roll(seq, -shift)
            diff = np.abs(np.mod(diff + np.pi, TWO_PI) - np.pi)
            if np.max(diff) < tol:
                return True
    return False


def _is_repetition(phis: np.ndarray, tol: float = 1e-6) -> bool:
    n = len(phis)
    base = np.mod(phis, TWO_PI)
    for d in range(1, n):
        if n % d == 0 and d < n:
            diff = np.abs(np.mod(base - np.roll(base, -d) + np.pi, TWO_PI) - np.pi)
            if np.max(diff) < tol:
                return True
    return False


def _canonicalize(shape: BilliardShape, phis: np.ndarray) -> tuple[float, ...]:
    """CCW orientation, starting vertex with the smallest boundary angle."""
    base = np.mod(phis, TWO_PI)
    v = _positions(shape, base)
    area = 0.5 * np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag)
    if area < -1e-10:
        base = base[::-1]
    start = int(np.argmin(base))
    return tuple(np.roll(base, -start))


def find_orbits(
    shape: BilliardShape,
    n_bounces: int,
    n_seeds: int = 512,
    seed: int = 0,
) -> list[Orbit]:
    """All distinct period-n orbits reachable from quasi-random seeds.

    Critical points of the chord-length function are located with a
    quasi-Newton root find on its gradient from Sobol-distributed seeds.
    Results are deduplicated up to cyclic relabeling and reversal and
    returned CCW-canonical, sorted by length.
    """
    if n_bounces < 2:
        raise ValueError("orbits need at least 2 bounces")
    sampler = qmc.Sobol(d=n_bounces, scramble=True, seed=seed)
    seeds = TWO_PI * sampler.random(n_seeds)
    fun = lambda phis: length_gradient(shape, phis)

    found: list[np.ndarray] = []
    for x0 in seeds:
        if np.any(~np.isfinite(fun(x0))):
            continue
        sol = root(fun, x0, method="hybr", options={"xtol": 1e-13})
        if not sol.success:
            continue
        phis = np.mod(sol.x, TWO_PI)
        p = _positions(shape, phis)
        chords = np.abs(np.roll(p, -1) - p)
        if np.min(chords) < MIN_CHORD:
            continue  # collapsed vertices: not a genuine period-n orbit
        if _is_repetition(phis):
            continue
        if np.max(specularity_residual(shape, phis)) > SPECULARITY_TOL:
            continue
        if any(_same_orbit(phis, kept) for kept in found):
            continue
        found.append(phis)

    orbits = [Orbit(shape=shape, phis=_canonicalize(shape, phis))
              for phis in found]
    orbits.sort(key=lambda o: o.length)
    return orbits


def closure_residual(orbit: Orbit) -> float:
    """Distance from the last chord's endpoint back to the first vertex."""
    v = orbit.vertices
    walked = v[0]
    for a, b in zip(v, np.roll(v, -1)):
        walked = walked + (b - a)
    return float(abs(walked - v[0]))


def label_orbits(orbits: Sequence[Orbit]) -> list[Orbit]:
    """Assign period-N labels; -I/-II/... by increasing length within N.

    The suffix order follows length only; the mapping onto physically
    distinguished orbit families (winding, retracing character) is pinned
    separately in fixtures.
    """
    by_n: dict[int, list[Orbit]] = {}
    for o in orbits:
        by_n.setdefault(o.bounces, []).append(o)
    out = []
    roman = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X",
             "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII", "XVIII",
             "XIX", "XX"]
    for n, group in sorted(by_n.items()):
        group = sorted(group, key=lambda o: o.length)
        for i, o in enumerate(group):
            if len(group) == 1:
                label = f"period-{n}"
            else:
                suffix = roman[i] if i < len(roman) else str(i + 1)
                label = f"period-{n}-{suffix}"
            out.append(replace(o, label=label))
    return out


def orbit_tube(orbit: Orbit, width: float) -> Callable[[np.ndarray], np.ndarray]:
    """Indicator of the region within `width` of any orbit chord (w plane)."""
    if width <= 0:
        raise ValueError("tube width must be positive")
    v = orbit.vertices
    starts = v
    ends = np.roll(v, -1)
    d = ends - starts
    len2 = np.abs(d) ** 2

    def indicator(points_w: np.ndarray) -> np.ndarray:
        p = np.asarray(points_w, dtype=complex).ravel()
        inside = np.zeros(p.shape, dtype=bool)
        for a, dd, l2 in zip(starts, d, len2):
            t = np.clip(((p - a) * np.conj(dd)).real / l2, 0.0, 1.0)
            dist = np.abs(p - (a + t * dd))
            inside |= dist <= width
        return inside.reshape(np.shape(points_w))

    return indicator


def default_tube_width(shape: BilliardShape, factor: float = 0.05) -> float:
    """factor x billiard diameter; the documented default for scar masks."""
    poly = boundary(shape, 512)
    pts = poly.position
    diam = float(np.max(np.abs(pts[:, None] - pts[None, :])))
    return factor * diam


def catalog_to_json(orbits: Sequence[Orbit], path) -> None:
    records = []
    for o in orbits:
        records.append({
            "label": o.label,
            "bounces": o.bounces,
            "length": o.length,
            "winding": o.winding,
            "maslov": o.maslov,
            "orientation": o.orientation,
            "degenerate_winding": polygon_winding(o.vertices)[1],
            "phis": list(o.phis),
            "vertices": [[v.real, v.imag] for v in o.vertices],
        })
    with open(path, "w") as fh:
        json.dump(records, fh, indent=2)


def polyline_to_csv(orbit: Orbit, path, per_unit_length: float = 64.0) -> None:
    pts = orbit.chord_points(per_unit_length)
    np.savetxt(path, np.column_stack([pts.real, pts.imag]),
               delimiter=",", header="u,v", comments="")
