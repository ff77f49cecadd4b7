"""Cubic conformal maps from the unit disk to chaotic billiard domains.

The family is w(z) = (z + b z^2 + c e^{i delta} z^3) / sqrt(1 + 2b^2 + 3c^2).
The normalization makes every member have area pi, equal to the unit disk.
Two presets are built in: the heart-shaped billiard (b=0.49, c=delta=0) and
the Africa billiard (b=c=0.2, delta=pi/3); both have chaotic classical
dynamics.

The boundary is parameterized by the disk angle phi of z = e^{i phi}; arc
length s and outward normal angles are derived quantities.  The outward
normal direction at w(e^{i phi}) is arg(z w'(z)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class UnivalenceError(ValueError):
    """The requested (b, c, delta) map is not injective on the closed disk."""


@dataclass(frozen=True)
class BilliardShape:
    """Parameters of one member of the cubic map family."""

    b: float
    c: float
    delta: float

    @property
    def norm(self) -> float:
        return math.sqrt(1.0 + 2.0 * self.b**2 + 3.0 * self.c**2)

    @property
    def is_mirror_symmetric(self) -> bool:
        # delta = 0 gives real coefficients, hence w(conj z) = conj(w(z))
        return self.delta == 0.0

    def map(self, z):
        """w(z); z scalar or array with |z| <= 1."""
        z = np.asarray(z, dtype=complex)
        ce = self.c * np.exp(1j * self.delta)
        w = (z + self.b * z**2 + ce * z**3) / self.norm
        return w if w.ndim else complex(w)

    def dmap(self, z):
        """w'(z) = (1 + 2bz + 3c e^{i delta} z^2)/norm."""
        z = np.asarray(z, dtype=complex)
        ce = self.c * np.exp(1j * self.delta)
        d = (1.0 + 2.0 * self.b * z + 3.0 * ce * z**2) / self.norm
        return d if d.ndim else complex(d)

    def jacobian_sq(self, z):
        """|w'(z)|^2, the nonuniform weight of the mapped wave equation."""
        d = np.asarray(self.dmap(z))
        j = (d * d.conjugate()).real
        return j if j.ndim else float(j)

    def mirrored(self) -> "BilliardShape":
        """Shape of the mirror-image domain (u -> -u), same normalization."""
        return BilliardShape(-self.b, self.c, -self.delta)

    def reflected(self) -> "BilliardShape":
        """Shape of the domain reflected across the u-axis (v -> -v)."""
        return BilliardShape(self.b, self.c, -self.delta)


HEART = BilliardShape(b=0.49, c=0.0, delta=0.0)
AFRICA = BilliardShape(b=0.2, c=0.2, delta=math.pi / 3)
DISK = BilliardShape(b=0.0, c=0.0, delta=0.0)

PRESETS = {"heart": HEART, "africa": AFRICA, "disk": DISK}


def resolve_shape(spec) -> BilliardShape:
    """Accept a preset name, a BilliardShape, or a (b, c, delta) triple."""
    if isinstance(spec, BilliardShape):
        shape = spec
    elif isinstance(spec, str):
        try:
            shape = PRESETS[spec.lower()]
        except KeyError:
            raise KeyError(
                f"unknown shape preset {spec!r}; known: {sorted(PRESETS)}"
            ) from None
    else:
        b, c, delta = spec
        shape = BilliardShape(float(b), float(c), float(delta))
    check_univalent(shape)
    return shape


def check_univalent(shape: BilliardShape, n_points: int = 4096) -> None:
    """Guard against non-injective maps.

    w' is a quadratic, so its zeros are available exactly: both must lie
    strictly outside the closed disk.  A boundary grid check backs this up
    (and is the documented acceptance rule).
    """
    ce = shape.c * np.exp(1j * shape.delta)
    roots = np.roots([3.0 * ce, 2.0 * shape.b, 1.0]) if ce != 0 else (
        np.array([-0.5 / shape.b]) if shape.b != 0 else np.array([])
    )
    if roots.size and np.min(np.abs(roots)) <= 1.0:
        raise UnivalenceError(
            f"w' vanishes inside the closed disk for b={shape.b}, "
            f"c={shape.c}, delta={shape.delta}"
        )
    phi = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    j = shape.jacobian_sq(np.exp(1j * phi))
    if np.min(j) <= 1e-12:
        raise UnivalenceError(
            f"|w'| vanishes on the boundary for b={shape.b}, c={shape.c}, "
            f"delta={shape.delta}"
        )


def billiard_area(shape: BilliardShape) -> float:
    """Area of the mapped domain; the normalization makes it exactly pi."""
    b2, c2 = shape.b**2, shape.c**2
    return math.pi * (1.0 + 2.0 * b2 + 3.0 * c2) / shape.norm**2


@dataclass(frozen=True)
class BoundaryPoint:
    """One sample of the billiard wall in the w plane."""

    s: float              # arc length from the positive-u axis crossing
    position: complex     # u + iv
    normal_angle: float   # angle of the outward normal to the +u axis


@dataclass(frozen=True)
class BoundaryPolyline:
    """Dense boundary sampling, uniform in the disk angle phi."""

    shape: BilliardShape
    phi: np.ndarray
    s: np.ndarray
    position: np.ndarray
    normal_angle: np.ndarray
    total_length: float = field(default=0.0)

    def __len__(self) -> int:
        return len(self.phi)

    def __getitem__(self, i: int) -> BoundaryPoint:
        return BoundaryPoint(
            s=float(self.s[i]),
            position=complex(self.position[i]),
            normal_angle=float(self.normal_angle[i]),
        )


def boundary(shape: BilliardShape, n_points: int = 1024) -> BoundaryPolyline:
    """Sample the wall at n_points uniform disk angles.

    Arc length accumulates |w'(e^{i phi})| by the trapezoidal rule; the
    normal angle is unwrapped so it is continuous and winds by exactly
    2 pi over one circuit.
    """
    if n_points < 64:
        raise ValueError("n_points must be >= 64")
    phi = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    z = np.exp(1j * phi)
    pos = shape.map(z)
    speed = np.abs(shape.dmap(z))
    dphi = 2.0 * np.pi / n_points
    # trapezoid between consecutive samples, periodic closure for the total
    seg = 0.5 * (speed + np.roll(speed, -1)) * dphi
    s = np.concatenate(([0.0], np.cumsum(seg[:-1])))
    total = float(np.sum(seg))
    normal = np.unwrap(np.angle(z * shape.dmap(z)))
    return BoundaryPolyline(
        shape=shape, phi=phi, s=s, position=pos, normal_angle=normal,
        total_length=total,
    )


def normal_angle_at(shape: BilliardShape, phi) -> np.ndarray:
    """Outward normal angle theta~ at the wall point w(e^{i phi})."""
    z = np.exp(1j * np.asarray(phi, dtype=float))
    ang = np.angle(z * shape.dmap(z))
    return ang if ang.ndim else float(ang)


def invert_map(shape: BilliardShape, w_targets, z0=None, tol: float = 1e-13):
    """Pull w-plane points back to the disk by damped Newton iteration.

    Univalence guarantees a unique preimage with |z| <= 1.  Iterates that
    escape the disk are projected back; continuation from a neighbouring
    solution (z0) makes chord-walking robust.
    """
    w = np.atleast_1d(np.asarray(w_targets, dtype=complex))
    z = np.array(w if z0 is None else np.broadcast_to(z0, w.shape), dtype=complex)
    r = np.abs(z)
    np.divide(z, r, out=z, where=r > 1.0)
    for _ in range(100):
        f = shape.map(z) - w
        if np.max(np.abs(f)) < tol:
            break
        step = f / shape.dmap(z)
        # damp long steps; keeps Newton inside the basin of the disk root
        mag = np.abs(step)
        step = np.where(mag > 0.25, 0.25 * step / np.maximum(mag, 1e-300), step)
        z = z - step
        r = np.abs(z)
        too_far = r > 1.0 + 1e-12
        if np.any(too_far):
            z[too_far] = z[too_far] / r[too_far]
    else:
        raise RuntimeError("map inversion did not converge")
    return z if np.ndim(w_targets) else complex(z[0])


def boundary_to_csv(poly: BoundaryPolyline, path) -> None:
    """Write (s, u, v, normal_angle) rows for plotting and audits."""
    data = np.column_stack(
        [poly.s, poly.position.real, poly.position.imag, poly.normal_angle]
    )
    np.savetxt(
        path, data, delimiter=",", header="s,u,v,normal_angle", comments=""
    )
