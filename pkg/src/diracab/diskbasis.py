"""Eigenmodes of the circular Dirac billiard with a flux line at the origin.

These are the expansion basis for the chaotic billiards.  A mode carries
angular number l and radial index m; the effective Bessel order is
nu = l - alpha where alpha is the flux in units of flux quanta.  With the
inner radius taken to zero, the eigenvalue condition and the simplified
radial pair depend only on where nu falls among six regimes:

    integer nu            J_nu(mu) = J_{nu+1}(mu)      (J_nu, J_{nu+1})
    nu > 0                J_nu(mu) = J_{nu+1}(mu)      (J_nu, J_{nu+1})
    -1/2 < nu < 0         J_nu(mu) = J_{nu+1}(mu)      (J_nu, J_{nu+1})
    nu < -1               J_{-nu}(mu) = -J_{-(nu+1)}(mu)   (J_{-nu}, -J_{-(nu+1)})
    -1 < nu < -1/2        J_{-nu}(mu) = -J_{-(nu+1)}(mu)   (J_{-nu}, -J_{-(nu+1)})
    nu = -1/2             J_{-1/2}(mu) = 0          (J_{-1/2}+J_{1/2}, J_{1/2}-J_{-1/2})

A full mode reads psi_lm(r, theta) = N (phi(r), i chi(r) e^{i theta})^T
e^{i l theta}; the infinite-mass wall forces chi(1)/phi(1) = 1.

The flux argument here is taken raw (not reduced mod 1) so that the exact
spectral periodicity alpha -> alpha + 1 with l -> l + 1 can be exercised
as a genuine numerical test; configuration-level code reduces the flux.
The radial pair diverges like r^nu for -1 < nu < 0 as r -> 0+; grids keep
r >= 1e-3 and the punctured neighbourhood of the flux line is documented
as unresolved.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .besselfun import bessel_j, find_roots, scan_brackets, refine_root, RootCountError
from .quadrature import radial_rule

#: tolerance for "nu is an integer" / "nu is exactly -1/2"; config-level
#: fluxes hit these only at alpha in {0, 1/2}, which users do request
NU_SNAP_TOL = 1e-9


class Regime(enum.Enum):
    INTEGER_NU = "integer"
    POSITIVE_NU = "positive"
    BELOW_MINUS_ONE = "below_minus_one"
    MINUS_HALF_TO_ZERO = "minus_half_to_zero"
    MINUS_ONE_TO_MINUS_HALF = "minus_one_to_minus_half"
    EXACTLY_MINUS_HALF = "exactly_minus_half"


def classify_regime(nu: float, tol: float = NU_SNAP_TOL) -> Regime:
    """Exhaustive, mutually exclusive regime of a real order nu."""
    if not np.isfinite(nu):
        raise ValueError("nu must be finite")
    if abs(nu - round(nu)) < tol:
        return Regime.INTEGER_NU
    if abs(nu + 0.5) < tol:
        return Regime.EXACTLY_MINUS_HALF
    if nu > 0:
        return Regime.POSITIVE_NU
    if nu < -1:
        return Regime.BELOW_MINUS_ONE
    if -0.5 < nu < 0:
        return Regime.MINUS_HALF_TO_ZERO
    return Regime.MINUS_ONE_TO_MINUS_HALF


_J_MINUS_BRANCH = {Regime.BELOW_MINUS_ONE, Regime.MINUS_ONE_TO_MINUS_HALF}


def eigenvalue_equation(nu: float) -> Callable[[float], float]:
    """Residual function of mu whose positive roots are the eigenvalues."""
    regime = classify_regime(nu)
    if regime is Regime.EXACTLY_MINUS_HALF:
        return lambda mu: bessel_j(-0.5, mu)
    if regime in _J_MINUS_BRANCH:
        return lambda mu: bessel_j(-nu, mu) + bessel_j(-(nu + 1.0), mu)
    nu_snapped = float(round(nu)) if regime is Regime.INTEGER_NU else nu
    return lambda mu: bessel_j(nu_snapped, mu) - bessel_j(nu_snapped + 1.0, mu)


@dataclass(frozen=True)
class BasisMode:
    """One circular-billiard eigenfunction."""

    l: int
    m: int
    nu: float
    mu: float
    regime: Regime
    norm: float

    @property
    def label(self) -> str:
        return f"(l={self.l}, m={self.m})"


def radial_pair(nu: float, mu: float, r) -> tuple[np.ndarray, np.ndarray]:
    """Simplified (phi, chi) radial components at argument mu * r."""
    regime = classify_regime(nu)
    x = mu * np.asarray(r, dtype=float)
    if regime is Regime.EXACTLY_MINUS_HALF:
        jm, jp = bessel_j(-0.5, x), bessel_j(0.5, x)
        return jm + jp, jp - jm
    if regime in _J_MINUS_BRANCH:
        return bessel_j(-nu, x), -bessel_j(-(nu + 1.0), x)
    if regime is Regime.INTEGER_NU:
        nu = float(round(nu))
    return bessel_j(nu, x), bessel_j(nu + 1.0, x)


def _mode_norm(nu: float, mu: float, n_quad: int | None = None) -> float:
    """N such that the mode has unit L2 norm on the unit disk."""
    r, w = radial_rule() if n_quad is None else radial_rule(n_quad)
    phi, chi = radial_pair(nu, mu, r)
    integral = 2.0 * np.pi * np.sum(w * r * (phi**2 + chi**2))
    return 1.0 / np.sqrt(integral)


def eigenvalues_for_order(nu: float, m_max: int) -> np.ndarray:
    """First m_max eigenvalues mu for fixed order, ascending.

    The scan window grows adaptively; branch spacing approaches pi so a
    window of |nu| + (m_max + 3) pi almost always suffices on the first try.
    """
    f = eigenvalue_equation(nu)
    hi = abs(nu) + (m_max + 3) * np.pi + 2.0
    for _ in range(6):
        try:
            return find_roots(f, hi, m_max)
        except RootCountError:
            hi *= 1.6
    raise RootCountError(
        f"could not find {m_max} eigenvalues for nu={nu} below mu={hi:g}"
    )


def build_mode(l: int, m: int, alpha: float) -> BasisMode:
    nu = l - alpha
    mu = float(eigenvalues_for_order(nu, m)[m - 1])
    return BasisMode(
        l=l, m=m, nu=nu, mu=mu, regime=classify_regime(nu),
        norm=_mode_norm(nu, mu),
    )


@dataclass(frozen=True)
class BasisSet:
    """All modes of a rectangular (l, m) truncation at one flux value."""

    alpha: float
    l_values: tuple[int, ...]
    m_max: int
    modes: tuple[BasisMode, ...]

    def __len__(self) -> int:
        return len(self.modes)

    def block(self, l: int) -> tuple[BasisMode, ...]:
        i = self.l_values.index(l) * self.m_max
        return self.modes[i:i + self.m_max]

    @property
    def mu(self) -> np.ndarray:
        return np.array([md.mu for md in self.modes])

    @property
    def norms(self) -> np.ndarray:
        return np.array([md.norm for md in self.modes])


def build_basis(
    alpha: float,
    l_max: int,
    m_max: int,
    l_range: tuple[int, int] | None = None,
) -> BasisSet:
    """Modes for all |l| <= l_max (or l in l_range), 1 <= m <= m_max.

    Modes are ordered l-major, m ascending within each l; mu is strictly
    increasing in m for fixed l by construction of the root scan.
    """
    if m_max < 1 or l_max < 0:
        raise ValueError("truncation bounds must be positive")
    lo, hi = l_range if l_range is not None else (-l_max, l_max)
    l_values = tuple(range(lo, hi + 1))
    modes = []
    for l in l_values:
        nu = l - alpha
        mus = eigenvalues_for_order(nu, m_max)
        regime = classify_regime(nu)
        for m, mu in enumerate(mus, start=1):
            modes.append(
                BasisMode(l=l, m=m, nu=nu, mu=float(mu), regime=regime,
                          norm=_mode_norm(nu, float(mu)))
            )
    return BasisSet(alpha=alpha, l_values=l_values, m_max=m_max,
                    modes=tuple(modes))


def radial_table(
    basis: BasisSet, r: np.ndarray, weight_by_norm: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """(phi, chi) values of every mode on a radial grid, shape (dim, len(r)).

    With weight_by_norm the rows carry the normalization factor N, which is
    what reconstruction and assembly want.
    """
    r = np.asarray(r, dtype=float)
    dim = len(basis)
    phi_tab = np.empty((dim, r.size))
    chi_tab = np.empty((dim, r.size))
    for i, mode in enumerate(basis.modes):
        phi, chi = radial_pair(mode.nu, mode.mu, r)
        scale = mode.norm if weight_by_norm else 1.0
        phi_tab[i] = scale * phi
        chi_tab[i] = scale * chi
    return phi_tab, chi_tab


def evaluate_mode(mode: BasisMode, r, theta) -> tuple[np.ndarray, np.ndarray]:
    """Spinor components (psi1, psi2) of one normalized mode.

    psi1 = N phi(r) e^{i l theta}, psi2 = i N chi(r) e^{i (l+1) theta};
    r and theta broadcast against each other.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi, chi = radial_pair(mode.nu, mode.mu, r)
    psi1 = mode.norm * phi * np.exp(1j * mode.l * theta)
    psi2 = 1j * mode.norm * chi * np.exp(1j * (mode.l + 1) * theta)
    return psi1, psi2


def boundary_residual(mode: BasisMode) -> float:
    """|chi(1)/phi(1) - 1|; the infinite-mass wall condition at r = 1."""
    phi, chi = radial_pair(mode.nu, mode.mu, np.array([1.0]))
    return float(abs(chi[0] / phi[0] - 1.0))


def basis_to_csv(basis: BasisSet, path) -> None:
    """Reproducibility dump: one row per mode."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "m", "nu", "mu", "regime", "norm"])
        for md in basis.modes:
            writer.writerow(
                [md.l, md.m, repr(md.nu), repr(md.mu), md.regime.value,
                 repr(md.norm)]
            )
