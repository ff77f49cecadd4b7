"""Galerkin eigensolver for the mapped Dirac billiard.

The chaotic billiard's spinor eigenstates are expanded over the circular
flux-billiard modes.  Projecting the mapped wave equation onto that basis
gives a dense Hermitian matrix whose entries couple modes with angular
numbers differing by at most 2 (the cubic map has only three boundary
harmonics).  Eigenvalues lambda of the matrix give wavevectors
k = 1/sqrt(lambda); eigenvector components V_lm give expansion
coefficients c_lm = V_lm / mu_lm.

The angular integral has the closed form (including the map normalization
1 + 2b^2 + 3c^2 folded in here, and only here):

    l = l'      2 pi (1 + 4 b^2 r^2 + 9 c^2 r^4) / norm^2
    l = l' +- 1 2 pi (2 b r + 6 b c r^3 e^{+- i delta}) / norm^2
    l = l' +- 2 2 pi (3 c r^2 e^{+- i delta}) / norm^2
    else        0

Radial integrals use the shared Gauss-Legendre rule of quadrature.py.
Matrix assembly is exact-Hermitian only up to rounding because opposite
bands are computed independently; the constructor verifies the residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .confmap import BilliardShape
from .diskbasis import BasisSet, radial_table
from .quadrature import DEFAULT_RADIAL_ORDER, gauss_rule, radial_rule


class HermiticityError(RuntimeError):
    """Assembled matrix failed the Hermiticity self-check."""


class EigensolverError(RuntimeError):
    """LAPACK failed to converge on the dense eigenproblem."""


HERMITICITY_RTOL = 1e-12

#: calibrated so that k below the window edge move by < 1e-4 when the
#: truncation grows by 8 in both l and m (see test_spectral)
VALIDATED_WINDOW_SAFETY = 0.95


def angular_integral(shape: BilliardShape, l: int, l_prime: int, r):
    """Closed-form angular integral of |w'|^2 e^{i(l'-l)theta} over theta.

    Vectorized over r; returns complex values (zero outside |l-l'| <= 2).
    The map normalization is folded in, so this is the integral for the
    *normalized* map of confmap.
    """
    r = np.asarray(r, dtype=float)
    b, c = shape.b, shape.c
    n2 = shape.norm**2
    dl = l - l_prime
    if dl == 0:
        out = 2 * np.pi * (1.0 + 4 * b**2 * r**2 + 9 * c**2 * r**4) / n2
        return out.astype(complex)
    if abs(dl) == 1:
        phase = np.exp(1j * np.sign(dl) * shape.delta)
        return 2 * np.pi * (2 * b * r + 6 * b * c * r**3 * phase) / n2
    if abs(dl) == 2:
        phase = np.exp(1j * np.sign(dl) * shape.delta)
        return 2 * np.pi * (3 * c * r**2 * phase) / n2
    return np.zeros_like(r, dtype=complex)


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense Hermitian coupling matrix over a basis truncation."""

    entries: np.ndarray
    basis: BasisSet
    shape: BilliardShape
    hermiticity_residual: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def assemble(
    basis: BasisSet,
    shape: BilliardShape,
    n_quad: int = DEFAULT_RADIAL_ORDER,
) -> CouplingMatrix:
    """Build the coupling matrix entry by entry over the selection bands.

    Every entry is (N N'/mu mu') int r (phi phi' + chi chi') I(l, l', r) dr
    with the simplified radial pairs.  Entries outside |l - l'| <= 2 are
    exactly zero.  Opposite bands are integrated independently, so the
    Hermiticity check is meaningful; the residual must stay below
    HERMITICITY_RTOL relative to the largest entry.
    """
    r, w = radial_rule(n_quad)
    phi_tab, chi_tab = radial_table(basis, r, weight_by_norm=True)
    mu = basis.mu
    phi_tab = phi_tab / mu[:, None]
    chi_tab = chi_tab / mu[:, None]

    l_values = list(basis.l_values)
    m_max = basis.m_max
    dim = len(basis)
    M = np.zeros((dim, dim), dtype=complex)

    b, c, n2 = shape.b, shape.c, shape.norm**2
    phase = np.exp(1j * shape.delta)
    # polynomial moments of the angular integral per angular offset;
    # delta-l of 0 needs powers (0, 2, 4), 1 needs (1, 3), 2 needs (2,)
    wr = {p: w * r ** (p + 1) for p in range(5)}

    def band_coeffs(dl: int):
        if dl == 0:
            return {0: 2 * np.pi / n2, 2: 8 * np.pi * b**2 / n2,
                    4: 18 * np.pi * c**2 / n2}
        ph = phase if dl > 0 else np.conj(phase)
        if abs(dl) == 1:
            return {1: 4 * np.pi * b / n2, 3: 12 * np.pi * b * c * ph / n2}
        return {2: 6 * np.pi * c * ph / n2}

    index = {l: i * m_max for i, l in enumerate(l_values)}
    for l in l_values:
        i0 = index[l]
        rows_p = phi_tab[i0:i0 + m_max]
        rows_c = chi_tab[i0:i0 + m_max]
        for dl in (-2, -1, 0, 1, 2):
            lp = l - dl
            if lp not in index:
                continue
            j0 = index[lp]
            cols_p = phi_tab[j0:j0 + m_max]
            cols_c = chi_tab[j0:j0 + m_max]
            block = np.zeros((m_max, m_max), dtype=complex)
            for p, coef in band_coeffs(dl).items():
                s_p = (rows_p * wr[p]) @ cols_p.T + (rows_c * wr[p]) @ cols_c.T
                block += coef * s_p
            M[i0:i0 + m_max, j0:j0 + m_max] = block

    scale = np.max(np.abs(M))
    residual = float(np.max(np.abs(M - M.conj().T)) / scale)
    if residual > HERMITICITY_RTOL:
        raise HermiticityError(
            f"Hermiticity residual {residual:.3e} exceeds {HERMITICITY_RTOL:.0e}; "
            "quadrature underflow or basis inconsistency"
        )
    return CouplingMatrix(entries=M, basis=basis, shape=shape,
                          hermiticity_residual=residual)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-wavevectors and expansion coefficients of one billiard/flux."""

    k: np.ndarray                 # ascending wavevectors
    coeffs: np.ndarray            # (n_states, dim) complex, unit w-norm rows
    basis: BasisSet
    shape: BilliardShape
    dropped_nonpositive: int      # truncation artifacts lambda <= 0

    @property
    def alpha(self) -> float:
        return self.basis.alpha

    @property
    def n_states(self) -> int:
        return len(self.k)

    @property
    def truncation(self) -> tuple[int, int]:
        return (max(abs(l) for l in self.basis.l_values), self.basis.m_max)

    def validated_kmax(self, safety: float = VALIDATED_WINDOW_SAFETY) -> float:
        """Upper edge of the trusted window (repo policy, see docs).

        A state at wavevector k has local disk-plane wavenumber k |w'(z)|,
        so resolving it at the wall needs angular numbers up to
        k max|w'| <= l_max and radial eigenvalues mu >= k max|w'|.  The
        safety factor is calibrated against truncation-growth runs
        (l_max -> l_max + 8 shifting the lowest window states < 1e-4).
        """
        phi = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        stretch = np.sqrt(np.max(self.shape.jacobian_sq(np.exp(1j * phi))))
        l_max, m_max = self.truncation
        mu_reach = float(np.max(self.basis.mu))
        return safety * min(l_max, mu_reach) / stretch


def solve(M: CouplingMatrix) -> Spectrum:
    """Dense Hermitian eigendecomposition to wavevectors and coefficients.

    Nonpositive eigenvalues (truncation artifacts) are discarded and
    counted.  Coefficient rows are c_lm = V_lm k / mu_lm, which makes the
    reconstructed state unit-normalized under the |w'|^2 weight because
    <Psi|Psi>_w = V^dag M V = lambda for a unit eigenvector.
    """
    try:
        lam, vec = np.linalg.eigh(M.entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(str(exc)) from exc
    keep = lam > 0
    dropped = int(np.sum(~keep))
    lam = lam[keep]
    vec = vec[:, keep]
    k = 1.0 / np.sqrt(lam[::-1])
    vec = vec[:, ::-1]
    coeffs = (vec * (k[None, :] / M.basis.mu[:, None])).T
    return Spectrum(k=k, coeffs=np.ascontiguousarray(coeffs),
                    basis=M.basis, shape=M.shape,
                    dropped_nonpositive=dropped)


def solve_billiard(
    shape: BilliardShape,
    alpha: float,
    l_max: int,
    m_max: int,
    n_quad: int = DEFAULT_RADIAL_ORDER,
) -> Spectrum:
    """Convenience pipeline: basis, assembly, eigensolve."""
    from .diskbasis import build_basis

    basis = build_basis(alpha, l_max, m_max)
    return solve(assemble(basis, shape, n_quad=n_quad))


#: grids never sample below this radius; the punctured flux-line
#: neighbourhood is unresolved by construction
R_MIN = 1e-3


@dataclass(frozen=True)
class PolarGrid:
    """Quadrature-ready polar grid on the unit disk (minus r < R_MIN)."""

    r: np.ndarray          # radial nodes (Gauss-Legendre on [R_MIN, 1])
    r_weights: np.ndarray
    theta: np.ndarray      # uniform angles, implicit weight 2 pi / n

    @property
    def n_r(self) -> int:
        return len(self.r)

    @property
    def n_theta(self) -> int:
        return len(self.theta)

    def area_weights(self) -> np.ndarray:
        """dA = r dr dtheta as an (n_r, n_theta) array."""
        dth = 2 * np.pi / self.n_theta
        return (self.r * self.r_weights)[:, None] * np.full(self.n_theta, dth)

    def z(self) -> np.ndarray:
        return self.r[:, None] * np.exp(1j * self.theta[None, :])


def make_grid(n_r: int = 400, n_theta: int = 400) -> PolarGrid:
    r, w = gauss_rule(R_MIN, 1.0, n_r)
    theta = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    return PolarGrid(r=r, r_weights=w, theta=theta)


@dataclass
class WaveField:
    """One reconstructed spinor eigenstate on a polar grid."""

    grid: PolarGrid
    psi1: np.ndarray          # (n_r, n_theta) complex
    psi2: np.ndarray
    k: float
    state_index: int
    shape: BilliardShape
    jac: np.ndarray = field(default=None)         # |w'|^2 on the grid
    positions_w: np.ndarray = field(default=None)  # mapped coordinates

    def __post_init__(self):
        if self.jac is None:
            z = self.grid.z()
            self.jac = self.shape.jacobian_sq(z)
            self.positions_w = self.shape.map(z)

    @property
    def density(self) -> np.ndarray:
        return (np.abs(self.psi1) ** 2 + np.abs(self.psi2) ** 2)

    def norm_w(self) -> float:
        """Total probability under the |w'|^2 weight; should be 1."""
        return float(np.sum(self.density * self.jac * self.grid.area_weights()))


def _angular_phases(l_values: Sequence[int], theta: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.outer(l_values, theta))


def synthesize_states(
    spectrum: Spectrum,
    indices: Sequence[int],
    grid: PolarGrid,
    radial_tables: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Spinor components for several states at once on a polar grid.

    Returns (psi1, psi2) with shape (n_states, n_r, n_theta).  The heavy
    Bessel work (radial tables) can be shared across calls.
    """
    basis = spectrum.basis
    if radial_tables is None:
        radial_tables = radial_table(basis, grid.r, weight_by_norm=True)
    phi_tab, chi_tab = radial_tables
    c = spectrum.coeffs[np.asarray(indices, dtype=int)]
    n_states = c.shape[0]
    m_max = basis.m_max
    l_values = np.array(basis.l_values)
    n_l = len(l_values)

    # per-l radial profiles: G[comp][l] = C_l @ radial-block
    g1 = np.empty((n_states, n_l, grid.n_r), dtype=complex)
    g2 = np.empty_like(g1)
    for i, l in enumerate(l_values):
        sl = slice(i * m_max, (i + 1) * m_max)
        g1[:, i, :] = c[:, sl] @ phi_tab[sl]
        g2[:, i, :] = c[:, sl] @ chi_tab[sl]

    ph1 = _angular_phases(l_values, grid.theta)
    ph2 = _angular_phases(l_values + 1, grid.theta)
    psi1 = np.einsum("slr,lt->srt", g1, ph1, optimize=True)
    psi2 = 1j * np.einsum("slr,lt->srt", g2, ph2, optimize=True)
    return psi1, psi2


def reconstruct(
    spectrum: Spectrum, n: int, grid: PolarGrid | None = None,
) -> WaveField:
    """Sum the basis expansion of state n on a polar grid."""
    if not 0 <= n < spectrum.n_states:
        raise IndexError(f"state index {n} out of range")
    if grid is None:
        grid = make_grid()
    psi1, psi2 = synthesize_states(spectrum, [n], grid)
    return WaveField(grid=grid, psi1=psi1[0], psi2=psi2[0],
                     k=float(spectrum.k[n]), state_index=n,
                     shape=spectrum.shape)


def evaluate_states_at(
    spectrum: Spectrum,
    indices: Sequence[int],
    z_points: np.ndarray,
    radial_tables: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Spinor components of selected states at arbitrary disk points.

    Returns (psi1, psi2) of shape (n_states, n_points).  Used for orbit
    polyline sampling where a structured grid does not help.
    """
    z = np.asarray(z_points, dtype=complex).ravel()
    r = np.abs(z)
    theta = np.angle(z)
    basis = spectrum.basis
    if radial_tables is None:
        radial_tables = radial_table(basis, r, weight_by_norm=True)
    phi_tab, chi_tab = radial_tables
    l_arr = np.array([md.l for md in basis.modes])
    e1 = np.exp(1j * l_arr[:, None] * theta[None, :])
    e2 = np.exp(1j * (l_arr + 1)[:, None] * theta[None, :])
    c = spectrum.coeffs[np.asarray(indices, dtype=int)]
    psi1 = c @ (phi_tab * e1)
    psi2 = 1j * (c @ (chi_tab * e2))
    return psi1, psi2
