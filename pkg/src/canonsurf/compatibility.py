"""Numerical residuals of the compatibility equations.

Evaluators for the general Gauss and Codazzi equations of an arbitrary chart,
their principal-chart forms, and the canonical-parameter equation that ties a
pair of invariant fields (nu1, nu2) or (K, H) to an actual surface. Residuals
converge as O(h^2) on compatible data and stall at a floor on incompatible
data; `compatibility_floor` turns that contrast into a yes/no test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import InvariantGrid, require_umbilic_free
from .errors import NotPrincipalError, RegularityError
from .grid import (
    BaseIndex,
    Grid2,
    cumulative_integral_u,
    cumulative_integral_v,
    cumtrapz_1d,
    partial_u,
    partial_v,
    same_geometry,
)
from .invariants import FormGrid, is_principal
from .reports import DEFAULT_MARGIN, ResidualReport, make_report


def _det3(r0, r1, r2):
    # rows are triples of arrays
    a, b, c = r0
    d, e, f = r1
    g, h, i = r2
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def gauss_residual_general(forms: FormGrid, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    """K - (Gauss equation right-hand side) for an arbitrary chart."""
    E, F, G = forms.E.values, forms.F.values, forms.G.values
    L, M, N = forms.L.values, forms.M.values, forms.N.values
    W = forms.W.values
    if np.any(W < 1e-14):
        raise RegularityError("W = sqrt(EG - F^2) vanishes somewhere on the grid")
    geo = forms.geometry
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values
    E_u, E_v = d_u(E), d_v(E)
    F_u, F_v = d_u(F), d_v(F)
    G_u, G_v = d_u(G), d_v(G)
    K = (L * N - M * M) / (W * W)
    rhs = -(d_v((E_v - F_u) / W) + d_u((G_u - F_v) / W)) / (2.0 * W)
    rhs -= _det3((E, F, G), (E_u, F_u, G_u), (E_v, F_v, G_v)) / (4.0 * W**4)
    return make_report("gauss-general", geo.like(K - rhs), margin)


def codazzi_residual_general(forms: FormGrid, margin: int = DEFAULT_MARGIN):
    """Residuals of the two general Codazzi equations."""
    E, F, G = forms.E.values, forms.F.values, forms.G.values
    L, M, N = forms.L.values, forms.M.values, forms.N.values
    W = forms.W.values
    if np.any(W < 1e-14):
        raise RegularityError("W = sqrt(EG - F^2) vanishes somewhere on the grid")
    geo = forms.geometry
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values
    mean_term = E * N - 2.0 * F * M + G * L
    r1 = (2.0 * W * W * (d_v(L) - d_u(M))
          - mean_term * (d_v(E) - d_u(F))
          - _det3((E, F, G), (L, M, N), (d_u(E), d_u(F), d_u(G))))
    r2 = (2.0 * W * W * (d_v(M) - d_u(N))
          - mean_term * (d_v(F) - d_u(G))
          - _det3((E, F, G), (L, M, N), (d_v(E), d_v(F), d_v(G))))
    return (make_report("codazzi-general-1", geo.like(r1), margin),
            make_report("codazzi-general-2", geo.like(r2), margin))


def codazzi_residual_principal(nu1: Grid2, nu2: Grid2, E: Grid2, G: Grid2,
                               margin: int = DEFAULT_MARGIN):
    """Residuals of E_v/2E = -(nu1)_v/(nu1-nu2) and G_u/2G = (nu2)_u/(nu1-nu2)."""
    same_geometry(nu1, nu2, E, G)
    require_umbilic_free(nu1.values, nu2.values)
    gap = nu1.values - nu2.values
    r1 = partial_v(E).values / (2.0 * E.values) + partial_v(nu1).values / gap
    r2 = partial_u(G).values / (2.0 * G.values) - partial_u(nu2).values / gap
    return (make_report("codazzi-principal-1", nu1.like(r1), margin),
            make_report("codazzi-principal-2", nu1.like(r2), margin))


def gauss_residual_principal(forms: FormGrid, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    """Gauss equation residual in a principal chart (F = M = 0)."""
    E, G = forms.E.values, forms.G.values
    if not is_principal(E, forms.F.values, G, forms.M.values):
        raise NotPrincipalError("the principal-chart Gauss equation needs F = M = 0")
    geo = forms.geometry
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values
    root = np.sqrt(E * G)
    lhs = forms.L.values * forms.N.values / (E * G)
    rhs = -(d_v(d_v(E) / root) + d_u(d_u(G) / root)) / (2.0 * root)
    return make_report("gauss-principal", geo.like(lhs - rhs), margin)


@dataclass(frozen=True)
class CanonicalFactors:
    """Exponential path-integral factors of the canonical-parameter equations.

    Psi1/Psi2 belong to the (nu1, nu2) route, Phi1/Phi2 to the (K, H) route;
    all four are strictly positive and exactly 1 at the base node.
    """

    Psi1: Grid2
    Psi2: Grid2
    Phi1: Grid2
    Phi2: Grid2
    base: BaseIndex


def _mixed_path_exponent(field_over_gap_u: np.ndarray, field_over_gap_v: np.ndarray,
                         geo: Grid2, base: BaseIndex, u_integral_full: bool):
    """Path exponent with one full cumulative integral and one base-line integral.

    With u_integral_full, integrate the u-integrand over every row and the
    v-integrand along the base column only (the Psi2/Phi2 pattern); otherwise
    integrate the v-integrand over every column and the u-integrand along the
    base row (the Psi1/Phi1 pattern).
    """
    if u_integral_full:
        full = cumulative_integral_u(geo.like(field_over_gap_u), base).values
        line = cumtrapz_1d(field_over_gap_v[base.i0, :], geo.dv, base.j0)[None, :]
    else:
        full = cumulative_integral_v(geo.like(field_over_gap_v), base).values
        line = cumtrapz_1d(field_over_gap_u[:, base.j0], geo.du, base.i0)[:, None]
    return full + line


def canonical_factors(inv: InvariantGrid) -> CanonicalFactors:
    """All four canonical factors of an invariant grid (either mode)."""
    nu1, nu2 = inv.nu_arrays()
    K, H = inv.kh_arrays()
    gap = nu1 - nu2
    geo = inv.geometry
    base = inv.base
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values

    psi1 = np.exp(-_mixed_path_exponent(d_u(nu1) / gap, d_v(nu1) / gap, geo, base, False))
    psi2 = np.exp(_mixed_path_exponent(d_u(nu2) / gap, d_v(nu2) / gap, geo, base, True))
    half = 2.0 * np.sqrt(H * H - K)  # |nu1 - nu2|, valid in both modes
    phi1 = np.exp(-_mixed_path_exponent(d_u(H) / half, d_v(H) / half, geo, base, False))
    phi2 = np.exp(_mixed_path_exponent(d_u(H) / half, d_v(H) / half, geo, base, True))
    like = geo.like
    return CanonicalFactors(like(psi1), like(psi2), like(phi1), like(phi2), base)


def gauss_residual_canonical(inv: InvariantGrid, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    """Residual of the canonical-parameter Gauss equation in the nu route."""
    if inv.mode != "nu":
        raise ValueError("gauss_residual_canonical expects a nu-mode grid; "
                         "use gauss_residual_canonical_kh for KH data")
    nu1, nu2 = inv.nu_arrays()
    gap = nu1 - nu2
    geo = inv.geometry
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values
    fac = canonical_factors(inv)
    p1, p2 = fac.Psi1.values, fac.Psi2.values
    lhs = nu1 * nu2 * p1 * p2
    rhs = d_v(d_v(nu1) / gap * p1 / p2) / inv.b - d_u(d_u(nu2) / gap * p2 / p1) / inv.a
    return make_report("gauss-canonical", geo.like(lhs - rhs), margin)


def gauss_residual_canonical_kh(inv: InvariantGrid, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    """Residual of the canonical-parameter Gauss equation in the (K, H) route."""
    K, H = inv.kh_arrays()
    root = np.sqrt(H * H - K)
    geo = inv.geometry
    d_u = lambda vals: partial_u(geo.like(vals)).values
    d_v = lambda vals: partial_v(geo.like(vals)).values
    fac = canonical_factors(inv)
    q1, q2 = fac.Phi1.values, fac.Phi2.values
    lhs = 2.0 * K / root * q1 * q2
    rhs = (d_v(q1 / q2 * d_v(H + root) / root) / inv.b
           - d_u(q2 / q1 * d_u(H - root) / root) / inv.a)
    return make_report("gauss-canonical-kh", geo.like(lhs - rhs), margin)


@dataclass(frozen=True)
class FloorCheck:
    """Outcome of the residual floor test at two grid resolutions."""

    fine_max_abs: float
    coarse_max_abs: float
    ratio: float
    compatible: bool


def _subsample(inv: InvariantGrid) -> InvariantGrid:
    g = inv.geometry
    su = inv.base.i0 % 2
    sv = inv.base.j0 % 2
    f1 = inv.field1.values[su::2, sv::2]
    f2 = inv.field2.values[su::2, sv::2]
    sub = lambda vals: Grid2(g.u0 + su * g.du, g.v0 + sv * g.dv, 2 * g.du, 2 * g.dv, vals)
    return InvariantGrid(inv.mode, sub(f1), sub(f2), inv.a, inv.b,
                         BaseIndex(inv.base.i0 // 2, inv.base.j0 // 2))


def compatibility_floor(inv: InvariantGrid, margin: int = DEFAULT_MARGIN,
                        min_ratio: float = 1.5) -> FloorCheck:
    """Compare the canonical Gauss residual at full and halved resolution.

    Discretization error drops by about 4 when the grid is refined, so data
    whose residual shrinks by less than min_ratio from the subsampled grid to
    the full grid is declared incompatible.
    """
    residual = gauss_residual_canonical if inv.mode == "nu" else gauss_residual_canonical_kh
    fine = residual(inv, margin).max_abs
    coarse = residual(_subsample(inv), margin).max_abs
    if fine == 0.0 and coarse == 0.0:
        return FloorCheck(fine, coarse, float("inf"), True)
    ratio = coarse / fine if fine > 0 else float("inf")
    return FloorCheck(fine, coarse, ratio, bool(ratio >= min_ratio))
