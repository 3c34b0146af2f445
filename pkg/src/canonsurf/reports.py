"""Residual reports: named residual grids with interior max-abs and rms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid2

DEFAULT_MARGIN = 2


@dataclass(frozen=True)
class ResidualReport:
    """A named residual field with interior statistics.

    max_abs and rms are taken over the grid minus `margin` boundary layers,
    where the one-sided stencils would otherwise pollute convergence rates.
    """

    name: str
    residual: Grid2
    max_abs: float
    rms: float
    margin: int

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_abs": self.max_abs,
            "rms": self.rms,
            "margin": self.margin,
            "grid_shape": [self.residual.nu, self.residual.nv],
        }


def interior(values: np.ndarray, margin: int) -> np.ndarray:
    m_u = min(margin, (values.shape[0] - 1) // 2)
    m_v = min(margin, (values.shape[1] - 1) // 2)
    return values[m_u:values.shape[0] - m_u, m_v:values.shape[1] - m_v]


def make_report(name: str, residual: Grid2, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    inner = interior(residual.values, margin)
    return ResidualReport(
        name=name,
        residual=residual,
        max_abs=float(np.max(np.abs(inner))),
        rms=float(np.sqrt(np.mean(inner * inner))),
        margin=margin,
    )
