"""Two-parameter sweep of the cost-savings factor and per-industry variant bands.

Every estimate is linear in ``phi = task_fraction * labor_savings / divisor``,
so the sweep evaluates the pipeline once per variant at a reference ``phi``
and scales that aggregate for each grid cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .impact import AggregateImpact, ImpactRow
from .variants import VARIANTS, Band, Variant

QUANTITIES = ("output", "energy", "emissions")


@dataclass(frozen=True)
class SensitivityCell:
    task_fraction: float
    labor_savings: float
    variant: Variant
    delta_energy: float  # PJ
    delta_emissions: float  # ktCO2


@dataclass(frozen=True)
class SensitivityGrid:
    task_fraction_axis: tuple[float, ...]
    labor_savings_axis: tuple[float, ...]
    cells: tuple[SensitivityCell, ...]

    def cell(self, task_fraction: float, labor_savings: float, variant: Variant = Variant.CENTRAL) -> SensitivityCell:
        for c in self.cells:
            if c.task_fraction == task_fraction and c.labor_savings == labor_savings and c.variant == variant:
                return c
        raise KeyError((task_fraction, labor_savings, variant))


def even_axis(steps: int) -> tuple[float, ...]:
    """``steps`` evenly spaced points on [0, 1], endpoints included."""
    if steps < 1:
        raise ValueError("an axis needs at least one point")
    if steps == 1:
        return (0.0,)
    return tuple(i / (steps - 1) for i in range(steps))


def _check_axis(name: str, axis: Sequence[float]) -> tuple[float, ...]:
    axis = tuple(float(x) for x in axis)
    if not axis:
        raise ValueError(f"{name} axis is empty")
    if any(not 0.0 <= x <= 1.0 for x in axis):
        raise ValueError(f"{name} axis values must lie in [0, 1]")
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise ValueError(f"{name} axis must be strictly increasing")
    return axis


def sweep(
    evaluate: Callable[[float], AggregateImpact],
    task_fraction_axis: Sequence[float] = even_axis(21),
    labor_savings_axis: Sequence[float] = even_axis(21),
    annualization_divisor: float = 1.0,
) -> SensitivityGrid:
    """Aggregate energy and emissions over a grid of the two cost-savings parameters.

    ``evaluate(phi)`` must return the aggregate impact for a given cost-savings
    factor with exposure and accounts held fixed; it is called once, at the
    largest ``phi`` on the grid.
    """
    a_axis = _check_axis("task_fraction", task_fraction_axis)
    s_axis = _check_axis("labor_savings", labor_savings_axis)
    if not annualization_divisor > 0:
        raise ValueError("annualization_divisor must be positive")

    phi_ref = a_axis[-1] * s_axis[-1] / annualization_divisor
    base = evaluate(phi_ref) if phi_ref > 0 else None
    cells = []
    for a in a_axis:
        for s in s_axis:
            phi = a * s / annualization_divisor
            for variant in VARIANTS:
                if base is None or phi == 0:
                    de = dc = 0.0
                else:
                    ratio = phi / phi_ref
                    de = base.delta_energy[variant] * ratio
                    dc = base.delta_emissions[variant] * ratio
                cells.append(SensitivityCell(a, s, variant, de, dc))
    return SensitivityGrid(a_axis, s_axis, tuple(cells))


def variant_band(rows: Iterable[ImpactRow]) -> dict[str, dict[str, Band]]:
    """Per-industry (lower, central, upper) band of each quantity."""
    out = {}
    for row in sorted(rows, key=lambda r: r.wiod_code):
        bands = {}
        for q in QUANTITIES:
            band = row.band(q)
            if not isinstance(band, Band) or len(band) != 3:
                raise ValueError(f"{row.wiod_code}: {q} does not carry all three variants")
            bands[q] = band
        out[row.wiod_code] = bands
    return out
