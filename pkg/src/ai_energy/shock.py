"""Industry productivity shocks and their Domar-weighted aggregate.

The shock to industry k is the cost saving on its exposed wage bill,
relative to its output::

    dA_k / A_k = phi * exposed_wage_bill_k / y_k

which is the discrete form of Hulten's first-order result
``d log Y = lambda_k d log A_k`` with Domar weight ``lambda_k = y_k / sum(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .variants import Band, Variant

DEFAULT_TASK_FRACTION = 0.23
DEFAULT_LABOR_SAVINGS = 0.27


class ShockError(ValueError):
    pass


@dataclass(frozen=True)
class CostSavings:
    """Uniform cost-savings factor ``phi = task_fraction * labor_savings / annualization_divisor``."""

    task_fraction: float = DEFAULT_TASK_FRACTION
    labor_savings: float = DEFAULT_LABOR_SAVINGS
    annualization_divisor: float = 1.0

    def __post_init__(self):
        for name in ("task_fraction", "labor_savings"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if not self.annualization_divisor > 0:
            raise ValueError(f"annualization_divisor must be positive, got {self.annualization_divisor}")
        if not self.phi < 1.0:
            raise ValueError(f"cost-savings factor must be below 1, got {self.phi}")

    @property
    def phi(self) -> float:
        return self.task_fraction * self.labor_savings / self.annualization_divisor

    @classmethod
    def per_year(cls, task_fraction=DEFAULT_TASK_FRACTION, labor_savings=DEFAULT_LABOR_SAVINGS) -> "CostSavings":
        """Task share spread evenly over a ten-year adoption horizon."""
        return cls(task_fraction, labor_savings, annualization_divisor=10.0)


def _phi(phi) -> float:
    value = phi.phi if isinstance(phi, CostSavings) else float(phi)
    if value < 0:
        raise ValueError(f"cost-savings factor must be nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class ProductivityShock:
    wiod_code: str
    delta_a_over_a: Band

    def __post_init__(self):
        for v in self.delta_a_over_a:
            if not 0.0 <= v < 1.0:
                raise ShockError(f"{self.wiod_code}: productivity shock {v} outside [0, 1)")
        if not self.delta_a_over_a.is_ordered():
            raise ShockError(f"{self.wiod_code}: shocks not ordered lower <= central <= upper: {self.delta_a_over_a}")


def productivity_shock(wiod_code: str, exposed_wage_bill: Band, output: float, phi) -> ProductivityShock:
    """Per-variant shock from exposed wage bill and output, both in $BB."""
    phi = _phi(phi)
    if output < 0:
        raise ShockError(f"{wiod_code}: negative output {output}")
    if output == 0:
        if any(exposed_wage_bill) and phi > 0:
            raise ShockError(f"{wiod_code}: shock undefined for zero output with nonzero exposed wage bill")
        return ProductivityShock(wiod_code, Band.zero())
    return ProductivityShock(wiod_code, exposed_wage_bill.map(lambda w: phi * w / output))


def domar_weights(outputs: Mapping[str, float]) -> dict[str, float]:
    total = sum(outputs[k] for k in sorted(outputs))
    if not total > 0:
        raise ShockError("aggregate output must be positive to form Domar weights")
    return {k: outputs[k] / total for k in sorted(outputs)}


def aggregate_log_output_change(shocks: Iterable[ProductivityShock], weights: Mapping[str, float]) -> Band:
    """First-order aggregate output change: sum of Domar-weighted industry shocks."""
    by_code = {s.wiod_code: s for s in shocks}
    if set(by_code) != set(weights):
        raise ShockError(
            f"shock and weight code sets differ: {sorted(set(by_code) ^ set(weights))}"
        )
    out = []
    for variant in (Variant.LOWER, Variant.CENTRAL, Variant.UPPER):
        out.append(sum(weights[k] * by_code[k].delta_a_over_a[variant] for k in sorted(weights)))
    return Band(*out)
