"""Potentials, partition sums, pressure and transfer operators."""
from __future__ import annotations

from .potential import (Caps, Potential, SeparationTimes, cohomology_u, induced_potential,
                        log_weight, potential_bounds, potential_value, separation)
from .pressure import (DiscriminantTable, PressureEstimate, ZInterval, discriminant_scan,
                       gurevich_pressure, induced_envelope, induced_z1, is_cyclically_admissible,
                       partition_sum, tower_sum_exact)
from .transfer import (CylinderTable, InducedOperator, RenewalOperator, SpectralReport,
                       cylinder_words, induced_operator, power_iterate, renewal_operator,
                       transfer_apply)

__all__ = [
    "Caps", "Potential", "SeparationTimes", "cohomology_u", "induced_potential", "log_weight",
    "potential_bounds", "potential_value", "separation", "DiscriminantTable", "PressureEstimate",
    "ZInterval", "discriminant_scan", "gurevich_pressure", "induced_envelope", "induced_z1",
    "is_cyclically_admissible", "partition_sum", "tower_sum_exact", "CylinderTable",
    "InducedOperator", "RenewalOperator", "SpectralReport", "cylinder_words", "induced_operator",
    "power_iterate", "renewal_operator", "transfer_apply",
]
