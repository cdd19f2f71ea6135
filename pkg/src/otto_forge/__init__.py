"""Quantum Otto machines powered by non-thermal baths.

Per-stroke work/heat ledgers, efficiencies and coefficients of performance,
operating-regime classification, parameter sweeps, and an independent
truncated-Fock brute-force oracle for every analytic Gaussian-state formula.
"""

__version__ = "0.1.0"

from .errors import (
    CutoffSearchFailed,
    CutoffTooSmall,
    DensityNotPositive,
    InvalidExcess,
    NotApplicable,
    OttoForgeError,
)
from .thermo import (
    fictitious_temperature,
    invert_occupation,
    occupation,
    oscillator_energy,
    thermal_entropy,
)
from .gaussian import (
    GaussianModeState,
    delta_n,
    ergotropy_analytic,
    is_nonclassical,
    nonclassicality_threshold,
    state_energy,
)
from .fock import (
    FockDensity,
    build_fock_density,
    choose_cutoff,
    entropy_fock,
    ergotropy_fock,
    ergotropy_of_density,
)
from .cycles import (
    BathSpec,
    CycleConfig,
    CycleKind,
    DisplacedThermalBath,
    LawReport,
    RegimeTag,
    SecondKindBath,
    SqueezedDisplacedBath,
    SqueezedThermalBath,
    StrokeLedger,
    ThermalBath,
    audit_laws,
    classify_regime,
    modified_cycle,
    second_kind_cycle,
    standard_cycle,
)
from .sweeps import (
    AuditSummary,
    SweepAxis,
    SweepRow,
    SweepSpec,
    audit_campaign,
    emit_table,
    run_sweep,
)

__all__ = [
    "__version__",
    "OttoForgeError",
    "CutoffTooSmall",
    "CutoffSearchFailed",
    "DensityNotPositive",
    "NotApplicable",
    "InvalidExcess",
    "occupation",
    "invert_occupation",
    "oscillator_energy",
    "fictitious_temperature",
    "thermal_entropy",
    "GaussianModeState",
    "delta_n",
    "state_energy",
    "ergotropy_analytic",
    "is_nonclassical",
    "nonclassicality_threshold",
    "FockDensity",
    "build_fock_density",
    "ergotropy_fock",
    "ergotropy_of_density",
    "entropy_fock",
    "choose_cutoff",
    "BathSpec",
    "ThermalBath",
    "SqueezedThermalBath",
    "DisplacedThermalBath",
    "SqueezedDisplacedBath",
    "SecondKindBath",
    "CycleConfig",
    "CycleKind",
    "RegimeTag",
    "StrokeLedger",
    "LawReport",
    "standard_cycle",
    "modified_cycle",
    "second_kind_cycle",
    "classify_regime",
    "audit_laws",
    "SweepAxis",
    "SweepSpec",
    "SweepRow",
    "AuditSummary",
    "run_sweep",
    "emit_table",
    "audit_campaign",
]
