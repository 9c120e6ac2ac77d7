"""Quench fidelity and dynamical quantum phase transitions in two-band models.

Thin wrapper over the C++ core. Parameter vectors are plain sequences in the
model's parameter order; for the built-in ``"xy"`` model that is ``(h, eta)``.
"""

from ._core import (
    ConfigError,
    CriticalBoundary,
    DomainError,
    DVector,
    GapClosed,
    PreconditionFailed,
    QfidError,
    analyze_modes,
    critical_times,
    dqpt_exists,
    dvector,
    ground_state,
    lbar_k,
    loschmidt_k,
    loschmidt_series,
    models,
    numeric_lbar,
    quench_fidelity_k,
    rates,
    rates_thermodynamic,
    relation_lbar_from_fidelity,
    run_cli,
    scan,
    verify,
    xy_boundary_fidelities,
    xy_equilibrium_phase,
    xy_winding_number,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
