"""Decay of metastable states in uniformly scaled potentials."""

from ._core import (
    BarrierModel,
    DeltaModel,
    PhysicalConstants,
    Resonance,
    ScaleLaw,
    __version__,
    barrier_C2,
    barrier_resonance,
    barrier_roots,
    delta_C2,
    delta_resonance,
    run_task,
    scan_C2,
    t_of_tau,
    tau_of_t,
)

__all__ = [
    "BarrierModel",
    "DeltaModel",
    "PhysicalConstants",
    "Resonance",
    "ScaleLaw",
    "__version__",
    "barrier_C2",
    "barrier_resonance",
    "barrier_roots",
    "delta_C2",
    "delta_resonance",
    "run_task",
    "scan_C2",
    "t_of_tau",
    "tau_of_t",
]
