"""Entanglement diagnostics for layered variational circuits."""
from ._accel import backend_name
from .circuit import (
    CircuitError,
    CircuitSpec,
    GateRecord,
    StateVector,
    apply_cz,
    apply_layer,
    apply_rotation,
    energy,
    energy_and_gradient,
    energy_gradient,
    run_circuit,
)

__version__ = "0.1.0"
