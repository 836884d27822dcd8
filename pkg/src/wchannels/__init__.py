"""Teleportation and dense coding over GHZ- and W-class three-qubit channels."""

from .qcore import (
    MeasurementBasis,
    MeasurementOutcome,
    PureState,
    QOperator,
    apply,
    equal_up_to_global_phase,
    fidelity,
    ket,
    measure,
    permute,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "MeasurementBasis",
    "MeasurementOutcome",
    "PureState",
    "QOperator",
    "apply",
    "equal_up_to_global_phase",
    "fidelity",
    "ket",
    "measure",
    "permute",
    "tensor",
]
