"""Energy-optimal gate synthesis by sub-Riemannian geodesic shooting."""

from ._geoctl import (
    GeoctlError,
    NoiseParams,
    Problem,
    SampleBank,
    algebra_dimension,
    average_gate_fidelity,
    drift_coefficient,
    fidelity,
    generate_bank,
    krotov,
    mu,
    named_gate,
    no_control_fidelity,
    read_gate,
    synthesize,
)

__all__ = [
    "GeoctlError",
    "NoiseParams",
    "Problem",
    "SampleBank",
    "algebra_dimension",
    "average_gate_fidelity",
    "drift_coefficient",
    "fidelity",
    "generate_bank",
    "krotov",
    "mu",
    "named_gate",
    "no_control_fidelity",
    "read_gate",
    "synthesize",
]
