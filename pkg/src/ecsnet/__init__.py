"""Discrete multi-transmitter neuronal networks with neuronal competition."""

from .engine import Deactivation, StepResult, margin, resolve_step
from .model import (
    EcsState,
    Follower,
    NetworkSpec,
    NeuronRuntime,
    NeuronSpec,
    Oscillator,
    Quantity,
    StructuralError,
    Tonic,
    ValidationError,
    format_quantity,
    parse_quantity,
)
from .oracle import check_fixed_point, reference_resolve
from .scenario import dump_scenario, load_bundled, parse_scenario, write_trace_csv
from .simulator import RhythmPattern, Trace, detect_rhythm, run

__all__ = [
    "Deactivation",
    "EcsState",
    "Follower",
    "NetworkSpec",
    "NeuronRuntime",
    "NeuronSpec",
    "Oscillator",
    "Quantity",
    "RhythmPattern",
    "StepResult",
    "StructuralError",
    "Tonic",
    "Trace",
    "ValidationError",
    "check_fixed_point",
    "detect_rhythm",
    "dump_scenario",
    "format_quantity",
    "load_bundled",
    "margin",
    "parse_quantity",
    "parse_scenario",
    "reference_resolve",
    "resolve_step",
    "run",
    "write_trace_csv",
]
