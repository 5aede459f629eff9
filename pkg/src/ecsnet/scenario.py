"""Scenario files and trace CSV.

A scenario is a JSON document (format version 1)::

    {
      "format": 1,
      "horizon": 20,
      "transmitters": ["a", "b"],
      "neurons": [
        {"name": "N1", "type": "tonic", "pir_gain": "2",
         "inhibition_threshold": "-1", "excitation_threshold": "1",
         "outputs": {"a": "1.1"}, "weights": {"b": "-1"}}
      ]
    }

Quantities are JSON strings holding an exact decimal (``"1.1"``) or ratio
(``"1/3"``); JSON numbers are refused for them. ``period`` is required for
oscillators and ``initial_state`` is optional for them; both are errors on
other neuron types. Missing weights and outputs are zero, ``pir_gain``
defaults to ``"1"`` and ``horizon`` may be omitted.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

from .model import (
    Follower,
    ModelError,
    NetworkSpec,
    NeuronSpec,
    Oscillator,
    Tonic,
    ValidationError,
    format_quantity,
    parse_quantity,
)
from .simulator import Trace

FORMAT_VERSION = 1
BUNDLED = ("hco.scenario", "lymnaea.scenario")

_TOP_FIELDS = {"format", "horizon", "transmitters", "neurons"}
_NEURON_FIELDS = {
    "name",
    "type",
    "period",
    "initial_state",
    "pir_gain",
    "inhibition_threshold",
    "excitation_threshold",
    "weights",
    "outputs",
}
_TYPES = {"oscillator", "tonic", "follower"}


class ScenarioSyntaxError(ModelError):
    def __init__(self, msg: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {msg}")


@dataclass(frozen=True)
class Scenario:
    spec: NetworkSpec
    horizon: Optional[int] = None


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text.

    Raises :class:`ScenarioSyntaxError` for malformed JSON and
    :class:`ValidationError` with every problem found otherwise.
    """
    try:
        doc = json.loads(text, parse_float=_float_literal)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, exc.lineno, exc.colno) from None

    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ValidationError(["scenario must be a JSON object"])
    for key in sorted(set(doc) - _TOP_FIELDS):
        errors.append(f"unknown field {key!r}")

    version = doc.get("format")
    if version != FORMAT_VERSION:
        errors.append(f"format must be {FORMAT_VERSION}, got {version!r}")

    horizon = doc.get("horizon")
    if horizon is not None and not (_is_int(horizon) and horizon >= 0):
        errors.append("horizon must be a nonnegative integer")

    transmitters = doc.get("transmitters", [])
    if not isinstance(transmitters, list) or not all(isinstance(t, str) and t for t in transmitters):
        errors.append("transmitters must be a list of non-empty names")
        transmitters = []
    elif len(set(transmitters)) != len(transmitters):
        errors.append("transmitter names must be unique")

    raw_neurons = doc.get("neurons", [])
    if not isinstance(raw_neurons, list):
        errors.append("neurons must be a list")
        raw_neurons = []

    neurons, states = [], []
    for k, raw in enumerate(raw_neurons):
        neuron, s0 = _parse_neuron(raw, k, transmitters, errors)
        if neuron is not None:
            neurons.append(neuron)
            states.append(s0)

    if not errors:
        try:
            spec = NetworkSpec(tuple(transmitters), tuple(neurons), tuple(states))
        except ValidationError as exc:
            errors.extend(exc.violations)
    if errors:
        raise ValidationError(errors)
    return Scenario(spec, horizon)


def _float_literal(text: str) -> "_Float":
    return _Float(text)


class _Float(str):
    """Marks a bare JSON number with a fraction part so it can be refused."""


def _parse_neuron(raw: Any, k: int, transmitters: list[str], errors: list[str]):
    if not isinstance(raw, dict):
        errors.append(f"neuron #{k}: must be an object")
        return None, None
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        errors.append(f"neuron #{k}: name must be a non-empty string")
        return None, None
    who = f"neuron {name!r}"
    start = len(errors)

    for key in sorted(set(raw) - _NEURON_FIELDS):
        errors.append(f"{who}: unknown field {key!r}")

    def quantity(field: str, default: Optional[str] = None) -> Optional[Fraction]:
        v = raw.get(field, default)
        if v is None:
            errors.append(f"{who}: {field} is required")
            return None
        return _quantity(v, f"{who}: {field}", errors)

    p0 = quantity("inhibition_threshold")
    p1 = quantity("excitation_threshold")
    gain = quantity("pir_gain", "1")
    weights = _row(raw.get("weights", {}), "weights", who, transmitters, errors)
    outputs = _row(raw.get("outputs", {}), "outputs", who, transmitters, errors)

    kind_name = raw.get("type")
    kind = None
    state = raw.get("initial_state")
    if kind_name not in _TYPES:
        errors.append(f"{who}: type must be one of oscillator, tonic, follower")
    elif kind_name == "oscillator":
        period = raw.get("period")
        if not _is_int(period):
            errors.append(f"{who}: oscillator period must be an integer")
        else:
            kind = Oscillator(period)
        if state is not None and not _is_int(state):
            errors.append(f"{who}: initial_state must be an integer")
    else:
        kind = Tonic() if kind_name == "tonic" else Follower()
        for key in ("period", "initial_state"):
            if key in raw:
                errors.append(f"{who}: {key} is only valid for oscillator neurons")

    if None not in (p0, p1, gain):
        neuron = NeuronSpec(name, kind or Tonic(), p0, p1, gain, weights, outputs)
        errors.extend(neuron.violations(transmitters))
    if len(errors) > start:
        return None, None
    return neuron, state


def _quantity(v: Any, where: str, errors: list[str]) -> Optional[Fraction]:
    if isinstance(v, _Float) or _is_int(v):
        errors.append(f"{where}: numbers must be written as strings, e.g. \"{v}\"")
        return None
    if not isinstance(v, str):
        errors.append(f"{where}: expected a decimal string")
        return None
    try:
        return parse_quantity(v)
    except ValueError as exc:
        errors.append(f"{where}: {exc}")
        return None


def _row(raw: Any, field: str, who: str, transmitters: list[str], errors: list[str]):
    row = [Fraction(0)] * len(transmitters)
    if not isinstance(raw, dict):
        errors.append(f"{who}: {field} must map transmitter names to amounts")
        return tuple(row)
    for tname, v in raw.items():
        if tname not in transmitters:
            errors.append(f"{who}: undeclared transmitter {tname!r} in {field}")
            continue
        q = _quantity(v, f"{who}: {field}[{tname!r}]", errors)
        if q is not None:
            row[transmitters.index(tname)] = q
    return tuple(row)


def dump_scenario(spec: NetworkSpec, horizon: Optional[int] = None) -> str:
    """Serialize ``spec`` so that ``parse_scenario`` gives it back unchanged."""
    doc: dict[str, Any] = {"format": FORMAT_VERSION}
    if horizon is not None:
        doc["horizon"] = horizon
    doc["transmitters"] = list(spec.transmitters)
    doc["neurons"] = []
    for nr, s0 in zip(spec.neurons, spec.initial_states):
        entry: dict[str, Any] = {"name": nr.name}
        if isinstance(nr.kind, Oscillator):
            entry["type"] = "oscillator"
            entry["period"] = nr.kind.period
            if s0 is not None:
                entry["initial_state"] = s0
        else:
            entry["type"] = "tonic" if isinstance(nr.kind, Tonic) else "follower"
        entry["pir_gain"] = format_quantity(nr.pir_gain)
        entry["inhibition_threshold"] = format_quantity(nr.inhibition_threshold)
        entry["excitation_threshold"] = format_quantity(nr.excitation_threshold)
        entry["outputs"] = _named(spec, nr.outputs)
        entry["weights"] = _named(spec, nr.weights)
        doc["neurons"].append(entry)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _named(spec: NetworkSpec, row) -> dict[str, str]:
    return {t: format_quantity(v) for t, v in zip(spec.transmitters, row) if v != 0}


def load_bundled(name: str) -> str:
    return resources.files("ecsnet").joinpath("scenarios", name).read_text(encoding="utf-8")


def write_trace_csv(trace: Trace) -> str:
    spec = trace.spec
    names = [nr.name for nr in spec.neurons]
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(
        ["t"]
        + [f"y:{n}" for n in names]
        + [f"x:{c}" for c in spec.transmitters]
        + [f"z0:{n}" for n in names]
    )
    for t, step in enumerate(trace.steps, start=1):
        out.writerow(
            [t]
            + [int(y) for y in step.active]
            + [format_quantity(x) for x in step.ecs.amounts]
            + [int(z) for z in step.inhibited]
        )
    return buf.getvalue()
