"""Domain types and per-neuron semantics.

A network is a set of neurons sharing one extracellular space (ECS). Each
neuron reads the ECS through a row of receptor weights, releases
transmitters through a row of outputs, and decides whether to fire with a
small finite automaton. All quantities are exact rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Quantity = Fraction

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)")
_RATIO = re.compile(r"[+-]?\d+/\d+")


class ModelError(ValueError):
    """Base class for all model errors."""


class StructuralError(ModelError):
    """Vector lengths or runtime shapes do not match the network."""


class ValidationError(ModelError):
    """A network description violates one or more invariants.

    ``violations`` holds one human-readable message per problem.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def parse_quantity(text: str) -> Quantity:
    """Parse a finite decimal (``"1.1"``, ``"-.5"``) or a ratio (``"11/10"``).

    Scientific notation and anything float-like is rejected so that values
    stay exact from file to result.
    """
    s = text.strip()
    if _DECIMAL.fullmatch(s) or _RATIO.fullmatch(s):
        try:
            return Fraction(s)
        except ZeroDivisionError:
            pass
    raise ValueError(f"not an exact decimal or ratio: {text!r}")


def is_finite_decimal(q: Quantity) -> bool:
    den = q.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def format_quantity(q: Quantity) -> str:
    """Render ``q`` as an exact decimal when one exists, else as ``num/den``."""
    q = Fraction(q)
    if not is_finite_decimal(q):
        return f"{q.numerator}/{q.denominator}"
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    places = 0
    while 10**places % den:
        places += 1
    sign = "-" if q < 0 else ""
    digits = str(abs(q.numerator) * (10**places // den)).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:].rstrip("0")
    return f"{sign}{whole}.{frac}"


@dataclass(frozen=True)
class Transmitter:
    index: int
    name: str


@dataclass(frozen=True)
class Oscillator:
    """Endogenous burster that fires every ``period + 1`` steps when left alone."""

    period: int


@dataclass(frozen=True)
class Tonic:
    pass


@dataclass(frozen=True)
class Follower:
    pass


NeuronType = Union[Oscillator, Tonic, Follower]


@dataclass(frozen=True)
class NeuronSpec:
    name: str
    kind: NeuronType
    inhibition_threshold: Quantity  # P0, must be < 0
    excitation_threshold: Quantity  # P1, must be > 0
    pir_gain: Quantity  # >= 1
    weights: tuple[Quantity, ...]  # one receptor weight per transmitter
    outputs: tuple[Quantity, ...]  # one release amount per transmitter

    def violations(self, transmitters: Sequence[str] = ()) -> list[str]:
        who = f"neuron {self.name!r}"
        out = []
        if self.inhibition_threshold >= 0:
            out.append(f"{who}: inhibition threshold must be negative")
        if self.excitation_threshold <= 0:
            out.append(f"{who}: excitation threshold must be positive")
        if self.pir_gain < 1:
            out.append(f"{who}: pir_gain must be ≥ 1")
        for j, d in enumerate(self.outputs):
            if d < 0:
                label = transmitters[j] if j < len(transmitters) else str(j)
                out.append(f"{who}: output of {label!r} must be nonnegative")
        if isinstance(self.kind, Oscillator) and self.kind.period < 0:
            out.append(f"{who}: oscillator period must be ≥ 0")
        return out


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of a whole network.

    ``initial_states`` has one entry per neuron; ``None`` means the default
    (oscillators start ready to fire at ``s = T``). Construction validates
    every invariant and raises :class:`ValidationError` listing all of them.
    """

    transmitters: tuple[str, ...]
    neurons: tuple[NeuronSpec, ...]
    initial_states: tuple[Optional[int], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "transmitters", tuple(self.transmitters))
        object.__setattr__(self, "neurons", tuple(self.neurons))
        if not self.initial_states:
            object.__setattr__(self, "initial_states", (None,) * len(self.neurons))
        else:
            object.__setattr__(self, "initial_states", tuple(self.initial_states))
        problems = self.violations()
        if problems:
            raise ValidationError(problems)

    @property
    def n(self) -> int:
        return len(self.neurons)

    @property
    def m(self) -> int:
        return len(self.transmitters)

    def transmitter(self, j: int) -> Transmitter:
        return Transmitter(j, self.transmitters[j])

    def index_of(self, name: str) -> int:
        for i, neuron in enumerate(self.neurons):
            if neuron.name == name:
                return i
        raise KeyError(name)

    def violations(self) -> list[str]:
        out = []
        if len(set(self.transmitters)) != len(self.transmitters):
            out.append("transmitter names must be unique")
        names = [nr.name for nr in self.neurons]
        if len(set(names)) != len(names):
            out.append("neuron names must be unique")
        if len(self.initial_states) != len(self.neurons):
            out.append("initial_states must have one entry per neuron")
        for nr, s0 in zip(self.neurons, self.initial_states):
            if len(nr.weights) != self.m or len(nr.outputs) != self.m:
                out.append(f"neuron {nr.name!r}: weight and output rows must have {self.m} entries")
            out.extend(nr.violations(self.transmitters))
            if s0 is None:
                continue
            if not isinstance(nr.kind, Oscillator):
                out.append(f"neuron {nr.name!r}: initial_state is only valid for oscillator neurons")
            elif not 0 <= s0 <= nr.kind.period:
                out.append(f"neuron {nr.name!r}: initial_state must be in 0..{nr.kind.period}")
        return out


@dataclass(frozen=True)
class NeuronRuntime:
    """Mutable-by-replacement per-neuron state carried between steps.

    ``state`` is the oscillator counter ``s`` (``None`` for tonic and
    follower neurons). ``prev_inhibited``/``prev_excited`` are the previous
    step's final inhibition and excitation flags.
    """

    state: Optional[int] = None
    prev_inhibited: bool = False
    prev_excited: bool = False


@dataclass(frozen=True)
class EcsState:
    amounts: tuple[Quantity, ...]

    def __post_init__(self):
        object.__setattr__(self, "amounts", tuple(Fraction(a) for a in self.amounts))
        if any(a < 0 for a in self.amounts):
            raise ModelError(f"ECS amounts must be nonnegative: {self.amounts}")

    @classmethod
    def zeros(cls, m: int) -> "EcsState":
        return cls((Fraction(0),) * m)

    def __len__(self) -> int:
        return len(self.amounts)

    def __getitem__(self, j: int) -> Quantity:
        return self.amounts[j]


def initial_runtime(neuron: NeuronSpec, state: Optional[int] = None) -> NeuronRuntime:
    if isinstance(neuron.kind, Oscillator):
        return NeuronRuntime(neuron.kind.period if state is None else state)
    return NeuronRuntime()


def weighted_input(neuron: NeuronSpec, ecs: EcsState | Sequence[Quantity]) -> Quantity:
    amounts = ecs.amounts if isinstance(ecs, EcsState) else tuple(ecs)
    if len(amounts) != len(neuron.weights):
        raise StructuralError(
            f"neuron {neuron.name!r} has {len(neuron.weights)} weights but the ECS has {len(amounts)} transmitters"
        )
    return sum((w * x for w, x in zip(neuron.weights, amounts)), Fraction(0))


def excitation(neuron: NeuronSpec, ecs: EcsState | Sequence[Quantity]) -> bool:
    return weighted_input(neuron, ecs) >= neuron.excitation_threshold


def inhibition(neuron: NeuronSpec, ecs: EcsState | Sequence[Quantity]) -> bool:
    return weighted_input(neuron, ecs) <= neuron.inhibition_threshold


def potential_output(neuron: NeuronSpec, runtime: NeuronRuntime) -> bool:
    """Would the neuron fire this step if nothing inhibited it?"""
    kind = neuron.kind
    if isinstance(kind, Tonic):
        return True
    if isinstance(kind, Follower):
        return runtime.prev_excited
    _check_oscillator(neuron, runtime)
    return runtime.state == kind.period or runtime.prev_excited


def advance_state(
    neuron: NeuronSpec,
    runtime: NeuronRuntime,
    final_z0: bool,
    prev_z1: bool,
    fired: bool,
    final_z1: bool,
) -> NeuronRuntime:
    """Apply the oscillator transition table and roll the step flags forward.

    Excitation from the previous step resets the counter unless the neuron
    is inhibited now. Otherwise the counter advances, except at ``s = T``
    where it resets after firing and holds while the neuron is kept silent.
    When both flags are set, inhibition wins.
    """
    state = runtime.state
    kind = neuron.kind
    if isinstance(kind, Oscillator):
        _check_oscillator(neuron, runtime)
        if prev_z1 and not final_z0:
            state = 0
        elif state < kind.period:
            state += 1
        elif fired:
            state = 0
    return NeuronRuntime(state, final_z0, final_z1)


def effective_output(neuron: NeuronSpec, runtime: NeuronRuntime, j: int) -> Quantity:
    """Release of transmitter ``j``, scaled by the PIR gain after an inhibited step."""
    d = neuron.outputs[j]
    return d * neuron.pir_gain if runtime.prev_inhibited else d


def isolated_step(
    neuron: NeuronSpec, runtime: NeuronRuntime, z0: bool, z1: bool
) -> tuple[bool, NeuronRuntime]:
    """Drive one neuron with externally supplied flags, no competition.

    ``z0`` is this step's inhibition, ``z1`` this step's excitation (it takes
    effect on the next call). Returns the activity and the next runtime.
    """
    fired = potential_output(neuron, runtime) and not z0
    nxt = advance_state(neuron, runtime, z0, runtime.prev_excited, fired, z1)
    return fired, nxt


def _check_oscillator(neuron: NeuronSpec, runtime: NeuronRuntime) -> None:
    s = runtime.state
    if s is None or not 0 <= s <= neuron.kind.period:
        raise StructuralError(
            f"oscillator {neuron.name!r} has state {s!r}, expected 0..{neuron.kind.period}"
        )


def make_neuron(
    name: str,
    kind: NeuronType,
    *,
    p0,
    p1,
    pir_gain=1,
    weights: Iterable = (),
    outputs: Iterable = (),
) -> NeuronSpec:
    """Convenience constructor accepting ints, strings or Fractions."""

    def q(v) -> Quantity:
        return parse_quantity(v) if isinstance(v, str) else Fraction(v)

    return NeuronSpec(
        name=name,
        kind=kind,
        inhibition_threshold=q(p0),
        excitation_threshold=q(p1),
        pir_gain=q(pir_gain),
        weights=tuple(q(w) for w in weights),
        outputs=tuple(q(d) for d in outputs),
    )
