"""Step loop, traces and rhythm detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .engine import StepResult, resolve_step
from .model import EcsState, NetworkSpec, NeuronRuntime, advance_state, initial_runtime

Resolver = Callable[[NetworkSpec, Sequence[NeuronRuntime], EcsState], StepResult]


@dataclass(frozen=True)
class Trace:
    """Steps ``t = 1..H`` of one run; ``steps[0]`` is ``t = 1``."""

    spec: NetworkSpec
    steps: tuple[StepResult, ...]

    @property
    def horizon(self) -> int:
        return len(self.steps)

    def activity(self) -> list[tuple[bool, ...]]:
        return [step.active for step in self.steps]


@dataclass(frozen=True)
class RhythmPattern:
    period: int
    rows: tuple[tuple[bool, ...], ...]

    def describe(self, names: Sequence[str]) -> str:
        phases = "".join(
            "[" + ",".join(name for name, on in zip(names, row) if on) + "]" for row in self.rows
        )
        return f"period={self.period} pattern={phases}"


def initial_runtimes(spec: NetworkSpec) -> list[NeuronRuntime]:
    return [initial_runtime(nr, s0) for nr, s0 in zip(spec.neurons, spec.initial_states)]


def next_runtimes(spec: NetworkSpec, runtimes: Sequence[NeuronRuntime], step: StepResult) -> list[NeuronRuntime]:
    return [
        advance_state(nr, rt, step.inhibited[i], rt.prev_excited, step.active[i], step.excited[i])
        for i, (nr, rt) in enumerate(zip(spec.neurons, runtimes))
    ]


def run(spec: NetworkSpec, horizon: int, resolve: Resolver = resolve_step) -> Trace:
    """Simulate ``horizon`` steps starting from an empty ECS."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    runtimes = initial_runtimes(spec)
    ecs = EcsState.zeros(spec.m)
    steps = []
    for _ in range(horizon):
        step = resolve(spec, runtimes, ecs)
        steps.append(step)
        runtimes = next_runtimes(spec, runtimes, step)
        ecs = step.ecs
    return Trace(spec, tuple(steps))


def detect_rhythm(trace: Trace, transient: Optional[int] = None) -> Optional[RhythmPattern]:
    """Smallest period of the activity after ``transient`` steps.

    A period only counts if it repeats at least twice in what is left, so
    ``None`` comes back when no ``p <= (H - transient) / 2`` fits. The
    transient defaults to the number of neurons.
    """
    if transient is None:
        transient = trace.spec.n
    seq = trace.activity()[transient:]
    for p in range(1, len(seq) // 2 + 1):
        if all(seq[i] == seq[i + p] for i in range(len(seq) - p)):
            return RhythmPattern(p, tuple(seq[:p]))
    return None
