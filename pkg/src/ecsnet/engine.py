"""One time step of neuronal competition.

Every neuron that could fire releases its transmitters; while any active
neuron ends up inhibited by the resulting ECS, the most strongly inhibited
one is silenced and the ECS is recomputed. The loop removes one neuron per
pass, so it stops after at most ``n`` passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import (
    EcsState,
    NetworkSpec,
    NeuronRuntime,
    NeuronSpec,
    Quantity,
    StructuralError,
    effective_output,
    excitation,
    inhibition,
    potential_output,
    weighted_input,
)


@dataclass(frozen=True)
class Deactivation:
    iteration: int  # 1-based pass of the conflict loop
    neuron: int
    margin: Quantity


@dataclass(frozen=True)
class StepResult:
    """Resolved state of one step.

    ``rebound`` records which neurons entered the step with the PIR flag
    set, i.e. whose releases were scaled by their gain.
    """

    active: tuple[bool, ...]
    ecs: EcsState
    inhibited: tuple[bool, ...]
    excited: tuple[bool, ...]
    rebound: tuple[bool, ...]
    deactivations: tuple[Deactivation, ...] = ()


def margin(neuron: NeuronSpec, ecs: EcsState) -> Quantity:
    """Distance above the inhibition threshold; ``<= 0`` means inhibited."""
    return weighted_input(neuron, ecs) - neuron.inhibition_threshold


def release_sums(spec: NetworkSpec, releases: Sequence[Sequence[Quantity]], active: Sequence[bool]) -> EcsState:
    x = [Fraction(0)] * spec.m
    for row, on in zip(releases, active):
        if on:
            for j, amount in enumerate(row):
                x[j] += amount
    return EcsState(x)


def check_shapes(spec: NetworkSpec, runtimes: Sequence[NeuronRuntime], prev_ecs: EcsState) -> None:
    if len(runtimes) != spec.n:
        raise StructuralError(f"expected {spec.n} runtimes, got {len(runtimes)}")
    if len(prev_ecs) != spec.m:
        raise StructuralError(f"expected an ECS of {spec.m} transmitters, got {len(prev_ecs)}")


def resolve_step(
    spec: NetworkSpec, runtimes: Sequence[NeuronRuntime], prev_ecs: EcsState
) -> StepResult:
    """Resolve which neurons fire at this step and the ECS they produce.

    The runtimes carry the previous step's flags; ``prev_ecs`` must be the
    previous step's final ECS (it is only checked for shape here).
    """
    check_shapes(spec, runtimes, prev_ecs)
    neurons = spec.neurons
    active = [potential_output(nr, rt) for nr, rt in zip(neurons, runtimes)]
    releases = [
        tuple(effective_output(nr, rt, j) for j in range(spec.m))
        for nr, rt in zip(neurons, runtimes)
    ]

    log: list[Deactivation] = []
    while True:
        ecs = release_sums(spec, releases, active)
        conflicts = [
            (margin(nr, ecs), i)
            for i, nr in enumerate(neurons)
            if active[i] and inhibition(nr, ecs)
        ]
        if not conflicts:
            break
        # lowest index wins ties
        worst, loser = min(conflicts)
        active[loser] = False
        log.append(Deactivation(len(log) + 1, loser, worst))

    return StepResult(
        active=tuple(active),
        ecs=ecs,
        inhibited=tuple(inhibition(nr, ecs) for nr in neurons),
        excited=tuple(excitation(nr, ecs) for nr in neurons),
        rebound=tuple(rt.prev_inhibited for rt in runtimes),
        deactivations=tuple(log),
    )
