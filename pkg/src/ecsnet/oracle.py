"""Naive reference implementation of a competition step, and a fixed-point checker.

Written separately from :mod:`ecsnet.engine` and :mod:`ecsnet.model`'s
neuron functions: nothing here calls them. The previous step's inhibition
and excitation flags are recomputed from ``prev_ecs`` rather than read
from the runtimes, and every sum is redone from scratch on every pass.
Only the oscillator counter is taken from the runtimes.
"""

from __future__ import annotations

from fractions import Fraction

from .engine import Deactivation, StepResult
from .model import EcsState, NetworkSpec, Oscillator, StructuralError, Tonic


def _drive(spec: NetworkSpec, i: int, x) -> Fraction:
    total = Fraction(0)
    for j in range(spec.m):
        total = total + spec.neurons[i].weights[j] * x[j]
    return total


def _z0(spec, i, x) -> bool:
    return _drive(spec, i, x) <= spec.neurons[i].inhibition_threshold


def _z1(spec, i, x) -> bool:
    return _drive(spec, i, x) >= spec.neurons[i].excitation_threshold


def reference_resolve(spec: NetworkSpec, runtimes, prev_ecs: EcsState) -> StepResult:
    n, m = spec.n, spec.m
    if len(runtimes) != n or len(prev_ecs.amounts) != m:
        raise StructuralError("runtimes or ECS do not match the network")
    prev_x = list(prev_ecs.amounts)
    was_inhibited = [_z0(spec, i, prev_x) for i in range(n)]
    was_excited = [_z1(spec, i, prev_x) for i in range(n)]

    # 1. empty ECS
    x = [Fraction(0) for _ in range(m)]

    # 2. potentially active neurons: output function with inhibition forced off
    y = []
    for i in range(n):
        kind = spec.neurons[i].kind
        if isinstance(kind, Tonic):
            y.append(True)
        elif isinstance(kind, Oscillator):
            s = runtimes[i].state
            if s is None or s < 0 or s > kind.period:
                raise StructuralError(f"bad oscillator state {s!r}")
            y.append(was_excited[i] or s == kind.period)
        else:
            y.append(was_excited[i])

    log = []
    while True:
        # 3. ECS from the current active set
        x = [Fraction(0) for _ in range(m)]
        for j in range(m):
            for i in range(n):
                if y[i]:
                    gain = spec.neurons[i].pir_gain if was_inhibited[i] else Fraction(1)
                    x[j] = x[j] + gain * spec.neurons[i].outputs[j]
        # 4. conflict resolution
        z0 = [_z0(spec, i, x) for i in range(n)]
        best = None
        best_margin = None
        for i in range(n):
            if y[i] and z0[i]:
                mg = _drive(spec, i, x) - spec.neurons[i].inhibition_threshold
                if best is None or mg < best_margin:
                    best, best_margin = i, mg
        if best is None:
            break
        y[best] = False
        log.append(Deactivation(len(log) + 1, best, best_margin))

    # 5. finish
    return StepResult(
        active=tuple(y),
        ecs=EcsState(x),
        inhibited=tuple(_z0(spec, i, x) for i in range(n)),
        excited=tuple(_z1(spec, i, x) for i in range(n)),
        rebound=tuple(was_inhibited),
        deactivations=tuple(log),
    )


def check_fixed_point(spec: NetworkSpec, result: StepResult) -> list[str]:
    """List every way ``result`` fails to be a resolved step; empty if it is one."""
    problems = []
    x = list(result.ecs.amounts)
    if len(x) != spec.m or len(result.active) != spec.n:
        return ["result shape does not match the network"]
    for i in range(spec.n):
        if result.active[i] and _z0(spec, i, x):
            problems.append(f"active neuron {spec.neurons[i].name!r} is inhibited")
    for j in range(spec.m):
        expected = Fraction(0)
        for i in range(spec.n):
            if result.active[i]:
                gain = spec.neurons[i].pir_gain if result.rebound[i] else 1
                expected += gain * spec.neurons[i].outputs[j]
        if x[j] != expected:
            problems.append(
                f"ECS {spec.transmitters[j]!r} is {x[j]} but active neurons release {expected}"
            )
    return problems
