"""Randomized differential testing of the engine against the reference oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Optional

from .engine import resolve_step
from .model import (
    EcsState,
    Follower,
    NetworkSpec,
    NeuronSpec,
    Oscillator,
    Tonic,
    ValidationError,
)
from .oracle import check_fixed_point, reference_resolve
from .simulator import Resolver, initial_runtimes, next_runtimes

STEPS_PER_CASE = 12
_DENOMINATORS = (1, 2, 3, 4, 5, 10)


def _rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    den = rng.choice(_DENOMINATORS)
    return Fraction(rng.randint(lo * den, hi * den), den)


def self_inhibiting(neuron: NeuronSpec) -> bool:
    return any(d > 0 and w < 0 for d, w in zip(neuron.outputs, neuron.weights))


def random_network(rng: random.Random, *, allow_self_inhibition: bool = False) -> NetworkSpec:
    """Small random network: up to 5 neurons, up to 4 transmitters."""
    n = rng.randint(1, 5)
    m = rng.randint(1, 4)
    neurons, states = [], []
    for i in range(n):
        kind = rng.choice([Oscillator(rng.randint(0, 4)), Tonic(), Follower()])
        p0 = -_rational(rng, 0, 3) or Fraction(-1, 2)
        p1 = _rational(rng, 0, 3) or Fraction(1, 2)
        gain = 1 + _rational(rng, 0, 2) * rng.randint(0, 1)
        weights = [_rational(rng, -2, 2) * rng.randint(0, 1) for _ in range(m)]
        outputs = [_rational(rng, 0, 2) * rng.randint(0, 1) for _ in range(m)]
        if not allow_self_inhibition:
            outputs = [Fraction(0) if w < 0 else d for d, w in zip(outputs, weights)]
        neurons.append(NeuronSpec(f"N{i + 1}", kind, p0, p1, gain, tuple(weights), tuple(outputs)))
        if isinstance(kind, Oscillator) and rng.random() < 0.5:
            states.append(rng.randint(0, kind.period))
        else:
            states.append(None)
    return NetworkSpec(tuple(f"c{j + 1}" for j in range(m)), tuple(neurons), tuple(states))


def case_rng(seed: int, case: int, corpus: str = "main") -> random.Random:
    return random.Random(f"{corpus}:{seed}:{case}")


@dataclass
class CaseReport:
    spec: NetworkSpec
    steps: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_network(
    spec: NetworkSpec,
    steps: int = STEPS_PER_CASE,
    resolve: Resolver = resolve_step,
    *,
    expect_nonempty: Optional[bool] = None,
) -> CaseReport:
    """Run ``spec`` through both resolvers side by side and collect every failure.

    Per step this checks engine/oracle agreement, the fixed point, the
    deactivation bound, and mutual exclusion of the inhibition and
    excitation flags. With ``expect_nonempty`` (default: whenever no neuron
    inhibits itself) a non-empty candidate set must leave a survivor.
    """
    if expect_nonempty is None:
        expect_nonempty = not any(self_inhibiting(nr) for nr in spec.neurons)
    report = CaseReport(spec)
    runtimes = initial_runtimes(spec)
    ecs = EcsState.zeros(spec.m)
    for t in range(1, steps + 1):
        got = resolve(spec, runtimes, ecs)
        want = reference_resolve(spec, runtimes, ecs)
        report.steps = t
        if got != want:
            report.failures.append(f"t={t}: engine and oracle disagree")
        for problem in check_fixed_point(spec, got):
            report.failures.append(f"t={t}: {problem}")
        if len(got.deactivations) > spec.n:
            report.failures.append(f"t={t}: {len(got.deactivations)} deactivations for {spec.n} neurons")
        for i, (z0, z1) in enumerate(zip(got.inhibited, got.excited)):
            if z0 and z1:
                report.failures.append(f"t={t}: neuron {spec.neurons[i].name!r} both inhibited and excited")
        candidates = any(want.active) or bool(want.deactivations)
        if expect_nonempty and candidates and not any(got.active):
            report.failures.append(f"t={t}: every candidate was deactivated")
        if report.failures:
            break
        runtimes = next_runtimes(spec, runtimes, got)
        ecs = got.ecs
    return report


def iter_corpus(seed: int, cases: int) -> Iterator[NetworkSpec]:
    """The main corpus (no self-inhibition) followed by a self-inhibition corpus of equal size."""
    for k in range(cases):
        yield random_network(case_rng(seed, k))
    for k in range(cases):
        yield random_network(case_rng(seed, k, "selfinh"), allow_self_inhibition=True)


def shrink(spec: NetworkSpec, fails) -> NetworkSpec:
    """Greedily drop neurons, transmitters and nonzero entries while ``fails(spec)`` holds."""
    changed = True
    while changed:
        changed = False
        for candidate in _smaller(spec):
            if fails(candidate):
                spec, changed = candidate, True
                break
    return spec


def _smaller(spec: NetworkSpec) -> Iterator[NetworkSpec]:
    for i in range(spec.n):
        yield from _attempt(
            spec.transmitters,
            spec.neurons[:i] + spec.neurons[i + 1 :],
            spec.initial_states[:i] + spec.initial_states[i + 1 :],
        )
    for j in range(spec.m):
        neurons = tuple(
            replace(nr, weights=_drop(nr.weights, j), outputs=_drop(nr.outputs, j)) for nr in spec.neurons
        )
        yield from _attempt(_drop(spec.transmitters, j), neurons, spec.initial_states)
    for i, nr in enumerate(spec.neurons):
        for attr in ("weights", "outputs"):
            row = getattr(nr, attr)
            for j, v in enumerate(row):
                if v != 0:
                    zeroed = row[:j] + (Fraction(0),) + row[j + 1 :]
                    neurons = spec.neurons[:i] + (replace(nr, **{attr: zeroed}),) + spec.neurons[i + 1 :]
                    yield from _attempt(spec.transmitters, neurons, spec.initial_states)


def _drop(row, j):
    return row[:j] + row[j + 1 :]


def _attempt(transmitters, neurons, states) -> Iterator[NetworkSpec]:
    try:
        yield NetworkSpec(tuple(transmitters), tuple(neurons), tuple(states))
    except ValidationError:
        return
