import random
from dataclasses import replace
from fractions import Fraction

import pytest

from ecsnet.corpus import (
    case_rng,
    check_network,
    random_network,
    self_inhibiting,
    shrink,
)
from ecsnet.engine import StepResult, resolve_step
from ecsnet.model import EcsState, NetworkSpec, Tonic, make_neuron
from ecsnet.oracle import check_fixed_point, reference_resolve
from ecsnet.simulator import initial_runtimes, next_runtimes

F = Fraction


def lockstep(spec, steps):
    runtimes = initial_runtimes(spec)
    ecs = EcsState.zeros(spec.m)
    for _ in range(steps):
        got = resolve_step(spec, runtimes, ecs)
        assert got == reference_resolve(spec, runtimes, ecs)
        runtimes = next_runtimes(spec, runtimes, got)
        ecs = got.ecs


def test_oracle_matches_engine_on_bundled(hco, feeding):
    lockstep(hco, 20)
    lockstep(feeding, 30)


def test_hand_built_double_activation(hco):
    both = StepResult(
        active=(True, True),
        ecs=EcsState([F(11, 10), 1]),
        inhibited=(True, True),
        excited=(False, False),
        rebound=(False, False),
    )
    assert check_fixed_point(hco, both) == [
        "active neuron 'N1' is inhibited",
        "active neuron 'N2' is inhibited",
    ]


def test_tampered_ecs(hco):
    step = resolve_step(hco, initial_runtimes(hco), EcsState.zeros(2))
    assert check_fixed_point(hco, step) == []
    tampered = replace(step, ecs=EcsState([F(12, 10), 0]))
    problems = check_fixed_point(hco, tampered)
    assert problems == ["ECS 'a' is 6/5 but active neurons release 11/10"]


def test_random_corpus_generator_is_deterministic():
    assert random_network(case_rng(7, 3)) == random_network(case_rng(7, 3))
    for k in range(200):
        spec = random_network(case_rng(0, k))
        assert 1 <= spec.n <= 5 and 1 <= spec.m <= 4
        assert not any(self_inhibiting(nr) for nr in spec.neurons)


@pytest.mark.parametrize("corpus, allow", [("main", False), ("selfinh", True)])
def test_differential_sample(corpus, allow):
    for k in range(150):
        report = check_network(random_network(case_rng(1, k, corpus), allow_self_inhibition=allow))
        assert report.ok, report.failures


def test_selfinh_corpus_contains_self_inhibition():
    specs = [random_network(case_rng(0, k, "selfinh"), allow_self_inhibition=True) for k in range(100)]
    assert any(self_inhibiting(nr) for s in specs for nr in s.neurons)


def faulty_resolve(spec, runtimes, ecs):
    # drops the PIR gain: wrong whenever some neuron rebounds with gain > 1
    plain = [replace(rt, prev_inhibited=False) for rt in runtimes]
    step = resolve_step(spec, plain, ecs)
    return replace(step, rebound=tuple(rt.prev_inhibited for rt in runtimes))


def test_fault_is_detected_and_shrunk(hco):
    report = check_network(hco, resolve=faulty_resolve)
    assert not report.ok
    small = shrink(hco, lambda s: not check_network(s, resolve=faulty_resolve).ok)
    assert not check_network(small, resolve=faulty_resolve).ok
    assert small.n <= hco.n


def test_shrink_keeps_failing_spec_valid():
    rng = random.Random(5)
    spec = random_network(rng)
    big = NetworkSpec(
        spec.transmitters,
        spec.neurons + (make_neuron("Z", Tonic(), p0=-1, p1=1, weights=[0] * spec.m, outputs=[1] * spec.m),),
    )
    small = shrink(big, lambda s: any(nr.name == "Z" and any(nr.outputs) for nr in s.neurons))
    assert [nr.name for nr in small.neurons] == ["Z"]
    assert small.m == 1
