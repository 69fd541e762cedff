import math
import random

import numpy as np
import pytest

from topogen.graphs import neighborhood_graph
from topogen.measurements import distance_loss_correlation
from topogen.synth import (
    SynthScenario,
    chain_scenario,
    generate,
    grid_positions,
    grid_scenario,
)


def two_node_scenario(distance, **params):
    return SynthScenario.from_positions(
        {0: (0.0, 0.0, 0.0), 1: (distance, 0.0, 0.0)}, **params
    )


def test_reference_loss_at_one_meter():
    matrix = generate(two_node_scenario(1.0))
    assert matrix.loss(0, 1) == 40.0
    assert matrix.loss(1, 0) == 40.0


def test_closed_form_at_ten_meters():
    matrix = generate(two_node_scenario(10.0))
    assert matrix.loss(0, 1) == pytest.approx(60.0)


def test_spacing_doubling_closed_form():
    a = grid_scenario(3, 4, 1.0)
    b = grid_scenario(3, 4, 2.0)
    shift = 10 * 2.0 * math.log10(2)
    for pair, entry in a.entries.items():
        assert b.entries[pair].mean_loss == pytest.approx(entry.mean_loss + shift)


def test_coincident_positions_error():
    scenario = SynthScenario.from_positions(
        {0: (1.0, 2.0, 0.0), 1: (1.0, 2.0, 0.0)}
    )
    with pytest.raises(ValueError, match="coincident"):
        generate(scenario)


def test_determinism_in_seed():
    scenario = SynthScenario.from_positions(
        {i: (float(i), float(i % 3), 0.0) for i in range(8)},
        shadowing_sigma=6.0,
        asymmetry_sigma=2.0,
        seed=99,
    )
    assert generate(scenario) == generate(scenario)
    different = generate(
        SynthScenario.from_positions(
            dict((i, (float(i), float(i % 3), 0.0)) for i in range(8)),
            shadowing_sigma=6.0,
            asymmetry_sigma=2.0,
            seed=100,
        )
    )
    assert different != generate(scenario)


def test_symmetric_without_noise_and_increasing_in_distance():
    positions = {i: (float(2**i), 0.0, 0.0) for i in range(5)}
    matrix = generate(SynthScenario.from_positions(positions))
    losses = []
    for i in range(4):
        assert matrix.loss(i, i + 1) == matrix.loss(i + 1, i)
        losses.append(matrix.loss(0, i + 1))
    assert losses == sorted(losses)


def test_asymmetry_sigma_scale():
    sigma = 3.0
    rng = random.Random(1)
    positions = {i: (rng.uniform(0, 100), rng.uniform(0, 100), 0.0) for i in range(50)}
    matrix = generate(
        SynthScenario.from_positions(positions, asymmetry_sigma=sigma, seed=5)
    )
    deltas = []
    nodes = sorted(positions)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            deltas.append(matrix.loss(a, b) - matrix.loss(b, a))
    assert len(deltas) >= 1000
    observed = float(np.std(deltas))
    expected = math.sqrt(2) * sigma
    assert abs(observed - expected) / expected < 0.2


def test_heavy_shadowing_weakens_distance_correlation():
    rng = random.Random(2)
    positions = {
        i: (rng.uniform(0, 60), rng.uniform(0, 60), 0.0) for i in range(100)
    }
    matrix = generate(
        SynthScenario.from_positions(positions, shadowing_sigma=8.0, seed=3)
    )
    assert distance_loss_correlation(matrix, positions) < 0.7


def test_scenario_validation():
    with pytest.raises(ValueError, match="exponent"):
        two_node_scenario(1.0, path_loss_exponent=0)
    with pytest.raises(ValueError, match="sigmas"):
        two_node_scenario(1.0, shadowing_sigma=-1)
    with pytest.raises(ValueError, match="at least 2"):
        SynthScenario.from_positions({0: (0.0, 0.0, 0.0)})


def test_chain_fixture():
    matrix = chain_scenario(6, 45, 90)
    graph = neighborhood_graph(matrix, 60)
    assert sorted(graph.edges) == [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]
    assert len(matrix.entries) == 30
    two = chain_scenario(2, 45, 90)
    assert set(two.entries) == {(0, 1), (1, 0)}
    with pytest.raises(ValueError):
        chain_scenario(1, 45, 90)
    with pytest.raises(ValueError):
        chain_scenario(3, 90, 45)


def test_grid_layout():
    positions = grid_positions(3, 4, 1.5)
    assert len(positions) == 12
    assert positions[0] == (0.0, 0.0, 0.0)
    assert positions[5] == (1.5, 1.5, 0.0)
    deterministic = grid_scenario(3, 4, 1.5)
    assert len(deterministic.nodes) == 12
    assert deterministic == grid_scenario(3, 4, 1.5)
