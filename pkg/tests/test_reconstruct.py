import pytest

from feedgame.reconstruct import (
    ReconstructionSpec,
    enumerate_completions,
    load_reconstruction_spec,
    reconstruct,
)
from feedgame.scenario import ScenarioError, bundled_scenario_path

BUNDLED_TOPOLOGY = (
    (1, 3), (2, 1), (3, 2), (3, 5), (4, 1), (4, 3), (4, 5), (5, 4),
)


def five_user_spec() -> ReconstructionSpec:
    return load_reconstruction_spec(bundled_scenario_path("fig2_reconstruct"))


def test_spec_loads():
    spec = five_user_spec()
    assert spec.n == 5
    assert spec.known_out == {3: {2, 5}, 4: {1, 3, 5}}
    assert spec.out_degree == {1: 1, 2: 1, 3: 2, 4: 3, 5: 1}
    assert spec.target == [0.0, 0.0, 0.42, 2.24, 0.14]
    assert spec.decimals == 2


def test_spec_validation_degree_conflict():
    spec = five_user_spec()
    spec.out_degree[3] = 1  # fewer than the 2 known out-edges
    with pytest.raises(ScenarioError, match="node 3"):
        spec.validate()


def test_spec_validation_self_follow():
    spec = five_user_spec()
    spec.known_out[3].add(3)
    spec.out_degree[3] = 3
    with pytest.raises(ScenarioError, match="itself"):
        spec.validate()


def test_spec_validation_weight_on_unknown_edge():
    spec = five_user_spec()
    spec.edge_q[(1, 2)] = 2.0
    with pytest.raises(ScenarioError, match="unknown edge"):
        spec.validate()


def test_enumeration_size():
    # nodes 1, 2, 5 each pick 1 follower from 4 candidates; 3 and 4 are fixed
    spec = five_user_spec()
    completions = list(enumerate_completions(spec))
    assert len(completions) == 4 * 4 * 4


def test_reconstruct_five_user_case():
    result = reconstruct(five_user_spec())
    assert result.candidates_checked == 64
    assert len(result.survivors) > 0
    # the target profile pins user 5's follower: only node 4's feed is
    # thin enough to make producing 0.14 units optimal
    for edges in result.survivors:
        assert (5, 4) in edges
    assert (5, 4) in result.forced_edges
    assert BUNDLED_TOPOLOGY in result.survivors
    # users 1 and 2 produce nothing, so their follower choice never moves
    # a feed; every survivor differs from the bundle only in those edges
    for edges in result.survivors:
        fixed = {e for e in edges if e[0] not in (1, 2)}
        assert fixed == {e for e in BUNDLED_TOPOLOGY if e[0] not in (1, 2)}


def test_reconstruct_unsatisfiable_target():
    spec = five_user_spec()
    spec.target = [9.0] * 5
    result = reconstruct(spec)
    assert result.survivors == []
    assert result.forced_edges == set()
    assert result.candidates_checked == 64


def test_reconstruct_skips_disconnected_candidates():
    # forbid every edge out of node 1 except the self-defeating 1 -> 2 and
    # make 2 point back at 1: the only SC completions route through 1 <-> 2
    spec = ReconstructionSpec(
        n=3,
        known_out={1: {2}, 2: {1}},
        out_degree={1: 1, 2: 1, 3: 1},
        h=[2.0, 2.0, 2.0],
        L=[1.5, 1.5, 1.5],
        default_q=1.0,
        edge_q={},
        x_max=10.0,
        target=[0.14, 0.14, 0.0],
        decimals=2,
    )
    result = reconstruct(spec)
    # node 3 can point at 1 or 2 but nothing points back at 3, so no
    # completion is strongly connected and none can survive
    assert result.survivors == []
    assert result.candidates_checked == 2
