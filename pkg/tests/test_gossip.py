import numpy as np
import pytest

from feedgame import gossip, solvers
from feedgame.digraph import Digraph
from feedgame.gossip import (
    GossipConfig,
    communication_edges,
    consensus_error,
    gossip_step,
    init_states,
    metropolis_weights,
    run,
    synchronous_round,
)
from feedgame.model import GameInstance, GameParams
from feedgame.scenario import Scenario, build_game

from conftest import random_game

NE = (0.0, 0.0, 0.41817282309295541, 2.2440417238497716, 0.140625)


def test_config_validation():
    with pytest.raises(ValueError, match="mode"):
        GossipConfig(mode="bogus")
    with pytest.raises(ValueError):
        GossipConfig(step_tau=0.5)
    with pytest.raises(ValueError):
        GossipConfig(max_iterations=-1)
    with pytest.raises(ValueError):
        GossipConfig(record_every=0)


def test_init_states(fig2_game):
    states = init_states(fig2_game, np.ones(5))
    assert [s.id for s in states] == [1, 2, 3, 4, 5]
    for s in states:
        assert s.own_action == 1.0
        assert np.all(s.estimates == 1.0)
        assert s.update_count == 0
    assert consensus_error(states) == 0.0


def test_consensus_error_tracks_perturbation(fig2_game):
    states = init_states(fig2_game, np.ones(5))
    # player 3 changes his action; everyone else's copy is now stale
    states[2].own_action = 1.5
    states[2].estimates[2] = 1.5
    assert consensus_error(states) == pytest.approx(0.5)


def test_communication_edges_fig2(fig2_game):
    assert communication_edges(fig2_game) == [
        (1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (3, 5), (4, 5),
    ]


def test_gossip_step_rejects_non_edge(fig2_game):
    states = init_states(fig2_game, np.ones(5))
    cfg = GossipConfig()
    with pytest.raises(ValueError, match="communication edge"):
        gossip_step(states, (2, 5), fig2_game, cfg)


def test_gossip_step_identical_estimates_only_gradient_acts(fig2_game):
    cfg = GossipConfig()
    states = init_states(fig2_game, np.ones(5))
    before = [s.estimates.copy() for s in states]
    gossip_step(states, (1, 2), fig2_game, cfg)
    # non-participants untouched
    for k in (2, 3, 4):
        assert np.array_equal(states[k].estimates, before[k])
        assert states[k].update_count == 0
    # participants: averaging was a no-op, only own coordinates moved
    for k in (0, 1):
        assert states[k].update_count == 1
        others = [m for m in range(5) if m != k]
        assert np.array_equal(states[k].estimates[others], before[k][others])
        assert states[k].estimates[k] == states[k].own_action


def test_gossip_step_averages_disagreement(fig2_game):
    cfg = GossipConfig()
    states = init_states(fig2_game, np.ones(5))
    states[0].estimates[4] = 3.0
    states[1].estimates[4] = 1.0
    gossip_step(states, (1, 2), fig2_game, cfg)
    assert states[0].estimates[4] == 2.0
    assert states[1].estimates[4] == 2.0


def test_gossip_step_interval_preserved(fig2_game):
    cfg = GossipConfig()
    rng = np.random.default_rng(11)
    states = init_states(fig2_game, rng.uniform(0, 10, 5))
    for s in states:
        s.estimates = rng.uniform(0, 10, 5)
        s.estimates[s.id - 1] = s.own_action
    for edge in communication_edges(fig2_game) * 3:
        gossip_step(states, edge, fig2_game, cfg)
        for s in states:
            assert 0.0 <= s.own_action <= 10.0
            assert np.all(s.estimates >= 0.0) and np.all(s.estimates <= 10.0)
            assert s.estimates[s.id - 1] == s.own_action


def test_two_cycle_follower_less_drifts_to_zero():
    # both players value information so little that producing never pays;
    # gradients stay at h_i > 0 and actions clamp at 0
    g = Digraph(2, [(1, 2), (2, 1)])
    game = GameInstance(g, GameParams((2.0, 2.0), (1e-6, 1e-6),
                                      {(1, 2): 1.0, (2, 1): 1.0}))
    cfg = GossipConfig()
    states = init_states(game, np.array([1.0, 1.0]))
    prev = [1.0, 1.0]
    for _ in range(200):
        gossip_step(states, (1, 2), game, cfg)
        for k in (0, 1):
            assert states[k].own_action <= prev[k]
            prev[k] = states[k].own_action
    assert prev == [0.0, 0.0]


def test_metropolis_weights_properties():
    rng = np.random.default_rng(12)
    for _ in range(10):
        game = random_game(rng)
        w = metropolis_weights(game)
        assert np.allclose(w.sum(axis=1), 1.0)
        assert np.allclose(w, w.T)
        assert np.all(w >= 0.0)


def test_synchronous_identical_estimates_is_identity(fig2_game):
    cfg = GossipConfig(mode="synchronous")
    states = init_states(fig2_game, np.ones(5))
    synchronous_round(states, fig2_game, cfg)
    # averaging left the off-diagonal coordinates alone (rows were equal);
    # only the own coordinates moved, via the gradient step
    for s in states:
        for m in range(5):
            if m != s.id - 1:
                assert s.estimates[m] == 1.0
        assert s.estimates[s.id - 1] == s.own_action
        assert s.update_count == 1


def test_run_zero_iterations(fig2_game):
    traj = run(fig2_game, np.ones(5), GossipConfig(max_iterations=0))
    assert len(traj.records) == 1
    assert traj.final.iteration == 0
    assert traj.final.consensus_error == 0.0


def test_run_same_seed_identical(fig2_game):
    cfg = GossipConfig(max_iterations=5_000, record_every=100, seed=123)
    a = run(fig2_game, np.ones(5), cfg)
    b = run(fig2_game, np.ones(5), cfg)
    assert len(a.records) == len(b.records)
    for ra, rb in zip(a.records, b.records):
        assert ra.iteration == rb.iteration
        assert np.array_equal(ra.actions, rb.actions)
        assert ra.consensus_error == rb.consensus_error
        assert ra.residual == rb.residual


def test_run_different_seeds_differ(fig2_game):
    base = GossipConfig(max_iterations=2_000, record_every=2_000)
    a = run(fig2_game, np.ones(5), base)
    b = run(fig2_game, np.ones(5), GossipConfig(max_iterations=2_000,
                                                record_every=2_000, seed=43))
    assert not np.array_equal(a.final.actions, b.final.actions)


def test_run_record_stride(fig2_game):
    cfg = GossipConfig(max_iterations=1_050, record_every=250)
    traj = run(fig2_game, np.ones(5), cfg)
    assert [r.iteration for r in traj.records] == [0, 250, 500, 750, 1000, 1050]


def test_run_reference_distance_column(fig2_game):
    cfg = GossipConfig(max_iterations=1_000, record_every=500, reference=NE)
    traj = run(fig2_game, np.ones(5), cfg)
    for rec in traj.records:
        expected = float(np.max(np.abs(rec.actions - np.array(NE))))
        assert rec.dist_to_reference == pytest.approx(expected)
    no_ref = run(fig2_game, np.ones(5), GossipConfig(max_iterations=100))
    assert all(r.dist_to_reference is None for r in no_ref.records)


def test_run_converges_to_equilibrium(fig2_game):
    cfg = GossipConfig(max_iterations=200_000, record_every=10_000, seed=42,
                       reference=NE)
    traj = run(fig2_game, np.ones(5), cfg)
    assert traj.final.dist_to_reference <= 0.05
    assert traj.final.consensus_error <= 0.05
    # bounds hold at every recorded step
    for rec in traj.records:
        assert np.all(rec.actions >= 0.0) and np.all(rec.actions <= 10.0)


def test_run_from_zero_start(fig2_game):
    # gradient guard makes the first steps at sigma = 0 well defined
    cfg = GossipConfig(max_iterations=50_000, record_every=50_000, seed=2,
                       reference=NE)
    traj = run(fig2_game, np.zeros(5), cfg)
    assert traj.final.dist_to_reference <= 0.05


def test_synchronous_run_converges(fig2_game):
    cfg = GossipConfig(mode="synchronous", max_iterations=20_000,
                       record_every=20_000, reference=NE)
    traj = run(fig2_game, np.ones(5), cfg)
    assert traj.final.dist_to_reference <= 0.05


def test_averaging_only_drives_consensus():
    # gradient ablated: pure gossip averaging must still reach agreement
    rng = np.random.default_rng(13)
    for _ in range(3):
        game = random_game(rng, n=5)
        est0 = rng.uniform(0.0, 10.0, (5, 5))
        cfg = GossipConfig(max_iterations=100_000, record_every=100_000,
                           seed=int(rng.integers(1_000)))
        traj = run(game, np.ones(5), cfg, averaging_only=True,
                   initial_estimates=est0)
        assert traj.records[0].consensus_error > 0.1
        assert traj.final.consensus_error <= 1e-6
        assert np.array_equal(traj.final.actions, np.ones(5))


def test_sync_on_complete_graph_matches_one_pg_step():
    # with identical starting estimates the first synchronous round sees the
    # true profile, so it reproduces one projected-gradient step exactly;
    # later rounds diverge because Metropolis mixing lags the moving actions
    n = 4
    edges = [(u, v, None) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    sc = Scenario(n=n, h=[2.0] * n, L=[1.5] * n, default_q=1.0, edges=edges)
    game = build_game(sc)
    cfg = GossipConfig(mode="synchronous", max_iterations=1, record_every=1)
    traj = run(game, np.ones(n), cfg)
    pg = solvers.full_info_projected_gradient(game, np.ones(n), iters=1)
    assert np.max(np.abs(traj.final.actions - pg.profile)) <= 1e-9


def test_async_and_sync_agree_on_fig2(fig2_game):
    ref = NE
    a = run(fig2_game, np.ones(5),
            GossipConfig(max_iterations=200_000, record_every=200_000,
                         seed=42, reference=ref))
    s = run(fig2_game, np.ones(5),
            GossipConfig(mode="synchronous", max_iterations=20_000,
                         record_every=20_000, reference=ref))
    assert a.final.dist_to_reference <= 0.05
    assert s.final.dist_to_reference <= 0.05


def test_kernel_matches_reference_steps(fig2_game):
    # the chunked kernel path must replay the single-step reference path
    # exactly, activation for activation
    cfg = GossipConfig(max_iterations=500, record_every=500, seed=99)
    traj = run(fig2_game, np.ones(5), cfg)

    comm = communication_edges(fig2_game)
    rng = np.random.default_rng(99)
    order = rng.integers(0, len(comm), size=500, dtype=np.int64)
    states = init_states(fig2_game, np.ones(5))
    for idx in order:
        gossip_step(states, comm[int(idx)], fig2_game, cfg)
    ref_actions = np.array([s.own_action for s in states])
    assert np.array_equal(traj.final.actions, ref_actions)


def test_sync_kernel_matches_reference_rounds(fig2_game):
    cfg = GossipConfig(mode="synchronous", max_iterations=50, record_every=50)
    traj = run(fig2_game, np.ones(5), cfg)
    states = init_states(fig2_game, np.ones(5))
    for _ in range(50):
        synchronous_round(states, fig2_game, cfg)
    ref_actions = np.array([s.own_action for s in states])
    assert np.array_equal(traj.final.actions, ref_actions)
