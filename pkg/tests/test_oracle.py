import numpy as np
import pytest

from netconc import models, oracle, stats
from netconc.graphs import BlockStructure, Graph

T_GRID = [round(0.05 * i, 2) for i in range(1, 20)]


def test_uniform_distribution_n3():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    assert ed.n_states == 8
    assert np.allclose(ed.probs, 1 / 8)


def test_point_mass_complete_graph():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 1.0))
    assert ed.probs[-1] == pytest.approx(1.0)
    assert ed.probs[:-1].sum() == pytest.approx(0.0)


def test_ergm_theta_zero_uniform():
    ed = oracle.exact_distribution(models.CurvedErgm(0.0, 0.0, 0.5), 3)
    assert np.allclose(ed.probs, 1 / 8)


def test_state_space_cap():
    with pytest.raises(oracle.StateSpaceTooLarge):
        oracle.exact_distribution(models.homogeneous_bernoulli(7, 0.5))


def test_event_matrix_one_hot():
    k3 = Graph.from_edges(3, False, [(0, 1), (0, 2), (1, 2)])
    b = oracle.event_matrix(k3, stats.DEGREE)
    assert b.shape == (3, 3)
    assert np.all(b.sum(axis=0) == 1)
    assert np.all(b[2] == 1)
    p3 = Graph.from_edges(3, False, [(0, 1), (1, 2)])
    bp = oracle.event_matrix(p3, stats.DEGREE)
    assert list(np.argmax(bp, axis=0)) == [1, 2, 1]
    be = oracle.event_matrix(Graph.empty(3), stats.DEGREE)
    assert np.all(be[0] == 1)


def test_event_matrix_refuses_esp():
    g = Graph.from_edges(3, False, [(0, 1)])
    with pytest.raises(ValueError):
        oracle.event_matrix(g, stats.ESP)


def test_exact_theta_star_point_mass():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 1.0))
    ts = oracle.exact_theta_star(ed, stats.DEGREE)
    assert np.allclose(ts, [0, 0, 1])


def test_exact_theta_star_binomial():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    ts = oracle.exact_theta_star(ed, stats.DEGREE)
    assert np.allclose(ts, [0.25, 0.5, 0.25])


def test_exact_theta_star_matches_fhat_average_uniform():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    f, valid = oracle.fhat_matrix(ed, stats.GEODESIC)
    assert valid.all()
    assert np.allclose(
        oracle.exact_theta_star(ed, stats.GEODESIC), f.mean(axis=0)
    )


def test_exact_tail_prob_golden():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(4, 0.5))
    # golden value from full enumeration of the 64 graphs
    assert oracle.exact_tail_prob(ed, stats.DEGREE, 0.3) == pytest.approx(
        0.4375, abs=1e-12
    )
    assert oracle.exact_tail_prob(ed, stats.DEGREE, 1.01) == 0.0


def test_tail_prob_monotone_in_t():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(4, 0.5))
    tails = [oracle.exact_tail_prob(ed, stats.DEGREE, t) for t in T_GRID]
    assert all(a >= b for a, b in zip(tails, tails[1:]))


def test_profile_n3_bernoulli():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    prof = oracle.compute_dependence_profile(ed, stats.DEGREE)
    assert prof.delta_n is not None
    assert prof.delta_n <= prof.prop1_bound + 1e-12
    assert prof.d_n == pytest.approx(prof.d_per_k.max())
    assert np.all(prof.d_per_k >= 1 - 1e-12)
    assert np.all((prof.delta_table >= -1e-12) & (prof.delta_table <= 1 + 1e-12))


def test_delta_equals_c_on_independent_edge_models():
    # Definition 2 expands termwise to Definition 1's covariance sum
    for spec in (
        models.homogeneous_bernoulli(4, 0.3),
        models.BetaModel(np.array([0.5, -0.5, 0.2, 0.0])),
    ):
        ed = oracle.exact_distribution(spec)
        prof = oracle.compute_dependence_profile(ed, stats.DEGREE)
        assert prof.delta_n == pytest.approx(prof.c_n, abs=1e-10)


def test_profile_independent_units():
    # singleton blocks: within-block degree is identically zero for every
    # node, so all covariances and TV distances vanish and D_N = 1
    blocks = BlockStructure.from_sizes([1, 1, 1])
    spec = models.LocalDependence(
        blocks,
        tuple(models.homogeneous_bernoulli(1, 0.5) for _ in range(3)),
        0.4,
        False,
    )
    ed = oracle.exact_distribution(spec)
    prof = oracle.compute_dependence_profile(ed, stats.WITHIN_BLOCK_DEGREE, blocks)
    assert prof.c_n == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.abs(prof.delta_table) <= 1e-12)
    assert prof.d_n == pytest.approx(1.0)


def test_esp_requires_support():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(4, 0.5))
    with pytest.raises(ValueError):
        oracle.compute_dependence_profile(ed, stats.ESP)
    sup = oracle.edge_count_support(ed, 3)
    prof = oracle.compute_dependence_profile(ed, stats.ESP, support=sup)
    assert prof.m_units == 3
    assert np.isfinite(prof.d_n)


def test_support_restriction_monotone():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(4, 0.5))
    full = oracle.compute_dependence_profile(ed, stats.DEGREE)
    sup = ed.bits.sum(axis=1) <= 3
    restricted = oracle.compute_dependence_profile(ed, stats.DEGREE, support=sup)
    assert restricted.d_n <= full.d_n + 1e-12


def test_verify_lemma1_n3():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    report = oracle.verify_lemma1(ed, stats.DEGREE, [0.1 * i for i in range(1, 10)])
    assert report.all_ok


def test_verify_lemma1_degenerate():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 1.0))
    report = oracle.verify_lemma1(ed, stats.DEGREE, [0.25, 0.5])
    assert report.all_ok
    assert all(r.exact_tail == 0.0 for r in report.rows)


def test_lemma_report_csv():
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 0.5))
    report = oracle.verify_lemma1(ed, stats.DEGREE, [0.2, 0.4])
    lines = report.to_csv().splitlines()
    assert lines[0] == "t,exact_tail,bound_conc1,bound_conc2,ok1,ok2"
    assert len(lines) == 3
    prof_lines = report.profile.to_csv().splitlines()
    assert prof_lines[0] == "quantity,k,value"
    assert any(ln.startswith("D_N,,") for ln in prof_lines)


def test_delta_omitted_when_positivity_fails():
    # p = 1 gives P(degree = 0 event) = 0 for low bins
    ed = oracle.exact_distribution(models.homogeneous_bernoulli(3, 1.0))
    prof = oracle.compute_dependence_profile(ed, stats.DEGREE)
    assert prof.delta_n is None
    assert prof.delta_omitted_reason


def test_within_block_degree_events():
    blocks = BlockStructure.from_sizes([2, 2])
    spec = models.LocalDependence(
        blocks,
        (models.homogeneous_bernoulli(2, 0.4), models.homogeneous_bernoulli(2, 0.3)),
        0.2,
        False,
    )
    ed = oracle.exact_distribution(spec)
    e, n_bins = oracle.unit_event_indices(ed, stats.WITHIN_BLOCK_DEGREE, blocks)
    assert e.shape == (ed.n_states, 4)
    assert n_bins == 2
