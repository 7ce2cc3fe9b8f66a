import math

import numpy as np
import pytest

from ccnet import edge_sample, star_sample
from ccnet.sampling import SamplePlan, edge_plan, edge_sample_rounds, star_centers, star_plan


def test_single_vertex_star_empty():
    assert star_sample(1, 1, seed=0) == set()


def test_small_s_gives_full_star():
    n = 20
    s = 3 * math.log(n) - 0.5
    assert star_plan(n, s).p == 1.0
    edges = star_sample(n, s, seed=3)
    assert len(edges) == n * (n - 1) // 2  # every vertex is a centre


def test_star_probability():
    assert star_plan(100, 30).p == pytest.approx(3 * math.log(100) / 30)
    assert star_plan(100, 10).p == 1.0  # 3 ln 100 > 10


def test_star_seeded():
    assert star_sample(50, 20, seed=9) == star_sample(50, 20, seed=9)
    assert star_centers(50, 20, seed=9) != star_centers(50, 20, seed=10)


def test_star_hits_big_sets():
    n, s = 100, 30
    fam = np.random.default_rng(0).random((200, n)).argsort(axis=1)[:, :s]
    good = 0
    for seed in range(100):
        centers = set(star_centers(n, s, seed))
        good += all(centers & set(row.tolist()) for row in fam)
    assert good >= 95


def test_edge_plan_rounds_and_p():
    plan = edge_plan(64, 8, 0.5)
    assert plan.rounds == math.ceil(3 * math.log2(64))
    assert plan.p == pytest.approx(1.5 * math.log(8) / 8)


def test_pair_connected_iff_drawn():
    rounds = edge_sample_rounds(10, 2, 0.5, seed=4)
    union = set().union(*rounds)
    assert union == edge_sample(10, 2, 0.5, seed=4)
    for e in [(0, 1), (2, 7), (3, 9)]:
        assert (e in union) == any(e in r for r in rounds)


def test_round_edge_count_binomial():
    n, s = 40, 6
    plan = edge_plan(n, s)
    pairs = n * (n - 1) // 2
    counts = [len(edge_sample_rounds(n, s, seed=seed)[0]) for seed in range(100)]
    mean = pairs * plan.p
    sd = math.sqrt(pairs * plan.p * (1 - plan.p))
    assert abs(np.mean(counts) - mean) <= 3 * sd / math.sqrt(len(counts))


def test_rounds_are_independent_streams():
    rounds = edge_sample_rounds(30, 5, seed=1)
    assert len({frozenset(r) for r in rounds}) == len(rounds)


@pytest.mark.parametrize("kwargs", [dict(kind="tree", s=2, p=0.5, rounds=1, seed=0),
                                    dict(kind="star", s=2, p=1.5, rounds=1, seed=0),
                                    dict(kind="edge", s=0, p=0.5, rounds=1, seed=0)])
def test_bad_plans(kwargs):
    with pytest.raises(ValueError):
        SamplePlan(**kwargs)


def test_bad_arguments():
    with pytest.raises(ValueError):
        edge_plan(10, 1)
    with pytest.raises(ValueError):
        edge_plan(10, 4, eps=1.5)


def test_batched_connectivity_helper():
    import numpy as np
    from test_acceptance import _all_connected
    from conftest import has_path
    subsets = np.array([[0, 1, 2, 3, 4, 5, 6, 7], [8, 9, 10, 11, 12, 13, 14, 15]])
    path = [(i, i + 1) for i in range(7)] + [(8 + i, 9 + i) for i in range(7)]
    assert _all_connected(path, subsets)
    broken = [e for e in path if e != (11, 12)]
    assert not _all_connected(broken, subsets)
    assert not has_path(16, broken, 8, 15, set(range(8, 16)))
