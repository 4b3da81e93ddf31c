import numpy as np
import pytest

from oracles import bfs_components, oracle_eahsi_order, oracle_pattern
from spxtrack.hadamard import pattern_from_row
from spxtrack.ordering import (OrderedSequence, baseline_order,
                               connected_components, eahsi_order, load_order,
                               max_effective_area, save_order)


def test_connected_components_examples():
    assert connected_components([[1, 1], [1, 1]], 4, "white") == [4]
    assert sorted(connected_components([[1, 0], [0, 1]], 4, "white")) == [1, 1]
    assert connected_components([[1, 0], [0, 1]], 8, "white") == [2]


def test_connected_components_black_and_empty():
    assert connected_components([[1, 1], [1, 1]], 4, "black") == []
    assert connected_components([[0, 0], [0, 0]], 4, "white") == []


@pytest.mark.parametrize("connectivity", [4, 8])
@pytest.mark.parametrize("seed", range(5))
def test_connected_components_matches_bfs(connectivity, seed):
    grid = (np.random.default_rng(seed).random((12, 12)) > 0.5).astype(int)
    for value, color in ((1, "white"), (0, "black")):
        got = sorted(connected_components(grid, connectivity, color))
        assert got == sorted(bfs_components(grid, connectivity, value))


def test_max_effective_area_examples():
    assert max_effective_area(pattern_from_row(2, 0)).max_white_area == 4
    assert max_effective_area(pattern_from_row(2, 1)).max_white_area == 2
    assert max_effective_area(pattern_from_row(2, 3)).max_white_area == 1


def test_max_effective_area_rejects_complement():
    with pytest.raises(ValueError):
        max_effective_area(pattern_from_row(2, 1).complement())


def test_eahsi_n2():
    assert eahsi_order(2).order.tolist() == [0, 1, 2, 3]


@pytest.mark.parametrize("n", [2, 4, 8])
def test_eahsi_matches_bfs_oracle(n):
    expected, areas = oracle_eahsi_order(n)
    seq = eahsi_order(n)
    assert seq.order.tolist() == expected
    ordered_areas = [areas[k] for k in seq.order]
    assert all(a >= b for a, b in zip(ordered_areas, ordered_areas[1:]))


def test_eahsi_leads_with_all_ones():
    for n in (2, 4, 8, 16):
        seq = eahsi_order(n)
        assert seq.order[0] == 0


def test_orderings_are_permutations():
    for seq in (eahsi_order(4), baseline_order(4, "natural"),
                baseline_order(4, "random", seed=7),
                baseline_order(4, "region_count_baseline")):
        assert sorted(seq.order.tolist()) == list(range(16))


def test_baselines():
    assert baseline_order(2, "natural").order.tolist() == [0, 1, 2, 3]
    a = baseline_order(2, "random", seed=3).order.tolist()
    b = baseline_order(2, "random", seed=3).order.tolist()
    assert a == b
    assert baseline_order(2, "region_count_baseline").order[0] == 0
    with pytest.raises(ValueError):
        baseline_order(2, "bogus")
    with pytest.raises(ValueError):
        baseline_order(2, "random")


def test_region_count_baseline_matches_bfs():
    n = 4
    counts = []
    for k in range(n * n):
        cells = oracle_pattern(n, k)
        counts.append(len(bfs_components(cells, 4, 1))
                      + len(bfs_components(cells, 4, 0)))
    expected = sorted(range(n * n), key=lambda k: (counts[k], k))
    assert baseline_order(n, "region_count_baseline").order.tolist() == expected


@pytest.mark.parametrize("n", [2, 4, 8])
def test_golden_order_files(n, golden_dir, tmp_path):
    golden = golden_dir / f"order_n{n}_eahsi.txt"
    out = tmp_path / "order.txt"
    save_order(eahsi_order(n), out)
    assert out.read_bytes() == golden.read_bytes()


def test_order_roundtrip(tmp_path):
    for seq in (eahsi_order(4), baseline_order(4, "random", seed=11)):
        path = tmp_path / "o.txt"
        save_order(seq, path)
        loaded = load_order(path)
        assert loaded.n == seq.n
        assert loaded.method == seq.method
        assert loaded.connectivity == seq.connectivity
        assert loaded.seed == seq.seed
        assert loaded.order.tolist() == seq.order.tolist()
        save_order(loaded, tmp_path / "o2.txt")
        assert (tmp_path / "o2.txt").read_bytes() == path.read_bytes()


def test_sequence_rejects_non_permutation():
    with pytest.raises(ValueError):
        OrderedSequence(n=2, method="natural", order=np.array([0, 1, 2, 2]))


def test_side_budget():
    with pytest.raises(ValueError):
        eahsi_order(256)
    with pytest.raises(ValueError):
        eahsi_order(3)
