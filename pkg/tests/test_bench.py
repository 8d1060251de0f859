import csv
import random

import pytest

from conftest import random_platform
from starbalance.bench import (
    MIN_TASKS,
    BenchStats,
    PlatformFamily,
    collect,
    generate,
    run_benchmark,
    run_instance,
    write_csv,
)
from starbalance.core import Platform
from starbalance.oracle import brute_force


def test_same_seed_same_platform():
    fam = PlatformFamily("het", "het")
    assert generate(fam, 10, 42) == generate(fam, 10, 42)
    assert generate(fam, 10, 42) != generate(fam, 10, 43)


def test_homogeneous_family_shares_parameters():
    p = generate(PlatformFamily("hom", "hom"), 8, 1)
    assert p.comm_homogeneous and p.comp_homogeneous


@pytest.mark.parametrize(
    "regime,c_range,w_range",
    [("general", (1, 100), (1, 100)), ("c<=w", (20, 50), (50, 80)), ("c>=w", (50, 80), (20, 50))],
)
def test_regime_ranges(regime, c_range, w_range):
    for seed in range(30):
        p = generate(PlatformFamily("het", "het", regime), 10, seed)
        assert all(c_range[0] <= c <= c_range[1] for c in p.c)
        assert all(w_range[0] <= w <= w_range[1] for w in p.w)
        assert p.n >= MIN_TASKS
        assert max(p.loads) <= 10


def test_family_parsing_and_aliases():
    fam = PlatformFamily.parse("hom-het", "comm<=comp")
    assert (fam.comm, fam.comp, fam.regime) == ("hom", "het", "c<=w")
    assert fam.key == "hom-het/c<=w"
    with pytest.raises(ValueError):
        PlatformFamily.parse("hom", "general")
    with pytest.raises(ValueError):
        PlatformFamily("het", "het", "fast")


def test_generate_needs_two_workers():
    with pytest.raises(ValueError):
        generate(PlatformFamily(), 1, 0)


def test_balanced_instance_all_at_distance_one():
    p = Platform.from_lists([3, 5], [2, 2], [4, 4])
    stats = collect(PlatformFamily(), [run_instance(p)])
    assert all(stats.distances[a] == [1] for a in ("bba", "mbbsa", "rbsa"))
    assert stats.cdf("bba") == [(0, 1.0)]


def test_homogeneous_benchmark_is_exact():
    stats = run_benchmark([PlatformFamily("hom", "hom")], 20, m=6, seed=3)["hom-hom/general"]
    assert all(d == 1 for d in stats.distances["bba"])
    assert all(d == 1 for d in stats.distances["mbbsa"])


def test_stats_invariants():
    stats = run_benchmark([PlatformFamily("het", "het")], 25, m=6, seed=5)["het-het/general"]
    for algo, ds in stats.distances.items():
        assert all(d >= 1 for d in ds)
        cdf = stats.cdf(algo)
        probs = [p for _, p in cdf]
        assert probs == sorted(probs) and probs[-1] == 1.0
        assert stats.std(algo) >= 0
    per_instance = zip(*stats.distances.values())
    assert all(min(row) == 1 for row in per_instance)


def test_parallel_run_matches_serial():
    fams = [PlatformFamily("het", "het")]
    serial = run_benchmark(fams, 8, m=5, seed=1)
    parallel = run_benchmark(fams, 8, m=5, seed=1, jobs=2)
    assert serial["het-het/general"].makespans == parallel["het-het/general"].makespans


def test_count_must_be_positive():
    with pytest.raises(ValueError):
        run_benchmark([PlatformFamily()], 0)


def test_best_of_three_never_beats_oracle():
    rng = random.Random(41)
    for _ in range(30):
        p = random_platform(rng, rng.randint(2, 4), rng.randint(1, 8), rng.random() < 0.5, False)
        assert min(run_instance(p).values()) >= brute_force(p)[1]


def test_csv_export(tmp_path):
    stats = run_benchmark([PlatformFamily("hom", "het")], 3, m=4, seed=0)
    out = tmp_path / "stats.csv"
    write_csv(stats, out)
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9
    assert set(rows[0]) == {"instance", "algorithm", "makespan", "distance", "family"}
    assert {r["algorithm"] for r in rows} == {"bba", "mbbsa", "rbsa"}


def test_summary_fields():
    st = collect(PlatformFamily(), [{"bba": 4, "mbbsa": 2, "rbsa": 2}, {"bba": 3, "mbbsa": 3, "rbsa": 3}])
    assert isinstance(st, BenchStats)
    summary = st.summary()
    assert summary["count"] == 2
    assert summary["mean"]["bba"] == 1.5
    assert summary["std"]["mbbsa"] == 0.0
    assert st.cdf("bba", 100)[-1] == (100, 1.0)
    assert st.cdf("bba", 100)[99] == (99, 0.5)
