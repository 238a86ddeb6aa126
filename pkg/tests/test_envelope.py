import json

import pytest

from conftest import CHANNEL_POINTS, rows
from inducedrate.channel import PauliDist, dist_from_total_p, hashing_bound
from inducedrate.codes import all_z, canonical_string, z_repetition
from inducedrate.envelope import (
    CACHE_ENV_VAR,
    NoBracket,
    RateCache,
    build_envelope,
    evaluate_grid,
    improvement_threshold,
)
from inducedrate.induced import MemoryCapExceeded, evaluate
from inducedrate.symplectic import build_tableau

GRID = [dist_from_total_p(p, 9.0) for p in (0.2, 0.25, 0.26, 0.27)]


def test_noiseless_point():
    env = build_envelope([rows("ZZ"), rows("ZZI", "IZZ")], [PauliDist(1, 0, 0, 0)])
    (pt,) = env
    assert pt.R_hash == 1.0
    assert pt.R_ind_best == pytest.approx(0.5)
    assert pt.best_code == "ZZ" and (pt.n, pt.k) == (2, 1)
    assert not pt.improved


def test_no_codes_gives_baseline_only():
    env = build_envelope([], GRID)
    assert [pt.R_hash for pt in env] == [hashing_bound(d) for d in GRID]
    assert all(pt.R_ind_best is None and not pt.improved for pt in env)


def test_best_code_dominates(dfs_codes_n4):
    codes = dfs_codes_n4[::7]
    env = build_envelope(codes, GRID)
    for pt, dist in zip(env, GRID):
        rates = [evaluate(build_tableau(H), dist).R_ind for H in codes]
        assert pt.R_ind_best == max(rates)
        assert pt.improved == (max(rates) > pt.R_hash)


def test_ties_prefer_shorter_code():
    # two copies of ZZ have the same rate as one when noiseless
    one = rows("ZZ")
    two = rows("ZZII", "IIZZ")
    (pt,) = build_envelope([two, one], [PauliDist(1, 0, 0, 0)])
    assert pt.n == 2


def test_labels_default_to_total_error():
    env = build_envelope([rows("ZZ")], GRID)
    assert [pt.p for pt in env] == pytest.approx([0.2, 0.25, 0.26, 0.27], abs=1e-12)
    assert env[0].q_X == pytest.approx(GRID[0].p_X + GRID[0].p_Y)


def test_failed_cell_is_kept_as_exception():
    codes = [rows("ZZ"), z_repetition(13)]
    table = evaluate_grid(codes, CHANNEL_POINTS[:1], method="binning")
    assert not isinstance(table[0][0], Exception)
    assert isinstance(table[1][0], MemoryCapExceeded)
    env = build_envelope(codes, CHANNEL_POINTS[:1], method="binning")
    assert env[0].best_code == "ZZ"


def test_threads_do_not_change_results(dfs_codes_n4):
    codes = dfs_codes_n4[:60]
    a = build_envelope(codes, GRID, threads=1)
    b = build_envelope(codes, GRID, threads=4)
    assert a == b


class TestCache:
    def test_memory_hits(self):
        cache = RateCache()
        evaluate_grid([rows("ZZ")], GRID, cache=cache)
        assert len(cache) == len(GRID)
        key = RateCache.key(rows("ZZ"), GRID[0])
        assert cache.get(key) == evaluate(build_tableau(rows("ZZ")), GRID[0])

    def test_key_is_row_space(self):
        assert RateCache.key(rows("ZZI", "IZZ"), GRID[0]) == RateCache.key(rows("ZIZ", "ZZI"), GRID[0])

    def test_directory_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(CACHE_ENV_VAR, str(tmp_path))
        evaluate_grid([rows("ZZ")], GRID[:2], cache=RateCache())
        files = list(tmp_path.glob("*.json"))
        assert len(files) == 2
        assert "H_L_given_S" in json.loads(files[0].read_text())
        # a fresh cache reads the stored values back
        fresh = RateCache()
        assert fresh.get(RateCache.key(rows("ZZ"), GRID[0])) == evaluate(build_tableau(rows("ZZ")), GRID[0])


class TestThreshold:
    def test_zz(self):
        res = improvement_threshold(rows("ZZ"), 9.0, 0.24, 0.27, tol=1e-10)
        assert res.p_star == pytest.approx(0.253814638739268, abs=1e-4)
        assert res.bracket <= 1e-10
        assert (res.n, res.k, res.code) == (2, 1, canonical_string(rows("ZZ")))

    def test_sign_change_at_result(self):
        res = improvement_threshold(all_z(3), 9.0, 0.24, 0.27, tol=1e-9)

        def gap(p):
            d = dist_from_total_p(p, 9.0)
            return evaluate(build_tableau(all_z(3)), d).R_ind - hashing_bound(d)

        assert gap(res.p_star - 1e-7) < 0 < gap(res.p_star + 1e-7)

    def test_no_bracket(self):
        with pytest.raises(NoBracket):
            improvement_threshold(rows("ZZ"), 9.0, 0.1, 0.2)
