"""Log parsing, tuple expansion, replay mechanics, and the synthetic model."""

import logging

import pytest

from qacmix.engines import QueryRecord, StaticEngine, build_engines
from qacmix.replay import (
    ReplayTuple,
    build_suggestion_cache,
    build_tuples,
    click_index,
    doc_to_tuples,
    enumerate_mixtures,
    increase_pct,
    load_query_log,
    make_probability_environment,
    replay_episodes,
    results_table,
    run_experiment,
    run_synthetic,
    sample_episode_indices,
    split_log,
    tuples_to_doc,
)
from qacmix.rng import Xoshiro256
from qacmix.strategies import MixtureConfig, build_strategy


def static_engines(table, prefix_table=None):
    if prefix_table is None:
        prefix_table = {}
    return {
        name: StaticEngine(name, prefix_table.get(name, {"": texts}))
        for name, texts in table.items()
    }


class TestLoadQueryLog:
    def test_comma_delimited(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text(
            "timestamp,user_id,query\n"
            "100,u1,apple pie\n"
            '200,u2,"cake, chocolate"\n'
        )
        records = load_query_log(path)
        assert records == [
            QueryRecord(100.0, "u1", "apple pie"),
            QueryRecord(200.0, "u2", "cake, chocolate"),
        ]

    def test_tab_delimited_autodetected(self, tmp_path):
        path = tmp_path / "log.tsv"
        path.write_text("timestamp\tuser_id\tquery\n100\tu1\tapple, pie\n")
        assert load_query_log(path) == [QueryRecord(100.0, "u1", "apple, pie")]

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp,user_id,query\n\n100,u1,apple\n\n")
        assert len(load_query_log(path)) == 1

    def test_missing_column_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp,query\n100,apple\n")
        with pytest.raises(ValueError, match="user_id"):
            load_query_log(path)

    def test_bad_timestamp_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp,user_id,query\nnot_a_number,u1,apple\n")
        with pytest.raises(ValueError, match="log.csv:2"):
            load_query_log(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_query_log(path)


class TestSplitLog:
    def test_time_ordered_split(self):
        records = [QueryRecord(float(t), "u", f"q{t}") for t in (5, 1, 3, 2, 4)]
        train, test = split_log(records, 0.6)
        assert [r.timestamp for r in train] == [1.0, 2.0, 3.0]
        assert [r.timestamp for r in test] == [4.0, 5.0]

    def test_fraction_bounds(self):
        with pytest.raises(ValueError):
            split_log([], 0.0)
        with pytest.raises(ValueError):
            split_log([], 1.0)


class TestBuildTuples:
    def test_proper_prefixes_only(self):
        records = [QueryRecord(0.0, "u", "abc")] * 10
        tuples = build_tuples(records, min_prefix_len=1)
        assert len(tuples) == 20
        assert {(t.prefix, t.query) for t in tuples} == {("a", "abc"), ("ab", "abc")}

    def test_short_queries_skipped_and_logged(self, caplog):
        records = [QueryRecord(0.0, "u", "a"), QueryRecord(0.0, "u", "xy")]
        with caplog.at_level(logging.INFO, logger="qacmix.replay"):
            tuples = build_tuples(records, min_prefix_len=1)
        assert [(t.prefix, t.query) for t in tuples] == [("x", "xy")]
        assert "skipped 1" in caplog.text

    def test_normalization_applied(self):
        tuples = build_tuples([QueryRecord(0.0, "u", "  AB  cd ")], min_prefix_len=4)
        assert tuples[0].query == "ab cd"
        assert tuples[0].prefix == "ab c"

    def test_max_prefix_len_cap(self):
        tuples = build_tuples([QueryRecord(0.0, "u", "abcdef")], 1, max_prefix_len=2)
        assert {t.prefix for t in tuples} == {"a", "ab"}

    def test_min_prefix_len_validated(self):
        with pytest.raises(ValueError):
            build_tuples([], min_prefix_len=0)

    def test_user_id_propagates(self):
        tuples = build_tuples([QueryRecord(0.0, "alice", "ab")])
        assert tuples[0].user_id == "alice"
        tuples = build_tuples([QueryRecord(0.0, "", "ab")])
        assert tuples[0].user_id is None


class TestClickIndex:
    def _displayed(self, texts):
        engines = static_engines({"A": list(texts)})
        strategy = build_strategy(
            "single", engines, MixtureConfig(display_size=5, seed=0), ["A"]
        )
        return strategy.fill("")

    def test_exact_match_position(self):
        displayed = self._displayed(["aa", "bb", "cc"])
        assert click_index(displayed, "bb", 5) == 2
        assert click_index(displayed, "BB ", 5) == 2

    def test_no_match_full_width_sentinel(self):
        displayed = self._displayed(["aa", "bb"])
        # Only two items shown; the sentinel still reflects the full width.
        assert click_index(displayed, "zz", 5) == 6


class TestReplay:
    def _tuples(self):
        return [
            ReplayTuple("a", "ab", "u1"),
            ReplayTuple("a", "ac", "u2"),
            ReplayTuple("b", "bd", "u1"),
        ]

    def _engines(self):
        return {
            "hit": StaticEngine("hit", {"a": ["ab", "ac"], "b": ["bd"]}),
            "miss": StaticEngine("miss", {"a": ["azzz"], "b": ["bzzz"]}),
        }

    def test_sample_indices_in_range_and_deterministic(self):
        rng = Xoshiro256(3)
        indices = sample_episode_indices(10, 1000, rng)
        assert all(0 <= i < 10 for i in indices)
        assert indices == sample_episode_indices(10, 1000, Xoshiro256(3))
        with pytest.raises(ValueError):
            sample_episode_indices(0, 5, rng)

    def test_single_hit_engine_always_clicks(self):
        config = MixtureConfig(display_size=2, seed=0)
        strategy = build_strategy("single", self._engines(), config, ["hit"])
        result = replay_episodes(strategy, self._tuples(), [0, 1, 2, 0])
        assert result.clicks == 4
        assert result.episodes == 4
        assert sum(result.position_counts) == 4

    def test_single_miss_engine_never_clicks(self):
        config = MixtureConfig(display_size=2, seed=0)
        strategy = build_strategy("single", self._engines(), config, ["miss"])
        result = replay_episodes(strategy, self._tuples(), [0, 1, 2])
        assert result.clicks == 0
        assert result.position_counts[-1] == 3

    def test_click_position_histogram(self):
        config = MixtureConfig(display_size=2, seed=0)
        strategy = build_strategy("single", self._engines(), config, ["hit"])
        # Tuple 0 clicks position 1 ("ab"), tuple 1 clicks position 2 ("ac").
        result = replay_episodes(strategy, self._tuples(), [0, 1, 1])
        assert result.position_counts == (1, 2, 0)

    def test_cache_matches_live_fetch(self):
        tuples = self._tuples()
        indices = [0, 1, 2, 1, 0]
        engines = self._engines()
        cache = build_suggestion_cache(engines, tuples, indices, 2)
        config = MixtureConfig(display_size=2, seed=4)
        live = replay_episodes(
            build_strategy("ranked", engines, config), tuples, indices
        )
        cached = replay_episodes(
            build_strategy("ranked", engines, config), tuples, indices, cache=cache
        )
        assert live == cached

    def test_learning_disabled_freezes_posteriors(self):
        config = MixtureConfig(display_size=2, seed=1)
        strategy = build_strategy("ranked", self._engines(), config)
        replay_episodes(strategy, self._tuples(), [0, 1, 2] * 10, learn=False)
        assert all(
            post.alpha == 1.0 and post.beta == 1.0
            for sampler in strategy.samplers
            for post in sampler.posteriors.values()
        )

    def test_run_experiment_repeats_are_reseeded(self):
        config = MixtureConfig(display_size=2, seed=100)
        results = run_experiment(
            "ranked", self._engines(), self._tuples(), config, episodes=50, repeats=3
        )
        assert [r.seed for r in results] == [100, 101, 102]
        rerun = run_experiment(
            "ranked", self._engines(), self._tuples(), config, episodes=50, repeats=3
        )
        assert results == rerun


class TestMetrics:
    def test_increase_pct_reference_values(self):
        assert increase_pct(2905, 2104) == 38.07
        assert increase_pct(4373, 4379) == -0.14
        assert increase_pct(100, 100) == 0.0
        assert increase_pct(5, 0) is None

    def test_results_table_shape(self):
        from qacmix.replay import ExperimentResult

        def result(name, clicks):
            return ExperimentResult(name, 0, 100, clicks, (clicks, 100 - clicks))

        table = results_table(
            {"basic": [result("basic", 50)], "ranked": [result("ranked", 60)]},
            baseline="basic",
        )
        assert table["baseline"] == "basic"
        assert [row["strategy"] for row in table["rows"]] == ["basic", "ranked"]
        assert table["rows"][0]["increase_pct"] == 0.0
        assert table["rows"][1]["increase_pct"] == 20.0

    def test_results_table_requires_baseline(self):
        with pytest.raises(ValueError):
            results_table({}, baseline="basic")


class TestEnumerate:
    def _setup(self):
        engines = {
            "good": StaticEngine("good", {"a": ["ab", "ac"]}),
            "bad": StaticEngine("bad", {"a": ["ax", "ay"]}),
        }
        tuples = [ReplayTuple("a", "ab", None), ReplayTuple("a", "ac", None)]
        return engines, tuples

    def test_full_enumeration_sorted_nonincreasing(self):
        engines, tuples = self._setup()
        config = MixtureConfig(display_size=2, seed=5)
        rows = enumerate_mixtures(engines, tuples, config, episodes=200)
        assert len(rows) == 4
        clicks = [row["clicks"] for row in rows]
        assert clicks == sorted(clicks, reverse=True)
        assert rows[0]["assignment"] == ["good", "good"]
        assert rows[0]["clicks"] == 200
        assert rows[-1]["assignment"] == ["bad", "bad"]
        assert rows[-1]["clicks"] == 0

    def test_enumeration_matches_direct_replay(self):
        """The weighted-unique-tuple shortcut must equal a naive episode loop."""
        engines, tuples = self._setup()
        config = MixtureConfig(display_size=2, seed=5)
        rows = enumerate_mixtures(engines, tuples, config, episodes=200)
        from qacmix.replay import FixedMixtureStrategy
        from qacmix.rng import derive_seed

        ep_rng = Xoshiro256(derive_seed(config.seed, 1))
        indices = sample_episode_indices(len(tuples), 200, ep_rng)
        for row in rows:
            strategy = FixedMixtureStrategy(engines, config, row["assignment"])
            direct = replay_episodes(strategy, tuples, indices, learn=False)
            assert direct.clicks == row["clicks"]
            assert list(direct.position_counts) == row["position_counts"]

    def test_cap_guard(self):
        engines, tuples = self._setup()
        config = MixtureConfig(display_size=2, seed=5)
        with pytest.raises(ValueError, match="cap"):
            enumerate_mixtures(engines, tuples, config, 10, max_assignments=3)

    def test_explicit_assignments_bypass_cap(self):
        engines, tuples = self._setup()
        config = MixtureConfig(display_size=2, seed=5)
        rows = enumerate_mixtures(
            engines,
            tuples,
            config,
            10,
            assignments=[["good", "bad"]],
            max_assignments=0,
        )
        assert len(rows) == 1

    def test_deterministic_across_calls(self):
        engines, tuples = self._setup()
        config = MixtureConfig(display_size=2, seed=9)
        a = enumerate_mixtures(engines, tuples, config, episodes=100)
        b = enumerate_mixtures(engines, tuples, config, episodes=100)
        assert a == b


class TestSynthetic:
    def test_single_slot_click_rate(self):
        env = make_probability_environment({"e": 0.5}, [1.0], display_size=1)
        config = MixtureConfig(display_size=1, seed=2)
        strategy = build_strategy("single", env.engines, config, ["e"])
        result = run_synthetic(strategy, env, 10_000, Xoshiro256(7))
        assert result.click_rate == pytest.approx(0.5, abs=0.02)

    def test_scan_model_position_shares(self):
        env = make_probability_environment({"e": 0.5}, [1.0] * 5, display_size=5)
        config = MixtureConfig(display_size=5, seed=2)
        strategy = build_strategy("single", env.engines, config, ["e"])
        result = run_synthetic(strategy, env, 20_000, Xoshiro256(8))
        shares = [c / 20_000 for c in result.position_counts]
        assert shares[0] == pytest.approx(0.5, abs=0.02)
        assert shares[1] == pytest.approx(0.25, abs=0.02)

    def test_decay_scales_click_chance(self):
        env = make_probability_environment({"e": 1.0}, [1.0, 0.25, 0, 0, 0], 5)
        config = MixtureConfig(display_size=5, seed=3)
        strategy = build_strategy("single", env.engines, config, ["e"])
        result = run_synthetic(strategy, env, 5_000, Xoshiro256(9))
        assert result.position_counts[0] == 5_000

    def test_record_fills(self):
        env = make_probability_environment({"a": 0.2, "b": 0.2}, [1.0] * 3, 3)
        config = MixtureConfig(display_size=3, seed=4)
        strategy = build_strategy("ranked", env.engines, config)
        result = run_synthetic(strategy, env, 50, Xoshiro256(10), record_fills=True)
        assert len(result.fills) == 50
        assert all(len(f) == 3 for f in result.fills)
        assert all(set(f) <= {"a", "b"} for f in result.fills)

    def test_validation(self):
        with pytest.raises(ValueError):
            make_probability_environment({"e": 1.5}, [1.0], 1)
        with pytest.raises(ValueError):
            make_probability_environment({"e": 0.5}, [1.0], 2)
        env = make_probability_environment({"e": 0.5}, [1.0], 1)
        with pytest.raises(ValueError):
            type(env)(engines=env.engines, prob=env.prob, prefixes=())


class TestTupleDocs:
    def test_roundtrip(self):
        tuples = [ReplayTuple("a", "ab", "u1"), ReplayTuple("b", "bc", None)]
        assert doc_to_tuples(tuples_to_doc(tuples)) == tuples
