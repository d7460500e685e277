"""Metric computation against gold topic sets."""

import json
import random

import pytest

from booktopics.errors import ParseError
from booktopics.evaluation import evaluate, load_topic_sets


class TestMicro:
    def test_perfect_predictions(self):
        gold = {"p1": {"a", "b"}, "p2": {"c"}}
        m = evaluate(gold, gold)
        assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)
        assert m.mode == "micro"
        assert m.paper_count == 2

    def test_half_right(self):
        gold = {"p1": {"a", "b"}}
        pred = {"p1": {"b", "c"}}
        m = evaluate(gold, pred)
        assert (m.precision, m.recall, m.f1) == (0.5, 0.5, 0.5)

    def test_no_overlap_gives_zero_f1(self):
        m = evaluate({"p": {"a"}}, {"p": {"b"}})
        assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)

    def test_random_fixture_matches_pair_counting(self):
        rng = random.Random(8080)
        universe = [f"t{i}" for i in range(12)]
        for _ in range(20):
            papers = [f"p{i}" for i in range(10)]
            gold = {p: set(rng.sample(universe, rng.randint(0, 5))) for p in papers}
            pred = {p: set(rng.sample(universe, rng.randint(0, 5))) for p in papers}
            m = evaluate(gold, pred)
            tp = sum(len(gold[p] & pred[p]) for p in papers)
            pred_pairs = sum(len(pred[p]) for p in papers)
            gold_pairs = sum(len(gold[p]) for p in papers)
            expect_p = tp / pred_pairs if pred_pairs else 0.0
            expect_r = tp / gold_pairs if gold_pairs else 0.0
            assert m.precision == pytest.approx(expect_p, abs=1e-12)
            assert m.recall == pytest.approx(expect_r, abs=1e-12)
            if expect_p + expect_r:
                assert m.f1 == pytest.approx(
                    2 * expect_p * expect_r / (expect_p + expect_r), abs=1e-12
                )
            else:
                assert m.f1 == 0.0

    def test_order_invariant(self):
        gold = {"a": {"x"}, "b": {"y", "z"}, "c": set()}
        pred = {"c": {"x"}, "a": {"x"}, "b": {"z"}}
        m1 = evaluate(gold, pred)
        m2 = evaluate(dict(reversed(gold.items())), dict(reversed(pred.items())))
        assert (m1.precision, m1.recall, m1.f1) == (m2.precision, m2.recall, m2.f1)


class TestMacro:
    def test_averages_per_paper(self):
        gold = {"p1": {"a"}, "p2": {"a", "b"}}
        pred = {"p1": {"a"}, "p2": {"c", "b"}}
        m = evaluate(gold, pred, macro=True)
        # p1: P=R=F=1; p2: P=0.5, R=0.5, F=0.5
        assert m.mode == "macro"
        assert m.precision == pytest.approx(0.75)
        assert m.recall == pytest.approx(0.75)
        assert m.f1 == pytest.approx(0.75)
        assert m.per_paper["p2"] == (0.5, 0.5, 0.5)

    def test_empty_sets_count_as_perfect(self):
        m = evaluate({"p": set()}, {"p": set()}, macro=True)
        assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)


class TestIdMismatch:
    def test_intersection_with_warning(self):
        gold = {"p1": {"a"}, "p2": {"b"}}
        pred = {"p2": {"b"}, "p3": {"c"}}
        m = evaluate(gold, pred)
        assert m.paper_count == 1
        assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)
        assert any("p1" in w for w in m.warnings)
        assert any("p3" in w for w in m.warnings)


class TestLoading:
    def test_list_format(self, tmp_path):
        p = tmp_path / "gold.json"
        p.write_text(
            json.dumps(
                [
                    {"paperId": "p1", "topics": ["Semantic  Web", "linked data"]},
                    {"paperId": "p2", "topics": []},
                ]
            ),
            encoding="utf-8",
        )
        assert load_topic_sets(p) == {
            "p1": {"semantic web", "linked data"},
            "p2": set(),
        }

    def test_report_format(self, tmp_path):
        p = tmp_path / "report.json"
        p.write_text(
            json.dumps(
                {
                    "perChapter": [
                        {"chapterId": "c1", "topics": [{"topic": "semantic web"}]},
                        {"chapterId": "c2", "topics": []},
                    ]
                }
            ),
            encoding="utf-8",
        )
        assert load_topic_sets(p) == {"c1": {"semantic web"}, "c2": set()}

    @pytest.mark.parametrize(
        "payload",
        [
            '{"neither": 1}',
            '[{"paperId": "p"}]',
            '[{"topics": []}]',
            '[{"paperId": "p", "topics": []}, {"paperId": "p", "topics": []}]',
            "not json",
        ],
        ids=["not-a-list", "missing-topics", "missing-id", "duplicate-id", "bad-json"],
    )
    def test_malformed_files(self, tmp_path, payload):
        p = tmp_path / "bad.json"
        p.write_text(payload, encoding="utf-8")
        with pytest.raises(ParseError):
            load_topic_sets(p)
