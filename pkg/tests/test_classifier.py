"""Syntactic and semantic classification, enrichment, book aggregation."""

import random

import pytest
from conftest import padded_model_text

from booktopics.classifier import (
    ENHANCED,
    SEMANTIC,
    SYNTACTIC,
    ClassifierConfig,
    classify_book,
    classify_books,
    classify_chapter,
    semantic_classify,
    syntactic_classify,
)
from booktopics.embeddings import parse_model_text
from booktopics.errors import SchemaError
from booktopics.ingest import Book, Chapter
from booktopics.ontology import ontology_from_dict


def make_ontology(topic_ids, super_pairs=(), equiv_pairs=()):
    return ontology_from_dict(
        {
            "topics": [{"id": t, "label": t} for t in topic_ids],
            "relations": [
                {"type": "superTopicOf", "source": a, "target": b} for a, b in super_pairs
            ]
            + [
                {"type": "relatedEquivalent", "source": a, "target": b}
                for a, b in equiv_pairs
            ],
        }
    )


CHAIN = make_ontology(
    ["computer science", "artificial intelligence", "machine learning", "neural networks"],
    super_pairs=[
        ("computer science", "artificial intelligence"),
        ("artificial intelligence", "machine learning"),
        ("machine learning", "neural networks"),
    ],
)


class TestSyntactic:
    def test_exact_label_scores_one(self):
        ch = Chapter("c1", "A Survey", abstract="We analyse neural networks at scale.")
        found = syntactic_classify(ch, CHAIN, ClassifierConfig())
        assert set(found) == {"neural networks"}
        src = found["neural networks"].sources[0]
        assert src.origin == SYNTACTIC
        assert src.score == 1.0
        assert src.field == "abstract"
        assert src.ngram == "neural networks"

    def test_near_miss_below_threshold(self):
        ch = Chapter("c1", "t", abstract="we study semantic webs")
        ont = make_ontology(["semantic web"])
        assert syntactic_classify(ch, ont, ClassifierConfig(lev_threshold=0.94)) == {}
        # the same text clears a lower bar: 1 - 1/13 ~= 0.923
        found = syntactic_classify(ch, ont, ClassifierConfig(lev_threshold=0.92))
        assert set(found) == {"semantic web"}
        assert found["semantic web"].sources[0].score == pytest.approx(1 - 1 / 13)

    def test_keywords_are_matched(self):
        ch = Chapter("c1", "An Unrelated Title", keywords=("Linked Data",))
        ont = make_ontology(["linked data"])
        found = syntactic_classify(ch, ont, ClassifierConfig())
        assert set(found) == {"linked data"}
        assert found["linked data"].sources[0].field == "keyword"

    def test_case_insensitive(self):
        ont = make_ontology(["semantic web"])
        cfg = ClassifierConfig()
        lower = Chapter("c1", "the semantic web explained")
        upper = Chapter("c1", "THE SEMANTIC WEB EXPLAINED")
        a = syntactic_classify(lower, ont, cfg)
        b = syntactic_classify(upper, ont, cfg)
        assert set(a) == set(b) == {"semantic web"}
        assert [s.score for s in a["semantic web"].sources] == [
            s.score for s in b["semantic web"].sources
        ]

    def test_alias_resolves_to_canonical(self):
        ont = make_ontology(
            ["ontology matching", "ontology mapping"],
            equiv_pairs=[("ontology matching", "ontology mapping")],
        )
        ch = Chapter("c1", "Ontology Matching Systems")
        found = syntactic_classify(ch, ont, ClassifierConfig())
        assert set(found) == {"ontology mapping"}
        assert found["ontology mapping"].sources[0].matched_label == "ontology matching"

    def test_ambiguous_alias_emits_both_topics(self):
        ont = ontology_from_dict(
            {
                "topics": [
                    {"id": "latent dirichlet allocation", "label": "Latent Dirichlet Allocation"},
                    {"id": "x topic model", "label": "LDA"},
                    {"id": "lda classifier", "label": "LDA Classifier"},
                    {"id": "y discriminant", "label": "LDA"},
                ],
                "relations": [
                    {
                        "type": "relatedEquivalent",
                        "source": "latent dirichlet allocation",
                        "target": "x topic model",
                    },
                    {
                        "type": "relatedEquivalent",
                        "source": "lda classifier",
                        "target": "y discriminant",
                    },
                ],
            }
        )
        ch = Chapter("c1", "LDA in practice")
        found = syntactic_classify(ch, ont, ClassifierConfig())
        assert set(found) == {"latent dirichlet allocation", "lda classifier"}

    def test_raising_threshold_only_removes(self):
        rng = random.Random(555)
        pool = ["semantic web", "neural network", "data mining", "graph theory"]
        ont = make_ontology(pool)
        for _ in range(20):
            words = [rng.choice("semantic web neural networks graph data mining".split())
                     for _ in range(rng.randint(3, 10))]
            ch = Chapter("c1", " ".join(words))
            lo = set(syntactic_classify(ch, ont, ClassifierConfig(lev_threshold=0.85)))
            hi = set(syntactic_classify(ch, ont, ClassifierConfig(lev_threshold=0.95)))
            assert hi <= lo


def padded_model(real_vectors, pad=3000):
    return parse_model_text(padded_model_text(real_vectors, pad=pad))


ABC_ONTOLOGY = make_ontology(["alpha topic", "beta topic", "gamma topic"])
ABC_MODEL = padded_model(
    [
        ("alpha_topic", [1.0, 0.0, 0.0]),
        ("beta_topic", [0.0, 1.0, 0.0]),
        ("gamma_topic", [0.0, 0.0, 1.0]),
        ("aone", [0.9, 0.0, 0.0]),
        ("atwo", [0.8, 0.0, 0.0]),
        ("athree", [0.7, 0.0, 0.0]),
        ("bone", [0.0, 0.9, 0.0]),
        ("btwo", [0.0, 0.8, 0.0]),
        ("gone", [0.0, 0.0, 0.9]),
    ]
)


class TestSemantic:
    def test_unmentioned_topic_found_through_neighbors(self):
        ont = make_ontology(["online communities", "world wide web"],
                            super_pairs=[("world wide web", "online communities")])
        model = padded_model(
            [
                ("online_communities", [0.9, 0.1, 0.0]),
                ("communities", [1.0, 0.0, 0.0]),
                ("moderation", [0.0, 0.0, 1.0]),
            ]
        )
        ch = Chapter("c1", "Moderating Discussion Communities on the Social Web")
        found = semantic_classify(ch, ont, model, ClassifierConfig())
        assert "online communities" in found
        src = found["online communities"].sources[0]
        assert src.origin == SEMANTIC
        assert src.matched_label == "online communities"
        # the label itself never occurs in the text
        assert "online communities" not in ch.title.lower()

    def test_relevance_is_frequency_times_diversity(self):
        ont = make_ontology(["topic modeling"])
        model = padded_model(
            [
                ("lda", [1.0, 0.0]),
                ("topic_modeling", [0.95, 0.05]),
                ("embeddings", [0.0, 1.0]),
            ]
        )
        # "lda" fires twice (two occurrences) and "lda methods" once via the
        # token-average fallback: frequency 3, diversity 2, relevance 6.
        ch = Chapter("c1", "A Study", abstract="LDA. LDA methods.")
        found = semantic_classify(ch, ont, model, ClassifierConfig())
        ev = found["topic modeling"]
        assert len(ev.sources) == 3
        assert {s.ngram for s in ev.sources} == {"lda", "lda methods"}
        assert all(s.score == 6.0 for s in ev.sources)

    def test_event_counts_self_consistent_on_random_fixtures(self):
        rng = random.Random(77)
        vocab = ["aone", "atwo", "bone", "btwo", "gone"]
        cfg = ClassifierConfig(use_elbow=False)
        for _ in range(20):
            words = [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
            text = ". ".join(words) if rng.random() < 0.5 else " ".join(words)
            found = semantic_classify(
                Chapter("c", "t", abstract=text), ABC_ONTOLOGY, ABC_MODEL, cfg
            )
            for ev in found.values():
                freq = len(ev.sources)
                div = len({s.ngram for s in ev.sources})
                assert freq >= div >= 1
                assert all(s.score == float(freq * div) for s in ev.sources)

    def test_elbow_prunes_low_relevance_topics(self):
        ch = Chapter("c1", "t", abstract="Aone. Atwo. Athree. Bone. Btwo. Gone.")
        full = semantic_classify(
            ch, ABC_ONTOLOGY, ABC_MODEL, ClassifierConfig(use_elbow=False)
        )
        assert set(full) == {"alpha topic", "beta topic", "gamma topic"}
        kept = semantic_classify(
            ch, ABC_ONTOLOGY, ABC_MODEL, ClassifierConfig(use_elbow=True)
        )
        # relevance curve is [9, 4, 1]: the knee sits on the first point
        assert set(kept) == {"alpha topic"}

    def test_excluded_rank_suppresses_topic(self):
        ont = make_ontology(["secret topic"])
        ch = Chapter("c1", "Probe")
        # "secret_topic" inside the frequency cutoff: never proposed.
        inside = parse_model_text(
            padded_model_text(
                [("secret_topic", [1.0, 0.0]), ("probe", [0.9, 0.1])], pad=2999
            )
        )
        assert "secret_topic" in inside.excluded
        assert semantic_classify(ch, ont, inside, ClassifierConfig()) == {}
        # one rank later it clears the cutoff and is found.
        outside = parse_model_text(
            padded_model_text(
                [("secret_topic", [1.0, 0.0]), ("probe", [0.9, 0.1])], pad=3000
            )
        )
        assert "secret_topic" not in outside.excluded
        found = semantic_classify(ch, ont, outside, ClassifierConfig())
        assert set(found) == {"secret topic"}

    def test_excluded_neighbors_still_consume_knn_slots(self):
        ont = make_ontology(["topic x"])
        model = parse_model_text(
            padded_model_text(
                [
                    ("common_word", [1.0, 0.0]),
                    ("topic_x", [0.95, 0.05]),
                    ("probe", [0.99, 0.01]),
                ],
                pad=2999,
            )
        )
        assert "common_word" in model.excluded
        ch = Chapter("c1", "Probe")
        narrow = semantic_classify(ch, ont, model, ClassifierConfig(knn_k=2))
        assert narrow == {}  # probe itself + common_word fill both slots
        wide = semantic_classify(ch, ont, model, ClassifierConfig(knn_k=3))
        assert set(wide) == {"topic x"}

    def test_no_candidate_chunks(self):
        ch = Chapter("c1", "of the and")
        assert semantic_classify(ch, ABC_ONTOLOGY, ABC_MODEL, ClassifierConfig()) == {}


class TestClassifyChapter:
    def test_enrichment_adds_full_ancestor_chain(self):
        ch = Chapter("c1", "Training Neural Networks")
        cc = classify_chapter(ch, CHAIN, None, ClassifierConfig())
        assert set(cc.topics) == {
            "neural networks",
            "machine learning",
            "artificial intelligence",
            "computer science",
        }
        for topic in ("machine learning", "artificial intelligence", "computer science"):
            ev = cc.topics[topic]
            assert all(s.origin == ENHANCED for s in ev.sources)
            assert {s.ngram for s in ev.sources} == {"neural networks"}

    def test_empty_chapter(self):
        ch = Chapter("c1", "Unrelatable Musings")
        cc = classify_chapter(ch, CHAIN, None, ClassifierConfig())
        assert cc.topics == {}

    def test_both_origins_kept_when_modules_agree(self):
        ch = Chapter("c1", "Alpha Topic", abstract="Aone.")
        cc = classify_chapter(ch, ABC_ONTOLOGY, ABC_MODEL, ClassifierConfig())
        origins = {s.origin for s in cc.topics["alpha topic"].sources}
        assert origins == {SYNTACTIC, SEMANTIC}

    def test_closure_on_random_dags(self):
        rng = random.Random(2020)
        for _ in range(25):
            n = rng.randint(3, 20)
            ids = [f"t{i}" for i in range(n)]
            pairs = [
                (ids[i], ids[j])
                for j in range(1, n)
                for i in range(j)
                if rng.random() < 0.15
            ]
            ont = make_ontology(ids, super_pairs=pairs)
            mentioned = rng.sample(ids, rng.randint(1, min(4, n)))
            ch = Chapter("c1", " ".join(mentioned))
            cc = classify_chapter(ch, ont, None, ClassifierConfig())
            base = {
                t
                for t, ev in cc.topics.items()
                if any(s.origin != ENHANCED for s in ev.sources)
            }
            assert base == set(mentioned)
            expected = set(mentioned)
            for t in mentioned:
                expected |= ont.super_topics(t)
            assert set(cc.topics) == expected
            # closed under super_topics
            for t in cc.topics:
                assert ont.super_topics(t) <= set(cc.topics)


class TestClassifyBooks:
    def _book(self, volume, chapters):
        return Book(
            volume_number=volume,
            series_name="LNCS",
            title=f"Proceedings {volume}",
            chapters=tuple(chapters),
        )

    def test_single_chapter_counts(self):
        book = self._book("1", [Chapter("c1", "Neural Networks Today")])
        bc = classify_book(book, CHAIN, None, ClassifierConfig())
        assert bc.topic_chapter_count == {
            "neural networks": 1,
            "machine learning": 1,
            "artificial intelligence": 1,
            "computer science": 1,
        }

    def test_counts_are_per_chapter_not_per_occurrence(self):
        chapters = [
            Chapter("c1", "Neural Networks", abstract="neural networks everywhere"),
            Chapter("c2", "Machine Learning"),
            Chapter("c3", "Nothing Relevant"),
        ]
        bc = classify_book(self._book("1", chapters), CHAIN, None, ClassifierConfig())
        # c1 mentions the label twice but counts once
        assert bc.topic_chapter_count["neural networks"] == 1
        assert bc.topic_chapter_count["machine learning"] == 2
        assert bc.topic_chapter_count["computer science"] == 2

    def test_multi_volume_merge(self):
        b1 = self._book("11136", [Chapter("a", "Neural Networks")])
        b2 = self._book("11137", [Chapter("b", "Machine Learning Systems")])
        bc = classify_books([b1, b2], CHAIN, None, ClassifierConfig())
        assert [cc.chapter_id for cc in bc.per_chapter] == ["a", "b"]
        assert bc.topic_chapter_count["machine learning"] == 2

    def test_duplicate_chapter_ids_across_volumes(self):
        b1 = self._book("1", [Chapter("dup", "Title A")])
        b2 = self._book("2", [Chapter("dup", "Title B")])
        with pytest.raises(SchemaError, match="dup"):
            classify_books([b1, b2], CHAIN, None, ClassifierConfig())

    def test_parallel_equals_sequential(self):
        rng = random.Random(808)
        words = "neural networks machine learning alpha topic aone bone deep".split()
        chapters = [
            Chapter(f"c{i}", " ".join(rng.choice(words) for _ in range(6)),
                    abstract=" ".join(rng.choice(words) for _ in range(12)))
            for i in range(8)
        ]
        book = self._book("1", chapters)
        seq = classify_book(book, CHAIN, ABC_MODEL, ClassifierConfig())
        par = classify_book(book, CHAIN, ABC_MODEL, ClassifierConfig(), max_workers=4)
        assert seq == par
