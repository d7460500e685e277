"""Tests for the HTTP service: session lifecycle, cached classification,
taxonomy filtering, explanations, highlights, submission, and history."""

import time

import pytest
from conftest import book_xml, make_zip
from fastapi.testclient import TestClient

from booktopics.data import DEMO_ARCHIVE
from booktopics.service import ServiceConfig, create_app

DEMO_BYTES = DEMO_ARCHIVE.read_bytes()


@pytest.fixture
def api(tmp_path):
    cfg = ServiceConfig(history_path=str(tmp_path / "annotations.jsonl"))
    return TestClient(create_app(cfg))


def make_session(api, payload=DEMO_BYTES):
    resp = api.post("/sessions", content=payload, headers={"content-type": "application/zip"})
    assert resp.status_code == 201, resp.text
    return resp.json()


class TestCreateSession:
    def test_demo_archive_summary(self, api):
        data = make_session(api)
        assert data["chapterCount"] == 29
        assert data["topicCount"] == 13
        volumes = {b["volumeNumber"]: b for b in data["books"]}
        assert set(volumes) == {"11136", "11137"}
        assert volumes["11136"]["chapterCount"] == 15
        assert volumes["11137"]["confSeriesId"] == "iswc"
        assert volumes["11137"]["year"] == 2018

    def test_multipart_upload(self, api):
        files = [
            ("notes", ("notes.txt", b"ignore me", "text/plain")),
            ("archive", ("proceedings.zip", DEMO_BYTES, "application/zip")),
        ]
        resp = api.post("/sessions", files=files)
        assert resp.status_code == 201
        assert resp.json()["chapterCount"] == 29

    def test_single_xml_body(self, api):
        xml = book_xml("7", "LNCS", [("x1", "On Cryptography", "We survey cryptography.")])
        resp = api.post("/sessions", content=xml.encode(), headers={"content-type": "application/xml"})
        assert resp.status_code == 201
        assert resp.json()["chapterCount"] == 1

    def test_same_archive_twice_is_deterministic(self, api):
        first = make_session(api)
        second = make_session(api)
        assert first["sessionId"] != second["sessionId"]
        tax1 = api.get(f"/sessions/{first['sessionId']}/taxonomy").json()
        tax2 = api.get(f"/sessions/{second['sessionId']}/taxonomy").json()
        assert tax1 == tax2

    def test_empty_zip_rejected(self, api):
        resp = api.post("/sessions", content=make_zip({}))
        assert resp.status_code == 422
        body = resp.json()
        assert body["message"] == "no books"
        assert body["code"] == "empty-archive"

    def test_bad_payloads(self, api):
        assert api.post("/sessions", content=b"").status_code == 400
        assert api.post("/sessions", content=b"PK\x03\x04garbage").status_code == 400
        assert api.post("/sessions", content=b"<book>").status_code == 400
        bad_schema = book_xml("9", "LNCS", [])  # no chapters
        assert api.post("/sessions", content=bad_schema.encode()).status_code == 422

    def test_failed_upload_does_not_count_as_classification(self, api):
        api.post("/sessions", content=b"<book>")
        assert api.get("/health").json()["classificationRuns"] == 0


class TestTaxonomy:
    def test_slider_changes_do_not_reclassify(self, api):
        sid = make_session(api)["sessionId"]
        assert api.get("/health").json()["classificationRuns"] == 1
        def node_count(nodes):
            return sum(1 + node_count(n["children"]) for n in nodes)

        shapes = set()
        for k in (1, 13, 29):
            resp = api.get(f"/sessions/{sid}/taxonomy", params={"minChapters": k})
            assert resp.status_code == 200
            shapes.add(node_count(resp.json()["taxonomy"]))
        assert api.get("/health").json()["classificationRuns"] == 1
        assert len(shapes) == 3  # each threshold produced a different forest

    def test_filtered_forest_at_thirteen(self, api):
        sid = make_session(api)["sessionId"]
        data = api.get(f"/sessions/{sid}/taxonomy", params={"minChapters": 13}).json()
        (root,) = data["taxonomy"]
        assert root["topic"] == "computer science"
        assert root["chapterCount"] == 29
        kids = {c["topic"]: c for c in root["children"]}
        assert set(kids) == {"artificial intelligence", "world wide web"}
        assert [c["topic"] for c in kids["world wide web"]["children"]] == ["semantic web"]
        assert not any(n["structural"] for n in data["taxonomy"])

    def test_topic_list_sorted_by_frequency(self, api):
        sid = make_session(api)["sessionId"]
        topics = api.get(f"/sessions/{sid}/taxonomy").json()["topics"]
        counts = [t["chapterCount"] for t in topics]
        assert counts == sorted(counts, reverse=True)
        assert topics[0] == {"topic": "computer science", "chapterCount": 29, "marked": False}

    def test_pmc_list(self, api):
        sid = make_session(api)["sessionId"]
        pmcs = api.get(f"/sessions/{sid}/taxonomy").json()["pmcs"]
        assert [(p["code"], p["chapterCount"]) for p in pmcs] == [
            ("I00001", 29),
            ("I18030", 15),
            ("I21017", 13),
            ("I15009", 3),
            ("I15033", 3),
        ]
        assert pmcs[0]["label"] == "Computer Science, general"
        assert pmcs[0]["level"] == 1

    def test_min_chapters_must_be_positive_integer(self, api):
        sid = make_session(api)["sessionId"]
        for bad in ("0", "-3", "abc", "1.5"):
            resp = api.get(f"/sessions/{sid}/taxonomy", params={"minChapters": bad})
            assert resp.status_code == 400
            assert resp.json()["code"] == "bad-min-chapters"

    def test_unknown_session(self, api):
        resp = api.get("/sessions/deadbeef/taxonomy")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown-session"


class TestExplanationAndChapters:
    def test_explanation_ordering(self, api):
        sid = make_session(api)["sessionId"]
        resp = api.get(f"/sessions/{sid}/topics/semantic web/explanation")
        assert resp.status_code == 200
        excerpts = resp.json()["excerpts"]
        assert excerpts[0] == {"text": "semantic web", "chapterCount": 13, "occurrenceCount": 13}
        counts = [(e["chapterCount"], e["occurrenceCount"]) for e in excerpts]
        assert counts == sorted(counts, key=lambda p: (-p[0], -p[1]))

    def test_explanation_unknown_topic(self, api):
        sid = make_session(api)["sessionId"]
        resp = api.get(f"/sessions/{sid}/topics/quantum computing/explanation")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown-topic"

    def test_topic_detail_resolves_aliases(self, api):
        sid = make_session(api)["sessionId"]
        detail = api.get(f"/sessions/{sid}/topics/ontology matching").json()
        assert detail["topic"] == "ontology mapping"
        assert "ontology matching" in detail["aliases"]
        assert detail["superTopics"] == ["semantic web"]
        assert detail["chapterCount"] == 3
        assert api.get(f"/sessions/{sid}/topics/flower arranging").status_code == 404

    def test_highlights_slice_the_abstract(self, api):
        sid = make_session(api)["sessionId"]
        chapters = api.get(f"/sessions/{sid}/chapters").json()["chapters"]
        assert [c["chapterId"] for c in chapters][:3] == ["c01", "c02", "c03"]
        c01 = chapters[0]
        snippets = {
            c01["abstract"][h["start"] : h["end"]]: h["topics"] for h in c01["highlights"]
        }
        assert snippets == {
            "semantic web": ["semantic web"],
            "linked data": ["linked data"],
        }

    def test_chapter_topics_include_enriched_ancestors(self, api):
        sid = make_session(api)["sessionId"]
        chapters = api.get(f"/sessions/{sid}/chapters").json()["chapters"]
        c24 = next(c for c in chapters if c["chapterId"] == "c24")
        assert c24["topics"] == ["computer science", "cryptography"]


class TestSubmitAndHistory:
    def test_round_trip(self, api):
        sid = make_session(api)["sessionId"]
        record = {
            "selectedTopics": ["semantic web", "machine learning"],
            "selectedPmcs": ["I18030", "I21017"],
            "renames": {"machine learning": "Machine Learning (ML)"},
        }
        resp = api.post(f"/sessions/{sid}/submit", json=record)
        assert resp.status_code == 200
        body = resp.json()
        assert body["receipt"] == 1
        stored = body["record"]
        assert stored["confSeriesId"] == "iswc"  # filled from the session
        assert stored["year"] == 2018
        assert set(stored["volumes"]) == {"11136", "11137"}
        assert stored["submittedAt"].endswith("Z")

        history = api.get("/series/iswc/history").json()
        assert history["confSeriesId"] == "iswc"
        assert [r["receipt"] for r in history["records"]] == [1]
        assert history["records"][0]["renames"] == {"machine learning": "Machine Learning (ML)"}

    def test_unclassified_topic_is_conflict(self, api):
        sid = make_session(api)["sessionId"]
        resp = api.post(f"/sessions/{sid}/submit", json={"selectedTopics": ["quantum computing"]})
        assert resp.status_code == 409
        assert "quantum computing" in resp.json()["message"]
        resp = api.post(
            f"/sessions/{sid}/submit",
            json={"selectedTopics": ["semantic web"], "removedTopics": ["basket weaving"]},
        )
        assert resp.status_code == 409

    def test_added_topics_are_exempt(self, api):
        sid = make_session(api)["sessionId"]
        record = {
            "selectedTopics": ["semantic web", "knowledge graphs"],
            "addedTopics": [{"topic": "knowledge graphs", "parent": "semantic web"}],
            "renames": {"knowledge graphs": "Knowledge Graphs (KG)"},
        }
        resp = api.post(f"/sessions/{sid}/submit", json=record)
        assert resp.status_code == 200
        stored = resp.json()["record"]
        assert stored["addedTopics"] == [{"topic": "knowledge graphs", "parent": "semantic web"}]

    def test_added_topic_parent_must_exist(self, api):
        sid = make_session(api)["sessionId"]
        record = {
            "selectedTopics": ["semantic web"],
            "addedTopics": [{"topic": "macrame", "parent": "handicrafts"}],
        }
        assert api.post(f"/sessions/{sid}/submit", json=record).status_code == 409

    def test_unknown_pmc_is_conflict(self, api):
        sid = make_session(api)["sessionId"]
        record = {"selectedTopics": ["semantic web"], "selectedPmcs": ["Z99999"]}
        resp = api.post(f"/sessions/{sid}/submit", json=record)
        assert resp.status_code == 409
        assert resp.json()["code"] == "unknown-pmc"

    def test_invalid_records(self, api):
        sid = make_session(api)["sessionId"]
        assert api.post(f"/sessions/{sid}/submit", json={"selectedTopics": []}).status_code == 422
        assert api.post(f"/sessions/{sid}/submit", json={"selectedTopics": [7]}).status_code == 422
        assert api.post(f"/sessions/{sid}/submit", json=["not", "a", "dict"]).status_code == 422
        resp = api.post(
            f"/sessions/{sid}/submit",
            content=b"{nope",
            headers={"content-type": "application/json"},
        )
        assert resp.status_code == 400

    def test_previous_edition_marks(self, api):
        sid = make_session(api)["sessionId"]
        earlier = {
            "year": 2017,  # explicit year wins over the session's 2018
            "selectedTopics": ["semantic web", "cryptography"],
            "selectedPmcs": ["I15033"],
        }
        assert api.post(f"/sessions/{sid}/submit", json=earlier).status_code == 200

        data = api.get(f"/sessions/{sid}/taxonomy").json()
        assert data["previous"] == {"confSeriesId": "iswc", "year": 2017, "receipt": 1}
        marked = {t["topic"] for t in data["topics"] if t["marked"]}
        assert marked == {"semantic web", "cryptography"}
        assert {p["code"] for p in data["pmcs"] if p["marked"]} == {"I15033"}

    def test_marks_empty_without_history(self, api):
        sid = make_session(api)["sessionId"]
        data = api.get(f"/sessions/{sid}/taxonomy").json()
        assert data["previous"] is None
        assert not any(t["marked"] for t in data["topics"])


class TestSessionLifecycle:
    def test_idle_sessions_evicted(self, tmp_path):
        cfg = ServiceConfig(history_path=str(tmp_path / "a.jsonl"), session_ttl=0.05)
        api = TestClient(create_app(cfg))
        sid = make_session(api)["sessionId"]
        assert api.get(f"/sessions/{sid}/taxonomy").status_code == 200
        time.sleep(0.15)
        assert api.get(f"/sessions/{sid}/taxonomy").status_code == 404

    def test_health_counts_sessions_created(self, api):
        assert api.get("/health").json() == {"status": "ok", "classificationRuns": 0}
        make_session(api)
        make_session(api)
        assert api.get("/health").json()["classificationRuns"] == 2
