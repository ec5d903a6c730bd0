import pytest
from fastapi.testclient import TestClient

from clozer.question_bank import save_bank
from clozer.service import QuizService, ServiceError, create_app
from test_question_bank import make_question


def build_bank(n=30, min_phi=0.81):
    """n questions above the default threshold plus a few weak ones."""
    bank = []
    words = [
        "peace", "turn", "bridge", "river", "garden", "window", "silver", "market",
        "harvest", "signal", "journey", "station", "pattern", "weather", "evening",
        "morning", "mountain", "village", "library", "teacher", "student", "lesson",
        "answer", "question", "example", "history", "science", "nature", "energy", "music",
    ]
    for i in range(n):
        word = words[i % len(words)]
        bank.append(
            make_question(
                f"q{i:02d}",
                phi=min_phi + (n - i) * 0.001,
                target=word,
                masked_text=f"The (____) was there number {i}.",
            )
        )
    bank.append(make_question("weak1", phi=0.3, target="cloud"))
    bank.append(make_question("weak2", phi=0.2, target="rain"))
    return bank


@pytest.fixture
def service(tmp_path):
    return QuizService(build_bank(), tmp_path / "data")


class TestCreateSession:
    def test_seeded_determinism(self, service, tmp_path):
        a = service.create_session(20, min_gap=0.8, hint_mode=False, seed=7)
        other = QuizService(build_bank(), tmp_path / "data2")
        b = other.create_session(20, min_gap=0.8, hint_mode=False, seed=7)
        assert a.question_ids == b.question_ids
        assert len(a.question_ids) == 20

    def test_insufficient_questions(self, service):
        with pytest.raises(ServiceError) as err:
            service.create_session(500, min_gap=0.8)
        assert "available" in err.value.message
        assert err.value.code == "insufficient_questions"

    def test_single_question_session(self, service):
        session = service.create_session(1, min_gap=0.8, seed=1)
        assert len(session.question_ids) == 1

    def test_min_gap_respected(self, service):
        session = service.create_session(30, min_gap=0.8, seed=3)
        assert "weak1" not in session.question_ids
        assert "weak2" not in session.question_ids


class TestProtocol:
    def test_wrong_then_hint_then_correct(self, tmp_path):
        service = QuizService([make_question("q1", target="peace")], tmp_path / "d")
        session = service.create_session(1, hint_mode=True, seed=0)
        out1 = service.submit_answer(session.session_id, "q1", "piece")
        assert not out1.grade.exact
        assert out1.hint is not None and out1.hint.value == "p"
        assert not out1.finalized
        out2 = service.submit_answer(session.session_id, "q1", "peace")
        assert out2.grade.exact and out2.grade.used_hint
        assert out2.grade.attempt_number == 2
        assert out2.finalized
        assert session.finished

    def test_no_hint_mode_finalizes_on_wrong(self, tmp_path):
        service = QuizService([make_question("q1", target="peace")], tmp_path / "d")
        session = service.create_session(1, hint_mode=False, seed=0)
        out = service.submit_answer(session.session_id, "q1", "wrong")
        assert out.finalized and out.hint is None

    def test_correct_first_try_finalizes(self, tmp_path):
        service = QuizService([make_question("q1", target="peace")], tmp_path / "d")
        session = service.create_session(1, hint_mode=True, seed=0)
        out = service.submit_answer(session.session_id, "q1", "Peace")
        assert out.finalized and out.grade.exact

    def test_second_attempt_always_finalizes(self, tmp_path):
        service = QuizService([make_question("q1", target="peace")], tmp_path / "d")
        session = service.create_session(1, hint_mode=True, seed=0)
        service.submit_answer(session.session_id, "q1", "wrong")
        out = service.submit_answer(session.session_id, "q1", "still wrong")
        assert out.finalized and not out.grade.exact

    def test_out_of_order_rejected(self, tmp_path):
        bank = [make_question("q1", target="peace"), make_question("q2", target="turn")]
        service = QuizService(bank, tmp_path / "d")
        session = service.create_session(2, seed=4)
        later = session.question_ids[1]
        with pytest.raises(ServiceError) as err:
            service.submit_answer(session.session_id, later, "x")
        assert err.value.code == "out_of_order"

    def test_finalized_question_rejected(self, tmp_path):
        bank = [make_question("q1", target="peace"), make_question("q2", target="turn")]
        service = QuizService(bank, tmp_path / "d")
        session = service.create_session(2, seed=4)
        first = session.question_ids[0]
        service.submit_answer(session.session_id, first, "anything")
        with pytest.raises(ServiceError):
            service.submit_answer(session.session_id, first, "again")

    def test_unknown_session(self, service):
        with pytest.raises(ServiceError) as err:
            service.submit_answer("ghost", "q0", "x")
        assert err.value.code == "unknown_session"

    def test_cursor_monotonic(self, tmp_path):
        bank = [make_question(f"q{i}", target="peace") for i in range(3)]
        service = QuizService(bank, tmp_path / "d")
        session = service.create_session(3, hint_mode=True, seed=9)
        cursors = [session.cursor]
        for qid in session.question_ids:
            service.submit_answer(session.session_id, qid, "wrong one")
            cursors.append(session.cursor)
            if not session.states[qid].finalized:
                service.submit_answer(session.session_id, qid, "wrong two")
                cursors.append(session.cursor)
        assert cursors == sorted(cursors)
        assert session.finished


class TestSummary:
    def test_unfinished_rejected(self, tmp_path):
        bank = [make_question("q1", target="peace"), make_question("q2", target="turn")]
        service = QuizService(bank, tmp_path / "d")
        session = service.create_session(2, seed=4)
        with pytest.raises(ServiceError) as err:
            service.session_summary(session.session_id)
        assert err.value.code == "unfinished"
        assert "q" in err.value.message

    def test_single_correct(self, tmp_path):
        service = QuizService([make_question("q1", target="peace")], tmp_path / "d")
        session = service.create_session(1, seed=0)
        service.submit_answer(session.session_id, "q1", "peace")
        summary = service.session_summary(session.session_id)
        assert summary.exact_ratio == 100.0
        assert summary.stem_ratio == 100.0
        assert summary.with_hint_exact_ratio == 100.0

    def test_first_attempt_vs_best_of_two(self, tmp_path):
        targets = ["peace", "turn", "river", "cloud"]
        bank = [make_question(f"q{i}", target=t) for i, t in enumerate(targets)]
        service = QuizService(bank, tmp_path / "d")
        session = service.create_session(4, hint_mode=True, seed=11)
        by_id = {q.question_id: q.target_word for q in bank}
        script = {
            "q0": ("exact", None),        # right away
            "q1": ("turns", "exact"),     # stem-only then corrected with hint
            "q2": ("wrong", "exact"),     # wrong then corrected
            "q3": ("wrong", "wrong"),     # never right
        }
        for qid in session.question_ids:
            first, second = script[qid]
            answer = by_id[qid] if first == "exact" else first
            out = service.submit_answer(session.session_id, qid, answer)
            if not out.finalized:
                answer = by_id[qid] if second == "exact" else second
                service.submit_answer(session.session_id, qid, answer)
        summary = service.session_summary(session.session_id)
        assert summary.exact_ratio == pytest.approx(25.0)   # only q0 on attempt 1
        assert summary.stem_ratio == pytest.approx(50.0)    # q0 exact + q1 stem
        assert summary.with_hint_exact_ratio == pytest.approx(75.0)
        assert summary.with_hint_stem_ratio == pytest.approx(75.0)


class TestReplay:
    def test_state_reconstructed_from_log(self, tmp_path):
        data_dir = tmp_path / "d"
        bank = build_bank()
        service = QuizService(bank, data_dir)
        by_id = {q.question_id: q.target_word for q in bank}
        session = service.create_session(5, hint_mode=True, seed=2)
        for index, qid in enumerate(session.question_ids):
            if index % 2 == 0:
                service.submit_answer(session.session_id, qid, by_id[qid])
            else:
                service.submit_answer(session.session_id, qid, "not it")
                service.submit_answer(session.session_id, qid, by_id[qid])
        original = service.sessions[session.session_id]

        reloaded_service = QuizService(bank, data_dir)
        replayed = reloaded_service.sessions[session.session_id]
        assert replayed.question_ids == original.question_ids
        assert replayed.cursor == original.cursor
        assert replayed.states == original.states
        assert reloaded_service.session_summary(session.session_id) == service.session_summary(
            session.session_id
        )


class TestHttpApi:
    @pytest.fixture
    def client(self, tmp_path):
        service = QuizService(build_bank(), tmp_path / "d")
        return TestClient(create_app(service))

    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"

    def test_questions_filtering(self, client):
        response = client.get("/questions", params={"min_gap": 0.8})
        payload = response.json()["questions"]
        assert len(payload) == 30
        assert all(q["phi"] >= 0.8 for q in payload)
        limited = client.get("/questions", params={"min_gap": 0.8, "limit": 5}).json()["questions"]
        assert len(limited) == 5
        targeted = client.get("/questions", params={"target": "peace"}).json()["questions"]
        assert all(q["target_word"] == "peace" for q in targeted)

    def test_session_flow(self, client):
        created = client.post(
            "/sessions", json={"n_questions": 3, "min_gap": 0.8, "hint_mode": True, "seed": 5}
        ).json()
        sid = created["session_id"]
        current = client.get(f"/sessions/{sid}/current").json()
        assert current["total"] == 3 and not current["finished"]
        qid = current["question"]["question_id"]
        graded = client.post(f"/sessions/{sid}/answer", json={"question_id": qid, "text": "nope"}).json()
        assert graded["finalized"] is False
        assert graded["hint"]["kind"] == "first_letter"
        again = client.get(f"/sessions/{sid}/current").json()
        assert again["question"]["question_id"] == qid
        assert again["attempts_used"] == 1
        assert again["hint"] is not None

    def test_error_shape(self, client):
        response = client.get("/sessions/ghost/current")
        assert response.status_code == 404
        payload = response.json()
        assert payload["error"]["code"] == "unknown_session"
        assert "message" in payload["error"]

    def test_insufficient_questions_shape(self, client):
        response = client.post("/sessions", json={"n_questions": 999, "min_gap": 0.8})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "insufficient_questions"

    def test_validation_error_shape(self, client):
        response = client.post("/sessions", json={"min_gap": 0.8})
        assert response.status_code == 422
        assert "error" in response.json()

    def test_stats_endpoint(self, client):
        created = client.post(
            "/sessions", json={"n_questions": 1, "min_gap": 0.8, "seed": 5}
        ).json()
        sid = created["session_id"]
        qid = client.get(f"/sessions/{sid}/current").json()["question"]["question_id"]
        client.post(f"/sessions/{sid}/answer", json={"question_id": qid, "text": "x"})
        stats = client.get("/stats/questions").json()["stats"]
        answered = next(s for s in stats if s["question_id"] == qid)
        assert answered["n_answers"] == 1
        assert {"phi", "exact_ratio", "stem_ratio"} <= set(answered)

    def test_summary_endpoint(self, client):
        created = client.post(
            "/sessions", json={"n_questions": 1, "min_gap": 0.8, "hint_mode": False, "seed": 5}
        ).json()
        sid = created["session_id"]
        qid = client.get(f"/sessions/{sid}/current").json()["question"]["question_id"]
        client.post(f"/sessions/{sid}/answer", json={"question_id": qid, "text": "x"})
        summary = client.get(f"/sessions/{sid}/summary").json()
        assert set(summary) == {
            "n_questions", "exact_ratio", "stem_ratio",
            "with_hint_exact_ratio", "with_hint_stem_ratio",
        }
