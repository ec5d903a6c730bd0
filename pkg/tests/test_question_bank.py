import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clozer.question_bank import BankError, Question, load_bank, save_bank, select


def make_question(qid="q1", phi=0.9, target="peace", **overrides):
    fields = dict(
        question_id=qid,
        masked_text="Just for my own (____) of mind.",
        target_word=target,
        phi=phi,
        gini=0.8,
        rw=0.95,
        target_rank=1,
        top_candidates=[("peace", 0.9), ("piece", 0.05)],
        source={"doc": "doc.txt", "sentence_id": "doc.txt#0"},
        model_name="test",
        created_at="2026-01-01T00:00:00+00:00",
    )
    fields.update(overrides)
    return Question(**fields)


class TestRoundTrip:
    def test_save_load_identity(self, tmp_path):
        questions = [make_question(f"q{i}", phi=0.5 + i / 10) for i in range(3)]
        path = tmp_path / "bank.jsonl"
        save_bank(questions, path)
        assert load_bank(path) == questions

    def test_full_precision_floats(self, tmp_path):
        q = make_question(phi=0.8619592240598003, gini=1 / 3, rw=0.9886128364389234)
        path = tmp_path / "bank.jsonl"
        save_bank([q], path)
        loaded = load_bank(path)[0]
        assert loaded.phi == q.phi
        assert loaded.gini == q.gini
        assert loaded.rw == q.rw

    def test_empty_bank(self, tmp_path):
        path = tmp_path / "bank.jsonl"
        save_bank([], path)
        assert load_bank(path) == []

    def test_unknown_fields_preserved(self, tmp_path):
        path = tmp_path / "bank.jsonl"
        payload = json.loads(make_question().to_json())
        payload["reviewed_by"] = "teacher-3"
        path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
        loaded = load_bank(path)
        assert loaded[0].extras == {"reviewed_by": "teacher-3"}
        out = tmp_path / "bank2.jsonl"
        save_bank(loaded, out)
        assert json.loads(out.read_text().splitlines()[0])["reviewed_by"] == "teacher-3"

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "bank.jsonl"
        line = make_question("dup").to_json()
        path.write_text(line + "\n" + line + "\n", encoding="utf-8")
        with pytest.raises(BankError, match="dup"):
            load_bank(path)

    def test_malformed_line_numbered(self, tmp_path):
        path = tmp_path / "bank.jsonl"
        path.write_text(make_question().to_json() + "\nnot json\n", encoding="utf-8")
        with pytest.raises(BankError, match="line 2"):
            load_bank(path)

    def test_missing_field_reported(self, tmp_path):
        path = tmp_path / "bank.jsonl"
        payload = json.loads(make_question().to_json())
        del payload["phi"]
        path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
        with pytest.raises(BankError, match="phi"):
            load_bank(path)

    @given(
        rows=st.lists(
            st.tuples(
                st.floats(min_value=0.0, max_value=0.999999),
                st.floats(min_value=0.0, max_value=0.999999),
                st.floats(min_value=1e-9, max_value=1.0),
            ),
            min_size=0,
            max_size=20,
        )
    )
    @settings(max_examples=50)
    def test_round_trip_randomized(self, tmp_path_factory, rows):
        questions = [
            make_question(f"q{i}", phi=phi, gini=gini, rw=rw)
            for i, (phi, gini, rw) in enumerate(rows)
        ]
        path = tmp_path_factory.mktemp("banks") / "bank.jsonl"
        save_bank(questions, path)
        assert load_bank(path) == questions


class TestSelect:
    BANK = [
        make_question("q1", phi=0.9, target="peace"),
        make_question("q2", phi=0.85, target="turn"),
        make_question("q3", phi=0.5, target="peace"),
    ]

    def test_min_gap(self):
        assert [q.question_id for q in select(self.BANK, min_gap=0.8)] == ["q1", "q2"]

    def test_target_filter(self):
        assert [q.question_id for q in select(self.BANK, target_word="peace")] == ["q1", "q3"]

    def test_limit_and_order(self):
        assert [q.question_id for q in select(self.BANK, limit=1)] == ["q1"]
        ascending = select(self.BANK, order="phi_asc")
        assert [q.question_id for q in ascending] == ["q3", "q2", "q1"]

    def test_pure(self):
        before = list(self.BANK)
        select(self.BANK, min_gap=0.8, limit=1)
        assert self.BANK == before

    def test_unknown_order(self):
        with pytest.raises(ValueError):
            select(self.BANK, order="created")
