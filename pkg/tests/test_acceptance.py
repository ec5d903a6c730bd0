"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion. Tolerances and runtime budgets are asserted inline. The
live-model check at the bottom needs an external inference server and is
skipped unless CLOZER_LIVE_ENDPOINT is set.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest

from clozer.analysis import pearson
from clozer.cli import main as cli_main
from clozer.gap_score import gap, gini, reweight
from clozer.grading import grade
from clozer.mlm_backend import MaskPrediction
from clozer.question_bank import load_bank
from clozer.service import QuizService
from clozer.stemmer import stem

from oracles import oracle_gap
from test_question_bank import make_question

FIXTURES = Path(__file__).parent / "fixtures"


def _report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def test_gini_analytic_suite():
    start = time.perf_counter()
    for n in range(1, 51):
        assert abs(gini([1.0 / n] * n)) < 1e-12
        assert abs(gini([0.37] * n)) < 1e-12
    eps = 1e-9
    for n in range(2, 51):
        expected = 1.0 - 1.0 / n
        assert abs(gini([1.0] + [eps] * (n - 1)) - expected) < 1e-6
    assert gini([0.42]) == 0.0
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"analytic suite took {elapsed:.3f}s"
    _report("gini analytic suite")


def test_gini_range_and_scale_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 10_000:
        n = int(rng.integers(1, 201))
        values = rng.uniform(1e-6, 10.0, size=n)
        g = gini(values)
        assert 0.0 <= g < 1.0
        alpha = float(rng.uniform(1e-3, 1e3))
        assert abs(gini(alpha * values) - g) < 1e-12
        assert gini(rng.permutation(values)) == g
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"property sweep took {elapsed:.3f}s"
    _report("gini range/scale property tests")


def test_gap_score_oracle_equivalence():
    start = time.perf_counter()
    # the two worked fixtures
    peace = MaskPrediction(
        candidates=(("peace", 0.80), ("piece", 0.10), ("state", 0.05), ("calm", 0.03), ("sense", 0.02)),
        truncation_m=5,
    )
    result = gap(peace, "peace", k=2)
    assert abs(result.phi - 0.579556) < 1e-6
    assert abs(result.phi - oracle_gap([0.80, 0.10, 0.05, 0.03, 0.02], 1, 2)) < 1e-9
    take = MaskPrediction(
        candidates=(("make", 0.45), ("take", 0.40), ("hit", 0.10), ("miss", 0.05)),
        truncation_m=4,
    )
    result = gap(take, "take", k=2)
    assert abs(result.phi - 0.199644) < 1e-6
    assert abs(result.phi - oracle_gap([0.45, 0.40, 0.10, 0.05], 2, 2)) < 1e-9
    # randomized equivalence
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        values = np.sort(rng.uniform(1e-6, 1.0, size=n))[::-1]
        values = values / values.sum()
        prediction = MaskPrediction(
            candidates=tuple((f"w{i}", float(v)) for i, v in enumerate(values)),
            truncation_m=n,
        )
        j = int(rng.integers(1, n + 1))
        engine = gap(prediction, f"w{j - 1}", k=2)
        reference = oracle_gap([float(v) for v in values], j, 2)
        assert abs(engine.phi - reference) < 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"oracle equivalence took {elapsed:.3f}s"
    _report("gap-score oracle equivalence")


def test_reweighting_bounds():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        n = int(rng.integers(2, 80))
        values = np.sort(rng.uniform(1e-9, 1.0, size=n))[::-1].tolist()
        j = int(rng.integers(1, n + 1))
        rw = reweight(values, j, 2)
        assert 0.0 < rw <= 1.0
        if j == 1:
            assert rw >= 0.5
        else:
            assert rw <= 0.5
    _report("reweighting bounds")


def test_end_to_end_determinism(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "bank.jsonl"
    code = cli_main([
        "generate",
        "--corpus", str(FIXTURES / "corpus"),
        "--wordlist", str(FIXTURES / "wordlist.txt"),
        "--targets", str(FIXTURES / "targets.txt"),
        "--backend", f"tabular:{FIXTURES / 'predictions.jsonl'}",
        "--model-name", "test-tabular",
        "--min-gap", "0.8",
        "--created-at", "2026-01-01T00:00:00+00:00",
        "--out", str(out),
    ])
    assert code == 0
    golden = (FIXTURES / "golden_bank.jsonl").read_bytes()
    assert out.read_bytes() == golden, "bank differs from the committed golden bank"
    for question in load_bank(out):
        assert question.phi >= 0.80
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"generation took {elapsed:.3f}s"
    _report("end-to-end determinism")


def test_stemming_suite():
    pairs = []
    for line in (FIXTURES / "stem_oracle.tsv").read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            word, expected = line.split("\t")
            pairs.append((word, expected))
    assert len(pairs) >= 500
    disagreements = [(w, e, stem(w)) for w, e in pairs if stem(w) != e]
    assert not disagreements, f"{len(disagreements)} disagreement(s), first: {disagreements[:3]}"

    rng = np.random.default_rng(17)
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    for _ in range(10_000):
        answer = "".join(rng.choice(list(alphabet), size=rng.integers(1, 12)))
        truth = answer if rng.random() < 0.5 else "".join(
            rng.choice(list(alphabet), size=rng.integers(1, 12))
        )
        result = grade(answer, truth)
        if result.exact:
            assert result.stem
    _report("stemming suite")


def test_protocol_replay(tmp_path):
    targets = [
        "turn", "walk", "jump", "call", "start", "point", "answer", "rain",
        "hand", "garden", "river", "window", "market", "signal", "lesson",
        "mountain", "teacher", "morning", "silver", "bridge",
    ]
    bank = [
        make_question(f"q{i:02d}", phi=0.85 + i * 0.001, target=t,
                      masked_text=f"Sentence number {i} has a (____) here.")
        for i, t in enumerate(targets)
    ]
    data_dir = tmp_path / "data"
    service = QuizService(bank, data_dir)
    truth_of = {q.question_id: q.target_word for q in bank}

    session = service.create_session(20, min_gap=0.8, hint_mode=True, seed=42)
    assert len(session.question_ids) == 20

    # outcome classes by session position:
    #   0-3   exact on attempt 1
    #   4-6   wrong, then exact with the hint
    #   7-8   stem-only attempt 1, wrong attempt 2
    #   9     stem-only attempt 1, exact attempt 2
    #   10-19 wrong on both attempts
    for position, qid in enumerate(session.question_ids):
        truth = truth_of[qid]
        if position <= 3:
            first, second = truth, None
        elif position <= 6:
            first, second = "qqq", truth
        elif position <= 8:
            first, second = truth + "s", "qqq"
        elif position == 9:
            first, second = truth + "s", truth
        else:
            first, second = "qqq", "qqq"
        outcome = service.submit_answer(session.session_id, qid, first)
        if not outcome.finalized:
            service.submit_answer(session.session_id, qid, second)

    summary = service.session_summary(session.session_id)
    # hand tallies: exact first attempts 4/20; stem first attempts (4+2+1)/20;
    # best-of-two exact (4+3+1)/20; best-of-two stem (8+2)/20
    assert summary.exact_ratio == pytest.approx(20.0, abs=1e-9)
    assert summary.stem_ratio == pytest.approx(35.0, abs=1e-9)
    assert summary.with_hint_exact_ratio == pytest.approx(40.0, abs=1e-9)
    assert summary.with_hint_stem_ratio == pytest.approx(50.0, abs=1e-9)

    replayed_service = QuizService(bank, data_dir)
    original = service.sessions[session.session_id]
    replayed = replayed_service.sessions[session.session_id]
    assert replayed.question_ids == original.question_ids
    assert replayed.cursor == original.cursor
    assert replayed.states == original.states
    assert replayed_service.session_summary(session.session_id) == summary
    _report("protocol replay")


def test_pearson_correctness():
    assert pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]) == 1.0
    assert pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == -1.0
    assert pearson([1.0, 2.0, 3.0, 4.0], [1.0, 3.0, 2.0, 4.0]) == pytest.approx(0.8, abs=1e-12)
    xs = [0.3, 0.9, 0.1, 0.7, 0.5]
    ys = [30.0, 80.0, 20.0, 60.0, 40.0]
    base = pearson(xs, ys)
    assert abs(pearson([2.5 * x + 1.0 for x in xs], ys) - base) < 1e-12
    assert abs(pearson(xs, [0.1 * y + 3.0 for y in ys]) - base) < 1e-12
    _report("pearson correctness")


@pytest.mark.skipif(
    not os.environ.get("CLOZER_LIVE_ENDPOINT"),
    reason="live-model smoke test needs CLOZER_LIVE_ENDPOINT (non-gating, not run in CI)",
)
def test_live_model_smoke():
    from clozer.mlm_backend import BackendDescriptor, RemoteBackend
    from clozer.text_corpus import MaskedSentence

    endpoint = os.environ["CLOZER_LIVE_ENDPOINT"]
    mask_token = os.environ.get("CLOZER_LIVE_MASK_TOKEN", "<mask>")
    descriptor = BackendDescriptor(
        kind="remote", model_name="live", mask_token=mask_token, endpoint=endpoint, top_m=50
    )
    backend = RemoteBackend(descriptor)
    masked = MaskedSentence(
        sentence_id="live#0",
        target_word="peace",
        target_token_index=4,
        masked_text=(
            "Just for my own [MASK] of mind, Ted, send me a list of "
            "your exes' names and current addresses."
        ),
        surface_form="peace",
    )
    prediction = backend.predict(masked)
    result = gap(prediction, "peace", k=2)
    assert result.found and result.target_rank == 1
    assert result.phi > 0.5
    _report("live-model smoke test")
