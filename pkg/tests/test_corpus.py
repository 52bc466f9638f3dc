import json
import random

import pytest

from moncomp.corpus import (CorpusError, default_corpus_path, generate_corpus, load_corpus,
                            random_program, write_corpus)
from moncomp.machine.interp import run


def test_bundled_corpus_loads_and_checks():
    entries = load_corpus(default_corpus_path())
    assert len(entries) >= 200
    assert any(e.expected is None for e in entries)
    for e in entries:
        if e.expected is None:
            assert not run(e.program, e.input, e.fuel).halted


def test_generation_is_seeded(tmp_path):
    a, b = generate_corpus(7, 30), generate_corpus(7, 30)
    assert [(e.id, e.program, e.input) for e in a] == [(e.id, e.program, e.input) for e in b]
    write_corpus(tmp_path, a)
    back = load_corpus(tmp_path)
    assert [(e.program, e.input, e.expected) for e in back] == [(e.program, e.input, e.expected) for e in a]


def test_wrong_expectation_is_rejected(tmp_path):
    write_corpus(tmp_path, generate_corpus(3, 10))
    manifest = tmp_path / "manifest.json"
    data = json.loads(manifest.read_text())
    rec = next(r for r in data["entries"] if r["expected"] is not None)
    rec["expected"] = "((() . ()) . (() . (() . ())))" if rec["expected"] == "()" else "()"
    manifest.write_text(json.dumps(data))
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "nowhere")


@pytest.mark.parametrize("family", ["halting", "divergent", "free"])
def test_programs_stay_small(family):
    rng = random.Random(family)
    for _ in range(200):
        assert random_program(rng, family).ast_size <= 40
