"""Smoke tests for the Python bindings.

Run with the package and the built extension on sys.path, e.g.
  PYTHONPATH=python:build/bindings python3 tests/smoke_test.py
"""

import sys

import medmine as mm


def test_core_roundtrip():
    doc = mm.Document("d1", "take aspirin daily")
    assert len(doc) == 18
    span = mm.EntitySpan("T1", "drug", [(5, 12)])
    checked = mm.validate_span(doc, span)
    assert checked.surface == "aspirin"
    assert checked.label == "Drug"

    name, known = mm.parse_label("Temporal")
    assert name == "Temporal" and not known

    try:
        mm.validate_span(doc, mm.EntitySpan("T2", "Drug", [(10, 10)]))
    except mm.MedmineError as e:
        assert "OffsetOutOfBounds" in str(e)
    else:
        raise AssertionError("empty fragment must fail validation")


def test_standoff_io():
    doc = mm.Document("d1", "take aspirin daily")
    parsed, skipped, warnings = mm.parse_standoff(doc, "T1\tDrug 5 12\taspirin\nR1\trel\n")
    assert len(parsed) == 1 and skipped == 1
    assert mm.write_standoff(parsed) == "T1\tDrug 5 12\taspirin\n"


def test_evaluation_modes():
    gold = mm.AnnotationSet("d1", "gold", [mm.EntitySpan("T1", "Drug", [(0, 7)])])
    pred = mm.AnnotationSet("d1", "m", [mm.EntitySpan("P1", "Drug", [(0, 5)])])
    strict = mm.evaluate_document(gold, pred, mode="strict")
    lenient = mm.evaluate_document(gold, pred, mode="type")
    assert strict["overall"]["inc"] == 1
    assert lenient["overall"]["cor"] == 1


def test_published_aggregates():
    rows = [
        ("O", 0.0, 0.0, 0.0, 874),
        ("Reason", 0.7276, 0.4552, 0.5601, 927),
        ("ADE", 0.5579, 0.2190, 0.3145, 242),
        ("Form", 0.9229, 0.9393, 0.9310, 1696),
        ("Strength", 0.9749, 0.9494, 0.9620, 1639),
        ("Dosage", 0.9124, 0.8816, 0.8967, 1039),
        ("Drug", 0.9345, 0.9135, 0.9239, 3954),
        ("Route", 0.9580, 0.9366, 0.9472, 1341),
        ("Frequency", 0.8502, 0.9399, 0.8928, 1564),
        ("Duration", 0.8015, 0.7554, 0.7778, 139),
    ]
    full = mm.aggregate_rows(rows)
    assert abs(full["macro"]["f1"] - 0.7206) <= 0.0001
    assert abs(full["weighted"]["f1"] - 0.8282) <= 0.0001
    assert full["total_support"] == 13415

    seven = mm.aggregate_rows_excluding(rows, ["O", "Reason", "ADE"])
    assert abs(seven["macro"]["f1"] - 0.9045) <= 0.0005
    assert abs(seven["weighted"]["f1"] - 0.9247) <= 0.0005


def test_split_sizes():
    corpus = mm.Corpus()
    for i in range(505):
        corpus.add_document(mm.Document(f"doc-{i}", "text"))
    train, dev, test = mm.split_corpus(corpus, 0.70, 0.15, 0.15, seed=13)
    assert (len(train), len(dev), len(test)) == (353, 76, 76)


def test_generate_and_perturb():
    corpus, ledger = mm.generate(seed=3, n_docs=4, targets={"Drug": 20, "ADE": 4})
    assert ledger["label_counts"] == {"Drug": 20, "ADE": 4}

    doc = corpus.documents[0]
    gold = corpus.gold_for(doc.doc_id)
    pred, action_ledger = mm.perturb(doc, gold, seed=9, jitter_p=1.0)
    jittered = [a for a in action_ledger["actions"] if a["boundary_changed"]]
    assert len(jittered) == len(gold.spans)
    report = mm.evaluate_document(gold, pred, mode="type")
    assert report["overall"]["cor"] == len(gold.spans)


def test_chunking_and_bio():
    text = " ".join(f"w{i}" for i in range(100))
    doc = mm.Document("long", text)
    chunks = mm.chunk_document(doc, max_tokens=32, overlap=0)
    assert [len(c) for c in chunks] == [32, 32, 32, 4]
    assert chunks[1].to_parent(chunks[1].tokens[0].start) == chunks[1].char_offset_base

    tokens = mm.tokenize("Aspirin 81 mg")
    spans = [mm.EntitySpan("T1", "Drug", [(0, 7)]), mm.EntitySpan("T2", "Strength", [(8, 13)])]
    tags = mm.spans_to_bio(tokens, spans)
    assert tags == ["B-Drug", "B-Strength", "I-Strength"]
    rebuilt = mm.bio_to_spans(tokens, tags)
    assert [s.label for s in rebuilt] == ["Drug", "Strength"]


def test_merge():
    a = mm.AnnotationSet("d", "a", [mm.EntitySpan("T1", "Drug", [(0, 7)])])
    b = mm.AnnotationSet("d", "b", [])
    merged, provenance = mm.merge_predictions([a, b], strategy="union")
    assert len(merged) == 1 and provenance["T1"] == "a"
    intersected, _ = mm.merge_predictions([a, b], strategy="intersection")
    assert len(intersected) == 0


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
