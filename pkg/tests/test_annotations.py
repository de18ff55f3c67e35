import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordnet.annotations import (
    MAJOR,
    MINOR,
    NONE_LABEL,
    ColumnMapping,
    PedalState,
    PeriodMap,
    RawRow,
    clean,
    filter_corpus,
    load_corpus,
    load_tsv,
    normalize_label,
    segmentize,
)
from chordnet.errors import ConfigError, DataError

HEADER = ["key", "op", "no", "mov", "global_key", "local_key", "pedal", "numeral", "form", "figbass",
          "changes", "relativeroot", "phraseend"]
MAPPING = ColumnMapping(global_key_fallback="key")
PERIODS = PeriodMap({"1.1": "early", "1.2": "early", "2": "late"}, aliases={"3": "2"})


def row(numeral="I", local="I", end="False", gk="F", key="F", op="1", no="1", mov="1", pedal="",
        form="", figbass="", changes="", root=""):
    return [key, op, no, mov, gk, local, pedal, numeral, form, figbass, changes, root, end]


def raw(**values):
    return RawRow(values, "t.tsv", 2)


# load_tsv


def test_load_three_rows_line_numbers(tsv_writer):
    path = tsv_writer(HEADER, [row(), row("V"), row("I", end="True")])
    rows = load_tsv(path, MAPPING)
    assert [r.line for r in rows] == [2, 3, 4]
    assert rows[1].get("numeral") == "V"
    assert all(r.source == str(path) for r in rows)


def test_load_missing_numeral_column(tsv_writer):
    header = [h for h in HEADER if h != "numeral"]
    path = tsv_writer(header, [row()[:7] + row()[8:]])
    with pytest.raises(ConfigError, match="numeral"):
        load_tsv(path, MAPPING)


@pytest.mark.parametrize("missing", ["local_key", "phraseend", "op"])
def test_load_other_mandatory_columns(tsv_writer, missing):
    i = HEADER.index(missing)
    path = tsv_writer(HEADER[:i] + HEADER[i + 1:], [row()[:i] + row()[i + 1:]])
    with pytest.raises(ConfigError, match=missing):
        load_tsv(path, MAPPING)


def test_load_unreadable(tmp_path):
    with pytest.raises(DataError):
        load_tsv(tmp_path / "absent.tsv")


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("")
    with pytest.raises(DataError, match="no data rows"):
        load_tsv(path)


def test_bundled_fixture_row_count(demo_cfg):
    # the generator writes 304 rows; every line after the header is one chord
    rows = load_tsv(demo_cfg.input, demo_cfg.columns)
    with open(demo_cfg.input, encoding="utf-8") as fh:
        n_lines = sum(1 for _ in fh) - 1
    assert len(rows) == n_lines == 304


def test_twelve_row_fixture(tsv_writer):
    rows = [row(end="True" if i in (5, 11) else "False") for i in range(12)]
    assert len(load_tsv(tsv_writer(HEADER, rows), MAPPING)) == 12


# clean


def test_clean_false_global_key(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(gk="false", key="F", end="True")]), MAPPING)
    out, report = clean(rows, MAPPING)
    assert out[0].get("global_key") == "F"
    assert len(report) == 1
    entry = report.entries[0]
    assert (entry.kind, entry.old, entry.new, entry.line) == ("substitution", "false", "F", 2)


def test_clean_nothing_global_key(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(gk="nothing", key="Eb", end="True")]), MAPPING)
    out, report = clean(rows, MAPPING)
    assert out[0].get("global_key") == "Eb"
    assert len(report.substitutions) == 1


def test_clean_fallback_defaults_to_first_column(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(gk="false", key="G", end="True")]), ColumnMapping())
    out, _ = clean(rows, ColumnMapping())
    assert out[0].get("global_key") == "G"


def test_clean_bad_fallback_is_a_warning(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(gk="false", key="op18", end="True")]), MAPPING)
    out, report = clean(rows, MAPPING)
    assert out[0].get("global_key") == "false"
    assert not report.substitutions and len(report.warnings) >= 1


def test_clean_ab_local_key(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(local="Ab", end="True")]), MAPPING)
    out, report = clean(rows, MAPPING)
    assert out[0].get("local_key") == "VI"
    assert [e.rule for e in report.substitutions] == ["local_key_ab"]


def test_clean_minor_segment_start(tsv_writer):
    rows = [row(local="I"), row(local="I"), row(local="i"), row(local="i", end="True"),
            row(local="I"), row(local="I", end="True")]
    out, report = clean(load_tsv(tsv_writer(HEADER, rows), MAPPING), MAPPING)
    assert [r.get("local_key") for r in out] == ["i", "i", "i", "i", "I", "I"]
    assert [e.line for e in report.substitutions] == [2, 3]


def test_clean_already_clean(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(), row("V", end="True")]), MAPPING)
    out, report = clean(rows, MAPPING)
    assert [r.values for r in out] == [r.values for r in rows]
    assert not report


def test_clean_idempotent_on_bundled(demo_cfg):
    rows = load_tsv(demo_cfg.input, demo_cfg.columns)
    once, first = clean(rows, demo_cfg.columns)
    twice, second = clean(once, demo_cfg.columns)
    assert len(first.substitutions) == 5
    assert not second.substitutions
    assert [r.values for r in once] == [r.values for r in twice]


key_st = st.sampled_from(["I", "i", "Ab", "V", "vi", "bVI"])
gk_st = st.sampled_from(["F", "c", "false", "nothing"])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(key_st, gk_st, st.booleans()), min_size=1, max_size=25))
def test_clean_idempotent_property(layout):
    rows = [
        RawRow({"key": "F", "op": "1", "no": "1", "mov": "1", "global_key": gk, "local_key": lk, "numeral": "I",
                "phraseend": str(end)}, "p", i + 2)
        for i, (lk, gk, end) in enumerate(layout)
    ]
    once, first = clean(rows, MAPPING)
    twice, second = clean(once, MAPPING)
    assert not second.substitutions
    # anomalies nobody can repair (mixed-mode segments) are reported again, unchanged
    assert [(w.rule, w.line) for w in second.warnings] == [(w.rule, w.line) for w in first.warnings]
    assert [r.values for r in once] == [r.values for r in twice]


# normalize_label


def test_label_concatenation():
    assert normalize_label(raw(numeral="V", figbass="7")) == "V7"


def test_label_all_fields():
    r = raw(numeral="vii", form="o", figbass="7", changes="4", relativeroot="V")
    assert normalize_label(r) == "viio7(4)/V"
    assert normalize_label(r, include_changes=False) == "viio7/V"


def test_label_relative_root_printed_form():
    assert normalize_label(raw(numeral="V", figbass="65", relativeroot="bIII")) == "V65/bIII"


def test_label_pedal_continuation_stripped():
    r = raw(numeral="IV", pedal="I")
    assert normalize_label(r, PedalState.CONTINUE) == "IV"
    assert normalize_label(r, PedalState.START) == "IV[I]"


@pytest.mark.parametrize("numeral", ["", "@none", "none"])
def test_label_none(numeral):
    assert normalize_label(raw(numeral=numeral, figbass="7")) == NONE_LABEL


@settings(max_examples=50, deadline=None)
@given(st.text("IVXiv#b", max_size=4), st.sampled_from(["", "o", "%", "M"]), st.sampled_from(["", "6", "64", "7"]),
       st.sampled_from(list(PedalState)))
def test_label_deterministic(numeral, form, figbass, pedal):
    r = raw(numeral=numeral, form=form, figbass=figbass, pedal="V")
    assert normalize_label(r, pedal) == normalize_label(RawRow(dict(r.values), "other", 99), pedal)
    assert normalize_label(r, pedal)


# segmentize / filter


def test_segmentize_split_on_flags(tsv_writer):
    rows = [row(end="True" if i in (3, 9) else "False") for i in range(10)]
    corpus = segmentize(load_tsv(tsv_writer(HEADER, rows), MAPPING), PERIODS, MAPPING)
    assert [len(s) for s in corpus.segments] == [4, 6]
    assert [e.position for e in corpus.segments[1]] == list(range(6))
    assert corpus.segments[1][0].is_segment_start and not corpus.segments[1][1].is_segment_start


def test_segmentize_mode_period_and_movement_boundary(tsv_writer):
    rows = [row(local="i"), row(local="i", mov="2"), row(local="I", op="3", no="", end="True")]
    corpus = segmentize(load_tsv(tsv_writer(HEADER, rows), MAPPING), PERIODS, MAPPING)
    assert [len(s) for s in corpus.segments] == [1, 1, 1]
    assert [s[0].mode for s in corpus.segments] == [MINOR, MINOR, MAJOR]
    assert [s[0].quartet for s in corpus.segments] == ["1.1", "1.1", "2"]
    assert [s[0].period for s in corpus.segments] == ["early", "early", "late"]


def test_segmentize_unmapped_quartet(tsv_writer):
    rows = load_tsv(tsv_writer(HEADER, [row(op="99", end="True")]), MAPPING)
    with pytest.raises(ConfigError, match="99"):
        segmentize(rows, PERIODS, MAPPING)


def test_segmentize_pedal_spans(tsv_writer):
    rows = [row("I"), row("IV", pedal="I"), row("V", pedal="I"), row("I", end="True")]
    corpus = segmentize(load_tsv(tsv_writer(HEADER, rows), MAPPING), PERIODS, MAPPING)
    assert [e.label for e in corpus.segments[0]] == ["I", "IV[I]", "V", "I"]
    assert [e.is_pedal_start for e in corpus.segments[0]] == [False, True, False, False]


def test_default_period_map():
    periods = PeriodMap.default()
    assert sum(1 for p in periods.quartets.values() if p == "early") == 6
    assert sum(1 for p in periods.quartets.values() if p == "middle") == 5
    assert sum(1 for p in periods.quartets.values() if p == "late") == 5
    assert periods.resolve("133") == ("130", "late")
    assert periods.resolve("74.1") == ("74", "middle")
    assert periods.resolve("18.3") == ("18.3", "early")


def test_corpus_invariants(mini):
    assert sum(mini.segments_by_mode().values()) == mini.n_segments
    events = [e for s in mini.segments for e in s]
    assert len(events) == len(set((e.segment_id, e.position) for e in events)) == mini.n_events
    for s in mini.segments:
        assert [e.position for e in s] == list(range(len(s)))
        assert len({e.mode for e in s}) == 1
    for mode in (MAJOR, MINOR):
        per_period = sum(mini.filter(mode=mode, period=p).n_events for p in mini.periods())
        assert per_period == mini.events_by_mode()[mode]
        labels = {e.label for s in mini.segments if s[0].mode == mode for e in s}
        assert len(labels) == mini.distinct_labels_by_mode()[mode]


def test_mini_corpus_summary(mini):
    # pinned from the generator output; see scripts/make_mini_corpus.py
    assert mini.summary() == {
        "entries": 304,
        "segments": 39,
        "segments_by_mode": {"major": 29, "minor": 10},
        "chords_by_mode": {"major": 216, "minor": 88},
        "distinct_labels_by_mode": {"major": 29, "minor": 13},
        "none_chords": 5,
    }


def test_filter(mini):
    assert filter_corpus(mini) == mini
    assert filter_corpus(mini, quartets=set()).n_events == 0
    early = filter_corpus(mini, mode=MAJOR, period="early")
    assert all(s[0].mode == MAJOR and s[0].period == "early" for s in early.segments)
    kept = [s for s in mini.segments if s[0].mode == MAJOR and s[0].period == "early"]
    assert list(early.segments) == kept


def test_filter_bad_mode(mini):
    with pytest.raises(ConfigError):
        filter_corpus(mini, mode="dorian")


def test_grosse_fuge_alias_joins_quartet(mini):
    assert "9" not in mini.quartets()
    assert len(mini.filter(period="late").quartets()) == 4


def test_load_corpus_header_only(tsv_writer):
    with pytest.raises(DataError, match="no data rows"):
        load_corpus(tsv_writer(HEADER, []), MAPPING, PERIODS)
