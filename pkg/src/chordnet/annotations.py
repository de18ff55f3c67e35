"""Ingest harmonic annotation tables and turn them into segmented chord sequences.

The input is a tab-separated table with one row per annotated chord, in score
order.  Rows are cleaned (a handful of known labelling mistakes are repaired),
reduced to a canonical chord label, and split into segments.  A segment is the
unit inside which chord-to-chord transitions are counted.
"""

from __future__ import annotations

import csv
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from chordnet.errors import ConfigError, DataError

MAJOR = "major"
MINOR = "minor"
MODES = (MAJOR, MINOR)

NONE_LABEL = "none"

_KEY_NUMERAL = re.compile(r"^[b#]*(vii|vi|v|iv|iii|ii|i|VII|VI|V|IV|III|II|I)$")
_KEY_NAME = re.compile(r"^[A-Ga-g][b#]*$")


@dataclass(frozen=True)
class ColumnMapping:
    """Where each semantic field lives in the input table.

    ``quartet`` may name several columns (e.g. opus and number); their values
    are joined with ``.`` to form the quartet identifier.  ``global_key_fallback``
    names the column holding the correct global key; ``None`` means the first
    column of the file.
    """

    numeral: str = "numeral"
    form: str | None = "form"
    figbass: str | None = "figbass"
    changes: str | None = "changes"
    relativeroot: str | None = "relativeroot"
    pedal: str | None = "pedal"
    global_key: str | None = "global_key"
    local_key: str = "local_key"
    segment_end: str = "phraseend"
    measure: str | None = "measure"
    movement: str | None = "mov"
    quartet: tuple[str, ...] = ("op", "no")
    duration: str | None = "length"
    global_key_fallback: str | None = None
    end_values: tuple[str, ...] = ("true", "1", "yes", "y", "t")

    MANDATORY = ("numeral", "local_key", "segment_end", "quartet")

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "ColumnMapping":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown column-mapping keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("quartet", "end_values"):
            if key in kwargs:
                value = kwargs[key]
                kwargs[key] = (value,) if isinstance(value, str) else tuple(value)
        mapping = cls(**kwargs)
        for name in cls.MANDATORY:
            if not getattr(mapping, name):
                raise ConfigError(f"mandatory field {name!r} has no column assigned")
        return mapping

    def to_dict(self) -> dict:
        return {
            name: list(getattr(self, name)) if isinstance(getattr(self, name), tuple) else getattr(self, name)
            for name in self.__dataclass_fields__
        }

    def required_columns(self) -> dict[str, tuple[str, ...]]:
        return {
            "numeral": (self.numeral,),
            "local_key": (self.local_key,),
            "segment_end": (self.segment_end,),
            "quartet": self.quartet,
        }


@dataclass(frozen=True)
class PeriodMap:
    """Quartet identifier to composition period.

    Identifiers not found verbatim are retried on their first ``.``-separated
    component (the opus), after resolving ``aliases``.  Aliases attach one
    identifier to another quartet, e.g. a movement published under its own
    opus number.
    """

    quartets: Mapping[str, str]
    aliases: Mapping[str, str] = field(default_factory=dict)
    order: tuple[str, ...] = ("early", "middle", "late")

    @classmethod
    def default(cls) -> "PeriodMap":
        quartets = {f"18.{n}": "early" for n in range(1, 7)}
        quartets.update({"59.1": "middle", "59.2": "middle", "59.3": "middle", "74": "middle", "95": "middle"})
        quartets.update({q: "late" for q in ("127", "130", "131", "132", "135")})
        return cls(quartets=quartets, aliases={"133": "130"})

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "PeriodMap":
        try:
            quartets = {str(k): str(v) for k, v in dict(data["quartets"]).items()}
        except KeyError:
            raise ConfigError("period map needs a 'quartets' table") from None
        aliases = {str(k): str(v) for k, v in dict(data.get("aliases", {})).items()}
        order = tuple(data.get("order", ()))
        if not order:
            order = tuple(dict.fromkeys(quartets.values()))
        missing = set(quartets.values()) - set(order)
        if missing:
            raise ConfigError(f"periods {sorted(missing)} missing from period order")
        return cls(quartets=quartets, aliases=aliases, order=order)

    def to_dict(self) -> dict:
        return {"quartets": dict(self.quartets), "aliases": dict(self.aliases), "order": list(self.order)}

    def resolve(self, quartet_id: str) -> tuple[str, str]:
        """Return (canonical quartet id, period) or raise ConfigError."""
        candidates = [quartet_id]
        if "." in quartet_id:
            candidates.append(quartet_id.split(".", 1)[0])
        for candidate in candidates:
            candidate = self.aliases.get(candidate, candidate)
            if candidate in self.quartets:
                return candidate, self.quartets[candidate]
        raise ConfigError(f"quartet {quartet_id!r} is not in the period map")


@dataclass(frozen=True)
class RawRow:
    values: Mapping[str, str]
    source: str
    line: int

    def get(self, column: str | None) -> str:
        if not column:
            return ""
        value = self.values.get(column)
        return value.strip() if value else ""

    def with_value(self, column: str, value: str) -> "RawRow":
        values = dict(self.values)
        values[column] = value
        return replace(self, values=values)

    @property
    def where(self) -> str:
        return f"{self.source}:{self.line}"


@dataclass(frozen=True)
class ReportEntry:
    kind: str  # "substitution" or "warning"
    rule: str
    column: str | None
    old: str | None
    new: str | None
    source: str
    line: int
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rule": self.rule,
            "column": self.column,
            "old": self.old,
            "new": self.new,
            # file name only, so reports do not depend on where the data lives
            "where": f"{Path(self.source).name}:{self.line}",
            "message": self.message,
        }


@dataclass
class CleaningReport:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def substitutions(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.kind == "substitution"]

    @property
    def warnings(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.kind == "warning"]

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def extend(self, other: "CleaningReport") -> None:
        self.entries.extend(other.entries)


class PedalState(Enum):
    NONE = "none"
    START = "start"
    CONTINUE = "continue"


@dataclass(frozen=True)
class ChordEvent:
    label: str
    mode: str
    segment_id: int
    quartet: str
    period: str
    position: int
    is_segment_start: bool
    is_pedal_start: bool = False
    movement: str = ""
    source: str = ""
    line: int = 0




@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of segments."""

    segments: tuple[tuple[ChordEvent, ...], ...] = ()
    period_order: tuple[str, ...] = ("early", "middle", "late")

    def __len__(self) -> int:
        return self.n_events

    @property
    def n_events(self) -> int:
        return sum(len(s) for s in self.segments)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def events(self) -> Iterable[ChordEvent]:
        for segment in self.segments:
            yield from segment

    def label_sequences(self) -> list[list[str]]:
        return [[e.label for e in s] for s in self.segments]

    def segments_by_mode(self) -> dict[str, int]:
        counts = Counter(s[0].mode for s in self.segments)
        return {mode: counts.get(mode, 0) for mode in MODES}

    def events_by_mode(self) -> dict[str, int]:
        counts: Counter = Counter()
        for s in self.segments:
            counts[s[0].mode] += len(s)
        return {mode: counts.get(mode, 0) for mode in MODES}

    def distinct_labels_by_mode(self) -> dict[str, int]:
        labels: dict[str, set] = {mode: set() for mode in MODES}
        for s in self.segments:
            labels[s[0].mode].update(e.label for e in s)
        return {mode: len(v) for mode, v in labels.items()}

    def labels(self) -> set[str]:
        return {e.label for e in self.events()}

    def quartets(self) -> list[str]:
        """Quartet ids in order of first appearance."""
        return list(dict.fromkeys(s[0].quartet for s in self.segments))

    def periods(self) -> list[str]:
        present = {s[0].period for s in self.segments}
        ordered = [p for p in self.period_order if p in present]
        return ordered + sorted(present - set(ordered))

    def summary(self) -> dict:
        return {
            "entries": self.n_events,
            "segments": self.n_segments,
            "segments_by_mode": self.segments_by_mode(),
            "chords_by_mode": self.events_by_mode(),
            "distinct_labels_by_mode": self.distinct_labels_by_mode(),
            "none_chords": sum(1 for e in self.events() if e.label == NONE_LABEL),
        }

    def filter(self, mode=None, period=None, quartets=None) -> "Corpus":
        return filter_corpus(self, mode=mode, period=period, quartets=quartets)


def load_tsv(path: str | Path, mapping: ColumnMapping | None = None) -> list[RawRow]:
    mapping = mapping or ColumnMapping()
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: no data rows") from None
        header = [h.strip() for h in header]
        for name, columns in mapping.required_columns().items():
            for column in columns:
                if column not in header:
                    raise ConfigError(f"{path}: missing mandatory column for {name!r} ({column!r})")
        fallback = mapping.global_key_fallback or header[0]
        rows = []
        for record in reader:
            if not any(cell.strip() for cell in record):
                continue
            values = dict(zip(header, record))
            values.setdefault(fallback, "")
            rows.append(RawRow(values=values, source=str(path), line=reader.line_num))
    return rows


def _is_end(row: RawRow, mapping: ColumnMapping) -> bool:
    return row.get(mapping.segment_end).lower() in mapping.end_values


def quartet_id(row: RawRow, mapping: ColumnMapping) -> str:
    parts = [row.get(c) for c in mapping.quartet]
    return ".".join(p for p in parts if p)


def segment_spans(rows: Sequence[RawRow], mapping: ColumnMapping) -> list[tuple[int, int]]:
    """Half-open index ranges of segments.

    A flagged row closes its segment.  A change of quartet or movement also
    closes the running segment, so no transition ever spans two movements.
    """
    spans = []
    start = 0
    for i, row in enumerate(rows):
        last = i == len(rows) - 1
        if not last:
            nxt = rows[i + 1]
            boundary = (
                quartet_id(row, mapping) != quartet_id(nxt, mapping)
                or row.get(mapping.movement) != nxt.get(mapping.movement)
            )
        else:
            boundary = True
        if _is_end(row, mapping) or boundary:
            spans.append((start, i + 1))
            start = i + 1
    return spans


def key_mode(local_key: str) -> str | None:
    """Mode implied by a key symbol: lower case is minor."""
    stripped = local_key.lstrip("b#")
    if not stripped:
        return None
    return MINOR if stripped[0].islower() else MAJOR


def clean(rows: Sequence[RawRow], mapping: ColumnMapping | None = None) -> tuple[list[RawRow], CleaningReport]:
    """Repair known labelling mistakes.

    Rules, applied in order:

    1. a global key of ``nothing`` or ``false`` is replaced by the value of the
       fallback column;
    2. a local key ``Ab`` becomes ``VI``;
    3. leading rows of a segment labelled ``I`` whose first other local key is
       ``i`` are relabelled ``i``.

    Anything else that looks wrong is reported as a warning and left alone.
    """
    mapping = mapping or ColumnMapping()
    report = CleaningReport()
    out = list(rows)

    gk = mapping.global_key
    lk = mapping.local_key
    for i, row in enumerate(out):
        if gk and row.get(gk).lower() in ("nothing", "false"):
            fallback_col = mapping.global_key_fallback or next(iter(row.values))
            fallback = row.get(fallback_col)
            if _KEY_NAME.match(fallback):
                report.entries.append(ReportEntry("substitution", "global_key_fallback", gk, row.get(gk), fallback, row.source, row.line))
                row = row.with_value(gk, fallback)
            else:
                report.entries.append(
                    ReportEntry("warning", "global_key_fallback", gk, row.get(gk), None, row.source, row.line,
                                f"fallback column {fallback_col!r} holds no key ({fallback!r})")
                )
        if row.get(lk) == "Ab":
            report.entries.append(ReportEntry("substitution", "local_key_ab", lk, "Ab", "VI", row.source, row.line))
            row = row.with_value(lk, "VI")
        out[i] = row

    for start, stop in segment_spans(out, mapping):
        keys = [out[i].get(lk) for i in range(start, stop)]
        lead = 0
        while lead < len(keys) and keys[lead] == "I":
            lead += 1
        if 0 < lead < len(keys) and keys[lead] == "i":
            for i in range(start, start + lead):
                row = out[i]
                report.entries.append(ReportEntry("substitution", "minor_segment_start", lk, "I", "i", row.source, row.line))
                out[i] = row.with_value(lk, "i")

    for start, stop in segment_spans(out, mapping):
        modes = set()
        for i in range(start, stop):
            row = out[i]
            key = row.get(lk)
            if not _KEY_NUMERAL.match(key):
                report.entries.append(ReportEntry("warning", "local_key_unknown", lk, key, None, row.source, row.line,
                                                  "unrecognized local key"))
            modes.add(key_mode(key))
            if gk and row.get(gk) and not _KEY_NAME.match(row.get(gk)):
                report.entries.append(ReportEntry("warning", "global_key_unknown", gk, row.get(gk), None, row.source,
                                                  row.line, "unrecognized global key"))
        modes.discard(None)
        if len(modes) > 1:
            row = out[start]
            report.entries.append(ReportEntry("warning", "mixed_mode_segment", lk, None, None, row.source, row.line,
                                              "segment mixes major and minor local keys; first row decides"))
    return out, report


def _bracket(changes: str) -> str:
    return changes if changes.startswith("(") else f"({changes})"


def _slash(root: str) -> str:
    return root if root.startswith("/") else f"/{root}"


def normalize_label(
    row: RawRow,
    pedal_context: PedalState = PedalState.NONE,
    mapping: ColumnMapping | None = None,
    include_changes: bool = True,
) -> str:
    """Canonical chord label for a cleaned row.

    >>> row = RawRow({"numeral": "V", "figbass": "65", "relativeroot": "bIII"}, "x", 2)
    >>> normalize_label(row)
    'V65/bIII'
    """
    mapping = mapping or ColumnMapping()
    numeral = row.get(mapping.numeral)
    if not numeral or numeral.lower().lstrip("@") == NONE_LABEL:
        return NONE_LABEL
    parts = [numeral, row.get(mapping.form), row.get(mapping.figbass)]
    changes = row.get(mapping.changes)
    if include_changes and changes:
        parts.append(_bracket(changes))
    root = row.get(mapping.relativeroot)
    if root:
        parts.append(_slash(root))
    label = "".join(parts)
    if pedal_context is PedalState.START:
        pedal = row.get(mapping.pedal)
        if pedal:
            label = f"{label}[{pedal}]"
    return label


def pedal_states(rows: Sequence[RawRow], mapping: ColumnMapping) -> list[PedalState]:
    """Pedal state per row of one segment."""
    states = []
    previous = ""
    for row in rows:
        pedal = row.get(mapping.pedal)
        if not pedal:
            states.append(PedalState.NONE)
        elif pedal != previous:
            states.append(PedalState.START)
        else:
            states.append(PedalState.CONTINUE)
        previous = pedal
    return states


def segmentize(
    rows: Sequence[RawRow],
    periods: PeriodMap | None = None,
    mapping: ColumnMapping | None = None,
    include_changes: bool = True,
) -> Corpus:
    mapping = mapping or ColumnMapping()
    periods = periods or PeriodMap.default()
    segments = []
    for seg_id, (start, stop) in enumerate(segment_spans(rows, mapping)):
        seg_rows = rows[start:stop]
        first = seg_rows[0]
        mode = key_mode(first.get(mapping.local_key))
        if mode is None:
            raise DataError(f"{first.where}: segment has no local key, cannot decide its mode")
        quartet, period = periods.resolve(quartet_id(first, mapping))
        movement = first.get(mapping.movement)
        events = []
        for pos, (row, pedal) in enumerate(zip(seg_rows, pedal_states(seg_rows, mapping))):
            events.append(
                ChordEvent(
                    label=normalize_label(row, pedal, mapping, include_changes),
                    mode=mode,
                    segment_id=seg_id,
                    quartet=quartet,
                    period=period,
                    position=pos,
                    is_segment_start=pos == 0,
                    is_pedal_start=pedal is PedalState.START,
                    movement=movement,
                    source=row.source,
                    line=row.line,
                )
            )
        segments.append(tuple(events))
    return Corpus(segments=tuple(segments), period_order=periods.order)


def filter_corpus(corpus: Corpus, mode: str | None = None, period: str | None = None, quartets=None) -> Corpus:
    """Sub-corpus of whole segments matching every given predicate."""
    if mode is not None and mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    wanted = None if quartets is None else set(quartets)
    kept = tuple(
        s
        for s in corpus.segments
        if (mode is None or s[0].mode == mode)
        and (period is None or s[0].period == period)
        and (wanted is None or s[0].quartet in wanted)
    )
    return Corpus(segments=kept, period_order=corpus.period_order)


filter = filter_corpus  # noqa: A001


def load_corpus(
    path: str | Path,
    mapping: ColumnMapping | None = None,
    periods: PeriodMap | None = None,
    include_changes: bool = True,
) -> tuple[Corpus, CleaningReport]:
    """load_tsv + clean + segmentize in one call."""
    mapping = mapping or ColumnMapping()
    rows = load_tsv(path, mapping)
    if not rows:
        raise DataError(f"{path}: no data rows")
    cleaned, report = clean(rows, mapping)
    return segmentize(cleaned, periods, mapping, include_changes), report
