"""Regenerate the bundled synthetic mini-corpus.

    python scripts/make_mini_corpus.py

Writes src/chordnet/data/mini_corpus.tsv.  The corpus is made up: twelve
pseudo-quartets in three periods, each a few movements of short segments drawn
from period-specific Markov chains.  A few rows carry deliberate labelling
mistakes so every cleaning rule has something to repair.
"""

import csv
import random
import re
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "chordnet" / "data" / "mini_corpus.tsv"

COLUMNS = [
    "key", "op", "no", "mov", "measure", "length", "global_key", "local_key",
    "pedal", "numeral", "form", "figbass", "changes", "relativeroot", "phraseend",
]

QUARTETS = [
    ("1", "1", "F"), ("1", "2", "G"), ("1", "3", "D"), ("1", "4", "c"),
    ("2", "1", "A"), ("2", "2", "e"), ("2", "3", "C"), ("4", "", "Eb"),
    ("5", "", "Bb"), ("6", "", "a"), ("7", "", "F"), ("8", "", "c#"),
]
PERIOD = {"1": "early", "2": "middle", "4": "middle", "5": "late", "6": "late", "7": "late", "8": "late"}

MAJOR_CORE = {
    "I": ["V", "IV", "V7", "ii6", "I6", "vi", "bIII"],
    "V": ["I", "V7", "I6", "vi", "ii"],
    "V7": ["I", "vi", "I6"],
    "IV": ["V", "I", "V7/IV", "ii6", "I64"],
    "ii6": ["V", "V7", "I64"],
    "I6": ["IV", "ii6", "V65"],
    "vi": ["ii6", "IV", "V"],
    "V65": ["I", "I6"],
    "I64": ["V", "V7"],
    "V7/IV": ["IV", "V2/IV"],
    "V2/IV": ["IV6"],
    "IV6": ["V", "I64"],
    "ii": ["V"],
    "bIII": ["V65/bIII", "iv", "I"],
    "V65/bIII": ["bIII", "iv"],
    "iv": ["V", "I"],
}
LATE_EXTRA = {
    "I": ["viio7/V", "#ivo7", "It6", "V7(4)"],
    "V": ["bVI", "V(64)"],
    "IV": ["bII6", "viio7"],
    "vi": ["bVI", "viio7/ii"],
    "viio7/V": ["V", "I64"],
    "#ivo7": ["V", "I64"],
    "It6": ["V"],
    "V7(4)": ["V7", "I"],
    "bVI": ["V", "bII6"],
    "V(64)": ["V7"],
    "bII6": ["V", "viio7"],
    "viio7": ["I", "V/V"],
    "viio7/ii": ["ii6", "V/V"],
    "V/V": ["V", "V7"],
}
MINOR_CORE = {
    "i": ["V", "iv", "V7", "iio6", "i6", "VI", "III"],
    "V": ["i", "V7", "VI", "i6"],
    "V7": ["i", "VI"],
    "iv": ["V", "i", "iio6", "i64"],
    "iio6": ["V", "V7", "i64"],
    "i6": ["iv", "iio65", "V65"],
    "VI": ["iio6", "iv", "V", "Ger6"],
    "III": ["VI", "V7/III", "iv"],
    "V7/III": ["III"],
    "V65": ["i"],
    "i64": ["V", "V7"],
    "iio65": ["V"],
    "Ger6": ["V", "i64"],
}

LABEL = re.compile(r"^([b#]?(?:VII|VI|V|IV|III|II|I|vii|vi|v|iv|iii|ii|i|It|Ger|Fr))([Mo%+]?)(\d*)(\(\d+\))?(?:/(.+))?$")


def split(label):
    m = LABEL.match(label)
    if not m:
        raise ValueError(label)
    numeral, form, figbass, changes, root = m.groups()
    return numeral, form, figbass, (changes or "").strip("()"), root or ""


def chain(period, minor):
    table = {k: list(v) for k, v in (MINOR_CORE if minor else MAJOR_CORE).items()}
    if not minor and period == "late":
        for k, v in LATE_EXTRA.items():
            table.setdefault(k, []).extend(v)
    if not minor and period == "middle":
        table["I"].append("V/V")
        table["V/V"] = ["V", "V7"]
    return table


def walk(rng, table, start, length):
    seq = [start]
    while len(seq) < length:
        seq.append(rng.choice(table.get(seq[-1], [start])))
    return seq


def main():
    rng = random.Random(1770)
    rows = []
    for op, no, gkey in QUARTETS:
        period = PERIOD[op]
        for mov in ("1", "2"):
            measure = 1
            for _ in range(rng.randint(1, 2)):
                minor = rng.random() < 0.3
                table = chain(period, minor)
                tonic = "i" if minor else "I"
                seq = walk(rng, table, tonic, rng.randint(5, 10))
                pedal_at = rng.randrange(len(seq)) if rng.random() < 0.25 else None
                for pos, label in enumerate(seq):
                    numeral, form, figbass, changes, root = split(label)
                    if rng.random() < 0.03:
                        numeral = form = figbass = changes = root = ""
                        numeral = "@none"
                    pedal = ""
                    if pedal_at is not None and pedal_at <= pos < pedal_at + 3:
                        pedal = tonic
                    rows.append({
                        "key": gkey, "op": op, "no": no, "mov": mov, "measure": str(measure),
                        "length": rng.choice(["1/4", "1/2", "1"]), "global_key": gkey,
                        "local_key": tonic, "pedal": pedal, "numeral": numeral, "form": form,
                        "figbass": figbass, "changes": changes, "relativeroot": root,
                        "phraseend": "True" if pos == len(seq) - 1 else "False",
                    })
                    measure += 1
    # the Grosse Fuge analogue: opus 9 belongs to opus 8
    for pos, label in enumerate(walk(rng, chain("late", False), "I", 8)):
        numeral, form, figbass, changes, root = split(label)
        rows.append({
            "key": "Bb", "op": "9", "no": "", "mov": "1", "measure": str(pos + 1), "length": "1",
            "global_key": "Bb", "local_key": "I", "pedal": "", "numeral": numeral, "form": form,
            "figbass": figbass, "changes": changes, "relativeroot": root,
            "phraseend": "True" if pos == 7 else "False",
        })

    # deliberate mistakes for the cleaning rules
    rows[3]["global_key"] = "false"
    rows[40]["global_key"] = "nothing"
    major_rows = [i for i, r in enumerate(rows) if r["local_key"] == "I"]
    rows[major_rows[25]]["local_key"] = "Ab"
    starts = [i for i, r in enumerate(rows) if r["local_key"] == "i" and (i == 0 or rows[i - 1]["phraseend"] == "True")]
    rows[starts[1]]["local_key"] = "I"
    rows[starts[1] + 1]["local_key"] = "I"

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, COLUMNS, delimiter="\t", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
