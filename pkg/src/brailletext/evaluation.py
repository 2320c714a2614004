"""Accuracy, precision, recall and F-measure over confusion counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple

SUBSTITUTION_NOTE = "a substituted cell counts once as FP and once as FN"


@dataclass(frozen=True)
class Confusion:
    t_p: int = 0
    t_n: int = 0
    f_p: int = 0
    f_n: int = 0

    def __post_init__(self):
        if min(self.t_p, self.t_n, self.f_p, self.f_n) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self):
        return self.t_p + self.t_n + self.f_p + self.f_n

    def __add__(self, other):
        return Confusion(self.t_p + other.t_p, self.t_n + other.t_n,
                         self.f_p + other.f_p, self.f_n + other.f_n)


@dataclass(frozen=True)
class Metrics:
    """Exact rational metrics.

    ``degenerate`` is set when precision or recall was 0/0 and reported as 1.
    """

    accuracy: Fraction
    precision: Fraction
    recall: Fraction
    f_measure: Fraction
    degenerate: bool = False

    def percentages(self):
        return {name: percent(getattr(self, name))
                for name in ("accuracy", "precision", "recall", "f_measure")}


def metrics(c: Confusion) -> Metrics:
    if c.total == 0:
        raise ValueError("all-zero confusion")
    degenerate = False
    accuracy = Fraction(c.t_p + c.t_n, c.total)
    if c.t_p + c.f_p:
        precision = Fraction(c.t_p, c.t_p + c.f_p)
    else:
        precision, degenerate = Fraction(1), True
    if c.t_p + c.f_n:
        recall = Fraction(c.t_p, c.t_p + c.f_n)
    else:
        recall, degenerate = Fraction(1), True
    if precision + recall == 0:
        f_measure = Fraction(0)
    else:
        f_measure = 2 * precision * recall / (precision + recall)
    return Metrics(accuracy, precision, recall, f_measure, degenerate)


def percent(value: Fraction) -> str:
    """Percentage with two decimals, rounding halves away from zero."""
    scaled = Fraction(value) * 10000
    hundredths = int(scaled + Fraction(1, 2)) if scaled >= 0 else -int(-scaled + Fraction(1, 2))
    return f"{hundredths // 100}.{hundredths % 100:02d}%"


def _as_cells(text_or_cells, table):
    if isinstance(text_or_cells, str):
        if text_or_cells == "":
            return []
        lines = text_or_cells.split("\n")
        if table is None:
            return [list(line) for line in lines]
        return [table.split_cells(line) for line in lines]
    return [list(row) for row in text_or_cells]


class CharComparison(NamedTuple):
    confusion: Confusion
    metrics: Metrics
    substitutions: int
    mismatches: List[tuple]


def char_accuracy(predicted, truth, table=None) -> CharComparison:
    """Cell-aligned character comparison.

    Either argument may be text (split into cells with ``table`` when given,
    else per code point) or a list of rows of cell strings.  Blank cells are
    ``' '``; shorter lines and pages are padded with blanks.
    """
    pred = _as_cells(predicted, table)
    true = _as_cells(truth, table)
    lines = max(len(pred), len(true))
    tp = tn = fp = fn = subs = 0
    mismatches = []
    for i in range(lines):
        prow = pred[i] if i < len(pred) else []
        trow = true[i] if i < len(true) else []
        for j in range(max(len(prow), len(trow))):
            p = prow[j] if j < len(prow) else " "
            t = trow[j] if j < len(trow) else " "
            p_blank, t_blank = p == " ", t == " "
            if p_blank and t_blank:
                tn += 1
            elif p == t:
                tp += 1
            elif t_blank:
                fp += 1
                mismatches.append((i, j, p, t))
            elif p_blank:
                fn += 1
                mismatches.append((i, j, p, t))
            else:
                fp += 1
                fn += 1
                subs += 1
                mismatches.append((i, j, p, t))
    c = Confusion(tp, tn, fp, fn)
    if c.total == 0:
        m = Metrics(Fraction(1), Fraction(1), Fraction(1), Fraction(1), True)
    else:
        m = metrics(c)
    return CharComparison(c, m, subs, mismatches)


def format_report(c: Confusion, m: Metrics, note: str = "") -> str:
    """Fixed-order report: counts, then the four metrics as percentages."""
    pct = m.percentages()
    lines = [
        f"TP {c.t_p}",
        f"FP {c.f_p}",
        f"TN {c.t_n}",
        f"FN {c.f_n}",
        f"Accuracy {pct['accuracy']}",
        f"Precision {pct['precision']}",
        f"Recall {pct['recall']}",
        f"F-Measure {pct['f_measure']}",
    ]
    if m.degenerate:
        lines.append("note: degenerate precision/recall (0/0) reported as 100%")
    if note:
        lines.append(f"note: {note}")
    return "\n".join(lines)
