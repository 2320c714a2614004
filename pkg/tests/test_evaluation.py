from fractions import Fraction

import pytest

from brailletext.evaluation import (SUBSTITUTION_NOTE, Confusion, char_accuracy, format_report,
                                    metrics, percent)

TABLE_COUNTS = Confusion(t_p=1511, t_n=2836, f_p=0, f_n=21)


class TestMetrics:
    def test_table_counts(self):
        pct = metrics(TABLE_COUNTS).percentages()
        assert pct["precision"] == "100.00%"
        assert pct["recall"] == "98.63%"
        assert pct["f_measure"] == "99.31%"

    def test_table_accuracy(self):
        m = metrics(TABLE_COUNTS)
        assert m.accuracy == Fraction(4347, 4368)
        assert percent(m.accuracy) == "99.52%"

    def test_exact_values(self):
        m = metrics(TABLE_COUNTS)
        assert m.recall == Fraction(1511, 1532)
        assert m.f_measure == 2 * m.precision * m.recall / (m.precision + m.recall)

    def test_degenerate(self):
        m = metrics(Confusion(t_n=10))
        assert m.degenerate
        assert (m.accuracy, m.precision, m.recall) == (1, 1, 1)

    def test_zero_f_measure(self):
        m = metrics(Confusion(f_p=2, f_n=3))
        assert m.f_measure == 0 and not m.degenerate

    def test_all_zero(self):
        with pytest.raises(ValueError):
            metrics(Confusion())

    def test_negative(self):
        with pytest.raises(ValueError):
            Confusion(t_p=-1)

    def test_add(self):
        assert Confusion(1, 2, 3, 4) + Confusion(1, 1, 1, 1) == Confusion(2, 3, 4, 5)


class TestPercent:
    @pytest.mark.parametrize("value, text", [
        (Fraction(1), "100.00%"),
        (Fraction(0), "0.00%"),
        (Fraction(1, 8), "12.50%"),
        (Fraction(98625, 100000), "98.63%"),
        (Fraction(98624999, 100000000), "98.62%"),
        (Fraction(1, 3), "33.33%"),
    ])
    def test_rounding(self, value, text):
        assert percent(value) == text


class TestCharAccuracy:
    def test_identical(self):
        r = char_accuracy("কআ\nব", "কআ\nব")
        assert r.metrics.accuracy == 1 and r.confusion.t_p == 3

    def test_missing(self):
        r = char_accuracy("", "ক")
        assert r.confusion == Confusion(f_n=1)

    def test_substitution(self):
        r = char_accuracy("কক", "কআ")
        assert r.confusion == Confusion(t_p=1, f_p=1, f_n=1)
        assert r.substitutions == 1
        assert r.mismatches == [(0, 1, "ক", "আ")]

    def test_false_alarm_and_blanks(self):
        r = char_accuracy("ক ব", "ক  ")
        assert r.confusion == Confusion(t_p=1, t_n=1, f_p=1)

    def test_padding(self):
        r = char_accuracy("ক", "ক\n ব")
        assert r.confusion == Confusion(t_p=1, t_n=1, f_n=1)

    def test_table_cells(self, table):
        r = char_accuracy("ক্ষ", "ক্ষ", table)
        assert r.confusion == Confusion(t_p=1)

    def test_cell_lists(self):
        r = char_accuracy([["ক", " "]], [["ক", "ব"]])
        assert r.confusion == Confusion(t_p=1, f_n=1)

    def test_both_empty(self):
        r = char_accuracy("", "")
        assert r.metrics.degenerate and r.metrics.accuracy == 1


class TestReport:
    def test_order(self):
        text = format_report(TABLE_COUNTS, metrics(TABLE_COUNTS), SUBSTITUTION_NOTE)
        lines = text.splitlines()
        assert lines[:8] == ["TP 1511", "FP 0", "TN 2836", "FN 21", "Accuracy 99.52%",
                             "Precision 100.00%", "Recall 98.63%", "F-Measure 99.31%"]
        assert lines[-1] == "note: " + SUBSTITUTION_NOTE

    def test_degenerate_note(self):
        c = Confusion(t_n=4)
        assert "degenerate" in format_report(c, metrics(c))
