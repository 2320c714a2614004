import re
import subprocess
import sys

import pytest

from brailletext.cli import EXIT_BELOW_BAR, EXIT_OK, EXIT_PAGE_FAILED, EXIT_USAGE, main
from brailletext.image import save_gray
from brailletext.synth import SynthSpec, render

from conftest import pangram


def write_spec(path, text, **keys):
    head = "".join(f"{k} = {v}\n" for k, v in keys.items())
    path.write_text(head + "---\n" + text + "\n", encoding="utf-8")
    return path


def page(path, text, **kw):
    img, _ = render(SynthSpec(text=text, **kw))
    save_gray(img, path)
    return path


class TestTranslate:
    def test_single_grapheme(self, tmp_path):
        img = page(tmp_path / "a.pgm", "আ")
        assert main(["translate", str(img)]) == EXIT_OK
        assert (tmp_path / "a.txt").read_text(encoding="utf-8") == "আ\n"

    def test_report_on_stderr(self, tmp_path, capsys):
        img = page(tmp_path / "a.pgm", "আ")
        main(["translate", str(img), "-o", "-"])
        out, err = capsys.readouterr()
        assert out == "আ\n"
        assert "chars_per_line 1" in err and "theta_b_deg" in err

    def test_blank_page(self, tmp_path):
        img = page(tmp_path / "blank.pgm", "", paper_texture=0)
        assert main(["translate", str(img), "-o", str(tmp_path / "out")]) == EXIT_OK
        assert (tmp_path / "out" / "blank.txt").read_bytes() == b""

    def test_unreadable_page_does_not_stop_batch(self, tmp_path, capsys):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"not an image")
        good = page(tmp_path / "good.pgm", "আ")
        assert main(["translate", str(bad), str(good)]) == EXIT_PAGE_FAILED
        assert (tmp_path / "good.txt").read_text(encoding="utf-8") == "আ\n"
        assert not (tmp_path / "bad.txt").exists()
        assert "cannot read image" in capsys.readouterr().err

    def test_jobs_parity(self, tmp_path, alphabet):
        pages = [page(tmp_path / f"p{i}.pgm", pangram(alphabet, 2, 4 + i), rotation=i - 2, seed=i)
                 for i in range(4)]
        args = [str(p) for p in pages]
        assert main(["translate", *args, "-o", str(tmp_path / "one"), "--jobs", "1"]) == EXIT_OK
        assert main(["translate", *args, "-o", str(tmp_path / "four"), "--jobs", "4"]) == EXIT_OK
        for p in pages:
            name = p.stem + ".txt"
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "four" / name).read_bytes()

    def test_table_from_environment(self, tmp_path, monkeypatch):
        table = tmp_path / "tiny.tbl"
        table.write_text("001110\tA\n", encoding="utf-8")
        img = page(tmp_path / "a.pgm", "আ")
        monkeypatch.setenv("BRAILLE_TABLE", str(table))
        assert main(["translate", str(img)]) == EXIT_OK
        assert (tmp_path / "a.txt").read_text(encoding="utf-8") == "A\n"

    def test_table_flag_wins(self, tmp_path, monkeypatch):
        env, flag = tmp_path / "env.tbl", tmp_path / "flag.tbl"
        env.write_text("001110\tE\n", encoding="utf-8")
        flag.write_text("001110\tF\n", encoding="utf-8")
        img = page(tmp_path / "a.pgm", "আ")
        monkeypatch.setenv("BRAILLE_TABLE", str(env))
        main(["translate", str(img), "--table", str(flag)])
        assert (tmp_path / "a.txt").read_text(encoding="utf-8") == "F\n"

    def test_missing_table(self, tmp_path):
        img = page(tmp_path / "a.pgm", "আ")
        assert main(["translate", str(img), "--table", str(tmp_path / "none.tbl")]) == EXIT_USAGE

    @pytest.mark.parametrize("flags", [["--median-window", "4"], ["--fill-threshold", "0"],
                                       ["--jobs", "0"], ["--closing-radius", "-1"]])
    def test_bad_flags(self, tmp_path, flags):
        img = page(tmp_path / "a.pgm", "আ")
        assert main(["translate", str(img), *flags]) == EXIT_USAGE

    def test_no_arguments(self):
        assert main([]) == EXIT_USAGE


class TestInspect:
    def test_all_stages(self, tmp_path, alphabet, capsys):
        img = page(tmp_path / "p.pgm", pangram(alphabet, 2, 3), rotation=1.5)
        out = tmp_path / "stages"
        assert main(["inspect", str(img), "-o", str(out)]) == EXIT_OK
        names = sorted(p.name for p in out.iterdir())
        assert names == ["01-bhe.png", "02-median.png", "03-binary.png", "04-closed.png",
                         "05-points.png", "06-margins.png", "07-grid.png", "structure.txt"]
        text = (out / "structure.txt").read_text(encoding="utf-8")
        deg = re.search(r"^theta_b_deg (-?\d+\.\d\d)$", text, re.M)
        assert deg and abs(float(deg.group(1)) - 1.5) <= 0.5
        for key in ("p0_x", "p0_y", "char_width", "char_gap", "line_gap", "chars_per_line"):
            assert key in text

    def test_blank_page(self, tmp_path):
        img = page(tmp_path / "blank.pgm", "", paper_texture=0)
        out = tmp_path / "stages"
        assert main(["inspect", str(img), "--inspect-dir", str(out)]) != EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == [
            "01-bhe.png", "02-median.png", "03-binary.png", "04-closed.png"]


class TestSynthAndEval:
    def test_end_to_end(self, tmp_path, alphabet, capsys):
        spec = write_spec(tmp_path / "page.spec", pangram(alphabet, 3, 6))
        assert main(["synth", str(spec), "-o", str(tmp_path / "page.pgm")]) == EXIT_OK
        assert (tmp_path / "page.truth").exists()
        assert main(["translate", str(tmp_path / "page.pgm")]) == EXIT_OK
        pred = tmp_path / "page.txt"
        truth = tmp_path / "truth.txt"
        truth.write_text(pangram(alphabet, 3, 6) + "\n", encoding="utf-8")
        capsys.readouterr()
        assert main(["eval", "--text", str(pred), str(truth), "--min-accuracy", "100"]) == EXIT_OK
        assert "Accuracy 100.00%" in capsys.readouterr().out

    def test_eval_image(self, tmp_path, alphabet, capsys):
        spec = write_spec(tmp_path / "page.spec", pangram(alphabet, 2, 5), rotation=1)
        main(["synth", str(spec)])
        capsys.readouterr()
        assert main(["eval", str(tmp_path / "page.pgm"), "--min-accuracy", "99"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "characters" in out and "dots" in out
        assert "Accuracy 100.00%" in out

    def test_counts(self, capsys):
        assert main(["eval", "--counts", "1511", "0", "2836", "21"]) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out[:8] == ["TP 1511", "FP 0", "TN 2836", "FN 21", "Accuracy 99.52%",
                           "Precision 100.00%", "Recall 98.63%", "F-Measure 99.31%"]

    def test_below_bar(self):
        assert main(["eval", "--counts", "1", "1", "0", "0", "--min-accuracy", "60"]) == EXIT_BELOW_BAR

    def test_all_zero_counts(self):
        assert main(["eval", "--counts", "0", "0", "0", "0"]) == EXIT_USAGE

    def test_seed_reproducible(self, tmp_path, alphabet):
        spec = write_spec(tmp_path / "n.spec", pangram(alphabet, 2, 4), noise_salt_pepper=0.01,
                          dot_jitter=1)
        main(["synth", str(spec), "--seed", "7", "-o", str(tmp_path / "a.pgm")])
        main(["synth", str(spec), "--seed", "7", "-o", str(tmp_path / "b.pgm")])
        main(["synth", str(spec), "--seed", "8", "-o", str(tmp_path / "c.pgm")])
        a, b, c = [(tmp_path / n).read_bytes() for n in ("a.pgm", "b.pgm", "c.pgm")]
        assert a == b and a != c

    def test_bad_spec(self, tmp_path):
        spec = tmp_path / "bad.spec"
        spec.write_text("colour = red\n---\n", encoding="utf-8")
        assert main(["synth", str(spec)]) == EXIT_USAGE


def test_module_entry_point(tmp_path):
    img = page(tmp_path / "a.pgm", "আ")
    run = subprocess.run([sys.executable, "-m", "brailletext", "translate", str(img), "-o", "-"],
                         capture_output=True)
    assert run.returncode == 0
    assert run.stdout.decode("utf-8") == "আ\n"
