"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--size 1200] [--repeat 5]

Each kernel runs on the same inputs under both backends; the outputs are
checked for equality before timing.  A full page recognition is timed too,
with the backend swapped in for the duration of the run.
"""

import argparse
import time
from contextlib import contextmanager

import numpy as np

from brailletext import kernels
from brailletext.pipeline import recognize
from brailletext.synth import SynthSpec, render
from brailletext.translate import default_table


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


@contextmanager
def backend(name):
    impl = kernels.BACKENDS[name]
    saved = {k: getattr(kernels, k) for k in ("median_filter", "dilate", "erode", "label8")}
    for k in saved:
        setattr(kernels, k, getattr(impl, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def sample_page(table):
    alpha = [g for g in table.graphemes() if g not in table.colliding_graphemes()]
    text = "\n".join("".join(alpha[(i * 20 + j) % len(alpha)] for j in range(20)) for i in range(16))
    return render(SynthSpec(text=text, rotation=1.0, noise_salt_pepper=0.01, seed=1))[0]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    names = [n for n in ("pure", "cython") if n in kernels.BACKENDS]
    if "cython" not in names:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)
    gray = rng.integers(0, 256, (args.size, args.size), dtype=np.uint8)
    binary = rng.random((args.size, args.size)) < 0.3

    cases = [
        ("median 3x3", lambda m: m.median_filter(gray, 3)),
        ("median 5x5", lambda m: m.median_filter(gray, 5)),
        ("dilate r=1", lambda m: m.dilate(binary, 1)),
        ("erode r=2", lambda m: m.erode(binary, 2)),
        ("label8", lambda m: m.label8(binary)),
    ]
    print(f"{'kernel':<14}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for title, call in cases:
        outs = [call(kernels.BACKENDS[n]) for n in names]
        for o in outs[1:]:
            a, b = (o, outs[0]) if not isinstance(o, tuple) else (o[0], outs[0][0])
            assert np.array_equal(a, b), f"{title}: backends disagree"
        times = [best_of(lambda: call(kernels.BACKENDS[n]), args.repeat) for n in names]
        ratio = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{title:<14}" + "".join(f"{t * 1000:>10.1f}ms" for t in times) + ratio)

    table = default_table()
    img = sample_page(table)
    times = []
    for n in names:
        with backend(n):
            times.append(best_of(lambda: recognize(img, table=table), max(1, args.repeat // 2)))
    ratio = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
    label = f"page {img.width}x{img.height}"
    print(f"{label:<14}" + "".join(f"{t * 1000:>10.1f}ms" for t in times) + ratio)


if __name__ == "__main__":
    main()
