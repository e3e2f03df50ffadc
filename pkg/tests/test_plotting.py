from boxlogic.formula import Var
from boxlogic.plotting import plot_trace
from boxlogic.semantic import boxed_bottoms, run_filter
from boxlogic.theory import parse_theory


def test_plot_writes_png(tmp_path):
    t = parse_theory("p1 := ~[]p1")
    _, trace, _ = run_filter(t, [Var(1)] + boxed_bottoms(5))
    out = plot_trace(trace, tmp_path / "sub" / "trace.png", limit=8)
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
