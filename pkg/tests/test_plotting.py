"""Figure rendering writes a sane file for every point mixture."""

from fractions import Fraction

import pytest

from typdeg.analysis import CLOSED_FORM, ENUMERATION, MONTE_CARLO, SequencePoint
from typdeg.plotting import render_sequence_plot

PNG_MAGIC = b"\x89PNG"


def _mixed_points():
    return [
        SequencePoint(n=2, value=0.25, exact=Fraction(1, 4), method=ENUMERATION),
        SequencePoint(n=4, value=0.738, exact=Fraction(189, 256),
                      method=ENUMERATION),
        SequencePoint(n=16, value=0.95, exact=Fraction(19, 20),
                      method=CLOSED_FORM),
        SequencePoint(n=64, value=0.99, exact=None, method=MONTE_CARLO,
                      ci=(0.97, 0.999)),
    ]


def test_with_target(tmp_path):
    path = tmp_path / "seq.png"
    out = render_sequence_plot(_mixed_points(), "typ", 1.0, str(path))
    assert out == str(path)
    data = path.read_bytes()
    assert data[:4] == PNG_MAGIC
    assert len(data) > 1000


def test_without_target(tmp_path):
    path = tmp_path / "plain.png"
    render_sequence_plot(_mixed_points(), "typ", None, str(path), title="demo")
    assert path.read_bytes()[:4] == PNG_MAGIC


def test_zero_gap_points_render(tmp_path):
    # a point sitting exactly on the target exercises the log-gap fallback
    points = [
        SequencePoint(n=n, value=0.5, exact=Fraction(1, 2), method=ENUMERATION)
        for n in (3, 5, 7)
    ]
    path = tmp_path / "zero.png"
    render_sequence_plot(points, "typ", 0.5, str(path))
    assert path.read_bytes()[:4] == PNG_MAGIC


def test_empty_sequence_rejected(tmp_path):
    with pytest.raises(ValueError):
        render_sequence_plot([], "typ", None, str(tmp_path / "no.png"))
