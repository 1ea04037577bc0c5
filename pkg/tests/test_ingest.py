import math
import random

import numpy as np
import pytest

from spinorlab.errors import MissingPrime, NonRamanujan, ParseError
from spinorlab.ingest import load_form, save_form
from spinorlab.satake import EigenForm, synth_form

HEADER = "#SIEGEL-FORM v1 label=toy route={route} prime_bound={bound}"


def _write(tmp_path, text, name="f.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


def _pairs(form):
    return np.sort(np.c_[form.t_a, form.t_b], axis=1)


def test_single_row(tmp_path):
    path = _write(tmp_path, HEADER.format(route="traces", bound=2) + f"\n2 {2 * math.cos(1)!r} {2 * math.cos(2)!r}\n")
    form = load_form(path)
    assert len(form.locals) == 1 and form.label == "toy" and form.source == "file"
    assert form.local(2).t_a == 2 * math.cos(1)


@pytest.mark.parametrize("route", ["traces", "eigen"])
def test_round_trip(tmp_path, route):
    f = synth_form(9, 5000, 0.05)
    path = tmp_path / f"{route}.txt"
    save_form(f, path, route)
    g = load_form(path)
    assert g.label == f.label and g.prime_bound == f.prime_bound
    np.testing.assert_allclose(_pairs(g), _pairs(f), atol=1e-9)
    if route == "traces":
        assert np.array_equal(g.t_a, f.t_a) and np.array_equal(g.t_b, f.t_b)
    else:
        assert np.all(g.t_a >= g.t_b)


def test_header_echo(tmp_path):
    f = synth_form(3, 30, 0.05)
    save_form(f, tmp_path / "h.txt", "eigen")
    first = (tmp_path / "h.txt").read_text().splitlines()[0]
    assert first == "#SIEGEL-FORM v1 label=synth-3 route=eigen prime_bound=30 normalization=normalized"


def test_order_insensitive(tmp_path):
    f = synth_form(5, 500, 0.05)
    save_form(f, tmp_path / "a.txt", "eigen")
    lines = (tmp_path / "a.txt").read_text().splitlines()
    rows = lines[1:]
    random.Random(0).shuffle(rows)
    _write(tmp_path, "\n".join([lines[0], "# shuffled", ""] + rows) + "\n", "b.txt")
    g, h = load_form(tmp_path / "a.txt"), load_form(tmp_path / "b.txt")
    assert np.array_equal(g.t_a, h.t_a) and np.array_equal(g.t_b, h.t_b)


def test_missing_prime(tmp_path):
    path = _write(tmp_path, HEADER.format(route="traces", bound=5) + "\n2 0 0\n5 0 0\n")
    with pytest.raises(MissingPrime):
        load_form(path)


def test_non_ramanujan_row(tmp_path):
    path = _write(tmp_path, HEADER.format(route="eigen", bound=3) + "\n2 0.5 -1\n3 10 0\n")
    with pytest.raises(NonRamanujan, match="line 3"):
        load_form(path)
    path = _write(tmp_path, HEADER.format(route="traces", bound=2) + "\n2 2.5 0\n", "t.txt")
    with pytest.raises(NonRamanujan):
        load_form(path)


@pytest.mark.parametrize(
    "body, line",
    [
        ("2 0 0\n2 0 0\n", 3),
        ("2 0\n", 2),
        ("2 zero 0\n", 2),
        ("4 0 0\n", 2),
        ("2 0 0\n7 0 0\n", 3),
        ("2 nan 0\n", 2),
    ],
)
def test_parse_errors(tmp_path, body, line):
    path = _write(tmp_path, HEADER.format(route="traces", bound=3) + "\n" + body)
    with pytest.raises(ParseError) as err:
        load_form(path)
    assert err.value.line == line


@pytest.mark.parametrize(
    "header",
    [
        "SIEGEL v1 label=x route=traces prime_bound=2",
        "#SIEGEL-FORM v2 label=x route=traces prime_bound=2",
        "#SIEGEL-FORM v1 label=x route=alphas prime_bound=2",
        "#SIEGEL-FORM v1 label=x route=traces",
        "#SIEGEL-FORM v1 label=x route=traces prime_bound=2 normalization=classical",
    ],
)
def test_bad_headers(tmp_path, header):
    with pytest.raises(ParseError) as err:
        load_form(_write(tmp_path, header + "\n2 0 0\n"))
    assert err.value.line == 1


def test_save_rejections(tmp_path):
    empty = EigenForm("e", 1, np.zeros(0, dtype=int), np.zeros(0), np.zeros(0))
    with pytest.raises(ValueError):
        save_form(empty, tmp_path / "e.txt")
    spaced = EigenForm("two words", 2, [2], [0.0], [0.0])
    with pytest.raises(ValueError):
        save_form(spaced, tmp_path / "s.txt")
    with pytest.raises(ValueError):
        save_form(synth_form(1, 10, 0.05), tmp_path / "r.txt", "alphas")
    with pytest.raises(OSError):
        save_form(synth_form(1, 10, 0.05), tmp_path / "missing" / "dir" / "f.txt")
