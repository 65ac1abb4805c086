"""Smoke tests for the python module (run against the build tree)."""

import pytest

tf = pytest.importorskip("_toposforge")

SIERPINSKI = """
points: eta sigma
open:
open: eta
open: eta sigma
"""


def test_forcing_on_sierpinski():
    sp = tf.Space(SIERPINSKI)
    assert sp.points() == ["eta", "sigma"]
    assert sp.open_count() == 3
    assert not sp.force("U")
    assert sp.force("~~U")
    assert sp.truth_value("~~U") == "X"
    assert sp.truth_value("U") == "{eta}"
    assert sp.force("U", "eta")
    assert not sp.is_boolean()


def test_translate():
    assert (
        tf.translate("exists x:F. p(x)=y", "negneg")
        == "~~(exists x:F. ~~(p(x) = y))"
    )
    assert (
        tf.translate("a=b /\\ c=d", "j", elide_gray=True)
        == "box[j](a = b) /\\ box[j](c = d)"
    )
    assert tf.translate("true", "j") == "true"


def test_spectrum_of_zmod12():
    spec = tf.Spectrum("zmod 12")
    assert spec.frame_size() == 4
    assert spec.point_count() == 2
    assert spec.global_sections() == 12
    assert spec.force("forall s:O. (~inv(s)) => nilp(s)")
    assert not spec.force("forall s:O. (~inv(s)) => s = 0")  # Z/12 is not reduced
    assert spec.truth_value("inv(2)") == "{p1}"


def test_one_point_spectra():
    assert tf.Spectrum("zmod 4").point_count() == 1
    assert tf.Spectrum("polyquot (zmod 2) x^2+x+1").frame_size() == 2


def test_verify_suite():
    ok, text = tf.verify("dimension", count=3)
    assert ok, text
    assert "PASS" in text
    assert "dimension" in tf.suites()


def test_errors():
    with pytest.raises(tf.FormulaParseError):
        tf.Space(SIERPINSKI).force("forall x:M. (")
    with pytest.raises(tf.InvalidStructureError):
        tf.Space("points: a\nopen: a\n")
