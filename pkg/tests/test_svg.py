import xml.etree.ElementTree as ET

import pytest

from tempovis.charts.scene import ChartScene, Group, Legend, LegendEntry, Marker, Polyline, Text
from tempovis.svg import fmt, render

NS = "{http://www.w3.org/2000/svg}"


def test_empty_scene():
    doc = render(ChartScene(100, 50))
    root = ET.fromstring(doc.text.encode())
    assert root.tag == NS + "svg"
    assert root.get("width") == "100" and root.get("height") == "50"
    assert root.get("viewBox") == "0 0 100.000 50.000"
    assert [c.tag for c in root] == [NS + "rect"]


def test_three_point_polyline():
    scene = ChartScene(10, 10, (Polyline(((0, 0), (1.5, 2.25), (3, 4)), "#ff0000", 2.0, "dashed"),))
    root = ET.fromstring(render(scene).text.encode())
    line = root.find(NS + "polyline")
    assert line.get("points") == "0.000,0.000 1.500,2.250 3.000,4.000"
    assert line.get("stroke") == "#ff0000"
    assert line.get("stroke-dasharray") == "6,4"
    assert line.get("fill") == "none"


@pytest.mark.parametrize("value, text", [
    (0.0005, "0.001"), (-0.0005, "-0.001"), (2.0625, "2.063"), (1.0, "1.000"),
    (-0.0001, "0.000"), (123456.78949, "123456.789"),
])
def test_number_format(value, text):
    assert fmt(value) == text


def test_text_is_escaped_and_rotated():
    scene = ChartScene(50, 50, (Text(10, 20, "A & <B>", rotate=90),))
    root = ET.fromstring(render(scene).text.encode())
    t = root.find(NS + "text")
    assert t.text == "A & <B>"
    assert t.get("transform") == "rotate(90.000 10.000 20.000)"


def test_groups_and_markers():
    inner = ChartScene(20, 20, (Marker(5, 5, 2, "#000000"),))
    doc = render(ChartScene(100, 100, (Group(inner, 30, 40), Group(inner, 0, 0, 0.5))))
    root = ET.fromstring(doc.text.encode())
    gs = root.findall(NS + "g")
    assert [g.get("transform") for g in gs] == ["translate(30.000,40.000)", "translate(0.000,0.000) scale(0.500)"]
    assert gs[0].find(NS + "path") is not None


def test_reruns_are_byte_identical():
    scene = ChartScene(80, 60, (
        Polyline(((0.1, 0.2), (0.3, 0.4)), "#123456"),
        Legend(70, 5, (LegendEntry("a", "#000000"), LegendEntry("b", "#111111", "patch"),
                       LegendEntry("c", "#222222", "marker"))),
    ))
    assert render(scene).text == render(scene).text
    ET.fromstring(render(scene).text.encode())


def test_explicit_pixel_size_and_validation(tmp_path):
    doc = render(ChartScene(100, 50), 300, 150)
    assert (doc.width_px, doc.height_px) == (300, 150)
    assert 'viewBox="0 0 100.000 50.000"' in doc.text
    with pytest.raises(ValueError):
        render(ChartScene(100, 50), 0, 10)
    out = tmp_path / "x.svg"
    doc.write(out)
    assert out.read_bytes() == doc.text.encode()


def test_unknown_element_type():
    with pytest.raises(TypeError):
        render(ChartScene(10, 10, (object(),)))
