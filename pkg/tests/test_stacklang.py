import pytest

from fpcavity.materials import build_bottom_mirror, build_dbr
from fpcavity.stacklang import (
    Diagnostic,
    LayerItem,
    QuarterWaveItem,
    RepeatItem,
    format_document,
    parse_stack,
)

EXAMPLE = """
wavelength 940 nm
material ta2o5x n=2.06
material sio2x n=1.46
stack from vacuum to silica {
  repeat 2 { qw ta2o5x qw sio2x }
}
"""

BOTTOM_MIRROR_DOC = """
# bonded bottom mirror, no gap
wavelength 940 nm
stack from vacuum to silica {
  layer elo 211.58463385354142 nm
  repeat 13 { qw ta2o5 qw sio2 }
  qw ta2o5
}
"""


def stacks_equivalent(a, b, tol=1e-9):
    if a.incident_medium.refractive_index != b.incident_medium.refractive_index:
        return False
    if a.exit_medium.refractive_index != b.exit_medium.refractive_index:
        return False
    if a.layer_count != b.layer_count:
        return False
    return all(
        la.material.refractive_index == lb.material.refractive_index
        and abs(la.thickness - lb.thickness) < tol
        for la, lb in zip(a.layers, b.layers)
    )


class TestHappyPath:
    def test_quarter_wave_expansion(self):
        result = parse_stack(EXAMPLE)
        assert result.ok, result.diagnostics
        stack = result.document.to_stack()
        assert stack.layer_count == 4
        assert stack.layers[0].thickness == pytest.approx(114.08, abs=0.005)
        assert stack.layers[1].thickness == pytest.approx(160.96, abs=0.005)
        assert stack.layers[2].thickness == pytest.approx(114.08, abs=0.005)
        names = [l.material.name for l in stack.layers]
        assert names == ["ta2o5x", "sio2x", "ta2o5x", "sio2x"]

    def test_bottom_mirror_document_matches_builder(self):
        result = parse_stack(BOTTOM_MIRROR_DOC)
        assert result.ok, result.diagnostics
        assert stacks_equivalent(result.document.to_stack(), build_bottom_mirror(0.0))

    def test_dbr_document_matches_builder(self):
        source = (
            "wavelength 940 nm\n"
            "stack from vacuum to silica {\n"
            "  repeat 13 { qw ta2o5 qw sio2 }\n  qw ta2o5\n}\n"
        )
        result = parse_stack(source)
        assert result.ok
        assert stacks_equivalent(result.document.to_stack(), build_dbr(13))

    def test_comments_and_whitespace_insensitive(self):
        squeezed = "wavelength 940 nm stack from vacuum to silica{qw ta2o5 # trailing\nqw sio2}"
        result = parse_stack(squeezed)
        assert result.ok
        assert result.document.to_stack().layer_count == 2

    def test_extinction_coefficient(self):
        source = (
            "wavelength 940 nm\nmaterial lossy n = 3.0 k = 0.05\n"
            "stack from vacuum to silica { layer lossy 100 nm }"
        )
        result = parse_stack(source)
        assert result.ok
        index = result.document.to_stack().layers[0].material.refractive_index
        assert index == complex(3.0, 0.05)

    def test_nested_repeat(self):
        source = (
            "wavelength 940 nm\nstack from vacuum to silica {\n"
            "  repeat 2 { repeat 3 { qw ta2o5 } qw sio2 }\n}"
        )
        result = parse_stack(source)
        assert result.ok
        assert result.document.to_stack().layer_count == 8

    def test_library_materials_need_no_declaration(self):
        result = parse_stack("wavelength 940 nm\nstack from water to gaas { qw elo }")
        assert result.ok


class TestFixedPoint:
    @pytest.mark.parametrize("source", [EXAMPLE, BOTTOM_MIRROR_DOC])
    def test_parse_print_parse(self, source):
        first = parse_stack(source)
        assert first.ok
        printed = format_document(first.document)
        second = parse_stack(printed)
        assert second.ok
        assert first.document == second.document
        assert format_document(second.document) == printed

    def test_formatting_covers_all_item_kinds(self):
        source = (
            "wavelength 940 nm\nmaterial lossy n = 2 k = 0.5\n"
            "stack from vacuum to silica {\n"
            "  layer lossy 50 nm\n  qw ta2o5\n  repeat 2 { qw sio2 }\n}"
        )
        first = parse_stack(source)
        assert first.ok
        assert parse_stack(format_document(first.document)).document == first.document


def error_lines(result):
    return [(d.line, d.column) for d in result.diagnostics if d.severity == "error"]


class TestDiagnostics:
    def test_negative_thickness_positioned(self):
        source = "wavelength 940 nm\nstack from vacuum to silica {\n  layer gaas -5 nm\n}"
        result = parse_stack(source)
        assert not result.ok
        errors = result.errors()
        assert any(d.line == 3 and "positive" in d.message for d in errors)

    @pytest.mark.parametrize("source,fragment", [
        ("stack from vacuum to silica { }", "missing header"),
        ("wavelength -5 nm\nstack from vacuum to silica { }", "positive"),
        ("wavelength abc nm\nstack from vacuum to silica { }", "expected wavelength value"),
        ("wavelength 940\nstack from vacuum to silica { }", "expected 'nm'"),
        ("wavelength 940 nm", "missing stack definition"),
        ("wavelength 940 nm\nmaterial m\nstack from vacuum to silica { }", "expected 'n'"),
        ("wavelength 940 nm\nmaterial m n 2.0\nstack from vacuum to silica { }", "expected '='"),
        ("wavelength 940 nm\nmaterial m n = -2\nstack from vacuum to silica { }", "positive"),
        ("wavelength 940 nm\nmaterial m n = 2 k = -1\nstack from vacuum to silica { }", ">= 0"),
        ("wavelength 940 nm\nstack vacuum to silica { }", "expected 'from'"),
        ("wavelength 940 nm\nstack from vacuum silica { }", "expected 'to'"),
        ("wavelength 940 nm\nstack from nosuch to silica { }", "unknown material"),
        ("wavelength 940 nm\nstack from vacuum to nosuch { }", "unknown material"),
        ("wavelength 940 nm\nstack from vacuum to silica { layer nosuch 5 nm }", "unknown material"),
        ("wavelength 940 nm\nstack from vacuum to silica { qw nosuch }", "unknown material"),
        ("wavelength 940 nm\nstack from vacuum to silica { layer elo 5 }", "expected 'nm'"),
        ("wavelength 940 nm\nstack from vacuum to silica { layer elo nm }", "expected layer thickness"),
        ("wavelength 940 nm\nstack from vacuum to silica { repeat 0 { qw elo } }", "positive integer"),
        ("wavelength 940 nm\nstack from vacuum to silica { repeat 1.5 { qw elo } }", "positive integer"),
        ("wavelength 940 nm\nstack from vacuum to silica { repeat x { } }", "expected repeat count"),
        ("wavelength 940 nm\nstack from vacuum to silica { qw elo ", "unbalanced braces"),
        ("wavelength 940 nm\nstack from vacuum to silica { wavelength }", "expected 'layer'"),
        ("wavelength 940 nm\nstack from vacuum to silica { } stack from vacuum to silica { }", "multiple stack"),
        ("wavelength 940 nm\nstack from vacuum to silica { @ }", "unexpected character"),
        ("wavelength 940 nm\nlayer elo 5 nm\nstack from vacuum to silica { }", "expected 'material' or 'stack'"),
    ])
    def test_error_production(self, source, fragment):
        result = parse_stack(source)
        assert not result.ok
        assert any(fragment in d.message for d in result.errors()), result.diagnostics

    def test_duplicate_material_warns(self):
        source = (
            "wavelength 940 nm\nmaterial m n = 2\nmaterial m n = 3\n"
            "stack from vacuum to silica { qw m }"
        )
        result = parse_stack(source)
        assert result.ok  # warning only
        assert any(d.severity == "warning" and "redefined" in d.message
                   for d in result.diagnostics)

    def test_collects_multiple_errors(self):
        source = (
            "wavelength 940 nm\n"
            "stack from vacuum to silica {\n"
            "  layer nosuch 10 nm\n"
            "  layer elo -4 nm\n"
            "  qw missing\n"
            "}\n"
        )
        result = parse_stack(source)
        assert len(result.errors()) >= 3

    def test_positions_point_into_source(self):
        source = "wavelength 940 nm\nstack from vacuum to silica {\n   layer elo -4 nm\n}"
        result = parse_stack(source)
        (line, col) = [(d.line, d.column) for d in result.errors()][0]
        assert line == 3
        assert source.splitlines()[line - 1][col - 1:col + 1] == "-4"

    def test_diagnostic_str(self):
        d = Diagnostic("error", 3, 7, "boom")
        assert str(d) == "error:3:7: boom"


class TestDocumentModel:
    def test_items_structure(self):
        result = parse_stack(BOTTOM_MIRROR_DOC)
        items = result.document.items
        assert isinstance(items[0], LayerItem)
        assert isinstance(items[1], RepeatItem)
        assert items[1].count == 13
        assert isinstance(items[1].items[0], QuarterWaveItem)
        assert isinstance(items[2], QuarterWaveItem)

    def test_document_material_overrides_library(self):
        source = (
            "wavelength 940 nm\nmaterial elo n = 3.5\n"
            "stack from vacuum to silica { layer elo 100 nm }"
        )
        result = parse_stack(source)
        assert result.ok
        assert result.document.to_stack().layers[0].material.n == 3.5
