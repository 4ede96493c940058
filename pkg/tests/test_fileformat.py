import pytest
from hypothesis import given

from querybounds.fileformat import (
    FunctionFileError, load_function, parse_function_file, save_function, serialize_function)
from querybounds.functions import make_ordered_search, make_threshold

from conftest import partial_functions

XOR_DOC = """\
qfun 1
# parity on two bits
name xor
n 2
m 1
table 4
00 0
01 1
10 1
11 0   # trailing comment
end
"""


def test_parse_table():
    F = parse_function_file(XOR_DOC)
    assert F.name == "xor"
    assert F.table == {"00": "0", "01": "1", "10": "1", "11": "0"}


def test_parse_builtin_with_param():
    F = parse_function_file("qfun 1\nn 5\nbuiltin threshold\nparam t 2\nend\n")
    assert F == make_threshold(5, 2)


@given(partial_functions(max_n=5, max_m=3))
def test_table_roundtrip(F):
    G = parse_function_file(serialize_function(F))
    assert G == F


@pytest.mark.parametrize("F", [make_threshold(4, 3), make_ordered_search(6)])
def test_builtin_roundtrip(F, tmp_path):
    path = tmp_path / "f.qfun"
    save_function(F, path)
    assert "builtin" in path.read_text()
    assert load_function(path) == F


@pytest.mark.parametrize("doc, line, field", [
    ("", None, None),
    ("qfun 2\nend\n", 1, "header"),
    ("qfn 1\nend\n", 1, "header"),
    ("qfun 1\nn 2\nm 1\ntable 1\n0 1\nend\n", 5, "table"),
    ("qfun 1\nn 2\nm 1\ntable 2\n00 1\n00 0\nend\n", 6, "table"),
    ("qfun 1\nn 2\nm 1\ntable 1\n00 2\nend\n", 5, "table"),
    ("qfun 1\nn 2\nm 1\ntable 3\n00 1\nend\n", 4, "table"),
    ("qfun 1\nn x\nend\n", 2, "n"),
    ("qfun 1\nn 2\nn 3\nend\n", 3, "n"),
    ("qfun 1\nn 2\nbuiltin nope\nend\n", 3, "builtin"),
    ("qfun 1\nn 2\ncolour red\nend\n", 3, "colour"),
    ("qfun 1\nn 2\nm 1\ntable 1\n00 1\n", 5, None),
    ("qfun 1\nn 2\nbuiltin or\nend\nn 3\n", 5, None),
    ("qfun 1\nm 1\ntable 0\nend\n", None, "n"),
    ("qfun 1\nbuiltin threshold\nn 3\nend\n", None, "builtin"),
])
def test_errors_carry_location(doc, line, field):
    with pytest.raises(FunctionFileError) as info:
        parse_function_file(doc)
    assert info.value.line == line
    assert info.value.field == field


def test_builtin_m_mismatch():
    with pytest.raises(FunctionFileError, match="m="):
        parse_function_file("qfun 1\nn 4\nm 1\nbuiltin ordered-search\nend\n")
