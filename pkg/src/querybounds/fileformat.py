"""Line-oriented text format for user-supplied functions.

A document looks like::

    qfun 1
    name or-on-three
    n 3
    m 1
    builtin or
    end

or, for an explicit table::

    qfun 1
    n 2
    m 1
    table 4
    00 0
    01 1
    10 1
    11 0
    end

``#`` starts a comment; blank lines are ignored.  ``param <key> <int>``
lines pass extra parameters (``t`` for thresholds) to a builtin.
"""
from __future__ import annotations

from pathlib import Path

from .functions import BUILTINS, FunctionError, PartialFunction, make_builtin, to_bits

FORMAT_TAG = "qfun"
FORMAT_VERSION = 1


class FunctionFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _int_field(value: str, lineno: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise FunctionFileError(f"expected an integer, got {value!r}", lineno, key) from None


def parse_function_file(doc: str) -> PartialFunction:
    lines = [(k + 1, raw.split("#", 1)[0].strip()) for k, raw in enumerate(doc.splitlines())]
    lines = [(k, s) for k, s in lines if s]
    if not lines:
        raise FunctionFileError("empty document")

    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != FORMAT_TAG:
        raise FunctionFileError(f"first line must be '{FORMAT_TAG} <version>'", lineno, "header")
    if _int_field(parts[1], lineno, "header") != FORMAT_VERSION:
        raise FunctionFileError(f"unsupported version {parts[1]}", lineno, "header")

    fields: dict[str, object] = {}
    params: dict[str, int] = {}
    rows: list[tuple[int, str, str]] = []
    table_len = None
    ended = False
    pos = 1
    while pos < len(lines):
        lineno, s = lines[pos]
        pos += 1
        key, _, rest = s.partition(" ")
        rest = rest.strip()
        if ended:
            raise FunctionFileError("content after 'end'", lineno)
        if key == "end":
            ended = True
        elif key == "name":
            fields["name"] = rest
        elif key in ("n", "m"):
            if key in fields:
                raise FunctionFileError("repeated field", lineno, key)
            fields[key] = _int_field(rest, lineno, key)
        elif key == "builtin":
            if rest not in BUILTINS:
                raise FunctionFileError(f"unknown builtin {rest!r}", lineno, "builtin")
            fields["builtin"] = rest
        elif key == "param":
            pk, _, pv = rest.partition(" ")
            if not pk or not pv.strip():
                raise FunctionFileError("expected 'param <key> <value>'", lineno, "param")
            params[pk] = _int_field(pv.strip(), lineno, f"param {pk}")
        elif key == "table":
            table_len = _int_field(rest, lineno, "table")
            if pos + table_len > len(lines):
                raise FunctionFileError(f"table declares {table_len} rows but the document ends early",
                                        lineno, "table")
            for _ in range(table_len):
                rl, row = lines[pos]
                pos += 1
                cols = row.split()
                if len(cols) != 2:
                    raise FunctionFileError("table row must be '<input> <output>'", rl, "table")
                rows.append((rl, cols[0], cols[1]))
        else:
            raise FunctionFileError(f"unknown field {key!r}", lineno, key)
    if not ended:
        raise FunctionFileError("missing 'end'", lines[-1][0])

    name = str(fields.get("name", ""))
    if "builtin" in fields:
        if table_len is not None:
            raise FunctionFileError("give either 'builtin' or 'table', not both")
        try:
            F = make_builtin(str(fields["builtin"]), fields.get("n"), params.get("t"))
        except FunctionError as exc:
            raise FunctionFileError(str(exc), field="builtin") from None
        if "m" in fields and fields["m"] != F.m:
            raise FunctionFileError(f"builtin has m={F.m}, file says {fields['m']}", field="m")
        return PartialFunction(F.n, F.m, F.domain, F.outputs, name or F.name, F.origin)

    for key in ("n", "m"):
        if key not in fields:
            raise FunctionFileError("missing field", field=key)
    if table_len is None:
        raise FunctionFileError("need a 'builtin' or a 'table' section")
    n, m = int(fields["n"]), int(fields["m"])
    seen: dict[str, int] = {}
    for rl, x, z in rows:
        if len(x) != n or set(x) - {"0", "1"}:
            raise FunctionFileError(f"input {x!r} is not an {n}-bit string", rl, "table")
        if len(z) != m or set(z) - {"0", "1"}:
            raise FunctionFileError(f"output {z!r} is not an {m}-bit string", rl, "table")
        if x in seen:
            raise FunctionFileError(f"duplicate input {x} (first on line {seen[x]})", rl, "table")
        seen[x] = rl
    try:
        return PartialFunction.from_table(n, m, [(x, z) for _, x, z in rows], name)
    except FunctionError as exc:
        raise FunctionFileError(str(exc)) from None


def serialize_function(F: PartialFunction) -> str:
    out = [f"{FORMAT_TAG} {FORMAT_VERSION}"]
    if F.name:
        out.append(f"name {F.name}")
    out += [f"n {F.n}", f"m {F.m}"]
    if F.origin is not None:
        family, params = F.origin
        out.append(f"builtin {family}")
        for key in sorted(params):
            if key != "n":
                out.append(f"param {key} {params[key]}")
    else:
        out.append(f"table {len(F)}")
        for c, z in zip(F.domain, F.outputs):
            out.append(f"{to_bits(c, F.n)} {to_bits(z, F.m)}")
    out.append("end")
    return "\n".join(out) + "\n"


def load_function(path: str | Path) -> PartialFunction:
    return parse_function_file(Path(path).read_text())


def save_function(F: PartialFunction, path: str | Path) -> None:
    Path(path).write_text(serialize_function(F))
