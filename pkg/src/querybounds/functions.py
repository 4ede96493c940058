"""Partial functions over explicit finite domains, plus the standard families.

Inputs are handled as bit strings ``x_1 x_2 ... x_n`` (``x_1`` leftmost).
Internally every input is an integer code ``int(x, 2)``, so bit ``i``
(1-based) lives at ``1 << (n - i)`` and lexicographic order of strings is
numeric order of codes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

#: cap for functions whose domain is built by enumerating the whole cube
MAX_TOTAL_BITS = 20
#: cap on input length for explicitly listed (promise) domains
MAX_BITS = 1024
#: cap on domain size
MAX_DOMAIN = 1 << 20


class FunctionError(ValueError):
    """Raised when a function violates its construction invariants."""


def bit_of(code: int, i: int, n: int) -> int:
    """Value of bit ``i`` (1-based, leftmost is 1) in an ``n``-bit code."""
    return (code >> (n - i)) & 1


def to_bits(code: int, n: int) -> str:
    return format(code, f"0{n}b") if n else ""


def _as_code(x, n: int) -> int:
    if isinstance(x, str):
        if len(x) != n or set(x) - {"0", "1"}:
            raise FunctionError(f"{x!r} is not an {n}-bit string")
        return int(x, 2)
    if isinstance(x, (int, np.integer)) and 0 <= int(x) < (1 << n):
        return int(x)
    raise FunctionError(f"cannot interpret {x!r} as an {n}-bit input")


@dataclass(frozen=True, eq=False)
class PartialFunction:
    """A function ``F: S -> {0,1}^m`` with an explicit domain ``S``.

    ``domain`` holds input codes in increasing order and ``outputs`` the
    output value of each, as an integer of at most ``m`` bits.  Build
    instances with :meth:`from_table` or the ``make_*`` helpers.
    """

    n: int
    m: int
    domain: tuple[int, ...]
    outputs: tuple[int, ...]
    name: str = ""
    origin: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        n, m = self.n, self.m
        if not 1 <= n <= MAX_BITS:
            raise FunctionError(f"input length n={n} outside [1, {MAX_BITS}]")
        if not 1 <= m <= n:
            raise FunctionError(f"output length m={m} must satisfy 1 <= m <= n={n}")
        if len(self.domain) != len(self.outputs):
            raise FunctionError("domain and outputs differ in length")
        if len(self.domain) > MAX_DOMAIN:
            raise FunctionError(f"domain size {len(self.domain)} exceeds {MAX_DOMAIN}")
        if any(b <= a for a, b in zip(self.domain, self.domain[1:])):
            raise FunctionError("domain must be strictly increasing (no duplicates)")
        if self.domain and not (0 <= self.domain[0] and self.domain[-1] < (1 << n)):
            raise FunctionError("domain element out of range for n bits")
        if any(not 0 <= z < (1 << m) for z in self.outputs):
            raise FunctionError(f"output value does not fit in m={m} bits")

    @classmethod
    def from_table(cls, n: int, m: int, table: Mapping | Iterable, name: str = "",
                   origin: tuple | None = None) -> "PartialFunction":
        """Build from ``{input: output}`` (or an iterable of pairs).

        Inputs may be bit strings or integer codes; outputs may be bit
        strings of length ``m`` or integers.
        """
        items = table.items() if isinstance(table, Mapping) else table
        seen: dict[int, int] = {}
        for x, z in items:
            code = _as_code(x, n)
            if code in seen:
                raise FunctionError(f"duplicate input {to_bits(code, n)}")
            if isinstance(z, str):
                if len(z) != m or set(z) - {"0", "1"}:
                    raise FunctionError(f"output {z!r} is not an {m}-bit string")
                z = int(z, 2)
            seen[code] = int(z)
        dom = tuple(sorted(seen))
        return cls(n, m, dom, tuple(seen[c] for c in dom), name, origin)

    def __eq__(self, other):
        if not isinstance(other, PartialFunction):
            return NotImplemented
        return (self.n, self.m, self.domain, self.outputs) == (
            other.n, other.m, other.domain, other.outputs)

    def __hash__(self):
        return hash((self.n, self.m, self.domain, self.outputs))

    def __len__(self):
        return len(self.domain)

    def __repr__(self):
        label = self.name or "F"
        return f"<PartialFunction {label}: n={self.n} m={self.m} |S|={len(self)}>"

    @cached_property
    def _index(self) -> dict[int, int]:
        return {c: k for k, c in enumerate(self.domain)}

    def index(self, x) -> int:
        """Position of ``x`` in the canonical domain ordering."""
        code = _as_code(x, self.n)
        try:
            return self._index[code]
        except KeyError:
            raise FunctionError(f"{to_bits(code, self.n)} is outside the domain") from None

    def __contains__(self, x) -> bool:
        try:
            return _as_code(x, self.n) in self._index
        except FunctionError:
            return False

    def __call__(self, x) -> int:
        return self.outputs[self.index(x)]

    @property
    def is_total(self) -> bool:
        return len(self.domain) == (1 << self.n)

    @property
    def is_boolean(self) -> bool:
        return self.m == 1

    @property
    def inputs(self) -> list[str]:
        return [to_bits(c, self.n) for c in self.domain]

    @property
    def table(self) -> dict[str, str]:
        return {to_bits(c, self.n): to_bits(z, self.m) for c, z in zip(self.domain, self.outputs)}

    @cached_property
    def bits(self) -> np.ndarray:
        """``|S| x n`` array of input bits; column ``i-1`` holds ``x_i``."""
        out = np.zeros((len(self.domain), self.n), dtype=np.int8)
        for k, c in enumerate(self.domain):
            s = to_bits(c, self.n)
            out[k] = np.frombuffer(s.encode(), dtype=np.uint8) - 48
        return out

    @cached_property
    def output_array(self) -> np.ndarray:
        return np.asarray(self.outputs, dtype=np.int64)

    @cached_property
    def code_array(self) -> np.ndarray:
        if self.n > 62:
            raise FunctionError("integer code array needs n <= 62")
        return np.asarray(self.domain, dtype=np.int64)

    def preimage(self, z: int) -> list[int]:
        """Domain indices mapping to output value ``z``."""
        return [k for k, v in enumerate(self.outputs) if v == z]

    def restrict(self, keep: Iterable) -> "PartialFunction":
        """The same function on a smaller domain."""
        codes = {_as_code(x, self.n) for x in keep}
        pairs = [(c, z) for c, z in zip(self.domain, self.outputs) if c in codes]
        return PartialFunction(self.n, self.m, tuple(c for c, _ in pairs),
                               tuple(z for _, z in pairs), self.name)

    def negate(self) -> "PartialFunction":
        """``1 - F`` for boolean ``F``."""
        if self.m != 1:
            raise FunctionError("negation needs a boolean function")
        return PartialFunction(self.n, 1, self.domain, tuple(1 - z for z in self.outputs),
                               f"not({self.name})" if self.name else "")


def differing_pairs(F: PartialFunction) -> list[tuple[str, str]]:
    """All unordered input pairs ``(x, y)``, ``x < y``, with ``F(x) != F(y)``."""
    out = []
    ins = F.inputs
    for a in range(len(ins)):
        for b in range(a + 1, len(ins)):
            if F.outputs[a] != F.outputs[b]:
                out.append((ins[a], ins[b]))
    return out


def differing_mask(F: PartialFunction) -> np.ndarray:
    """Boolean ``|S| x |S|`` matrix of pairs with different outputs."""
    z = F.output_array
    return z[:, None] != z[None, :]


# -- builtin families -------------------------------------------------------

def _check_total(n: int):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_TOTAL_BITS:
        raise FunctionError(f"n={n} outside [1, {MAX_TOTAL_BITS}] for a total function")


def from_predicate(n: int, pred: Callable[[str], int], name: str = "",
                   origin: tuple | None = None) -> PartialFunction:
    """Total boolean function on ``n`` bits from a predicate on bit strings."""
    _check_total(n)
    outs = tuple(int(bool(pred(to_bits(c, n)))) for c in range(1 << n))
    return PartialFunction(n, 1, tuple(range(1 << n)), outs, name, origin)


def _weights(n: int) -> np.ndarray:
    codes = np.arange(1 << n, dtype=np.int64)
    w = np.zeros_like(codes)
    for i in range(n):
        w += (codes >> i) & 1
    return w


def _total_from_array(n: int, outs: np.ndarray, name: str, origin: tuple) -> PartialFunction:
    return PartialFunction(n, 1, tuple(range(1 << n)), tuple(int(v) for v in outs), name, origin)


def make_or(n: int) -> PartialFunction:
    _check_total(n)
    return _total_from_array(n, _weights(n) >= 1, f"or{n}", ("or", {"n": n}))


def make_and(n: int) -> PartialFunction:
    _check_total(n)
    return _total_from_array(n, _weights(n) == n, f"and{n}", ("and", {"n": n}))


def make_parity(n: int) -> PartialFunction:
    _check_total(n)
    return _total_from_array(n, _weights(n) % 2, f"parity{n}", ("parity", {"n": n}))


def make_threshold(n: int, t: int) -> PartialFunction:
    """``Thr_t(x) = 1`` iff ``|x| >= t``; ``0 <= t <= n+1``."""
    _check_total(n)
    if not 0 <= t <= n + 1:
        raise FunctionError(f"threshold t={t} outside [0, {n + 1}]")
    return _total_from_array(n, _weights(n) >= t, f"thr{t}_{n}", ("threshold", {"n": n, "t": t}))


def make_majority(n: int) -> PartialFunction:
    """Strict majority, ``Thr_{floor(n/2)+1}``."""
    F = make_threshold(n, n // 2 + 1)
    return PartialFunction(F.n, 1, F.domain, F.outputs, f"maj{n}", ("majority", {"n": n}))


def make_ordered_search(n: int) -> PartialFunction:
    """Leftmost-one search on the promise ``x_1 <= ... <= x_n = 1``.

    The domain is the ``n`` strings ``0^(n-k) 1^k`` and the output is the
    1-based position of the leftmost one, in ``ceil(log2(n+1))`` bits.
    """
    if not 1 <= n <= MAX_BITS:
        raise FunctionError(f"n={n} outside [1, {MAX_BITS}]")
    m = max(1, math.ceil(math.log2(n + 1)))
    table = {}
    for k in range(1, n + 1):
        code = (1 << k) - 1
        table[code] = n - k + 1
    return PartialFunction.from_table(n, m, table, f"ordsearch{n}", ("ordered-search", {"n": n}))


def make_search_promise(n: int) -> PartialFunction:
    """Find the marked index when exactly one bit is set (output 1..n)."""
    if not 1 <= n <= MAX_BITS:
        raise FunctionError(f"n={n} outside [1, {MAX_BITS}]")
    m = max(1, math.ceil(math.log2(n + 1)))
    table = {1 << (n - i): i for i in range(1, n + 1)}
    return PartialFunction.from_table(n, m, table, f"search{n}", ("search", {"n": n}))


def _monotone(s: str) -> bool:
    return all(a <= b for a, b in zip(s, s[1:])) or all(a >= b for a, b in zip(s, s[1:]))


def make_sorted4() -> PartialFunction:
    """1 iff the four bits are non-decreasing or non-increasing."""
    return from_predicate(4, _monotone, "sorted4", ("sorted4", {}))


def compose(outer: PartialFunction, inners: Sequence[PartialFunction],
            name: str = "") -> PartialFunction:
    """``H(x^1 ... x^k) = outer(G_1(x^1), ..., G_k(x^k))``.

    The blocks ``x^j`` are concatenated left to right.  The domain is every
    tuple of inner-domain inputs whose inner outputs land in the outer
    domain.
    """
    if outer.m != 1:
        raise FunctionError("outer function must be boolean")
    if len(inners) != outer.n:
        raise FunctionError(f"outer function takes {outer.n} inputs, got {len(inners)} inner functions")
    if any(G.m != 1 for G in inners):
        raise FunctionError("inner functions must be boolean")
    total = sum(G.n for G in inners)
    if total > MAX_TOTAL_BITS:
        raise FunctionError(f"composed input length {total} exceeds {MAX_TOTAL_BITS}")

    # group each inner domain by output value so we only enumerate useful tuples
    by_value = []
    for G in inners:
        groups: dict[int, list[int]] = {}
        for c, z in zip(G.domain, G.outputs):
            groups.setdefault(z, []).append(c)
        by_value.append(groups)

    codes: list[int] = []
    outs: list[int] = []
    for ocode, oval in zip(outer.domain, outer.outputs):
        choices = []
        for j, G in enumerate(inners):
            zj = bit_of(ocode, j + 1, outer.n)
            choices.append(by_value[j].get(zj, []))
        for combo in itertools.product(*choices):
            code = 0
            for G, c in zip(inners, combo):
                code = (code << G.n) | c
            codes.append(code)
            outs.append(oval)
    order = np.argsort(codes, kind="stable")
    label = name or f"{outer.name or 'F'}({','.join(G.name or 'G' for G in inners)})"
    return PartialFunction(total, 1, tuple(codes[k] for k in order),
                           tuple(outs[k] for k in order), label)


def make_and_or(k: int) -> PartialFunction:
    """Depth-two tree ``AND_k(OR_k, ..., OR_k)`` on ``k*k`` bits."""
    H = compose(make_and(k), [make_or(k)] * k, name=f"and{k}_or{k}")
    return PartialFunction(H.n, 1, H.domain, H.outputs, H.name, ("and-or", {"n": k * k}))


def constant(n: int, value: int = 0) -> PartialFunction:
    _check_total(n)
    return PartialFunction(n, 1, tuple(range(1 << n)), (value,) * (1 << n), f"const{value}_{n}")


def truth_table_function(n: int, table_bits: int, name: str = "") -> PartialFunction:
    """Total boolean function whose output on code ``c`` is bit ``c`` of ``table_bits``."""
    _check_total(n)
    outs = tuple((table_bits >> c) & 1 for c in range(1 << n))
    return PartialFunction(n, 1, tuple(range(1 << n)), outs, name or f"tt{n}_{table_bits:x}")


BUILTINS: dict[str, Callable[..., PartialFunction]] = {
    "or": lambda n, **_: make_or(n),
    "and": lambda n, **_: make_and(n),
    "parity": lambda n, **_: make_parity(n),
    "threshold": lambda n, t, **_: make_threshold(n, t),
    "majority": lambda n, **_: make_majority(n),
    "ordered-search": lambda n, **_: make_ordered_search(n),
    "search": lambda n, **_: make_search_promise(n),
    "sorted4": lambda n=4, **_: make_sorted4(),
    "and-or": lambda n, **_: make_and_or(_isqrt_exact(n)),
}


def _isqrt_exact(n: int) -> int:
    k = math.isqrt(n)
    if k * k != n or k < 1:
        raise FunctionError(f"and-or needs a perfect-square input length, got {n}")
    return k


def make_builtin(name: str, n: int | None = None, t: int | None = None) -> PartialFunction:
    """Construct a named family member, e.g. ``make_builtin("threshold", 6, t=3)``."""
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise FunctionError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
    kwargs = {}
    if n is not None:
        kwargs["n"] = n
    if name == "threshold":
        if t is None:
            raise FunctionError("threshold needs parameter t")
        kwargs["t"] = t
    if name != "sorted4" and "n" not in kwargs:
        raise FunctionError(f"builtin {name!r} needs parameter n")
    if name == "sorted4" and n not in (None, 4):
        raise FunctionError("sorted4 is defined on exactly 4 bits")
    return factory(**kwargs)
