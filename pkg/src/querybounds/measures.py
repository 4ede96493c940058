"""Certificate complexity, block sensitivity and sensitivity by exhaustive search.

For an input ``x`` the sensitive blocks are exactly the difference masks
``x XOR y`` over domain inputs ``y`` with ``F(y) != F(x)``; flips that leave
the domain are never sensitive.  A certificate is a set of positions that
meets every such mask, so ``C_x`` is a minimum hitting set and ``bs_x`` a
maximum disjoint subfamily.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .functions import FunctionError, PartialFunction


def _mask_to_positions(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(1, n + 1) if (mask >> (n - i)) & 1)


def _sensitive_masks(F: PartialFunction, k: int) -> list[int]:
    x, zx = F.domain[k], F.outputs[k]
    return [x ^ y for y, zy in zip(F.domain, F.outputs) if zy != zx]


def certificate(F: PartialFunction, x) -> tuple[int, ...]:
    """A minimum certificate for ``x`` as 1-based positions."""
    k = F.index(x)
    _, mask = kernels.min_hitting_set(_sensitive_masks(F, k), F.n)
    return _mask_to_positions(mask, F.n)


def certificate_complexity(F: PartialFunction, x) -> int:
    """``C_x(F)``: size of the smallest certificate for ``x``."""
    k = F.index(x)
    return kernels.min_hitting_set(_sensitive_masks(F, k), F.n)[0]


def sensitive_blocks(F: PartialFunction, x) -> list[tuple[int, ...]]:
    """A maximum family of disjoint sensitive blocks for ``x``."""
    k = F.index(x)
    _, blocks = kernels.max_disjoint_blocks(_sensitive_masks(F, k), F.n)
    return [_mask_to_positions(b, F.n) for b in blocks]


def block_sensitivity(F: PartialFunction, x) -> int:
    """``bs_x(F)``: maximum number of disjoint sensitive blocks."""
    return len(sensitive_blocks(F, x))


def sensitivity(F: PartialFunction, x) -> int:
    k = F.index(x)
    return sum(1 for m in set(_sensitive_masks(F, k)) if m & (m - 1) == 0)


def blocks_are_disjoint(blocks) -> bool:
    seen: set[int] = set()
    for b in blocks:
        if seen & set(b):
            return False
        seen |= set(b)
    return True


@dataclass
class MeasureReport:
    """Per-input and aggregate combinatorial measures of a function."""

    function: str
    certificate: dict[str, int]
    block_sensitivity: dict[str, int]
    sensitivity: dict[str, int]
    C: int
    bs: int
    s: int
    C_by_output: dict[int, int]
    bs_by_output: dict[int, int]
    witness_input: str | None = None
    witness_blocks: list[tuple[int, ...]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def C_z(self, z: int) -> int:
        return self.C_by_output.get(z, 0)

    def bs_z(self, z: int) -> int:
        return self.bs_by_output.get(z, 0)


def measure_vectors(F: PartialFunction) -> tuple[list[int], list[int], list[int]]:
    """Raw per-input ``(C_x, bs_x, s_x)`` lists in domain order (bulk kernel)."""
    if F.n > 62:
        cert, bs, sens = [], [], []
        for k in range(len(F)):
            masks = _sensitive_masks(F, k)
            cert.append(kernels.min_hitting_set(masks, F.n)[0])
            bs.append(kernels.max_disjoint_blocks(masks, F.n)[0])
            sens.append(sum(1 for m in set(masks) if m & (m - 1) == 0))
        return cert, bs, sens
    return kernels.measure_all(F.domain, F.outputs, F.n)


def measure_report(F: PartialFunction) -> MeasureReport:
    cert, bs, sens = measure_vectors(F)
    ins = F.inputs
    C_by: dict[int, int] = {}
    bs_by: dict[int, int] = {}
    for z, c, b in zip(F.outputs, cert, bs):
        C_by[z] = max(C_by.get(z, 0), c)
        bs_by[z] = max(bs_by.get(z, 0), b)
    best = max(range(len(F)), key=lambda k: (bs[k], -k)) if len(F) else None
    witness_input = ins[best] if best is not None else None
    witness_blocks = sensitive_blocks(F, witness_input) if best is not None else []
    notes = []
    if not F.is_total:
        notes.append("partial domain: blocks whose flip leaves the domain are not counted as sensitive")
    return MeasureReport(
        function=F.name,
        certificate=dict(zip(ins, cert)),
        block_sensitivity=dict(zip(ins, bs)),
        sensitivity=dict(zip(ins, sens)),
        C=max(cert, default=0),
        bs=max(bs, default=0),
        s=max(sens, default=0),
        C_by_output=C_by,
        bs_by_output=bs_by,
        witness_input=witness_input,
        witness_blocks=witness_blocks,
        notes=notes,
    )


def boolean_certificates(F: PartialFunction) -> tuple[int, int]:
    """``(C_0(F), C_1(F))`` for a boolean function."""
    if not F.is_boolean:
        raise FunctionError("certificate complexities C_0, C_1 need a boolean function")
    rep = measure_report(F)
    return rep.C_z(0), rep.C_z(1)


__all__ = [
    "MeasureReport", "block_sensitivity", "blocks_are_disjoint", "boolean_certificates",
    "certificate", "certificate_complexity", "measure_report", "measure_vectors",
    "sensitive_blocks", "sensitivity",
]
