"""Bound reports: assembly, the consistency gate and the three output formats."""
from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import adversary as adv
from . import algorithms, polynomial, simulator
from .functions import PartialFunction, to_bits
from .measures import measure_report
from .search import improve_gamma

SCHEMA_ID = "querybounds.report/1"
GROUPS = ("measures", "spectral", "unweighted", "weighted", "minimax", "limits",
          "polynomial", "simulator")
DECIMALS = 9
GATE_TOL = 1e-6
SEARCH_MAX_DOMAIN = 64
POLY_MAX_N = 10


class ReportError(RuntimeError):
    pass


@dataclass
class BoundEntry:
    group: str
    name: str
    value: float
    provenance: str
    kind: str  # lower, ceiling, dual, measure
    details: dict[str, Any] = field(default_factory=dict)
    flag: str | None = None


@dataclass
class BoundReport:
    function: dict[str, Any]
    measures: dict[str, Any] = field(default_factory=dict)
    entries: list[BoundEntry] = field(default_factory=list)
    checks: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] | None = None

    def add(self, *args, **kwargs) -> BoundEntry:
        e = BoundEntry(*args, **kwargs)
        self.entries.append(e)
        return e

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})

    @property
    def breaches(self) -> list[dict[str, Any]]:
        return [c for c in self.checks if not c["ok"]]

    def values(self, group: str, kind: str | None = None) -> list[BoundEntry]:
        return [e for e in self.entries if e.group == group and (kind is None or e.kind == kind)]


# -- assembly ---------------------------------------------------------------

def _parse_groups(spec: str) -> list[str]:
    if spec.strip() == "all":
        return list(GROUPS)
    chosen = [g.strip() for g in spec.split(",") if g.strip()]
    unknown = [g for g in chosen if g not in GROUPS]
    if unknown or not chosen:
        raise ValueError(f"unknown bound groups {unknown}; choose from {', '.join(GROUPS)} or 'all'")
    return chosen


def candidate_gammas(F: PartialFunction, budget: int, seed: int,
                     notes: list[str]) -> list[adv.AdversaryMatrix]:
    """Constructed adversary matrices, plus a searched one on small domains."""
    if not np.any(adv.differing_mask(F)):
        notes.append("no differing pairs: every adversary matrix is zero")
        return []
    out = [adv.search_gamma(F), adv.uniform_gamma(F)]
    rep = measure_report(F)
    if rep.bs > 0:
        out.append(adv.bs_gamma(F))
    if F.is_boolean and adv.neighbor_relation(F):
        out.append(adv.relation_to_gamma(F, adv.neighbor_relation(F)))
    if len(F) <= SEARCH_MAX_DOMAIN and budget > 0:
        start = max(out, key=lambda G: adv.spectral_bound(F, G))
        found = improve_gamma(F, start, budget=budget, seed=seed)
        if found is start:
            notes.append(f"local search from {start.provenance} found no improvement")
        else:
            found.provenance = f"local-search(from={start.provenance},seed={seed})"
            out.append(found)
    else:
        notes.append(f"local search skipped: |S| > {SEARCH_MAX_DOMAIN} or zero budget")
    return out


def _spectral_entries(report: BoundReport, F, gammas):
    for G in gammas:
        try:
            res = adv.spectral_result(G)
        except adv.DegenerateGammaError as err:
            report.notes.append(f"spectral[{G.provenance}]: {err}")
            continue
        report.add("spectral", f"spectral[{G.provenance}]", res.bound, G.provenance, "lower",
                   {"lambda": res.value, "max_lambda_i": res.max_index_norm,
                    "lambda_i": [float(v) for v in res.index_norms]})


def build_report(F: PartialFunction, bounds: str = "all", gamma: adv.AdversaryMatrix | None = None,
                 budget: int = 100_000, seed: int = 0, timings: bool = False) -> BoundReport:
    groups = _parse_groups(bounds)
    report = BoundReport(function={
        "name": F.name, "n": F.n, "m": F.m, "domain_size": len(F),
        "total": F.is_total, "boolean": F.is_boolean,
        "origin": None if F.origin is None else {"family": F.origin[0], **F.origin[1]},
    })
    clock: dict[str, float] = {}

    @contextmanager
    def stage(name):
        t0 = time.perf_counter()
        yield
        clock[name] = time.perf_counter() - t0

    with stage("measures"):
        mr = measure_report(F)
        report.measures = {
            "C": mr.C, "bs": mr.bs, "s": mr.s,
            "C_by_output": {str(k): v for k, v in sorted(mr.C_by_output.items())},
            "bs_by_output": {str(k): v for k, v in sorted(mr.bs_by_output.items())},
            "bs_witness": {"input": mr.witness_input, "blocks": [list(b) for b in mr.witness_blocks]},
        }
        report.notes.extend(mr.notes)

    need_gammas = any(g in groups for g in ("spectral", "weighted", "simulator", "minimax"))
    gammas: list[adv.AdversaryMatrix] = []
    if need_gammas:
        with stage("gammas"):
            gammas = [gamma] if gamma is not None else candidate_gammas(F, budget, seed, report.notes)

    if "spectral" in groups:
        with stage("spectral"):
            _spectral_entries(report, F, gammas)
    if "unweighted" in groups:
        with stage("unweighted"):
            _unweighted(report, F)
    if "weighted" in groups:
        with stage("weighted"):
            _weighted(report, F, gammas)
    if "minimax" in groups:
        with stage("minimax"):
            _minimax(report, F, seed)
    if "limits" in groups:
        with stage("limits"):
            _limits(report, F, mr)
    if "polynomial" in groups:
        with stage("polynomial"):
            _polynomial(report, F)
    if "simulator" in groups:
        with stage("simulator"):
            _simulator(report, F, gammas)
    consistency_gate(report, mr)
    if timings:
        report.timings = clock
    report.notes.append("spectral values are the raw ratio lambda(Gamma)/max_i lambda(Gamma_i); "
                        "the error-dependent constant is left symbolic")
    return report


def _unweighted(report, F):
    if not F.is_boolean:
        report.notes.append("unweighted method skipped: non-boolean output")
        return
    relations = [("bs-star", _bs_star_relation(F)), ("neighbors", adv.neighbor_relation(F)),
                 ("full", adv.full_relation(F))]
    for label, R in relations:
        if not R:
            continue
        q = adv.unweighted_quantities(F, R)
        report.add("unweighted", f"unweighted[{label}]", q.value, f"relation:{label}", "lower",
                   {"m": q.m, "m_prime": q.m_prime, "l": q.ell, "l_prime": q.ell_prime,
                    "pairs": len(R)})


def _bs_star_relation(F):
    """The bs witness paired with its block flips, oriented as ``F^-1(0) x F^-1(1)``."""
    mr = measure_report(F)
    if not mr.bs:
        return []
    x = F.index(mr.witness_input)
    pairs = []
    for block in mr.witness_blocks:
        flip = sum(1 << (F.n - i) for i in block)
        y = F.domain[x] ^ flip
        pair = (mr.witness_input, to_bits(y, F.n))
        pairs.append(pair if F.outputs[x] == 0 else pair[::-1])
    return pairs


def _weighted(report, F, gammas):
    for G in gammas:
        try:
            scheme = adv.gamma_to_scheme(F, G)
            report.add("weighted", f"weighted[{G.provenance}]", adv.weighted_bound(F, scheme),
                       f"gamma:{G.provenance}, w'=w", "lower")
        except (adv.WeightSchemeError, adv.DegenerateGammaError) as err:
            report.notes.append(f"weighted[{G.provenance}]: {err}")
    if F.origin and F.origin[0] == "ordered-search":
        G = adv.search_gamma(F)
        scheme = adv.gamma_to_scheme(F, G, adv.search_t(F))
        v = adv.weighted_bound(F, scheme)
        report.add("weighted", "weighted[search-t]", v, "gamma:search, w'=w*sqrt(t)", "lower",
                   {"ratio_to_ln_n": v / math.log(F.n) if F.n > 1 else None})


def _minimax(report, F, seed):
    if not np.any(adv.differing_mask(F)):
        return
    rng = np.random.default_rng(seed)
    schedules = [("uniform", adv.ProbabilitySchedule.uniform(F)),
                 ("first-one", adv.or_schedule(F)),
                 ("random", adv.ProbabilitySchedule.random(F, rng))]
    for label, p in schedules:
        v = adv.minimax_value(F, p)
        report.add("minimax", f"minimax[{label}]", v, f"schedule:{label}", "dual",
                   {"infinite": math.isinf(v)})


def _limits(report, F, mr):
    if not F.is_boolean:
        report.notes.append("certificate limit skipped: non-boolean output")
        return
    report.add("limits", "certificate-limit", adv.certificate_limit(F), "C0, C1, n", "ceiling",
               {"C0": mr.C_z(0), "C1": mr.C_z(1)})
    if F.is_total:
        report.add("limits", "bs0*bs1", float(mr.bs_z(0) * mr.bs_z(1)), "bs0, bs1", "ceiling")


def _polynomial(report, F):
    if not F.is_boolean:
        report.notes.append("polynomial bounds skipped: non-boolean output")
        return
    if F.n > POLY_MAX_N:
        report.notes.append(f"polynomial bounds skipped: n > {POLY_MAX_N}")
        return
    if F.is_total:
        deg, how = polynomial.degree(F), "moebius"
    else:
        deg, how = polynomial.representing_degree(F), "lp"
    cert = polynomial.lp_degree(F, "approximating", upper=deg)
    report.add("polynomial", "deg", float(deg), how, "measure")
    report.add("polynomial", "adeg", float(cert.degree), "lp, exact" if cert.exact else "lp, float",
               "measure", {"max_violation": cert.max_violation,
                           "witness": [[S, float(c)] for S, c in cert.witness.to_pairs()]})
    report.add("polynomial", "exact-query-lb", deg / 2, "deg/2", "lower")
    report.add("polynomial", "bounded-error-query-lb", cert.degree / 2, "adeg/2", "lower")
    chain = polynomial.degree_chain(F, bs=report.measures["bs"], adeg=cert.degree, deg=deg)
    for f in chain.flagged:
        report.notes.append(f"flagged for review: {f}")


def matching_algorithm(F: PartialFunction):
    fam = F.origin[0] if F.origin else None
    if fam == "parity" and F.n == 2:
        return algorithms.parity2()
    if fam == "search" and F.n == 4:
        return algorithms.grover4()
    if fam == "ordered-search" and 2 <= F.n <= 64:
        return algorithms.ordered_search_binary(F.n)
    return None


def _simulator(report, F, gammas):
    alg = matching_algorithm(F)
    if alg is None:
        report.notes.append("simulator checks skipped: no builtin algorithm for this function")
        return
    traces = simulator.run_all(alg, F)
    succ = simulator.success_probability(alg, F, traces)
    report.add("simulator", f"success[{alg.name}]", succ.minimum, alg.name, "measure",
               {"queries": alg.T})
    eps = max(0.0, 1.0 - succ.minimum)
    eps = 0.0 if eps < 1e-12 else eps
    if eps < 0.5:
        try:
            d = simulator.check_distinguishability(alg, F, eps, traces)
            report.check(f"fact1[{alg.name}]", True,
                         f"eps={eps:.{DECIMALS}f}; {len(d.checked)} pairs checked, {len(d.skipped)} skipped; "
                         + d.notes[0])
        except simulator.InequalityViolation as err:
            report.check(f"fact1[{alg.name}]", False, str(err))
    for G in gammas:
        try:
            drop = simulator.verify_drop_bound(G, alg, F, traces)
            report.check(f"drop[{alg.name},{G.provenance}]", True,
                         f"max drop {max(drop.drops, default=0.0):.{DECIMALS}f} <= {drop.bound:.{DECIMALS}f}")
        except simulator.InequalityViolation as err:
            report.check(f"drop[{alg.name},{G.provenance}]", False, str(err))
        except adv.DegenerateGammaError:
            continue


def consistency_gate(report: BoundReport, mr) -> None:
    """Lower bounds must sit below every ceiling they are subject to."""
    spectral = report.values("spectral")
    ceilings = report.values("limits", "ceiling")
    duals = [e for e in report.values("minimax") if not math.isinf(e.value)]
    for e in spectral:
        for c in ceilings:
            ok = e.value <= c.value + GATE_TOL
            if not ok:
                e.flag = f"exceeds {c.name}"
            report.check(f"{e.name} <= {c.name}", ok,
                         f"{e.value:.{DECIMALS}f} vs {c.value:.{DECIMALS}f}")
        for d in duals:
            ok = e.value <= d.value + GATE_TOL
            if not ok:
                e.flag = f"exceeds {d.name}"
            report.check(f"{e.name} <= {d.name}", ok, f"{e.value:.{DECIMALS}f} vs {d.value:.{DECIMALS}f}")
    if spectral and mr.bs > 0:
        best = max(e.value for e in spectral)
        report.check("sqrt(bs) <= best spectral", math.sqrt(mr.bs) <= best + GATE_TOL,
                     f"{math.sqrt(mr.bs):.{DECIMALS}f} vs {best:.{DECIMALS}f}")
    poly = {e.name: e.value for e in report.values("polynomial")}
    if "adeg" in poly:
        report.check("adeg <= deg", poly["adeg"] <= poly["deg"], f"{poly['adeg']:.0f} vs {poly['deg']:.0f}")


# -- emission -----------------------------------------------------------------

def _num(x) -> Any:
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return _Fixed(x)


class _Fixed(float):
    """Float that serializes with exactly ``DECIMALS`` places."""


def _normalize(obj):
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return _num(obj)


def _encode(obj, indent=0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, _Fixed):
        return f"{obj:.{DECIMALS}f}"
    return json.dumps(obj)


def report_dict(report: BoundReport) -> dict[str, Any]:
    d = {
        "schema": SCHEMA_ID,
        "function": report.function,
        "measures": report.measures,
        "bounds": [
            {"group": e.group, "name": e.name, "value": e.value, "kind": e.kind,
             "provenance": e.provenance, "flag": e.flag, "details": e.details}
            for e in report.entries
        ],
        "checks": report.checks,
        "notes": report.notes,
    }
    if report.timings is not None:
        d["timings"] = report.timings
    return _normalize(d)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return "-"
    return f"{float(v):.{DECIMALS}f}"


def emit_report(report: BoundReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return _encode(report_dict(report)) + "\n"
    if fmt == "tabular":
        rows = [("group", "bound", "value", "kind", "provenance", "flag")]
        for e in report.entries:
            rows.append((e.group, e.name, _fmt(_num(e.value)), e.kind, e.provenance, e.flag or ""))
        return "\n".join("\t".join(r) for r in rows) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    f = report.function
    lines = [f"function {f['name'] or '(unnamed)'}: n={f['n']} m={f['m']} |S|={f['domain_size']}"
             f" total={'yes' if f['total'] else 'no'}"]
    m = report.measures
    lines.append(f"measures: C={m['C']} bs={m['bs']} s={m['s']}"
                 f" C_z={m['C_by_output']} bs_z={m['bs_by_output']}")
    group = None
    for e in report.entries:
        if e.group != group:
            group = e.group
            lines.append(f"[{group}]")
        extra = ""
        if "lambda" in e.details:
            extra = (f"  lambda={e.details['lambda']:.{DECIMALS}f}"
                     f" max lambda_i={e.details['max_lambda_i']:.{DECIMALS}f}")
        flag = f"  FLAG: {e.flag}" if e.flag else ""
        lines.append(f"  {e.name:<36} {_fmt(_num(e.value)):>16}{extra}{flag}")
    if report.checks:
        lines.append("[checks]")
        for c in report.checks:
            lines.append(f"  {'ok  ' if c['ok'] else 'FAIL'} {c['name']}  {c['detail']}")
    if report.notes:
        lines.append("[notes]")
        lines.extend(f"  {n}" for n in report.notes)
    if report.timings is not None:
        lines.append("[timings]")
        lines.extend(f"  {k:<12} {v:.3f}s" for k, v in report.timings.items())
    return "\n".join(lines) + "\n"


REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "querybounds bound report",
    "type": "object",
    "required": ["schema", "function", "measures", "bounds", "checks", "notes"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "function": {
            "type": "object",
            "required": ["name", "n", "m", "domain_size", "total", "boolean", "origin"],
            "properties": {
                "name": {"type": "string"},
                "n": {"type": "integer", "minimum": 1},
                "m": {"type": "integer", "minimum": 1},
                "domain_size": {"type": "integer", "minimum": 1},
                "total": {"type": "boolean"},
                "boolean": {"type": "boolean"},
                "origin": {"type": ["object", "null"]},
            },
        },
        "measures": {
            "type": "object",
            "required": ["C", "bs", "s", "C_by_output", "bs_by_output"],
        },
        "bounds": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["group", "name", "value", "kind", "provenance", "flag", "details"],
                "properties": {
                    "group": {"enum": list(GROUPS)},
                    "name": {"type": "string"},
                    "value": {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]},
                    "kind": {"enum": ["lower", "ceiling", "dual", "measure"]},
                    "provenance": {"type": "string"},
                    "flag": {"type": ["string", "null"]},
                    "details": {"type": "object"},
                },
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "ok", "detail"],
                "properties": {"name": {"type": "string"}, "ok": {"type": "boolean"},
                               "detail": {"type": "string"}},
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}
