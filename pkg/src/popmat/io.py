"""Instance and report documents: strict JSON parsing, canonical emission.

Documents are UTF-8 JSON.  Rationals travel as ints or "p/q" strings;
floats are rejected to keep every number exact.  Parsing is strict:
unknown or missing fields fail with the offending path.  Emission is
canonical (sorted keys, sorted subsets, two-space indent), so
parse-emit-parse is idempotent and reports can embed a stable hash of
their instance.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaError
from .exhaustive import canon
from .matroids import (
    Contraction,
    DirectSum,
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    Restriction,
    Truncation,
    UniformMatroid,
)
from .mnat import ValuedFamily
from .nearopt import PrefBipartite
from .onesided import AgentOrder, OneSidedInstance
from .reports import PopularityReport
from .twosided import OrderedMatroid

REPORT_FORMAT = "popmat-report/1"


# ----------------------------------------------------------------------
# scalar helpers


def parse_rational(x, path):
    if isinstance(x, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise SchemaError(path, "floats are not exact; use an int or a 'p/q' string")
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"cannot parse rational {x!r}") from None
    raise SchemaError(path, f"expected a rational, got {type(x).__name__}")


def format_rational(q: Fraction):
    q = Fraction(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _obj(x, path) -> dict:
    if not isinstance(x, dict):
        raise SchemaError(path, f"expected an object, got {type(x).__name__}")
    return x


def _list(x, path) -> list:
    if not isinstance(x, list):
        raise SchemaError(path, f"expected an array, got {type(x).__name__}")
    return x


def _str(x, path) -> str:
    if not isinstance(x, str):
        raise SchemaError(path, f"expected a string, got {type(x).__name__}")
    return x


def _int(x, path) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(path, f"expected an integer, got {type(x).__name__}")
    return x


def _check_keys(d, path, required, optional=()):
    for k in required:
        if k not in d:
            raise SchemaError(path, f"missing field {k!r}")
    for k in d:
        if k not in required and k not in optional:
            raise SchemaError(f"{path}.{k}", "unknown field")


def _id_list(x, path, unique=True):
    xs = [_str(v, f"{path}[{i}]") for i, v in enumerate(_list(x, path))]
    if unique and len(set(xs)) != len(xs):
        dup = sorted({v for v in xs if xs.count(v) > 1})
        raise SchemaError(path, f"duplicate id {dup[0]!r}")
    return xs


# ----------------------------------------------------------------------
# matroids

_MATROID_KINDS = (
    "free",
    "uniform",
    "partition",
    "graphic",
    "explicit",
    "direct_sum",
    "restriction",
    "contraction",
    "truncation",
)


def matroid_from_json(d, path="$.matroid") -> Matroid:
    d = _obj(d, path)
    kind = _str(d.get("kind"), f"{path}.kind") if "kind" in d else None
    if kind is None:
        raise SchemaError(path, "missing field 'kind'")
    if kind not in _MATROID_KINDS:
        raise SchemaError(f"{path}.kind", f"unknown matroid kind {kind!r}")
    try:
        if kind == "free":
            _check_keys(d, path, ("kind", "ground"))
            return FreeMatroid(_id_list(d["ground"], f"{path}.ground"))
        if kind == "uniform":
            _check_keys(d, path, ("kind", "ground", "rank"))
            return UniformMatroid(
                _id_list(d["ground"], f"{path}.ground"),
                _int(d["rank"], f"{path}.rank"),
            )
        if kind == "partition":
            _check_keys(d, path, ("kind", "ground", "parts", "capacities"))
            parts = [
                _id_list(p, f"{path}.parts[{i}]")
                for i, p in enumerate(_list(d["parts"], f"{path}.parts"))
            ]
            caps = [
                _int(c, f"{path}.capacities[{i}]")
                for i, c in enumerate(_list(d["capacities"], f"{path}.capacities"))
            ]
            return PartitionMatroid(
                parts, caps, ground=_id_list(d["ground"], f"{path}.ground")
            )
        if kind == "graphic":
            _check_keys(d, path, ("kind", "ground", "endpoints"))
            eps = _obj(d["endpoints"], f"{path}.endpoints")
            endpoints = {}
            for e, uv in eps.items():
                uv = _list(uv, f"{path}.endpoints.{e}")
                if len(uv) != 2:
                    raise SchemaError(f"{path}.endpoints.{e}", "expected [u, v]")
                endpoints[e] = (
                    _str(uv[0], f"{path}.endpoints.{e}[0]"),
                    _str(uv[1], f"{path}.endpoints.{e}[1]"),
                )
            return GraphicMatroid(
                endpoints, ground=_id_list(d["ground"], f"{path}.ground")
            )
        if kind == "explicit":
            _check_keys(d, path, ("kind", "ground"), ("independent", "bases"))
            ground = _id_list(d["ground"], f"{path}.ground")
            if ("independent" in d) == ("bases" in d):
                raise SchemaError(path, "give exactly one of 'independent' or 'bases'")
            key = "independent" if "independent" in d else "bases"
            fam = [
                _id_list(X, f"{path}.{key}[{i}]")
                for i, X in enumerate(_list(d[key], f"{path}.{key}"))
            ]
            if key == "independent":
                return ExplicitMatroid(ground, independent=fam)
            return ExplicitMatroid(ground, bases=fam)
        if kind == "direct_sum":
            _check_keys(d, path, ("kind", "children"))
            kids = [
                matroid_from_json(c, f"{path}.children[{i}]")
                for i, c in enumerate(_list(d["children"], f"{path}.children"))
            ]
            return DirectSum(kids)
        child = matroid_from_json(d.get("child"), f"{path}.child")
        if kind == "restriction":
            _check_keys(d, path, ("kind", "child", "subset"))
            return child.restrict(_id_list(d["subset"], f"{path}.subset"))
        if kind == "contraction":
            _check_keys(d, path, ("kind", "child", "subset"))
            return child.contract(_id_list(d["subset"], f"{path}.subset"))
        _check_keys(d, path, ("kind", "child", "limit"))
        return child.truncate(_int(d["limit"], f"{path}.limit"))
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(path, str(exc)) from exc


def matroid_to_json(M: Matroid) -> dict:
    if isinstance(M, FreeMatroid):
        return {"kind": "free", "ground": list(M.ground)}
    if isinstance(M, UniformMatroid):
        return {"kind": "uniform", "ground": list(M.ground), "rank": M.uniform_rank}
    if isinstance(M, PartitionMatroid):
        return {
            "kind": "partition",
            "ground": list(M.ground),
            "parts": [sorted(p) for p in M.parts],
            "capacities": list(M.capacities),
        }
    if isinstance(M, GraphicMatroid):
        return {
            "kind": "graphic",
            "ground": list(M.ground),
            "endpoints": {e: list(uv) for e, uv in sorted(M.endpoints.items())},
        }
    if isinstance(M, ExplicitMatroid):
        out = {"kind": "explicit", "ground": list(M.ground)}
        if M.family is not None:
            out["independent"] = sorted((list(canon(X)) for X in M.family), key=tuple)
        else:
            out["bases"] = [list(canon(B)) for B in M.base_list]
        return out
    if isinstance(M, DirectSum):
        return {"kind": "direct_sum", "children": [matroid_to_json(c) for c in M.children]}
    if isinstance(M, Restriction):
        return {
            "kind": "restriction",
            "child": matroid_to_json(M.child),
            "subset": list(canon(M.subset)),
        }
    if isinstance(M, Contraction):
        return {
            "kind": "contraction",
            "child": matroid_to_json(M.child),
            "subset": list(canon(M.subset)),
        }
    if isinstance(M, Truncation):
        return {
            "kind": "truncation",
            "child": matroid_to_json(M.child),
            "limit": M.limit,
        }
    raise SchemaError("$", f"cannot serialize matroid of type {type(M).__name__}")


# ----------------------------------------------------------------------
# instances


@dataclass
class InstanceDocument:
    """A parsed instance: its model tag, payload objects, canonical dict."""

    model: str
    payload: object
    doc: dict


@dataclass
class TwoSidedProblem:
    m1: OrderedMatroid
    m2: OrderedMatroid
    weights: dict


def _parse_one_sided(d) -> InstanceDocument:
    _check_keys(d, "$", ("model", "ground", "agents", "m2"), ("weights", "utility"))
    ground = _id_list(d["ground"], "$.ground")
    agents = []
    names = []
    for i, a in enumerate(_list(d["agents"], "$.agents")):
        pa = f"$.agents[{i}]"
        a = _obj(a, pa)
        _check_keys(a, pa, ("part",), ("name", "prefers"))
        part = _id_list(a["part"], f"{pa}.part")
        pairs = []
        for j, pair in enumerate(_list(a.get("prefers", []), f"{pa}.prefers")):
            pp = f"{pa}.prefers[{j}]"
            pair = _list(pair, pp)
            if len(pair) != 2:
                raise SchemaError(pp, "expected [better, worse]")
            u = _str(pair[0], f"{pp}[0]")
            v = None if pair[1] is None else _str(pair[1], f"{pp}[1]")
            pairs.append((u, v))
        try:
            agents.append(AgentOrder(part, pairs))
        except Exception as exc:
            raise SchemaError(pa, str(exc)) from exc
        names.append(_str(a["name"], f"{pa}.name") if "name" in a else str(i))
    m2 = matroid_from_json(d["m2"], "$.m2")
    weights = utility = None
    if ("weights" in d) == ("utility" in d):
        raise SchemaError("$", "give exactly one of 'weights' or 'utility'")
    if "weights" in d:
        wd = _obj(d["weights"], "$.weights")
        weights = {u: parse_rational(v, f"$.weights.{u}") for u, v in wd.items()}
    else:
        ud = _obj(d["utility"], "$.utility")
        _check_keys(ud, "$.utility", ("domain", "values"))
        dom = [
            _id_list(X, f"$.utility.domain[{i}]")
            for i, X in enumerate(_list(ud["domain"], "$.utility.domain"))
        ]
        vals = _list(ud["values"], "$.utility.values")
        if len(vals) != len(dom):
            raise SchemaError("$.utility.values", "values must align with domain")
        table = {
            frozenset(X): parse_rational(v, f"$.utility.values[{i}]")
            for i, (X, v) in enumerate(zip(dom, vals))
        }
        try:
            utility = ValuedFamily(ground, dom, table)
        except Exception as exc:
            raise SchemaError("$.utility", str(exc)) from exc
    try:
        inst = OneSidedInstance(ground, agents, m2, weights=weights, utility=utility)
    except Exception as exc:
        raise SchemaError("$", str(exc)) from exc
    inst.agent_names = tuple(names)
    return InstanceDocument("one-sided", inst, _emit_one_sided(inst))


def _emit_one_sided(inst: OneSidedInstance) -> dict:
    agents = []
    names = getattr(inst, "agent_names", tuple(str(i) for i in range(len(inst.agents))))
    for name, ag in zip(names, inst.agents):
        pairs = sorted(
            [u, v] for (u, v) in ag.strict_pairs() if v is not None
        )
        agents.append({"name": name, "part": list(ag.part), "prefers": pairs})
    doc = {
        "model": "one-sided",
        "ground": list(inst.ground),
        "agents": agents,
        "m2": matroid_to_json(inst.m2),
    }
    if inst.weights is not None:
        doc["weights"] = {u: format_rational(inst.weights[u]) for u in inst.ground}
    else:
        f = inst.utility
        doc["utility"] = {
            "domain": [list(canon(X)) for X in f.domain],
            "values": [format_rational(f.value(X)) for X in f.domain],
        }
    return doc


def _parse_ordered(d, path) -> OrderedMatroid:
    d = _obj(d, path)
    _check_keys(d, path, ("summands", "order"))
    summands = [
        matroid_from_json(s, f"{path}.summands[{i}]")
        for i, s in enumerate(_list(d["summands"], f"{path}.summands"))
    ]
    order = _id_list(d["order"], f"{path}.order")
    try:
        return OrderedMatroid(summands, order)
    except Exception as exc:
        raise SchemaError(path, str(exc)) from exc


def _emit_ordered(M: OrderedMatroid) -> dict:
    return {
        "summands": [matroid_to_json(s) for s in M.summands],
        "order": list(M.order),
    }


def _parse_two_sided(d) -> InstanceDocument:
    _check_keys(d, "$", ("model", "ground", "m1", "m2", "weights"))
    ground = _id_list(d["ground"], "$.ground")
    m1 = _parse_ordered(d["m1"], "$.m1")
    m2 = _parse_ordered(d["m2"], "$.m2")
    if set(m1.ground) != set(ground) or set(m2.ground) != set(ground):
        raise SchemaError("$.ground", "matroid grounds differ from the ground list")
    wd = _obj(d["weights"], "$.weights")
    weights = {u: parse_rational(v, f"$.weights.{u}") for u, v in wd.items()}
    missing = set(ground) - set(weights)
    if missing:
        raise SchemaError("$.weights", f"missing weight for {sorted(missing)[0]!r}")
    extra = set(weights) - set(ground)
    if extra:
        raise SchemaError("$.weights", f"weight for unknown id {sorted(extra)[0]!r}")
    prob = TwoSidedProblem(m1, m2, weights)
    doc = {
        "model": "two-sided",
        "ground": list(ground),
        "m1": _emit_ordered(m1),
        "m2": _emit_ordered(m2),
        "weights": {u: format_rational(weights[u]) for u in ground},
    }
    return InstanceDocument("two-sided", prob, doc)


def _parse_near_opt(d) -> InstanceDocument:
    _check_keys(
        d,
        "$",
        ("model", "preference_model", "a", "b", "edges", "preferences"),
        ("weights", "threshold"),
    )
    pm = _str(d["preference_model"], "$.preference_model")
    if pm not in ("one-sided", "two-sided"):
        raise SchemaError("$.preference_model", f"unknown model {pm!r}")
    a = _id_list(d["a"], "$.a")
    b = _id_list(d["b"], "$.b")
    edges = []
    for i, e in enumerate(_list(d["edges"], "$.edges")):
        pe = f"$.edges[{i}]"
        e = _list(e, pe)
        if len(e) != 2:
            raise SchemaError(pe, "expected [a, b]")
        edges.append((_str(e[0], f"{pe}[0]"), _str(e[1], f"{pe}[1]")))
    prefs = {}
    for v, tiers in _obj(d["preferences"], "$.preferences").items():
        tl = _list(tiers, f"$.preferences.{v}")
        prefs[v] = [
            _id_list(t, f"$.preferences.{v}[{i}]") for i, t in enumerate(tl)
        ]
    weights = None
    if "weights" in d:
        wl = _list(d["weights"], "$.weights")
        if len(wl) != len(edges):
            raise SchemaError("$.weights", "weights must align with edges")
        weights = {
            e: parse_rational(w, f"$.weights[{i}]")
            for i, (e, w) in enumerate(zip(edges, wl))
        }
    threshold = (
        parse_rational(d["threshold"], "$.threshold") if "threshold" in d else None
    )
    try:
        G = PrefBipartite(
            a,
            b,
            edges,
            prefs,
            weights=weights,
            threshold=threshold,
            two_sided=(pm == "two-sided"),
        )
    except Exception as exc:
        raise SchemaError("$", str(exc)) from exc
    return InstanceDocument("near-opt", G, emit_near_opt(G))


def emit_near_opt(G: PrefBipartite) -> dict:
    doc = {
        "model": "near-opt",
        "preference_model": "two-sided" if G.two_sided else "one-sided",
        "a": list(G.a_side),
        "b": list(G.b_side),
        "edges": [list(e) for e in G.edges],
        "preferences": {
            v: [sorted(t) for t in tiers] for v, tiers in sorted(G.prefs.items())
        },
    }
    if any(w != 1 for w in G.weights.values()):
        doc["weights"] = [format_rational(G.weights[e]) for e in G.edges]
    if G.threshold is not None:
        doc["threshold"] = format_rational(G.threshold)
    return doc


def parse_instance(text_or_dict) -> InstanceDocument:
    """Parse and validate an instance document (text or already-loaded dict)."""
    if isinstance(text_or_dict, (str, bytes)):
        try:
            d = json.loads(text_or_dict)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    else:
        d = text_or_dict
    d = _obj(d, "$")
    model = d.get("model")
    if model == "one-sided":
        return _parse_one_sided(d)
    if model == "two-sided":
        return _parse_two_sided(d)
    if model == "near-opt":
        return _parse_near_opt(d)
    raise SchemaError("$.model", f"unknown or missing model {model!r}")


def load_instance(path) -> InstanceDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def emit_json(doc: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent, newline end."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def instance_sha256(doc: dict) -> str:
    return hashlib.sha256(emit_json(doc).encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------
# reports


def report_to_doc(report: PopularityReport, command: str, instance: InstanceDocument) -> dict:
    return {
        "format": REPORT_FORMAT,
        "command": command,
        "instance": instance.doc,
        "instance_sha256": instance_sha256(instance.doc),
        "status": report.status,
        "solution": None if report.solution is None else list(canon(report.solution)),
        "certificates": report.certificate,
        "verification": {
            "complete": report.complete,
            "transcript": report.verification,
        },
    }


def error_report_doc(status: str, command: str, instance: InstanceDocument | None, message: str) -> dict:
    doc = {
        "format": REPORT_FORMAT,
        "command": command,
        "status": status,
        "error": message,
    }
    if instance is not None:
        doc["instance"] = instance.doc
        doc["instance_sha256"] = instance_sha256(instance.doc)
    return doc


def parse_report(text) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    d = _obj(d, "$")
    if d.get("format") != REPORT_FORMAT:
        raise SchemaError("$.format", f"unknown report format {d.get('format')!r}")
    for key in ("command", "status"):
        if key not in d:
            raise SchemaError("$", f"missing field {key!r}")
    return d
