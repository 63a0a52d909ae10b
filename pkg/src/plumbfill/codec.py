"""Versioned JSON documents for every domain type, and DOT export."""

from __future__ import annotations

import json

from plumbfill.arrangements import ArrangementClass, LineArrangement
from plumbfill.caps import ConcaveCap, RbdGraph
from plumbfill.configs import CurveConfiguration, FillingDescriptor
from plumbfill.errors import DecodeError, PlumbfillError
from plumbfill.homology import HomologyClass, Role, Strand
from plumbfill.rbd import LocalArm, RbdStep, ReachabilityCertificate
from plumbfill.seifert_core import PlumbingGraph, SeifertData

VERSION = 1


# ---------------------------------------------------------------- encoding


def _cls(x: HomologyClass) -> dict:
    return {"l": x.l_coeff, "e": {str(k): c for k, c in x.e_coeffs}, "N": x.ambient_N}


def _role(r: Role) -> dict:
    out = {"kind": r.kind}
    if r.arm is not None:
        out["arm"] = r.arm
        out["pos"] = r.pos
    return out


def _cap(c: ConcaveCap) -> dict:
    return {
        "essential_arms": [list(a) for a in c.essential_arms],
        "extra_arms": [list(a) for a in c.extra_arms],
        "minus_one_arms": c.minus_one_arm_count,
    }


def _config(c: CurveConfiguration) -> dict:
    return {
        "N": c.ambient_N,
        "cap": _cap(c.cap),
        "strands": [{"id": s.id, "class": _cls(s.cls), "role": _role(s.role)} for s in c.strands],
        "incidence": [list(p) for p in c.incidence],
    }


def _graph(g: RbdGraph) -> dict:
    if g.kind == "Linear":
        return {"kind": "Linear", "weights": list(g.weights)}
    return {"kind": "GammaPQR", "pqr": list(g.pqr)}


def _step(s: RbdStep) -> dict:
    return {
        "graph": _graph(s.graph),
        "site_point": list(s.site_point),
        "ball_arrangement_choice": s.ball_arrangement_choice,
        "affected_arms": list(s.affected_arms),
        "exceptional_set": list(s.exceptional_set),
        "site_index": s.site_index,
        "local": [
            {"arm": a.arm, "prefix": a.prefix, "ext": list(a.ext), "lowering": [list(x) for x in a.lowering]}
            for a in s.local
        ],
        "ball_classes": [[_cls(x) for x in arm] for arm in s.ball_classes],
        "ball_N": s.ball_N,
    }


def to_doc(obj) -> dict:
    if isinstance(obj, SeifertData):
        body = {"b": obj.b, "arms": [list(p) for p in obj.pairs]}
    elif isinstance(obj, PlumbingGraph):
        body = {"central": obj.central_weight, "arms": [list(a) for a in obj.arms]}
    elif isinstance(obj, ConcaveCap):
        body = _cap(obj)
    elif isinstance(obj, HomologyClass):
        body = _cls(obj)
    elif isinstance(obj, Strand):
        body = {"id": obj.id, "class": _cls(obj.cls), "role": _role(obj.role)}
    elif isinstance(obj, LineArrangement):
        body = {"n": obj.n_lines, "points": [list(p) for p in obj.points]}
    elif isinstance(obj, ArrangementClass):
        body = {"kind": obj.kind, "n": obj.n, "m": obj.m}
    elif isinstance(obj, CurveConfiguration):
        body = _config(obj)
    elif isinstance(obj, FillingDescriptor):
        body = {
            "seifert": {"b": obj.seifert.b, "arms": [list(p) for p in obj.seifert.pairs]},
            "config": _config(obj.config),
            "arrangement": {"n": obj.arrangement.n_lines, "points": [list(p) for p in obj.arrangement.points]},
            "b2": obj.b2,
            "type_tag": obj.type_tag,
            "minimal_resolution": obj.minimal_resolution,
            "history": [list(p) for p in obj.history],
        }
    elif isinstance(obj, RbdGraph):
        body = _graph(obj)
    elif isinstance(obj, RbdStep):
        body = _step(obj)
    elif isinstance(obj, ReachabilityCertificate):
        body = {"verdict": obj.verdict, "steps": [_step(s) for s in obj.steps]}
        for name in ("n_s", "explored", "depth"):
            if getattr(obj, name) is not None:
                body[name] = getattr(obj, name)
        body["bounded"] = obj.bounded
        body["notes"] = list(obj.notes)
    else:
        raise TypeError(f"no JSON form for {type(obj).__name__}")
    return {"v": VERSION, "type": type(obj).__name__, **body}


def dumps(obj) -> str:
    if isinstance(obj, list):
        return json.dumps([to_doc(x) for x in obj], sort_keys=True, indent=2) + "\n"
    return json.dumps(to_doc(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- decoding


def _read_cls(d) -> HomologyClass:
    return HomologyClass(int(d["l"]), {int(k): int(c) for k, c in d["e"].items()}, int(d["N"]))


def _read_role(d) -> Role:
    return Role(d["kind"], d.get("arm"), d.get("pos"))


def _read_cap(d) -> ConcaveCap:
    return ConcaveCap(
        tuple(tuple(a) for a in d["essential_arms"]),
        int(d["minus_one_arms"]),
        tuple(tuple(a) for a in d.get("extra_arms", [])),
    )


def _read_config(d) -> CurveConfiguration:
    strands = tuple(Strand(s["id"], _read_cls(s["class"]), _read_role(s["role"])) for s in d["strands"])
    return CurveConfiguration(strands, int(d["N"]), _read_cap(d["cap"]), tuple(tuple(p) for p in d["incidence"]))


def _read_seifert(d) -> SeifertData:
    return SeifertData(int(d["b"]), tuple(tuple(p) for p in d["arms"]))


def _read_arrangement(d) -> LineArrangement:
    return LineArrangement(int(d["n"]), tuple(tuple(p) for p in d["points"]))


def _read_graph(d) -> RbdGraph:
    if d["kind"] == "Linear":
        return RbdGraph.linear(d["weights"])
    return RbdGraph.gamma(*d["pqr"])


def _read_step(d) -> RbdStep:
    return RbdStep(
        graph=_read_graph(d["graph"]),
        site_point=tuple(d["site_point"]),
        ball_arrangement_choice=d["ball_arrangement_choice"],
        affected_arms=tuple(d["affected_arms"]),
        exceptional_set=tuple(d["exceptional_set"]),
        site_index=int(d["site_index"]),
        local=tuple(
            LocalArm(a["arm"], a["prefix"], tuple(a["ext"]), tuple(tuple(x) for x in a["lowering"])) for a in d["local"]
        ),
        ball_classes=tuple(tuple(_read_cls(x) for x in arm) for arm in d["ball_classes"]),
        ball_N=int(d["ball_N"]),
    )


def _read_descriptor(d) -> FillingDescriptor:
    return FillingDescriptor(
        _read_seifert(d["seifert"]),
        _read_config(d["config"]),
        _read_arrangement(d["arrangement"]),
        int(d["b2"]),
        d["type_tag"],
        bool(d.get("minimal_resolution", False)),
        tuple(tuple(p) for p in d.get("history", [])),
    )


_READERS = {
    "SeifertData": _read_seifert,
    "PlumbingGraph": lambda d: PlumbingGraph(int(d["central"]), tuple(tuple(a) for a in d["arms"])),
    "ConcaveCap": _read_cap,
    "HomologyClass": _read_cls,
    "Strand": lambda d: Strand(d["id"], _read_cls(d["class"]), _read_role(d["role"])),
    "LineArrangement": _read_arrangement,
    "ArrangementClass": lambda d: ArrangementClass(d["kind"], int(d["n"]), int(d["m"])),
    "CurveConfiguration": _read_config,
    "FillingDescriptor": _read_descriptor,
    "RbdGraph": _read_graph,
    "RbdStep": _read_step,
    "ReachabilityCertificate": lambda d: ReachabilityCertificate(
        d["verdict"], tuple(_read_step(s) for s in d["steps"]), d.get("n_s"), d.get("explored"), d.get("depth"),
        bool(d.get("bounded", False)), tuple(d.get("notes", [])),
    ),
}


def from_doc(doc):
    if not isinstance(doc, dict):
        raise DecodeError("expected a JSON object")
    if doc.get("v") != VERSION:
        raise DecodeError(f"unsupported schema version {doc.get('v')!r}, this build reads v{VERSION}")
    reader = _READERS.get(doc.get("type"))
    if reader is None:
        raise DecodeError(f"unknown document type {doc.get('type')!r}")
    try:
        return reader(doc)
    except (KeyError, TypeError, ValueError, PlumbfillError) as exc:
        raise DecodeError(f"malformed {doc['type']} document (v{VERSION}): {exc}") from exc


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"invalid JSON: {exc}") from exc
    if isinstance(doc, list):
        return [from_doc(d) for d in doc]
    return from_doc(doc)


# ---------------------------------------------------------------- DOT


def _quote(text) -> str:
    return '"' + str(text).replace('"', '\\"') + '"'


def export_dot(obj) -> str:
    if isinstance(obj, RbdGraph):
        obj = obj.plumbing()
    lines = ["graph G {", "  node [shape=circle];"]
    if isinstance(obj, PlumbingGraph):
        for i, w in enumerate(obj.weights()):
            lines.append(f"  v{i} [label={_quote(w)}];")
        for u, v in obj.edges():
            lines.append(f"  v{u} -- v{v};")
    elif isinstance(obj, ConcaveCap):
        lines.append(f"  v0 [label={_quote('+1')}, shape=doublecircle];")
        idx = 1
        for arm in obj.arms():
            prev = 0
            for w in arm:
                style = ", style=dashed" if w == -1 else ""
                lines.append(f"  v{idx} [label={_quote(w)}{style}];")
                lines.append(f"  v{prev} -- v{idx};")
                prev = idx
                idx += 1
    elif isinstance(obj, CurveConfiguration):
        names = {}
        for i, s in enumerate(obj.strands):
            names[s.id] = f"s{i}"
            attrs = [f"label={_quote(s.degree)}", f"tooltip={_quote(s.id + ': ' + str(s.cls))}"]
            if s.role.kind == "CapCentral":
                attrs.append("shape=doublecircle")
            elif s.role.kind not in ("CapArm",):
                attrs.append("style=dashed")
            lines.append(f"  s{i} [{', '.join(attrs)}];")
        for j, point in enumerate(obj.incidence):
            if len(point) == 2:
                lines.append(f"  {names[point[0]]} -- {names[point[1]]};")
            else:
                lines.append(f"  p{j} [shape=point];")
                lines.extend(f"  p{j} -- {names[sid]};" for sid in point)
    else:
        raise TypeError(f"no DOT form for {type(obj).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"
