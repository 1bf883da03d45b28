"""Bundle files: JSON with a top-level ``"schema": 1``.

Layout::

    {"schema": 1, "field": "Q" | {"Fp": p},
     "groupoids": {name: table | {"family": ..., ...}},
     "morphisms": {name: {"dom", "cod", "object_map", "arrow_map"}},
     "actions": {name: {"groupoid", "side", "carrier", "struct", "action": [[x, a, y], ...]}},
     "bisets": {name: {"left_groupoid", "right_groupoid", "carrier", "lmap", "rmap",
                       "left_action", "right_action"}},
     "representations": {name: {"groupoid", "dims", "matrices"}},
     "normal_subgroupoids": {name: {"groupoid", "arrows"}},
     "frobenius_systems": {name: {"morphism", "E", "triples"}}}

A groupoid table is ``{"objects", "arrows": [{"name", "src", "tgt"}],
"identities", "composition": [[f, g, fg], ...]}``.  Families: trivial, pair,
equivalence, action, induced, isotropy, finite_frame, cyclic, symmetric.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .actions import build_action, build_biset
from .errors import GfrobError, InvalidParams, ParseError, UnknownName, ValidationError
from .exactlin import QQ, Field
from .frobenius import FrobeniusSystem, path_algebra
from .groupoid import build_groupoid, construct_example_groupoid, cyclic_group, symmetric_group
from .morphisms import build_morphism, normal_subgroupoid
from .representations import build_rep

SCHEMA = 1
SECTIONS = ("groupoids", "morphisms", "actions", "bisets", "representations",
            "normal_subgroupoids", "frobenius_systems")


@dataclass
class Bundle:
    field: Field = QQ
    groupoids: dict = dc_field(default_factory=dict)
    morphisms: dict = dc_field(default_factory=dict)
    actions: dict = dc_field(default_factory=dict)
    bisets: dict = dc_field(default_factory=dict)
    representations: dict = dc_field(default_factory=dict)
    normal_subgroupoids: dict = dc_field(default_factory=dict)
    frobenius_systems: dict = dc_field(default_factory=dict)

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise UnknownName(f"no {section[:-1].replace('_', ' ')} named {name!r}", witness=name)
        return table[name]

    def lookup(self, name: str):
        """Find a name in any section."""
        for s in SECTIONS:
            if name in getattr(self, s):
                return s, getattr(self, s)[name]
        raise UnknownName(f"unknown name {name!r}", witness=name)

    def counts(self):
        return {s: len(getattr(self, s)) for s in SECTIONS}


class BundleError(ValidationError):
    """Every component failure found while loading, in ``errors``."""

    def __init__(self, errors):
        first = errors[0]
        super().__init__(first["component"], first["message"])
        self.errors = errors
        self.witness = errors


def parse_field(raw) -> Field:
    if raw in (None, "Q", "QQ"):
        return QQ
    if isinstance(raw, dict) and "Fp" in raw:
        return Field(int(raw["Fp"]))
    raise InvalidParams(f"unknown field descriptor {raw!r}")


def _labels(xs):
    return [str(x) for x in xs]


def _groupoid_from_raw(raw, resolve):
    if "family" in raw:
        fam = raw["family"]
        if fam == "cyclic":
            return cyclic_group(int(raw["n"]))
        if fam == "symmetric":
            return symmetric_group(int(raw["n"]))
        params = dict(raw)
        params.pop("family")
        if "objects" in params:
            params["objects"] = _labels(params["objects"])
        if fam == "action":
            params["group"] = resolve(raw["group"])
            params["action"] = {(str(x), g): str(y) for x, g, y in raw["action"]}
        elif fam in ("induced", "isotropy"):
            params["groupoid"] = resolve(raw["groupoid"])
            if "map" in params:
                params["map"] = {str(k): v for k, v in params["map"].items()}
        elif fam == "equivalence":
            if "pairs" in params:
                params["pairs"] = [tuple(str(v) for v in p) for p in params["pairs"]]
            if "classes" in params:
                params["classes"] = [_labels(c) for c in params["classes"]]
        elif fam == "finite_frame":
            params["map"] = {str(k): str(v) for k, v in params["map"].items()}
        return construct_example_groupoid(fam, params)
    arrows = [(str(a["name"]), str(a["src"]), str(a["tgt"])) for a in raw["arrows"]]
    return build_groupoid(_labels(raw["objects"]), arrows, [tuple(t) for t in raw.get("composition", [])],
                          identities=raw.get("identities"), inverses=raw.get("inverses"))


def _system_from_raw(raw, phi, field):
    H, G = phi.dom, phi.cod
    A, B = path_algebra(H, field), path_algebra(G, field)
    E = {}
    for u, v, g, coeffs in raw["E"]:
        hs = [H.arrow(a) for a, c in coeffs if field(c) != 0]
        if len(hs) > 1:
            raise InvalidParams("E must send an arrow to a single arrow or zero")
        E[(H.obj(u), H.obj(v), G.arrow(g))] = hs[0] if hs else None
    triples = [[] for _ in range(G.n_objects)]
    for x, u, b, coeffs in raw["triples"]:
        c = B.elem({G.arrow(a): field(v) for a, v in coeffs})
        triples[G.obj(x)].append((H.obj(u), G.arrow(b), c))
    return FrobeniusSystem(phi, field, A, B, E, triples)


def load_bundle_data(data) -> Bundle:
    if not isinstance(data, dict):
        raise ParseError("bundle must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise ParseError(f"unsupported schema {data.get('schema')!r}; expected {SCHEMA}")
    unknown = set(data) - set(SECTIONS) - {"schema", "field", "comment"}
    if unknown:
        raise ParseError(f"unknown top-level keys {sorted(unknown)}")
    try:
        fld = parse_field(data.get("field", "Q"))
    except GfrobError as exc:
        raise BundleError([{"component": "field", "message": str(exc), "error": type(exc).__name__,
                            "witness": exc.witness}]) from None
    b = Bundle(field=fld)
    errors = []

    def fail(component, exc):
        errors.append({"component": component, "message": str(exc), "error": type(exc).__name__,
                       "witness": exc.witness})

    graw = data.get("groupoids", {})
    pending = set()

    def resolve(name):
        if name in b.groupoids:
            return b.groupoids[name]
        if name not in graw:
            raise UnknownName(f"unknown groupoid {name!r}", witness=name)
        if name in pending:
            raise InvalidParams(f"cyclic groupoid reference at {name!r}", witness=name)
        pending.add(name)
        try:
            b.groupoids[name] = _groupoid_from_raw(graw[name], resolve)
        finally:
            pending.discard(name)
        return b.groupoids[name]

    def guarded(component, fn):
        try:
            fn()
        except GfrobError as exc:
            fail(component, exc)
        except (KeyError, TypeError, ValueError) as exc:
            fail(component, InvalidParams(f"malformed entry: {exc!r}"))

    for name in graw:
        guarded(f"groupoids.{name}", lambda name=name: resolve(name))

    def morph(name, raw):
        b.morphisms[name] = build_morphism(resolve(raw["dom"]), resolve(raw["cod"]),
                                           raw["object_map"], raw["arrow_map"])

    def action(name, raw):
        b.actions[name] = build_action(resolve(raw["groupoid"]), raw["carrier"], raw["struct"],
                                       [tuple(t) for t in raw["action"]], raw["side"])

    def biset(name, raw):
        b.bisets[name] = build_biset(resolve(raw["left_groupoid"]), resolve(raw["right_groupoid"]),
                                     raw["carrier"], raw["lmap"], raw["rmap"],
                                     [tuple(t) for t in raw["left_action"]],
                                     [tuple(t) for t in raw["right_action"]])

    def rep(name, raw):
        b.representations[name] = build_rep(resolve(raw["groupoid"]), fld, raw["dims"], raw["matrices"])

    def normal(name, raw):
        b.normal_subgroupoids[name] = normal_subgroupoid(resolve(raw["groupoid"]), raw["arrows"])

    def system(name, raw):
        phi = b.get("morphisms", raw["morphism"])
        b.frobenius_systems[name] = _system_from_raw(raw, phi, fld)

    for section, fn in (("morphisms", morph), ("actions", action), ("bisets", biset),
                        ("representations", rep), ("normal_subgroupoids", normal),
                        ("frobenius_systems", system)):
        for name, raw in data.get(section, {}).items():
            guarded(f"{section}.{name}", lambda fn=fn, name=name, raw=raw: fn(name, raw))
    if errors:
        raise BundleError(errors)
    return b


def load_bundle(path) -> Bundle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return load_bundle_data(data)


def _gname(b: Bundle, g):
    for n, h in b.groupoids.items():
        if h is g or h == g:
            return n
    raise UnknownName("groupoid not registered in bundle")


def bundle_to_json(b: Bundle) -> dict:
    """Fully expanded bundle; loading it back gives table-identical values."""
    out = {"schema": SCHEMA, "field": b.field.to_json()}
    out["groupoids"] = {n: g.to_json() for n, g in b.groupoids.items()}
    out["morphisms"] = {n: {"dom": _gname(b, m.dom), "cod": _gname(b, m.cod), **m.to_json()}
                        for n, m in b.morphisms.items()}
    out["actions"] = {n: {"groupoid": _gname(b, a.groupoid), **a.to_json()} for n, a in b.actions.items()}
    bis = {}
    for n, s in b.bisets.items():
        lj, rj = s.left_action.to_json(), s.right_action.to_json()
        bis[n] = {"left_groupoid": _gname(b, s.lgrp), "right_groupoid": _gname(b, s.rgrp),
                  "carrier": lj["carrier"], "lmap": lj["struct"], "rmap": rj["struct"],
                  "left_action": lj["action"], "right_action": rj["action"]}
    out["bisets"] = bis
    out["representations"] = {n: {"groupoid": _gname(b, r.groupoid), **r.to_json()}
                              for n, r in b.representations.items()}
    out["normal_subgroupoids"] = {n: {"groupoid": _gname(b, s.parent), "arrows": s.to_json()}
                                  for n, s in b.normal_subgroupoids.items()}
    systems = {}
    for n, s in b.frobenius_systems.items():
        mname = next(k for k, m in b.morphisms.items() if m is s.phi or m == s.phi)
        systems[n] = {"morphism": mname, **s.to_json()}
    out["frobenius_systems"] = systems
    return out
