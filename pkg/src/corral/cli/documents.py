"""Input documents, their JSON form, and conversion to domain objects.

JSON files look like ``{"format": 1, "documents": [...]}``; each document
is ``{"kind": ..., "name": ..., "payload": {...}}`` with the payload shapes
listed in docs/format.md. Expressions are stored as strings in the
canonical printed form.
"""

import json
from dataclasses import dataclass
from typing import Any, Dict

from ..errors import InvalidMorphism, ParseError
from ..lattice import AbelianGroupData
from ..monoid import AffineMonoid, MonoidPresentation, free_group

FORMAT = 1
KINDS = ("monoid_presentation", "affine_monoid", "local_model", "germ_pair",
         "cring_presentation", "point", "morphism")


@dataclass(frozen=True, eq=True)
class Document:
    kind: str
    name: str
    payload: Dict[str, Any]

    def to_json(self):
        return {"kind": self.kind, "name": self.name, "payload": self.payload}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def documents_to_json(docs) -> str:
    return dumps({"format": FORMAT, "documents": [d.to_json() for d in docs]})


def documents_from_json(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise ParseError(f"expected a JSON object with \"format\": {FORMAT}")
    out = []
    for d in data.get("documents", []):
        if d.get("kind") not in KINDS:
            raise ParseError(f"unknown document kind {d.get('kind')!r}")
        out.append(Document(d["kind"], d["name"], d["payload"]))
    # Re-print and re-parse so JSON input gets the same checks as text.
    from .syntax import parse_documents, print_documents
    return parse_documents(print_documents(out))


def load(text: str):
    if text.lstrip().startswith("{"):
        return documents_from_json(text)
    from .syntax import parse_documents
    return parse_documents(text)


def build_monoid(doc: Document):
    p = doc.payload
    if doc.kind == "monoid_presentation":
        return MonoidPresentation(tuple(p["generators"]),
                                  tuple((tuple(u), tuple(v)) for u, v in p["relations"]))
    if doc.kind == "local_model":
        return MonoidPresentation(tuple(p["variables"]),
                                  tuple((tuple(u), tuple(v)) for u, v in p["binomials"]))
    if doc.kind == "affine_monoid":
        group = AbelianGroupData(p["free_rank"], tuple(p["torsion"]))
        return AffineMonoid(group, tuple(tuple(v) for v in p["vectors"]), names=tuple(p["names"]))
    raise ParseError(f"document {doc.name!r} is not a monoid")


def _space(spec, prefix):
    gens = tuple(tuple(v) for v in spec["generators"])
    r = len(gens[0]) if gens else 0
    if any(len(v) != r for v in gens):
        raise InvalidMorphism("space generators have different lengths")
    M = AffineMonoid(free_group(r), gens, names=tuple(f"{prefix}{i + 1}" for i in range(len(gens))))
    return M, spec["free"]


def build_germ_pair(doc: Document):
    from ..transverse import GermMap
    p = doc.payload
    X, lx = _space(p["spaces"]["X"], "x")
    Y, ly = _space(p["spaces"]["Y"], "y")
    Z, lz = _space(p["spaces"]["Z"], "z")
    g = GermMap(X, lx, Z, lz, p["maps"]["g"]["phi"], p["maps"]["g"]["jac"], name="g")
    h = GermMap(Y, ly, Z, lz, p["maps"]["h"]["phi"], p["maps"]["h"]["jac"], name="h")
    g.check()
    h.check()
    return g, h


def build_cring(doc: Document):
    from ..bcotangent import CRingPresentation
    from .syntax import parse_expr, to_interior
    p = doc.payload
    inner = tuple(p["interior"])
    return CRingPresentation(
        tuple(p["real"]), inner,
        tuple(parse_expr(f) for f in p["real_relations"]),
        tuple((to_interior(parse_expr(g), inner), to_interior(parse_expr(h), inner))
              for g, h in p["interior_relations"]),
        name=doc.name)


def build_point(doc: Document):
    from ..bcotangent import RPoint
    return RPoint(tuple((n, float(v)) for n, v in doc.payload["values"]))


def build_morphism(doc: Document, rings):
    from ..bcotangent import PresentationMorphism
    from .syntax import parse_expr, to_interior
    p = doc.payload
    for key in ("source", "target"):
        if p[key] not in rings:
            raise ParseError(f"morphism {doc.name!r}: no ring named {p[key]!r}")
    C, D = rings[p["source"]], rings[p["target"]]
    images = dict(p["images"])
    missing = [n for n in C.columns if n not in images]
    if missing:
        raise ParseError(f"morphism {doc.name!r}: no image for {missing[0]!r}")
    extra = [n for n in images if n not in C.columns]
    if extra:
        raise ParseError(f"morphism {doc.name!r}: {extra[0]!r} is not a generator of {C.name!r}")
    try:
        interior = tuple(to_interior(parse_expr(images[n]), D.interior) for n in C.interior)
    except ValueError as err:
        raise InvalidMorphism(str(err)) from None
    return PresentationMorphism(C, D, tuple(parse_expr(images[n]) for n in C.real), interior)
