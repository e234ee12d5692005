"""JSON input formats for groups, characters, modules and subgroup families.

Group files (schema 1)::

    {"schema": 1, "kind": "cyclic", "n": 4, "characters": {"chi": [1]}}

Kinds and their fields:

    cyclic          n
    elem_abelian    p, k
    table           table (square list of element indices), optional generators
    product         factors (list of group objects without schema/characters)
    matrix_gens     dim, gens (list of dim x dim matrices), optional p
    unitriangular   size, optional p

A missing ``p`` falls back to the command line prime.  ``characters`` maps a
name to the values of a homomorphism G -> Z/p on the group's generators:
the listed matrices for ``matrix_gens``, unit vectors for ``elem_abelian``,
superdiagonal elementary matrices for ``unitriangular``, factor generators
in turn for ``product``, and for ``table`` the declared ``generators`` (or a
greedy choice, reported by ``group-info``).  Every other key is an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import groups as gr
from . import linalg
from . import unipotent as un
from .cohomology import Cochain, GModule, module_from_generators, natural_module, trivial_module
from .errors import HomomorphismError, MasseyFpError

SCHEMA_VERSION = 1

_GROUP_FIELDS = {
    "cyclic": {"n"},
    "elem_abelian": {"p", "k"},
    "table": {"table", "generators"},
    "product": {"factors"},
    "matrix_gens": {"dim", "gens", "p"},
    "unitriangular": {"size", "p"},
}
_REQUIRED = {
    "cyclic": {"n"},
    "elem_abelian": {"p", "k"},
    "table": {"table"},
    "product": {"factors"},
    "matrix_gens": {"dim", "gens"},
    "unitriangular": {"size"},
}
_COMMON = {"kind", "name"}
_TOP = {"schema", "characters"}


class SchemaError(MasseyFpError, ValueError):
    pass


@dataclass
class GroupSpec:
    group: gr.FiniteGroup
    generators: list                  # generator indices, in file order
    characters: dict = field(default_factory=dict)
    descriptor: dict = field(default_factory=dict)
    character_names: list = field(default_factory=list)


def _need_int(obj, key, lo=None):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"field {key!r} must be an integer")
    if lo is not None and v < lo:
        raise SchemaError(f"field {key!r} must be at least {lo}")
    return v


def _build(obj: dict, p: Optional[int]) -> tuple:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("group object needs a 'kind'")
    kind = obj["kind"]
    if kind not in _GROUP_FIELDS:
        raise SchemaError(f"unknown group kind {kind!r}")
    extra = set(obj) - _GROUP_FIELDS[kind] - _COMMON
    if extra:
        raise SchemaError(f"unknown fields for kind {kind!r}: {sorted(extra)}")
    missing = _REQUIRED[kind] - set(obj)
    if missing:
        raise SchemaError(f"missing fields for kind {kind!r}: {sorted(missing)}")
    q = obj.get("p", p)
    if kind in ("matrix_gens", "unitriangular") and q is None:
        raise SchemaError(f"kind {kind!r} needs a prime, in the file or via --p")

    if kind == "cyclic":
        G = gr.cyclic(_need_int(obj, "n", 1))
        gens = list(G.gens)
    elif kind == "elem_abelian":
        G = gr.elementary_abelian(_need_int(obj, "p", 2), _need_int(obj, "k", 0))
        gens = list(G.gens)
    elif kind == "table":
        G = gr.from_mul_table(obj["table"], generators=obj.get("generators"), name=obj.get("name", "G"))
        gens = list(G.gens)
    elif kind == "product":
        factors = obj["factors"]
        if not isinstance(factors, list) or not factors:
            raise SchemaError("'factors' must be a nonempty list")
        built = [_build(f, p) for f in factors]
        G, gens = built[0]
        for H, hgens in built[1:]:
            nH = H.order
            gens = [g * nH + H.identity for g in gens] + [G.identity * nH + h for h in hgens]
            G = gr.direct_product(G, H)
    elif kind == "matrix_gens":
        d = _need_int(obj, "dim", 1)
        G, M = gr.from_matrix_generators(q, d, obj["gens"], name=obj.get("name", "G"))
        index = {M[i].tobytes(): i for i in range(G.order)}
        gens = [index[(np.asarray(X, dtype=np.int64) % q).tobytes()] for X in obj["gens"]]
    else:
        size = _need_int(obj, "size", 2)
        G = un.u_group(size, q)
        gens = list(G.gens)
    return G, gens


def character_from_generators(G: gr.FiniteGroup, p: int, gens, values) -> Cochain:
    """The homomorphism G -> Z/p taking gens[i] to values[i], as a 1-cochain."""
    if len(values) != len(gens):
        raise SchemaError(f"character lists {len(values)} values for {len(gens)} generators")
    Zp = gr.cyclic(p)
    try:
        h = gr.hom(G, Zp, {int(g): int(v) % p for g, v in zip(gens, values)})
    except HomomorphismError as exc:
        raise SchemaError(f"character values do not define a homomorphism: {exc}") from exc
    return Cochain(trivial_module(G, p), h.images[:, None])


def load_group(source, p: Optional[int] = None) -> GroupSpec:
    """Parse a group document from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        obj = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("group document must be a JSON object")
    if obj.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {obj.get('schema')!r}, expected {SCHEMA_VERSION}")
    body = {k: v for k, v in obj.items() if k not in _TOP}
    G, gens = _build(body, p)
    chars = obj.get("characters", {})
    if not isinstance(chars, dict):
        raise SchemaError("'characters' must be an object")
    parsed = {}
    if chars and p is not None:
        for name in sorted(chars):
            parsed[name] = character_from_generators(G, p, gens, chars[name])
    return GroupSpec(G, gens, parsed, body, sorted(chars))


def parse_chars(spec: str, gs: GroupSpec) -> list:
    """Comma-separated character names; a leading '-' negates."""
    out = []
    for tok in (t.strip() for t in spec.split(",")):
        neg = tok.startswith("-")
        name = tok[1:] if neg else tok
        if name in gs.character_names and name not in gs.characters:
            raise SchemaError("characters need a prime; pass --p")
        if name not in gs.characters:
            raise SchemaError(f"unknown character {name!r}; known: {sorted(gs.characters)}")
        c = gs.characters[name]
        out.append(-c if neg else c)
    return out


def parse_module(spec: str, gs: GroupSpec, p: int) -> GModule:
    """``trivial``, ``trivialN``, ``colvecN`` (matrix groups) or ``@file``."""
    G = gs.group
    if spec.startswith("@"):
        obj = json.loads(Path(spec[1:]).read_text())
        extra = set(obj) - {"schema", "dim", "action"}
        if extra or obj.get("schema") != SCHEMA_VERSION:
            raise SchemaError(f"module file: bad schema or unknown fields {sorted(extra)}")
        mats = obj["action"]
        if len(mats) != len(gs.generators):
            raise SchemaError("module file needs one matrix per generator")
        return module_from_generators(G, p, mats, gens=gs.generators)
    if spec == "trivial":
        return trivial_module(G, p)
    if spec.startswith("trivial") and spec[7:].isdigit():
        return trivial_module(G, p, int(spec[7:]))
    if spec.startswith("colvec") and spec[6:].isdigit():
        d = int(spec[6:])
        if G.matrices is None or G.matrices.shape[1] != d:
            raise SchemaError(f"{spec} needs a matrix group of degree {d}")
        if G.meta.get("p") != p:
            raise SchemaError(f"matrix group is over F_{G.meta.get('p')}, not F_{p}")
        return natural_module(G, p)
    raise SchemaError(f"unknown module spec {spec!r}")


def parse_subgroups(spec: str, G: gr.FiniteGroup) -> list:
    """``cyclic``, ``whole``, ``trivial``, ``lines`` (order-p cyclic subgroups),
    or ``@file`` holding a list of generator lists (element indices)."""
    if spec == "cyclic":
        return [S for S in gr.cyclic_subgroups(G) if len(S) > 1]
    if spec == "lines":
        return [S for S in gr.cyclic_subgroups(G) if len(S) > 1 and linalg.is_prime(len(S))]
    if spec == "whole":
        return [gr.whole(G)]
    if spec == "trivial":
        return [gr.trivial_subgroup(G)]
    if spec.startswith("@"):
        obj = json.loads(Path(spec[1:]).read_text())
        if not isinstance(obj, list):
            raise SchemaError("subgroup file must hold a list of generator lists")
        out = []
        for gens in obj:
            if any(not isinstance(g, int) or not 0 <= g < G.order for g in gens):
                raise SchemaError(f"subgroup generators out of range: {gens}")
            out.append(gr.subgroup(G, gens))
        return out
    raise SchemaError(f"unknown subgroup spec {spec!r}")
