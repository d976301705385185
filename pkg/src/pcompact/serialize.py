"""JSON encodings for the toolkit's value types.

Scalars are emitted as [re, im] pairs at full precision; exponents as a
number or the string "inf".
"""

from __future__ import annotations

import json

import numpy as np

from .lpcore import Exponent, TailedSequence, as_exponent
from .homopoly import HomPolynomial, mono_from_dense, mono_to_dense
from .pconvex import GeneratorSet
from .taylor import ClosedFormComponent, TailLaw, TaylorModel


def exponent_to_json(p) -> object:
    pe = as_exponent(p)
    return "inf" if pe.is_inf else pe.p


def exponent_from_json(obj) -> Exponent:
    return as_exponent(obj)


def scalar_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def scalar_from_json(obj) -> complex:
    return complex(obj[0], obj[1])


def vec_to_json(v) -> list:
    return [scalar_to_json(z) for z in np.asarray(v, dtype=np.complex128)]


def vec_from_json(obj) -> np.ndarray:
    return np.array([scalar_from_json(z) for z in obj], dtype=np.complex128)


def tailed_sequence_to_json(s: TailedSequence) -> dict:
    return {
        "p": exponent_to_json(s.p),
        "prefix": [scalar_to_json(np.atleast_1d(v)[0]) if np.size(v) == 1
                   else vec_to_json(v) for v in s.prefix],
        "tail_norm": s.tail_norm,
    }


def tailed_sequence_from_json(obj) -> TailedSequence:
    prefix = []
    for entry in obj["prefix"]:
        if entry and isinstance(entry[0], (list, tuple)):
            prefix.append(vec_from_json(entry))
        else:
            prefix.append(scalar_from_json(entry))
    return TailedSequence(prefix=prefix, p=exponent_from_json(obj["p"]),
                          tail_norm=float(obj.get("tail_norm", 0.0)))


def polynomial_to_json(P: HomPolynomial) -> dict:
    return {
        "m": P.m,
        "dom": P.dom_dim,
        "cod": P.cod_dim,
        "terms": [
            {"out": out, "multi": mono_to_dense(mono, P.dom_dim),
             "c": scalar_to_json(c)}
            for (out, mono), c in sorted(P.terms.items())
        ],
    }


def polynomial_from_json(obj) -> HomPolynomial:
    terms = {}
    for t in obj["terms"]:
        key = (int(t["out"]), mono_from_dense(t["multi"]))
        terms[key] = terms.get(key, 0) + scalar_from_json(t["c"])
    return HomPolynomial(m=int(obj["m"]), dom_dim=int(obj["dom"]),
                         cod_dim=int(obj["cod"]), terms=terms)


def instance_to_json(p, K, gens) -> dict:
    return {
        "p": exponent_to_json(p),
        "K": [vec_to_json(x) for x in K],
        "gens": [vec_to_json(g) for g in gens],
    }


def instance_from_json(obj):
    p = exponent_from_json(obj["p"])
    K = [vec_from_json(x) for x in obj["K"]]
    G = GeneratorSet(gens=[vec_from_json(g) for g in obj["gens"]], p=p)
    return p, K, G


def taylor_model_to_json(tm: TaylorModel) -> dict:
    comps = []
    for c in tm.components:
        if isinstance(c, ClosedFormComponent):
            comps.append({"degree": c.degree, "lower": c.lower,
                          "upper": c.upper, "note": c.note})
        else:
            comps.append(polynomial_to_json(c))
    return {
        "base": vec_to_json(tm.base_point),
        "components": comps,
        "tail": None if tm.tail is None else {"c1": tm.tail.c1,
                                              "c2": tm.tail.c2},
        "family_tag": tm.family_tag,
    }


def taylor_model_from_json(obj) -> TaylorModel:
    comps = []
    for c in obj["components"]:
        if "degree" in c:
            comps.append(ClosedFormComponent(
                degree=int(c["degree"]), lower=float(c["lower"]),
                upper=float(c["upper"]), note=c.get("note", "")))
        else:
            comps.append(polynomial_from_json(c))
    tail = obj.get("tail")
    return TaylorModel(
        base_point=vec_from_json(obj["base"]),
        components=comps,
        tail=None if tail is None else TailLaw(c1=float(tail["c1"]),
                                               c2=float(tail["c2"])),
        family_tag=obj.get("family_tag"),
    )


def dumps(obj, **kw) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, **kw)
