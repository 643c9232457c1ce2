# core/codec.py
"""
JSON documents for groups, elements, forms, cocycles, witnesses and reports.

Elements are plain coefficient lists ({"coeffs": [...]} is accepted on
input). Table keys write each argument as comma-joined coefficients and
join arguments with "|", so c(1,0 ; 0,1) is keyed "1,0|0,1". Only entries
with every argument non-zero are written for cocycle tables.
"""
import json
from typing import Any, Callable

from core.abgroup import Element, FgAbGroup, Homomorphism
from core.cocycle import (AbelianCocycle3, CarryCocycle, CoboundaryWitness, StructuredCocycle,
                          TableCocycle, ValidationReport)
from core.errors import AlgebraError, DocumentError
from core.forms import BilinearForm, Mod2Hom, QuadraticForm


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{source}:{e.lineno}:{e.colno}", e.msg) from e


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def _expect(doc: Any, kind: type, loc: str, what: str) -> Any:
    if not isinstance(doc, kind) or isinstance(doc, bool):
        raise DocumentError(loc, f"expected {what}, got {type(doc).__name__}")
    return doc


def _field(doc: dict, key: str, loc: str) -> Any:
    if key not in doc:
        raise DocumentError(loc, f"missing field '{key}'")
    return doc[key]


def _guarded(loc: str, build: Callable[[], Any]) -> Any:
    """Re-raise construction errors with the document location attached."""
    try:
        return build()
    except DocumentError:
        raise
    except AlgebraError as e:
        raise DocumentError(loc, str(e)) from e


# ---------------------------------------------------------------------- #
# Groups and elements
# ---------------------------------------------------------------------- #
def encode_group(G: FgAbGroup) -> dict:
    return {"orders": list(G.orders)}


def decode_group(doc: Any, loc: str = "$") -> FgAbGroup:
    _expect(doc, dict, loc, "a group object")
    orders = _expect(_field(doc, "orders", loc), list, f"{loc}.orders", "a list of orders")
    for i, n in enumerate(orders):
        _expect(n, int, f"{loc}.orders[{i}]", "an integer")
    return _guarded(f"{loc}.orders", lambda: FgAbGroup(orders))


def encode_element(x: Element) -> list[int]:
    return list(x.coeffs)


def decode_element(doc: Any, group: FgAbGroup, loc: str) -> Element:
    if isinstance(doc, dict):
        doc = _field(doc, "coeffs", loc)
        loc = f"{loc}.coeffs"
    _expect(doc, list, loc, "a coefficient list")
    if len(doc) != group.rank:
        raise DocumentError(loc, f"{len(doc)} coefficients for {group}")
    for i, a in enumerate(doc):
        _expect(a, int, f"{loc}[{i}]", "an integer")
    return group.element(doc)


def encode_key(args: tuple[Element, ...]) -> str:
    return "|".join(",".join(str(a) for a in x.coeffs) for x in args)


def decode_key(key: str, group: FgAbGroup, arity: int, loc: str) -> tuple[Element, ...]:
    parts = key.split("|")
    if len(parts) != arity:
        raise DocumentError(loc, f"key '{key}' needs {arity} arguments")
    out = []
    for part in parts:
        try:
            coeffs = [int(a) for a in part.split(",")] if part else []
        except ValueError as e:
            raise DocumentError(loc, f"key '{key}' is not made of integers") from e
        if len(coeffs) != group.rank:
            raise DocumentError(loc, f"key '{key}' has an argument of the wrong rank for {group}")
        out.append(group.element(coeffs))
    return tuple(out)


def _encode_table(entries: dict) -> dict:
    return {encode_key(args): encode_element(v) for args, v in entries.items()}


def _decode_table(doc: Any, group: FgAbGroup, module: FgAbGroup, arity: int, loc: str) -> dict:
    _expect(doc, dict, loc, "a table object")
    return {decode_key(k, group, arity, f"{loc}.{k}"): decode_element(v, module, f"{loc}['{k}']")
            for k, v in doc.items()}


def encode_homomorphism(f: Homomorphism) -> dict:
    return {"source": encode_group(f.source), "target": encode_group(f.target),
            "images": [encode_element(y) for y in f.images]}


# ---------------------------------------------------------------------- #
# Forms
# ---------------------------------------------------------------------- #
def encode_form(q: QuadraticForm) -> dict:
    return {
        "source": encode_group(q.source),
        "target": encode_group(q.target),
        "diag": [encode_element(v) for v in q.diag],
        "offdiag": {f"{i},{j}": encode_element(v) for (i, j), v in q.offdiag().items()},
    }


def decode_form(doc: Any, loc: str = "$") -> QuadraticForm:
    _expect(doc, dict, loc, "a quadratic form object")
    G = decode_group(_field(doc, "source", loc), f"{loc}.source")
    M = decode_group(_field(doc, "target", loc), f"{loc}.target")
    raw_diag = _expect(_field(doc, "diag", loc), list, f"{loc}.diag", "a list")
    diag = [decode_element(v, M, f"{loc}.diag[{i}]") for i, v in enumerate(raw_diag)]
    offdiag = {}
    for key, v in _expect(doc.get("offdiag", {}), dict, f"{loc}.offdiag", "an object").items():
        try:
            i, j = (int(a) for a in key.split(","))
        except ValueError as e:
            raise DocumentError(f"{loc}.offdiag", f"key '{key}' is not of the form 'i,j'") from e
        offdiag[(i, j)] = decode_element(v, M, f"{loc}.offdiag['{key}']")
    return _guarded(loc, lambda: QuadraticForm.from_data(G, M, diag, offdiag))


def encode_form_table(q: QuadraticForm) -> dict:
    return {str(x): encode_element(v) for x, v in q.table().items()}


def encode_bilinear(t: BilinearForm) -> dict:
    return {"source": encode_group(t.source), "target": encode_group(t.target),
            "matrix": _encode_matrix(t)}


def _encode_matrix(t: BilinearForm) -> list:
    return [[encode_element(v) for v in row] for row in t.matrix]


def _decode_matrix(doc: Any, G: FgAbGroup, M: FgAbGroup, loc: str) -> BilinearForm:
    rows = _expect(doc, list, loc, "a matrix")
    matrix = [[decode_element(v, M, f"{loc}[{i}][{j}]") for j, v in enumerate(_expect(row, list, f"{loc}[{i}]", "a row"))]
              for i, row in enumerate(rows)]
    return _guarded(loc, lambda: BilinearForm(G, M, matrix))


def decode_bilinear(doc: Any, loc: str = "$") -> BilinearForm:
    _expect(doc, dict, loc, "a bilinear form object")
    G = decode_group(_field(doc, "source", loc), f"{loc}.source")
    M = decode_group(_field(doc, "target", loc), f"{loc}.target")
    return _decode_matrix(_field(doc, "matrix", loc), G, M, f"{loc}.matrix")


# ---------------------------------------------------------------------- #
# Cocycles and witnesses
# ---------------------------------------------------------------------- #
def encode_cocycle(kappa: AbelianCocycle3) -> dict:
    doc = {"backing": kappa.backing, "group": encode_group(kappa.group), "coeffs": encode_group(kappa.module)}
    if isinstance(kappa, TableCocycle):
        doc["h"] = _encode_table(kappa.h_entries())
        doc["c"] = _encode_table(kappa.c_entries())
    elif isinstance(kappa, StructuredCocycle):
        doc["h"] = "zero"
        doc["c"] = {"bilinear": _encode_matrix(kappa.bilinear),
                    "correction": [encode_element(v) for v in kappa.correction.values]}
        if not kappa.correction.basis.is_standard:
            doc["c"]["basis"] = [list(v) for v in kappa.correction.basis.vectors]
    elif isinstance(kappa, CarryCocycle):
        doc["form"] = encode_form(kappa.form)
    else:
        raise DocumentError("$", f"no document shape for {type(kappa).__name__}")
    return doc


def decode_cocycle(doc: Any, loc: str = "$") -> AbelianCocycle3:
    _expect(doc, dict, loc, "a cocycle object")
    backing = doc.get("backing")
    if backing == "carry":
        return CarryCocycle(decode_form(_field(doc, "form", loc), f"{loc}.form"))
    G = decode_group(_field(doc, "group", loc), f"{loc}.group")
    M = decode_group(_field(doc, "coeffs", loc), f"{loc}.coeffs")
    h_doc = doc.get("h", {})
    if backing is None:
        backing = "structured" if h_doc == "zero" else "table"
    if backing == "structured":
        c_doc = _expect(_field(doc, "c", loc), dict, f"{loc}.c", "an object")
        t = _decode_matrix(_field(c_doc, "bilinear", f"{loc}.c"), G, M, f"{loc}.c.bilinear")
        basis = G.mod2_basis()
        if "basis" in c_doc:
            vectors = _expect(c_doc["basis"], list, f"{loc}.c.basis", "a list of vectors")
            basis = _guarded(f"{loc}.c.basis", lambda: basis.with_vectors(vectors))
        raw = _expect(_field(c_doc, "correction", f"{loc}.c"), list, f"{loc}.c.correction", "a list")
        values = [decode_element(v, M, f"{loc}.c.correction[{i}]") for i, v in enumerate(raw)]
        correction = _guarded(f"{loc}.c.correction", lambda: Mod2Hom(basis, M, values))
        return _guarded(loc, lambda: StructuredCocycle(t, correction))
    if backing != "table":
        raise DocumentError(f"{loc}.backing", f"unknown backing '{backing}'")
    if not G.is_finite:
        raise DocumentError(f"{loc}.group", "table cocycles need a finite group")
    h = _decode_table(h_doc, G, M, 3, f"{loc}.h")
    c = _decode_table(doc.get("c", {}), G, M, 2, f"{loc}.c")
    return _guarded(loc, lambda: TableCocycle.from_entries(G, M, h, c))


def encode_witness(k: CoboundaryWitness) -> dict:
    return {"group": encode_group(k.group), "coeffs": encode_group(k.module), "k": _encode_table(k.entries())}


def decode_witness(doc: Any, loc: str = "$") -> CoboundaryWitness:
    _expect(doc, dict, loc, "a witness object")
    G = decode_group(_field(doc, "group", loc), f"{loc}.group")
    M = decode_group(_field(doc, "coeffs", loc), f"{loc}.coeffs")
    if not G.is_finite:
        raise DocumentError(f"{loc}.group", "witnesses need a finite group")
    k = _decode_table(doc.get("k", {}), G, M, 2, f"{loc}.k")
    return _guarded(loc, lambda: CoboundaryWitness.from_entries(G, M, k))


# ---------------------------------------------------------------------- #
# Reports
# ---------------------------------------------------------------------- #
def _args(args: tuple[Element, ...] | None) -> list | None:
    return None if args is None else [encode_element(x) for x in args]


def encode_validation(report: ValidationReport) -> dict:
    return {
        "valid": report.valid,
        "group_cocycle": report.group_cocycle,
        "normalized": report.normalized,
        "identity_A": report.identity_A,
        "identity_Aprime": report.identity_Aprime,
        "counterexamples": {name: _args(args) for name, args in report.counterexamples},
        "exhaustive": report.exhaustive,
        "box": report.box,
    }


def encode_coherence(report) -> dict:
    return {"passed": report.passed, "counterexample": _args(report.counterexample),
            "exhaustive": report.exhaustive, "box": report.box}
