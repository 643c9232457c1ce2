import pytest

from core import catalog, codec
from core.abgroup import FgAbGroup
from core.cocycle import CoboundaryWitness, StructuredCocycle
from core.errors import DocumentError
from core.forms import BilinearForm, Mod2Hom


def test_table_document_lists_only_nonzero_arguments(nonpolar):
    doc = codec.encode_cocycle(nonpolar)
    assert doc["backing"] == "table"
    assert doc["h"] == {"1|1|1": [2]}
    assert doc["c"] == {"1|1": [1]}


def test_elements_accept_coeffs_objects():
    doc = {"group": {"orders": [2]}, "coeffs": {"orders": [4]},
           "h": {"1|1|1": {"coeffs": [2]}}, "c": {"1|1": [1]}}
    assert codec.decode_cocycle(doc) == catalog.nonpolar()


def test_structured_document_keeps_alternative_basis():
    G, M = FgAbGroup((2, 2)), FgAbGroup.cyclic(2)
    basis = G.mod2_basis().with_vectors([[1, 1], [0, 1]])
    kappa = StructuredCocycle(BilinearForm.zero(G, M), Mod2Hom(basis, M, [M.element([1]), M.zero()]))
    doc = codec.encode_cocycle(kappa)
    assert doc["c"]["basis"] == [[1, 1], [0, 1]]
    assert codec.decode_cocycle(codec.loads(codec.dumps(doc))) == kappa


@pytest.mark.parametrize("doc,location", [
    ({"group": {"orders": [1]}, "coeffs": {"orders": [2]}}, "$.group.orders"),
    ({"group": {"orders": [2]}, "coeffs": {"orders": [2]}, "c": {"1|1": [1, 0]}}, "$.c['1|1']"),
    ({"group": {"orders": [0]}, "coeffs": {"orders": [2]}, "c": {}}, "$.group"),
    ({"group": {"orders": [2]}, "coeffs": {"orders": [2]}, "backing": "sparse"}, "$.backing"),
    ({"group": {"orders": [2]}, "coeffs": {"orders": [2]}, "h": "zero",
      "c": {"bilinear": [[[1]]], "correction": [[1], [1]]}}, "$.c.correction"),
])
def test_decode_errors_carry_locations(doc, location):
    with pytest.raises(DocumentError) as info:
        codec.decode_cocycle(doc)
    assert info.value.location == location


def test_loads_reports_line_and_column():
    with pytest.raises(DocumentError) as info:
        codec.loads('{\n  "orders": [2,\n}', "g.json")
    assert info.value.location.startswith("g.json:3:")


def test_form_document_keys(z2, z4):
    q = codec.decode_form({"source": {"orders": [2, 2]}, "target": {"orders": [2]},
                           "diag": [[1], [0]], "offdiag": {"0,1": [1]}})
    assert codec.encode_form(q)["offdiag"] == {"0,1": [1]}
    with pytest.raises(DocumentError):
        codec.decode_form({"source": {"orders": [2]}, "target": {"orders": [8]}, "diag": [[1]]})


def test_witness_and_bilinear_documents_read_back():
    G = M = FgAbGroup.cyclic(3)
    k = CoboundaryWitness.from_entries(G, M, {(G.element([1]), G.element([2])): M.element([1])})
    assert codec.decode_witness(codec.loads(codec.dumps(codec.encode_witness(k)))) == k
    t = BilinearForm(G, M, [[M.element([2])]])
    assert codec.decode_bilinear(codec.encode_bilinear(t)) == t
    with pytest.raises(DocumentError) as info:
        codec.decode_witness({"group": {"orders": [0]}, "coeffs": {"orders": [3]}})
    assert info.value.location == "$.group"
