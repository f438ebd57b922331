import json

import numpy as np
import pytest

from bosent import io
from bosent.fock_space import basis
from bosent.states import DensityMatrix, pure_state, random_density

from conftest import noon


def test_density_round_trip(tmp_path):
    rho = random_density(basis(3, 3, 1), 4, seed=5)
    path = tmp_path / "rho.json"
    io.save_state(rho, path)
    again = io.load_state(path)
    assert isinstance(again, DensityMatrix)
    np.testing.assert_array_equal(again.to_dense(), rho.to_dense())
    assert io.dumps_state(again) == path.read_text()


def test_pure_round_trip():
    psi = pure_state(basis(2, 2, 1), [1, 0, 1j], normalize=True)
    doc = io.state_to_document(psi)
    assert doc["kind"] == "pure" and all("col" not in e for e in doc["entries"])
    again = io.state_from_document(json.loads(json.dumps(doc)))
    np.testing.assert_array_equal(again.amplitudes, psi.amplitudes)


def test_sparse_noon_document():
    doc = io.state_to_document(noon(2))
    assert len(doc["entries"]) == 4
    assert {tuple(e["row"]) for e in doc["entries"]} == {(2, 0), (0, 2)}


@pytest.mark.parametrize("mutate, match", [
    (lambda d: d.update(kind="mixed"), "kind"),
    (lambda d: d.update(N="2"), "N"),
    (lambda d: d["entries"][0].update(row=[1, 0]), "sums to"),
    (lambda d: d["entries"][0].update(row=[2, 0, 0]), "list of 2 integers"),
    (lambda d: d["entries"].append(dict(d["entries"][0])), "duplicate"),
    (lambda d: d["entries"][0].update(re=float("nan")), "finite"),
    (lambda d: d["entries"][0].update(re=5.0), "trace"),
    (lambda d: d.update(m=3), "m <= M"),
])
def test_schema_violations(mutate, match):
    doc = io.state_to_document(noon(2))
    mutate(doc)
    with pytest.raises(io.StateFileError, match=match):
        io.state_from_document(doc)


def test_left_mode_relabelling():
    # modes (0, 2) on the left: |1,0,1> under m=1 relabelled to left modes [0, 2]
    fb = basis(2, 3, 2)
    doc = {"N": 2, "M": 3, "m": 1, "kind": "pure",
           "entries": [{"row": [1, 1, 0], "re": 2 ** -0.5, "im": 0.0},
                       {"row": [0, 1, 1], "re": 2 ** -0.5, "im": 0.0}]}
    psi = io.state_from_document(doc, left_modes=[0, 2])
    assert psi.basis == fb
    assert psi.amplitude([1, 0, 1]) == pytest.approx(2 ** -0.5)
    assert psi.amplitude([0, 1, 1]) == pytest.approx(2 ** -0.5)
    with pytest.raises(io.StateFileError):
        io.state_from_document(doc, left_modes=[0, 0])
