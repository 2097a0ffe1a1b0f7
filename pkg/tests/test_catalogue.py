"""Tests for the shape catalogue and the verdict sweep."""

import json

import pytest

from hilbertgeom.catalogue import default_catalogue, families_for, load_catalogue, predicted_verdict, verify_theorem
from hilbertgeom.convex_domain import Ellipse, Polygon, domain_from_spec
from hilbertgeom.maps import MapFamily
from hilbertgeom.models import Catalogue, CatalogueEntry, SamplingConfig, Verdict

SMALL = SamplingConfig(seed=0, pairs=200, lines_per_pole=6, samples_per_line=5)


def test_default_catalogue_shapes():
    catalogue = default_catalogue()
    names = [entry.name for entry in catalogue.shapes]
    assert names == [
        "ellipse",
        "superellipse-1.5",
        "superellipse-2",
        "superellipse-4",
        "pentagon",
        "hexagon",
        "square",
        "triangle",
    ]
    for entry in catalogue.shapes:
        domain_from_spec(entry.domain)


def test_catalogue_file_reload(tmp_path):
    path = tmp_path / "catalogue.json"
    path.write_text(default_catalogue().model_dump_json())
    assert load_catalogue(path) == default_catalogue()


def test_families_per_shape():
    assert families_for(Ellipse.disk()) == [MapFamily.PROJECTIVE, MapFamily.PERTURBED]
    assert MapFamily.RECIPROCAL in families_for(Polygon.standard_triangle())
    assert MapFamily.RECIPROCAL not in families_for(Polygon.unit_square())


def test_predicted_verdicts():
    assert predicted_verdict(MapFamily.PROJECTIVE) == Verdict.PROJECTIVE_ISOMETRY
    assert predicted_verdict(MapFamily.PERTURBED) == Verdict.NOT_ISOMETRY
    assert predicted_verdict(MapFamily.SQUEEZE) == Verdict.NOT_ISOMETRY
    assert predicted_verdict(MapFamily.RECIPROCAL) == Verdict.NON_PROJECTIVE_ISOMETRY
    assert predicted_verdict(MapFamily.HEX_SYMMETRY, 0) == Verdict.PROJECTIVE_ISOMETRY
    assert predicted_verdict(MapFamily.HEX_SYMMETRY, 6) == Verdict.NON_PROJECTIVE_ISOMETRY


def test_empty_catalogue_has_no_rows():
    assert verify_theorem(Catalogue(), SMALL) == []


def test_every_default_verdict_matches_its_prediction():
    rows = verify_theorem(default_catalogue())
    assert len(rows) == 18
    mismatches = [r.model_dump() for r in rows if not r.matches]
    assert mismatches == []


def test_only_the_triangle_has_non_projective_isometries():
    rows = verify_theorem(default_catalogue(), SMALL)
    non_projective = {r.shape for r in rows if r.verdict == Verdict.NON_PROJECTIVE_ISOMETRY}
    assert non_projective == {"triangle"}
    for r in rows:
        if r.verdict != Verdict.NOT_ISOMETRY:
            assert r.isometry_defect < 1e-7


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_sweep_holds_for_other_seeds(seed):
    catalogue = Catalogue(
        shapes=[
            CatalogueEntry(name="square", domain=Polygon.unit_square().to_spec()),
            CatalogueEntry(name="triangle", domain=Polygon.standard_triangle().to_spec()),
        ]
    )
    rows = verify_theorem(catalogue, SMALL.model_copy(update={"seed": seed}))
    assert all(r.matches for r in rows), json.dumps([r.model_dump(mode="json") for r in rows])
