"""Shape catalogue and the sweep checking every verdict against the predicted one."""

import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .convex_domain import ConvexDomain, Ellipse, Polygon, ShapeClass, SuperEllipse, domain_from_spec
from .maps import MapFamily, make_map
from .models import Catalogue, CatalogueEntry, SamplingConfig, Thresholds, VerificationRow, Verdict
from .simplex_special import hex_symmetries, is_projective_symmetry
from .webs_isometry import classify_map

logger = logging.getLogger("hilbertgeom")


def default_catalogue() -> Catalogue:
    shapes: list[tuple[str, ConvexDomain]] = [
        ("ellipse", Ellipse((0.0, 0.0), (1.0, 0.6), 0.3)),
        ("superellipse-1.5", SuperEllipse((0.0, 0.0), (1.0, 0.8), 1.5, 0.2)),
        ("superellipse-2", SuperEllipse((0.0, 0.0), (1.0, 0.8), 2.0, 0.2)),
        ("superellipse-4", SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)),
        ("pentagon", Polygon.regular(5)),
        ("hexagon", Polygon.regular(6)),
        ("square", Polygon.unit_square()),
        ("triangle", Polygon.standard_triangle()),
    ]
    return Catalogue(shapes=[CatalogueEntry(name=name, domain=d.to_spec()) for name, d in shapes])


def load_catalogue(path: Union[str, Path]) -> Catalogue:
    with open(path) as f:
        return Catalogue.model_validate(json.load(f))


def families_for(domain: ConvexDomain) -> list[MapFamily]:
    families = [MapFamily.PROJECTIVE, MapFamily.PERTURBED]
    if domain.classify_shape() == ShapeClass.TRIANGLE:
        families += [MapFamily.RECIPROCAL, MapFamily.RECIPROCAL_PERMUTED]
    return families


def predicted_verdict(family: MapFamily, index: int = 0) -> Verdict:
    """What the isometry theorem predicts for a map family."""
    if family in (MapFamily.IDENTITY, MapFamily.PROJECTIVE):
        return Verdict.PROJECTIVE_ISOMETRY
    if family in (MapFamily.RECIPROCAL, MapFamily.RECIPROCAL_PERMUTED):
        return Verdict.NON_PROJECTIVE_ISOMETRY
    if family == MapFamily.HEX_SYMMETRY:
        projective = is_projective_symmetry(hex_symmetries()[index])
        return Verdict.PROJECTIVE_ISOMETRY if projective else Verdict.NON_PROJECTIVE_ISOMETRY
    return Verdict.NOT_ISOMETRY


def verify_theorem(
    catalogue: Catalogue,
    sampling: Optional[SamplingConfig] = None,
    thresholds: Optional[Thresholds] = None,
) -> list[VerificationRow]:
    """Classify every (shape, map family) pair of the catalogue."""
    sampling = sampling or SamplingConfig()
    rows = []
    for index, entry in enumerate(catalogue.shapes):
        domain = domain_from_spec(entry.domain)
        for family in families_for(domain):
            rng = np.random.default_rng([sampling.seed, index])
            report = classify_map(make_map(family, domain, rng), sampling=sampling, thresholds=thresholds)
            row = VerificationRow(
                shape=entry.name,
                family=family.value,
                prediction=predicted_verdict(family),
                verdict=report.verdict,
                isometry_defect=report.isometry_defect,
                collineation_defect=report.collineation_defect,
                residual=report.residual,
            )
            logger.info("%s / %s: %s (predicted %s)", row.shape, row.family, row.verdict.value, row.prediction.value)
            rows.append(row)
    return rows
