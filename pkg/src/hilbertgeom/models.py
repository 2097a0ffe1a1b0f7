"""Pydantic models for hilbertgeom run settings, reports and file formats."""

from enum import Enum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field

from . import config


class SamplingConfig(BaseModel):
    """Sample budgets and the seed every sampling step draws from."""

    seed: int = Field(default_factory=lambda: config.SEED, ge=0, lt=2**64)
    pairs: int = Field(default_factory=lambda: config.PAIRS, ge=1)
    lines_per_pole: int = Field(default_factory=lambda: config.LINES_PER_POLE, ge=2)
    samples_per_line: int = Field(default_factory=lambda: config.SAMPLES_PER_LINE, ge=3)
    margin: float = Field(default_factory=lambda: config.SAMPLE_MARGIN, ge=0.0, lt=0.5)


class Thresholds(BaseModel):
    """Verdict thresholds for the classification pipeline."""

    isometry: float = Field(default_factory=lambda: config.TOL_ISOMETRY, gt=0.0)
    residual: float = Field(default_factory=lambda: config.TOL_RESIDUAL, gt=0.0)
    collineation: float = Field(default_factory=lambda: config.TOL_COLLINEATION, gt=0.0)


class RunConfig(BaseModel):
    """Everything one CLI run needs besides its input files."""

    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    thresholds: Thresholds = Field(default_factory=Thresholds)
    output: Optional[str] = None


class Verdict(str, Enum):
    PROJECTIVE_ISOMETRY = "ProjectiveIsometry"
    NON_PROJECTIVE_ISOMETRY = "NonProjectiveIsometry"
    NOT_ISOMETRY = "NotIsometry"


class GeodesicReport(BaseModel):
    """Outcome of the off-segment additivity probe."""

    additivity_defect: float
    witness: Optional[tuple[float, float]] = None
    grid_resolution: int = 0
    candidates: int = 0  # interior grid points far enough from the segment
    threshold: float = 1e-9

    @property
    def certifies_nonunique(self) -> bool:
        return self.additivity_defect < self.threshold


class ClassificationReport(BaseModel):
    """Verdict of the isometry classifier plus the evidence behind it."""

    verdict: Verdict
    shape: str = ""
    isometry_defect: float = 0.0
    collineation_defect: float = 0.0
    residual: float = 0.0
    fitted_map: Optional[list[float]] = None  # row-major 3x3, unit Frobenius norm
    patch_residuals: Optional[list[float]] = None
    glue_defect: Optional[float] = None
    patch_agreement: Optional[float] = None
    pairs: int = 0
    samples: int = 0
    web_lines: int = 0


class VerificationRow(BaseModel):
    """One (shape, map family) row of the theorem sweep."""

    shape: str
    family: str
    prediction: Verdict
    verdict: Verdict
    isometry_defect: float
    collineation_defect: float
    residual: float

    @property
    def matches(self) -> bool:
        return self.prediction == self.verdict


# --- JSON file formats ---

class PolygonSpec(BaseModel):
    type: Literal["polygon"] = "polygon"
    vertices: list[tuple[float, float]] = Field(min_length=3)


class EllipseSpec(BaseModel):
    type: Literal["ellipse"] = "ellipse"
    center: tuple[float, float] = (0.0, 0.0)
    semi_axes: tuple[float, float] = (1.0, 1.0)
    rotation: float = 0.0


class SuperEllipseSpec(BaseModel):
    type: Literal["superellipse"] = "superellipse"
    center: tuple[float, float] = (0.0, 0.0)
    semi_axes: tuple[float, float] = (1.0, 1.0)
    exponent: float = Field(gt=1.0)
    rotation: float = 0.0


class ProjectiveImageSpec(BaseModel):
    type: Literal["projective_image"] = "projective_image"
    base: "DomainSpec"
    matrix: list[float] = Field(min_length=9, max_length=9)


DomainSpec = Annotated[
    Union[PolygonSpec, EllipseSpec, SuperEllipseSpec, ProjectiveImageSpec],
    Field(discriminator="type"),
]

ProjectiveImageSpec.model_rebuild()


class SampledMapSpec(BaseModel):
    """A map given as a table of (source, target) samples between two domains."""

    samples: list[tuple[tuple[float, float], tuple[float, float]]]
    source: DomainSpec
    target: DomainSpec
    family: str = ""
    sampling: Optional[SamplingConfig] = None


class CatalogueEntry(BaseModel):
    name: str
    domain: DomainSpec


class Catalogue(BaseModel):
    """Shapes swept by verify-theorem."""

    shapes: list[CatalogueEntry] = Field(default_factory=list)
