"""
Problem file loader for Moment Bounds
Reads versioned JSON problem documents (*.prob) into ProblemSpec values
"""

import hashlib
import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from algebra.parser import PolynomialSyntaxError, parse
from measures.base_measure import MeasureSpec
from .problem import ProblemFormatError, ProblemSpec
from .sets import BasicSet, UnionSet

SCHEMA_VERSION = 1


class MeasureDocument(BaseModel):
    kind: Literal["lebesgue", "gaussian", "exponential"]
    box: Optional[List[Tuple[float, float]]] = None
    sigma2: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_kind_fields(self):
        if self.kind == "gaussian" and self.sigma2 is None:
            raise ValueError("gaussian measure requires sigma2")
        for k, (lo, hi) in enumerate(self.box or []):
            if not lo < hi:
                raise ValueError(f"box interval {k} is degenerate: [{lo}, {hi}]")
        return self


class SetDocument(BaseModel):
    name: str
    inequalities: List[str] = Field(min_length=1)


class ProblemDocument(BaseModel):
    """Validated problem file contents"""

    schema_version: int = SCHEMA_VERSION
    name: str = ""
    description: str = ""
    dimension: int = Field(ge=1)
    variables: List[str]
    measure: MeasureDocument
    sets: List[SetDocument] = Field(min_length=1)
    reference_value: Optional[float] = None

    @model_validator(mode="after")
    def check_consistency(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version}, expected {SCHEMA_VERSION}")
        if len(self.variables) != self.dimension:
            raise ValueError(f"{len(self.variables)} variables declared for dimension {self.dimension}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if self.measure.box is not None and len(self.measure.box) != self.dimension:
            raise ValueError(f"box has {len(self.measure.box)} intervals for dimension {self.dimension}")
        return self


def _line_of(text: str, fragment: str) -> Optional[int]:
    if not text:
        return None
    offset = text.find(fragment)
    if offset < 0:
        return None
    return text.count("\n", 0, offset) + 1


def document_to_spec(document: ProblemDocument, text: str = "", source: str = "<document>") -> ProblemSpec:
    """
    Parse every inequality of a validated document into a raw ProblemSpec

    Args:
        document: Validated problem document
        text: Original file text, used to report line numbers
        source: Name used in error messages

    Returns:
        ProblemSpec in original coordinates
    """
    pieces = []
    for set_doc in document.sets:
        rows = []
        for expression in set_doc.inequalities:
            try:
                rows.append(parse(expression, document.variables))
            except PolynomialSyntaxError as exc:
                line = _line_of(text, expression)
                where = f"{source}:{line}" if line else source
                raise ProblemFormatError(
                    f"{where}: set {set_doc.name!r}: {exc}", line=line, location=f"sets.{set_doc.name}"
                ) from exc
        pieces.append(BasicSet(set_doc.name, tuple(rows)))

    box = tuple(tuple(interval) for interval in document.measure.box) if document.measure.box else None
    measure = MeasureSpec(document.measure.kind, box=box, sigma2=document.measure.sigma2)
    return ProblemSpec(
        n=document.dimension,
        measure=measure,
        union=UnionSet(tuple(pieces)),
        variables=tuple(document.variables),
        name=document.name or Path(source).stem,
        reference_value=document.reference_value,
    )


def parse_document(text: str, source: str = "<string>") -> ProblemDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno) from exc
    try:
        return ProblemDocument.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ProblemFormatError(f"{source}: {location}: {first['msg']}", location=location) from exc


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    """Load and validate a problem file; errors carry the file name and line when known"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFormatError(f"cannot read problem file {path}: {exc.strerror}") from exc
    document = parse_document(text, str(path))
    return document_to_spec(document, text, str(path))


def problem_hash(path: Union[str, Path]) -> str:
    """SHA-256 of the problem file bytes"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
