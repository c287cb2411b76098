"""
Bounds report for Moment Bounds
Per-degree bound rows, extracted moments and their CSV / JSON forms
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field

CSV_COLUMNS = ("d", "side", "stokes", "value", "status", "gap_eps", "wall_ms", "gap_eps_ref")
SIDE_ORDER = ("upper", "lower", "bonferroni_upper", "bonferroni_lower")
UPPER_SIDES = ("upper", "bonferroni_upper")
LOWER_SIDES = ("lower", "bonferroni_lower")
SUCCESS_STATUSES = ("optimal", "near_optimal")

Side = Literal["upper", "lower", "bonferroni_upper", "bonferroni_lower"]


class ReportRow(BaseModel):
    d: int
    side: Side
    stokes: bool
    value: Optional[float] = None
    status: str
    gap_eps: Optional[float] = None
    wall_ms: float = 0.0
    gap_eps_ref: Optional[float] = None
    dual_value: Optional[float] = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status in SUCCESS_STATUSES and self.value is not None

    def sort_key(self) -> Tuple[int, int, bool]:
        return (self.d, SIDE_ORDER.index(self.side), self.stokes)


class MomentEstimate(BaseModel):
    """sum_i y^{i,d}_alpha mapped back to original coordinates and units"""

    alpha: Tuple[int, ...]
    value: float
    d: int
    stokes: bool = False


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _optional_float(text: str) -> Optional[float]:
    return float(text) if text != "" else None


class BoundsReport(BaseModel):
    """Upper/lower bound sequences of one problem, in original measure units"""

    problem: str = ""
    problem_hash: str = ""
    dimension: int = 0
    measure: str = ""
    mass_rescale: float = 1.0
    reference_value: Optional[float] = None
    rows: List[ReportRow] = Field(default_factory=list)
    moments: List[MomentEstimate] = Field(default_factory=list)
    issues: List[str] = Field(default_factory=list)
    settings: Dict[str, Any] = Field(default_factory=dict)
    versions: Dict[str, str] = Field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def sorted_rows(self) -> List[ReportRow]:
        return sorted(self.rows, key=ReportRow.sort_key)

    def row(self, d: int, side: str, stokes: bool) -> Optional[ReportRow]:
        for candidate in self.rows:
            if candidate.d == d and candidate.side == side and candidate.stokes == stokes:
                return candidate
        return None

    def series(self, side: str, stokes: bool) -> List[Tuple[int, float]]:
        """(d, value) pairs of successful rows, ordered by d"""
        return [
            (row.d, row.value)
            for row in self.sorted_rows()
            if row.side == side and row.stokes == stokes and row.ok
        ]

    def fill_gaps(self) -> None:
        """Set gap_eps on matching upper/lower pairs and gap_eps_ref on upper rows"""
        for upper_side, lower_side in zip(UPPER_SIDES, LOWER_SIDES):
            for upper in (row for row in self.rows if row.side == upper_side and row.ok):
                lower = self.row(upper.d, lower_side, upper.stokes)
                if lower is not None and lower.ok and upper.value != 0.0:
                    gap = (upper.value - lower.value) / upper.value
                    upper.gap_eps = gap
                    lower.gap_eps = gap
        if self.reference_value:
            for row in self.rows:
                if row.side == "upper" and row.ok:
                    row.gap_eps_ref = (row.value - self.reference_value) / self.reference_value

    # ---- serialization -----------------------------------------------

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.sorted_rows():
            writer.writerow([_cell(getattr(row, column)) for column in CSV_COLUMNS])
        return buffer.getvalue()

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_csv(), encoding="utf-8")
        return path

    def write_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        payload = self.model_dump(mode="json")
        payload["rows"] = [row.model_dump(mode="json") for row in self.sorted_rows()]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def from_csv(cls, text: str) -> "BoundsReport":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}; expected {list(CSV_COLUMNS)}")
        rows = [
            ReportRow(
                d=int(record["d"]),
                side=record["side"],
                stokes=record["stokes"] == "true",
                value=_optional_float(record["value"]),
                status=record["status"],
                gap_eps=_optional_float(record["gap_eps"]),
                wall_ms=float(record["wall_ms"] or 0.0),
                gap_eps_ref=_optional_float(record["gap_eps_ref"]),
            )
            for record in reader
        ]
        return cls(rows=rows)

    @classmethod
    def read(cls, path: Union[str, Path]) -> "BoundsReport":
        """Load a report written by write_json or write_csv (chosen by suffix)"""
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".csv":
            return cls.from_csv(text)
        return cls.model_validate_json(text)
