from typing import Dict, List, Optional

from config import SolverSettings
from relaxation.builder import ConicProblem
from .base_backend import BaseBackend, SolveResult, SolveStatus
from .cvxpy_backend import CvxpyBackend, installed_psd_solvers
from .sdpa import SdpaProblem, export_sdpa, format_sdpa, read_sdpa

_BACKENDS = {"cvxpy": CvxpyBackend}


def get_backend(name: str = "cvxpy") -> BaseBackend:
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_BACKENDS)}") from None


def available_backends() -> List[Dict[str, str]]:
    return [cls().to_dict() for cls in _BACKENDS.values()]


def solve(problem: ConicProblem, settings: Optional[SolverSettings] = None, backend: str = "cvxpy") -> SolveResult:
    """Solve a ConicProblem with the named backend"""
    return get_backend(backend).solve(problem, settings)


__all__ = [
    "BaseBackend",
    "CvxpyBackend",
    "SdpaProblem",
    "SolveResult",
    "SolveStatus",
    "available_backends",
    "export_sdpa",
    "format_sdpa",
    "get_backend",
    "installed_psd_solvers",
    "read_sdpa",
    "solve",
]
