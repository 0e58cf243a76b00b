"""Data models"""

from .form import Form, VectorField
from .fourier import FourierScalar
from .lattice import FujikiRing, QuadraticSpace
from .period import PeriodPoint, Plane
from .point_form import PointForm
from .report import Check, Report

__all__ = [
    "Check",
    "Form",
    "FourierScalar",
    "FujikiRing",
    "PeriodPoint",
    "Plane",
    "PointForm",
    "QuadraticSpace",
    "Report",
    "VectorField",
]
