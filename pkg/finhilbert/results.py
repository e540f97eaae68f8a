"""
Report types shared by the verification suites and the command line.
"""
import math
from dataclasses import dataclass, field

from .utils import dump_json, format_csv_rows

CASE_HEADER = ["suite", "case", "lhs", "rhs", "residual", "tolerance", "pass"]


@dataclass(frozen=True)
class Case:
    descriptor: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def to_dict(self):
        return {
            "case": self.descriptor,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    """
    Cases of one suite, kept sorted by descriptor so that reports do not
    depend on the order in which cases finished.
    """

    suite: str
    cases: tuple
    seed: int = None
    parameters: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(sorted(self.cases, key=lambda case: case.descriptor)))

    @property
    def passed(self):
        return all(case.passed for case in self.cases)

    @property
    def summary(self):
        residuals = [case.residual for case in self.cases if not math.isnan(case.residual)]
        return {
            "n_pass": sum(case.passed for case in self.cases),
            "n_fail": sum(not case.passed for case in self.cases),
            "max_residual": max(residuals, default=0.0),
        }

    def to_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "parameters": self.parameters,
            "cases": [case.to_dict() for case in self.cases],
            "summary": self.summary,
        }

    def csv_rows(self):
        for case in self.cases:
            yield [self.suite, case.descriptor, case.lhs, case.rhs, case.residual, case.tolerance, case.passed]


@dataclass(frozen=True)
class SweepPoint:
    label: str
    parameter: tuple
    measured: float
    bound: float
    slack: float = 0.0

    @property
    def margin(self):
        return self.bound - self.measured

    @property
    def passed(self):
        return bool(self.margin >= -self.slack)

    def to_dict(self):
        return {
            "label": self.label,
            "parameter": list(self.parameter),
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class BoundSweep:
    """Measured values against bounds over a parameter grid."""

    suite: str
    points: tuple
    seed: int = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points, key=lambda p: (p.label, p.parameter))))

    @property
    def passed(self):
        return all(point.passed for point in self.points)

    @property
    def summary(self):
        return {
            "n_pass": sum(point.passed for point in self.points),
            "n_fail": sum(not point.passed for point in self.points),
            "min_margin": min((point.margin for point in self.points), default=0.0),
        }

    def to_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "points": [point.to_dict() for point in self.points],
            "summary": self.summary,
        }

    def csv_rows(self):
        for point in self.points:
            descriptor = f"{point.label} {point.parameter}"
            yield [self.suite, descriptor, point.measured, point.bound, -point.margin, point.slack, point.passed]


def reports_json(reports):
    if len(reports) == 1:
        return dump_json(reports[0])
    return dump_json({"reports": list(reports), "pass": all(r.passed for r in reports)})


def reports_csv(reports):
    return format_csv_rows(CASE_HEADER, (row for report in reports for row in report.csv_rows()))
