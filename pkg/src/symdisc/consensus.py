"""Run every membership decider on a point and reconcile their verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SymdiscError
from .polydisc import (
    DEFAULT_TOL,
    Region,
    RegionVerdict,
    SymPoint,
    ToleranceConfig,
    classify_oracle,
    in_gamma_recursive,
    in_gn_recursive,
    in_gn_schur,
)

METHODS = {
    "oracle": classify_oracle,
    "gamma_recursive": in_gamma_recursive,
    "gn_recursive": in_gn_recursive,
    "gn_schur": in_gn_schur,
}

_CLASS = {
    Region.INTERIOR: "interior",
    Region.BOUNDARY: "boundary",
    Region.DISTINGUISHED: "boundary",
    Region.OUTSIDE: "outside",
    Region.BAND: None,
}


@dataclass
class ConsensusReport:
    """Verdicts of all methods, in the fixed order of :data:`METHODS`.

    A verdict of ``None`` means the method does not apply to the point
    (the Schur test needs ``|p| < 1``). ``ToleranceBand`` verdicts are
    compatible with anything. ``anomaly`` marks a disagreement that cannot be
    blamed on the point's closeness to the unit circle.
    """

    point: SymPoint
    verdicts: dict[str, RegionVerdict | None]
    errors: dict[str, str] = field(default_factory=dict)
    region: Region | None = None
    unanimous: bool = True
    anomaly: bool = False

    @property
    def disagreement(self) -> bool:
        return not self.unanimous

    @property
    def max_modulus(self) -> float | None:
        v = self.verdicts.get("oracle")
        return None if v is None else v.certificate["max_modulus"]


def classify_consensus(pt: SymPoint, tol: ToleranceConfig = DEFAULT_TOL) -> ConsensusReport:
    verdicts: dict[str, RegionVerdict | None] = {}
    errors: dict[str, str] = {}
    for name, method in METHODS.items():
        try:
            verdicts[name] = method(pt, tol)
        except SymdiscError as exc:
            errors[name] = f"{type(exc).__name__}: {exc}"
    decided = [(name, v) for name, v in verdicts.items() if v is not None and _CLASS[v.region] is not None]
    classes = {_CLASS[v.region] for _, v in decided}
    report = ConsensusReport(pt, verdicts, errors)
    oracle = verdicts.get("oracle")
    if len(classes) <= 1:
        report.unanimous = True
        if not decided:
            report.region = Region.BAND if verdicts else None
        elif oracle is not None and _CLASS[oracle.region] in classes:
            report.region = oracle.region
        else:
            report.region = decided[0][1].region
        return report
    report.unanimous = False
    report.region = oracle.region if oracle is not None else None
    if oracle is None:
        report.anomaly = True
    else:
        m = oracle.certificate["max_modulus"]
        report.anomaly = abs(m - 1) > tol.consensus_band
    return report
