"""Check verdicts, findings, and report serialization.

A CheckReport is PASS, FAIL (with a printed residual), or INCONCLUSIVE
(reduction blocked by generator pairs that have no supplied rule; the
missing pairs are listed).  Findings are structured notes about observed
asymmetries between shipped presets, stated formula tables, and what the
engine can actually derive; they aggregate across a report run.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class CheckReport:
    check: str
    status: str
    preset: Optional[str] = None
    params: Dict = field(default_factory=dict)
    residual: Optional[str] = None
    missing_pairs: Optional[List[str]] = None
    findings: List[Dict] = field(default_factory=list)
    wall_ms: float = 0.0

    def to_dict(self) -> Dict:
        out = {
            "check": self.check,
            "status": self.status,
            "preset": self.preset,
            "params": self.params,
            "residual": self.residual,
            "missing_pairs": self.missing_pairs,
            "findings": self.findings,
            "wall_ms": round(self.wall_ms, 3),
        }
        return out

    @staticmethod
    def from_dict(d: Dict) -> "CheckReport":
        return CheckReport(
            check=d["check"],
            status=d["status"],
            preset=d.get("preset"),
            params=d.get("params") or {},
            residual=d.get("residual"),
            missing_pairs=d.get("missing_pairs"),
            findings=d.get("findings") or [],
            wall_ms=d.get("wall_ms", 0.0),
        )

    @property
    def ok(self) -> bool:
        return self.status == PASS


# Canonical findings.  Notes attached at runtime carry the measured data.
FINDING_TEXT = {
    "basis-theta-square": (
        "The four-relation superspace preset reduces theta^2, so words with "
        "theta-exponent >= 2 are not basis words there; the three-relation "
        "preset keeps them.  The quadratic sphere element normalizes to 0 in "
        "the four-relation preset and to a nonzero element in the "
        "three-relation one."),
    "unit-counit-value": (
        "The pairing of the dual unit against x^k is forced to 1 for every k "
        "by the counit homomorphism property (counit(x) = 1); a delta_{k,0} "
        "table value is inconsistent with that and is not used."),
    "pairing-convention": (
        "The stated dual coproduct/antipode table validates only under one "
        "basis reading convention; the fitted group-like exponents under the "
        "other convention are recorded."),
    "rho-orientation": (
        "The shipped 3x3 scalar matrices satisfy the superspace relations "
        "only under the product-reversed (antirepresentation) orientation."),
    "antipode-square-convention": (
        "The antipode squares to the identity under the recorded coefficient "
        "convention; the alternative convention is implemented behind a "
        "switch and recorded when it fails."),
    "dual-superspace-completion": (
        "The five quadratic relations of the dual superspace preset are not "
        "locally confluent as written (the overlap phi_m*phi_m*phi_p leaves a "
        "z^2*phi_m residue); the shipped rule set adds the two consequence "
        "rules z^2*phi_m -> 0 and z^4 -> 0.  The contraction uses only the "
        "declared quadratic relations."),
    "inverse-diagonal-gap": (
        "The left-inverse diagonal entries reduce to 1 + q^(-3/2)*(gamma*beta "
        "- alpha*delta); identifying gamma*beta with alpha*delta is not "
        "derivable from the shipped partial relation set, so those entries "
        "stay INCONCLUSIVE unless augmented."),
    "reduced-relation-equivalence": (
        "The three-relation superspace presentation follows from the "
        "four-relation one but not conversely; the checks record on which "
        "preset each claim holds."),
    "sphere-coinvariance-coverage": (
        "Coinvariance of the sphere element depends on generator pairs "
        "without supplied rules; the verdict and the exact missing pairs are "
        "recorded."),
    "pairing-grid-gaps": (
        "The stated dual coproduct table reproduces products on the probe "
        "grids used to derive it; on the full word grid some mixed pairs "
        "disagree with the base-value table, and the witnesses are recorded."),
}


def finding(fid: str, note: str = "") -> Dict:
    base = FINDING_TEXT.get(fid, "")
    return {"id": fid, "text": base, "note": note}


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        self._ms = None
        return self

    def __exit__(self, *exc):
        self._ms = (time.perf_counter() - self.t0) * 1000.0
        return False

    @property
    def ms(self) -> float:
        if self._ms is None:
            return (time.perf_counter() - self.t0) * 1000.0
        return self._ms


def apply_time(report: CheckReport, watch: Stopwatch) -> CheckReport:
    report.wall_ms = watch.ms
    return report


def collect_findings(reports: List[CheckReport]) -> List[Dict]:
    seen = {}
    for r in reports:
        for f in r.findings:
            key = (f["id"], f.get("note", ""))
            seen.setdefault(key, f)
    return [seen[k] for k in sorted(seen)]


def emit_json(reports: List[CheckReport]) -> str:
    doc = {
        "reports": [r.to_dict() for r in reports],
        "findings": collect_findings(reports),
    }
    return json.dumps(doc, indent=2, sort_keys=False)


def load_json(text: str) -> List[CheckReport]:
    doc = json.loads(text)
    return [CheckReport.from_dict(d) for d in doc["reports"]]


def emit_markdown(reports: List[CheckReport]) -> str:
    lines = [
        "| check | preset | status | detail | ms |",
        "|---|---|---|---|---|",
    ]
    for r in reports:
        detail = ""
        if r.status == FAIL and r.residual:
            detail = f"residual: `{r.residual}`"
        elif r.status == INCONCLUSIVE and r.missing_pairs:
            detail = "missing: " + ", ".join(f"`{m}`" for m in r.missing_pairs[:6])
            if len(r.missing_pairs) > 6:
                detail += f" (+{len(r.missing_pairs) - 6} more)"
        lines.append(
            f"| {r.check} | {r.preset or ''} | {r.status} | {detail} | "
            f"{r.wall_ms:.0f} |")
    findings = collect_findings(reports)
    if findings:
        lines.append("")
        lines.append("## Findings")
        for f in findings:
            note = f" — {f['note']}" if f.get("note") else ""
            lines.append(f"- **{f['id']}**: {f['text']}{note}")
    return "\n".join(lines) + "\n"
