"""Pabulib ingestion and JSON serialization of profiles and price systems.

Money values serialize as "num/den" strings, never floats, so certificates
survive round-trips exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import ApprovalProfile, PriceSystem, build_profile
from .rational import format_rational, parse_rational


class PabulibError(ValueError):
    pass


class MissingSection(PabulibError):
    pass


class MalformedRow(PabulibError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class DanglingProjectReference(PabulibError):
    def __init__(self, line_no: int, project: str):
        self.line_no = line_no
        self.project = project
        super().__init__(f"line {line_no}: vote references unknown project {project!r}")


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass
class PabulibInstance:
    meta: Dict[str, str]
    projects: List[dict]  # id, cost, extras
    votes: List[dict]  # voter, approved (list of project ids), extras


def parse_pabulib(text: str) -> PabulibInstance:
    """Parse the .pb layout: META / PROJECTS / VOTES sections with
    semicolon-separated rows; the vote column holds comma-separated ids."""
    lines = text.splitlines()
    section = None
    meta: Dict[str, str] = {}
    projects: List[dict] = []
    votes: List[dict] = []
    project_header: Optional[List[str]] = None
    vote_header: Optional[List[str]] = None
    seen = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper in ("META", "PROJECTS", "VOTES"):
            section = upper
            seen.add(upper)
            continue
        if section is None:
            raise MalformedRow(line_no, "content before any section header")
        cells = line.split(";")
        if section == "META":
            if len(cells) < 2:
                raise MalformedRow(line_no, "META rows need key;value")
            meta[cells[0]] = cells[1]
        elif section == "PROJECTS":
            if project_header is None:
                project_header = cells
                continue
            if len(cells) < 2:
                raise MalformedRow(line_no, "PROJECTS rows need project_id;cost")
            try:
                cost = float(cells[1])
            except ValueError as exc:
                raise MalformedRow(line_no, f"bad cost {cells[1]!r}") from exc
            extras = dict(zip(project_header[2:], cells[2:]))
            projects.append({"id": cells[0], "cost": cost, "extras": extras})
        else:
            if vote_header is None:
                vote_header = cells
                continue
            if not cells:
                raise MalformedRow(line_no, "empty VOTES row")
            header = vote_header
            vote_col = header.index("vote") if "vote" in header else len(header) - 1
            if len(cells) <= vote_col:
                raise MalformedRow(line_no, "VOTES row shorter than its header")
            approved = [p for p in cells[vote_col].split(",") if p]
            extras = {
                header[j]: cells[j]
                for j in range(1, len(cells))
                if j != vote_col and j < len(header)
            }
            votes.append({"voter": cells[0], "approved": approved, "extras": extras,
                          "line": line_no})
    missing = {"META", "PROJECTS", "VOTES"} - seen
    if missing:
        raise MissingSection(f"missing sections: {sorted(missing)}")
    ids = {p["id"] for p in projects}
    for vote in votes:
        for pid in vote["approved"]:
            if pid not in ids:
                raise DanglingProjectReference(vote["line"], pid)
    return PabulibInstance(meta=meta, projects=projects, votes=votes)


@dataclass
class ConvertedProfile:
    profile: ApprovalProfile
    project_ids: List[str]  # candidate index -> original project id


@dataclass
class RejectedInstance:
    reason: str


def pabulib_to_profile(
    instance: PabulibInstance, rng: random.Random, max_voters: int = 500
):
    """Approval profile from a parsed instance, or a rejection.

    Accepts only instances with more than 4 projects and mean ballot length at
    least 3 (computed after dropping empty ballots). Voters beyond max_voters
    are uniformly subsampled; project costs are discarded; unsupported
    projects are dropped with the candidate index remap recorded.
    """
    ballots = [v["approved"] for v in instance.votes if v["approved"]]
    if len(instance.projects) <= 4:
        return RejectedInstance(f"only {len(instance.projects)} projects")
    if not ballots:
        return RejectedInstance("no nonempty ballots")
    mean_len = sum(len(b) for b in ballots) / len(ballots)
    if mean_len < 3:
        return RejectedInstance(f"mean ballot length {mean_len:.2f} below 3")
    if len(ballots) > max_voters:
        keep = sorted(rng.sample(range(len(ballots)), max_voters))
        ballots = [ballots[i] for i in keep]
    supported_ids = sorted({pid for b in ballots for pid in set(b)})
    index = {pid: c for c, pid in enumerate(supported_ids)}
    approvals = [{index[pid] for pid in b} for b in ballots]
    profile = build_profile(len(ballots), approvals)
    return ConvertedProfile(profile=profile, project_ids=supported_ids)


def write_price_system(ps: PriceSystem) -> str:
    payments = [
        {"voter": i, "candidate": c, "value": format_rational(v)}
        for (i, c), v in sorted(ps.payments.items())
    ]
    doc = {
        "committee": sorted(ps.committee),
        "payments": payments,
        "residuals": [format_rational(r) for r in ps.residuals],
    }
    return json.dumps(doc, indent=2)


def read_price_system(text: str) -> PriceSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("document", f"invalid JSON: {exc}") from exc
    for key in ("committee", "payments", "residuals"):
        if key not in doc:
            raise ParseError("document", f"missing field {key!r}")
    payments = {}
    for idx, entry in enumerate(doc["payments"]):
        loc = f"payments[{idx}]"
        try:
            voter, cand = int(entry["voter"]), int(entry["candidate"])
            value = parse_rational(entry["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(loc, str(exc)) from exc
        payments[(voter, cand)] = value
    residuals = []
    for idx, text_value in enumerate(doc["residuals"]):
        try:
            residuals.append(parse_rational(text_value))
        except ValueError as exc:
            raise ParseError(f"residuals[{idx}]", str(exc)) from exc
    return PriceSystem(
        committee=frozenset(int(c) for c in doc["committee"]),
        payments=payments,
        residuals=residuals,
    )


def write_profile(
    profile: ApprovalProfile,
    points: Optional[dict] = None,
    radius: Optional[float] = None,
    seed: Optional[str] = None,
) -> str:
    doc = {
        "n": profile.n,
        "m": profile.m,
        "approvals": [sorted(a) for a in profile.approvals],
    }
    if profile.weights is not None:
        doc["weights"] = [format_rational(w) for w in profile.weights]
    if points is not None:
        doc["points"] = points
    if radius is not None:
        doc["radius"] = radius
    if seed is not None:
        doc["seed"] = seed
    return json.dumps(doc, indent=2)


def read_profile(text: str) -> Tuple[ApprovalProfile, dict]:
    """Profile plus the auxiliary metadata (points, radius, seed) if present."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("document", f"invalid JSON: {exc}") from exc
    for key in ("n", "m", "approvals"):
        if key not in doc:
            raise ParseError("document", f"missing field {key!r}")
    weights = None
    if "weights" in doc:
        weights = [parse_rational(w) for w in doc["weights"]]
    profile = build_profile(doc["n"], [set(a) for a in doc["approvals"]], weights)
    if profile.m != doc["m"]:
        raise ParseError("document", f"m={doc['m']} but approvals span {profile.m}")
    extra = {k: doc[k] for k in ("points", "radius", "seed") if k in doc}
    return profile, extra
