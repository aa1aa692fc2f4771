"""Binary labeling of bug fixes: 1 when fixing the bug added at least one
smell to any changed source file (additions-only delta), else 0."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .corpus import CorpusStore, IssueType, UnlinkedIssueError, DanglingLinkError, CorpusError
from .smellscan import RuleThresholds, SmellVector, scan_source
from . import textprep


@dataclass
class SmellDelta:
    commit_hash: str
    file_path: str
    added_per_rule: tuple[int, ...]
    signed_sum: int  # raw sum of cur - prev, exported for audit

    @property
    def total_added(self) -> int:
        return sum(self.added_per_rule)


@dataclass
class LabeledSample:
    issue_id: str
    commit_hash: str
    text: str
    label: int
    total_added_smells: int
    raw_signed_delta: int = 0
    synthetic: bool = False

    def to_record(self) -> dict:
        return {
            "issue_id": self.issue_id,
            "commit_hash": self.commit_hash,
            "text": self.text,
            "label": self.label,
            "total_added_smells": self.total_added_smells,
            "raw_signed_delta": self.raw_signed_delta,
            "synthetic": self.synthetic,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "LabeledSample":
        return cls(
            issue_id=str(rec["issue_id"]),
            commit_hash=str(rec.get("commit_hash", "")),
            text=str(rec["text"]),
            label=int(rec["label"]),
            total_added_smells=int(rec.get("total_added_smells", 0)),
            raw_signed_delta=int(rec.get("raw_signed_delta", 0)),
            synthetic=bool(rec.get("synthetic", False)),
        )


def smell_delta(commit_hash: str, file_path: str,
                cur: SmellVector, prev: SmellVector | None) -> SmellDelta:
    """Per-rule clamped difference max(0, cur - prev); absent prev counts as all-zero."""
    prev_flags = prev.flags if prev is not None else (False,) * 16
    added = tuple(max(0, int(c) - int(p)) for c, p in zip(cur.flags, prev_flags))
    signed = sum(int(c) - int(p) for c, p in zip(cur.flags, prev_flags))
    return SmellDelta(commit_hash, file_path, added, signed)


def label_commit(deltas: list[SmellDelta]) -> tuple[int, list[str]]:
    """1 iff any smell was added across the commit's changed source files."""
    diagnostics = []
    if not deltas:
        diagnostics.append("no source files changed")
    total = sum(d.total_added for d in deltas)
    return (1 if total > 0 else 0), diagnostics


class SmellSource(Protocol):
    """Supplies (path, current vector, previous vector) triples for a commit."""

    def file_vectors(self, commit_hash: str,
                     diagnostics: list[str]) -> list[tuple[str, SmellVector, SmellVector | None]]:
        ...


@dataclass
class GitScanSource:
    """Scan changed file contents straight out of the repository."""

    store: CorpusStore
    thresholds: RuleThresholds = field(default_factory=RuleThresholds)

    def file_vectors(self, commit_hash, diagnostics):
        out = []
        for cf in self.store.changed_files_with_contents(commit_hash, diagnostics):
            if cf.content_at_commit is None:
                continue  # deleted file: nothing can have been added to it
            cur = scan_source(cf.content_at_commit, cf.file_path, self.thresholds)
            prev = None
            if cf.content_at_parent is not None:
                prev = scan_source(cf.content_at_parent, cf.file_path, self.thresholds)
            out.append((cf.file_path, cur, prev))
        return out


@dataclass
class VectorTableSource:
    """Pre-computed smell vectors keyed by (commit, path), e.g. from PMD runs.

    Previous-version vectors are looked up under the parent hash, taken from
    the per-row Parent_Hash field when present or from `parents`.
    """

    rows: dict[tuple[str, str], SmellVector]
    parents: dict[str, str | None] = field(default_factory=dict)
    changed_paths: dict[str, list[str]] | None = None

    def file_vectors(self, commit_hash, diagnostics):
        if self.changed_paths is not None:
            paths = self.changed_paths.get(commit_hash, [])
        else:
            paths = sorted(p for (h, p) in self.rows if h == commit_hash)
        parent = self.parents.get(commit_hash)
        out = []
        for path in paths:
            cur = self.rows.get((commit_hash, path))
            if cur is None:
                diagnostics.append(f"{commit_hash}:{path}: no smell vector, zero delta assumed")
                continue
            prev = self.rows.get((parent, path)) if parent else None
            out.append((path, cur, prev))
        return out


@dataclass
class DatasetStats:
    project: str
    total: int = 0
    class1: int = 0

    @property
    def class1_percent(self) -> float:
        return 100.0 * self.class1 / self.total if self.total else 0.0

    def to_record(self) -> dict:
        return {
            "project": self.project,
            "class1": self.class1,
            "total": self.total,
            "class1_percent": round(self.class1_percent, 1),
        }


@dataclass
class LabeledDataset:
    samples: list[LabeledSample]
    stats: DatasetStats
    skipped: list[str]
    diagnostics: list[str]


def _sample_text(issue) -> str:
    if issue.summary_stemmed or issue.description_stemmed:
        parts = [issue.summary_stemmed or "", issue.description_stemmed or ""]
    else:
        parts = [
            " ".join(textprep.preprocess(issue.summary_raw)),
            " ".join(textprep.preprocess(issue.description_raw)),
        ]
    return " ".join(p for p in parts if p).strip()


def build_labeled_dataset(store: CorpusStore, source: SmellSource,
                          project: str = "project") -> LabeledDataset:
    """One sample per Bug issue with a resolvable fix commit and nonempty text."""
    samples: list[LabeledSample] = []
    skipped: list[str] = []
    diagnostics: list[str] = []
    stats = DatasetStats(project=project)
    for issue_id in sorted(store.issues):
        issue = store.issues[issue_id]
        if issue.issue_type is not IssueType.BUG:
            skipped.append(f"{issue_id}: not a Bug issue")
            continue
        try:
            commit = store.resolve_fix_commit(issue_id)
        except (UnlinkedIssueError, DanglingLinkError) as exc:
            skipped.append(f"{issue_id}: {exc}")
            continue
        text = _sample_text(issue)
        if not text:
            skipped.append(f"{issue_id}: empty report text")
            continue
        try:
            vectors = source.file_vectors(commit, diagnostics)
        except CorpusError as exc:
            skipped.append(f"{issue_id}: {exc}")
            continue
        deltas = [smell_delta(commit, p, cur, prev) for p, cur, prev in vectors]
        label, diags = label_commit(deltas)
        diagnostics.extend(f"{issue_id}: {d}" for d in diags)
        samples.append(LabeledSample(
            issue_id=issue_id,
            commit_hash=commit,
            text=text,
            label=label,
            total_added_smells=sum(d.total_added for d in deltas),
            raw_signed_delta=sum(d.signed_sum for d in deltas),
        ))
        stats.total += 1
        stats.class1 += label
    return LabeledDataset(samples, stats, skipped, diagnostics)
