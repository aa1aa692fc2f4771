"""Ingest/persist the four relational record kinds and pull changed-file
contents out of a local git working copy.

Record files are UTF-8 JSON lines, one object per line, with the field names
of the originating issue-tracker/VCS tables (Issue_id, Commit_Hash, ...).
"""

from __future__ import annotations

import json
import re
import shutil
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

_HASH_RE = re.compile(r"^[0-9a-f]{40}$")


class CorpusError(Exception):
    pass


class UnlinkedIssueError(CorpusError):
    pass


class DanglingLinkError(CorpusError):
    pass


class IssueType(Enum):
    BUG = "Bug"
    NEW_FEATURE = "NewFeature"
    OTHER = "Other"

    @classmethod
    def parse(cls, raw: str) -> "IssueType":
        norm = raw.strip().replace(" ", "").replace("_", "").lower()
        if norm == "bug":
            return cls.BUG
        if norm == "newfeature":
            return cls.NEW_FEATURE
        return cls.OTHER


def parse_utc(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp like 2010-07-29T21:02:29Z into UTC."""
    dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class IssueRecord:
    issue_id: str
    issue_type: IssueType
    create_date: datetime
    fixed_date: datetime | None = None
    summary_raw: str = ""
    description_raw: str = ""
    summary_stemmed: str | None = None
    description_stemmed: str | None = None

    def validate(self) -> None:
        if not self.issue_id:
            raise ValueError("empty Issue_id")
        if self.fixed_date is not None and self.fixed_date < self.create_date:
            raise ValueError("Fixed_date precedes Create_date")
        if not self.summary_raw and not self.description_raw:
            raise ValueError("both Summary_raw and Description_raw empty")

    def to_record(self) -> dict:
        rec = {
            "Issue_id": self.issue_id,
            "Issue_type": self.issue_type.value,
            "Create_date": format_utc(self.create_date),
            "Fixed_date": format_utc(self.fixed_date) if self.fixed_date else None,
            "Summary_raw": self.summary_raw,
            "Description_raw": self.description_raw,
            "Summary_stemmed": self.summary_stemmed,
            "Description_stemmed": self.description_stemmed,
        }
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "IssueRecord":
        obj = cls(
            issue_id=str(rec["Issue_id"]),
            issue_type=IssueType.parse(str(rec.get("Issue_type", "Other"))),
            create_date=parse_utc(rec["Create_date"]),
            fixed_date=parse_utc(rec["Fixed_date"]) if rec.get("Fixed_date") else None,
            summary_raw=str(rec.get("Summary_raw", "") or ""),
            description_raw=str(rec.get("Description_raw", "") or ""),
            summary_stemmed=rec.get("Summary_stemmed"),
            description_stemmed=rec.get("Description_stemmed"),
        )
        obj.validate()
        return obj


@dataclass
class CommitRecord:
    commit_hash: str
    committed_date: datetime

    def validate(self) -> None:
        if not _HASH_RE.match(self.commit_hash):
            raise ValueError(f"hash length/format: {self.commit_hash!r} is not 40 lowercase hex")

    def to_record(self) -> dict:
        return {
            "Commit_Hash": self.commit_hash,
            "Committed_Date": format_utc(self.committed_date),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "CommitRecord":
        obj = cls(
            commit_hash=str(rec["Commit_Hash"]),
            committed_date=parse_utc(rec["Committed_Date"]),
        )
        obj.validate()
        return obj


@dataclass
class FileChange:
    commit_hash: str
    file_path: str
    sum_added_lines: int = 0
    sum_removed_lines: int = 0

    def validate(self) -> None:
        if not _HASH_RE.match(self.commit_hash):
            raise ValueError(f"hash length/format: {self.commit_hash!r}")
        if not self.file_path:
            raise ValueError("empty File_path")
        if self.sum_added_lines < 0 or self.sum_removed_lines < 0:
            raise ValueError("negative line counts")

    def to_record(self) -> dict:
        return {
            "Commit_Hash": self.commit_hash,
            "File_path": self.file_path,
            "Sum_added_lines": self.sum_added_lines,
            "Sum_removed_lines": self.sum_removed_lines,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "FileChange":
        obj = cls(
            commit_hash=str(rec["Commit_Hash"]),
            file_path=str(rec["File_path"]),
            sum_added_lines=int(rec.get("Sum_added_lines", 0)),
            sum_removed_lines=int(rec.get("Sum_removed_lines", 0)),
        )
        obj.validate()
        return obj


@dataclass
class ChangeLink:
    issue_id: str
    commit_hash: str

    def validate(self) -> None:
        if not self.issue_id:
            raise ValueError("empty Issue_id")
        if not _HASH_RE.match(self.commit_hash):
            raise ValueError(f"hash length/format: {self.commit_hash!r}")

    def to_record(self) -> dict:
        return {"Issue_id": self.issue_id, "Commit_Hash": self.commit_hash}

    @classmethod
    def from_record(cls, rec: dict) -> "ChangeLink":
        obj = cls(issue_id=str(rec["Issue_id"]), commit_hash=str(rec["Commit_Hash"]))
        obj.validate()
        return obj


class RecordKind(Enum):
    ISSUES = "issues"
    COMMITS = "commits"
    CHANGES = "changes"
    LINKS = "links"


_KIND_CLASSES = {
    RecordKind.ISSUES: IssueRecord,
    RecordKind.COMMITS: CommitRecord,
    RecordKind.CHANGES: FileChange,
    RecordKind.LINKS: ChangeLink,
}


@dataclass
class IngestResult:
    accepted: int = 0
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class ChangedFile:
    file_path: str
    content_at_commit: str | None
    content_at_parent: str | None


@dataclass
class CorpusStore:
    issues: dict[str, IssueRecord] = field(default_factory=dict)
    commits: dict[str, CommitRecord] = field(default_factory=dict)
    changes: dict[tuple[str, str], FileChange] = field(default_factory=dict)
    links: list[ChangeLink] = field(default_factory=list)
    repo_path: Path | None = None
    source_extensions: tuple[str, ...] = (".java",)

    # -- ingest -------------------------------------------------------------

    def ingest_records(self, path: str | Path, kind: RecordKind) -> IngestResult:
        """Load one JSON-lines record file; malformed lines and duplicate keys
        are reported per-line and skipped (first occurrence wins)."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"unreadable record file {path}: {exc}") from exc
        result = IngestResult()
        cls = _KIND_CLASSES[kind]
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if isinstance(rec, dict) and "_header" in rec:
                    continue
                obj = cls.from_record(rec)
            except (ValueError, KeyError, TypeError) as exc:
                result.diagnostics.append(f"{path.name}:{lineno}: {exc}")
                continue
            if not self._insert(kind, obj):
                result.diagnostics.append(f"{path.name}:{lineno}: duplicate key, first occurrence wins")
                continue
            result.accepted += 1
        return result

    def _insert(self, kind: RecordKind, obj) -> bool:
        if kind is RecordKind.ISSUES:
            if obj.issue_id in self.issues:
                return False
            self.issues[obj.issue_id] = obj
        elif kind is RecordKind.COMMITS:
            if obj.commit_hash in self.commits:
                return False
            self.commits[obj.commit_hash] = obj
        elif kind is RecordKind.CHANGES:
            key = (obj.commit_hash, obj.file_path)
            if key in self.changes:
                return False
            self.changes[key] = obj
        else:
            if any(l.issue_id == obj.issue_id and l.commit_hash == obj.commit_hash
                   for l in self.links):
                return False
            self.links.append(obj)
        return True

    def export_records(self, out_dir: str | Path) -> dict[RecordKind, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths: dict[RecordKind, Path] = {}
        collections = {
            RecordKind.ISSUES: list(self.issues.values()),
            RecordKind.COMMITS: list(self.commits.values()),
            RecordKind.CHANGES: list(self.changes.values()),
            RecordKind.LINKS: list(self.links),
        }
        for kind, objs in collections.items():
            p = out_dir / f"{kind.value}.jsonl"
            with p.open("w", encoding="utf-8") as fh:
                for obj in objs:
                    fh.write(json.dumps(obj.to_record(), sort_keys=True) + "\n")
            paths[kind] = p
        return paths

    # -- queries ------------------------------------------------------------

    def check_integrity(self) -> list[str]:
        problems = []
        for link in self.links:
            if link.issue_id not in self.issues:
                problems.append(f"dangling link: unknown issue {link.issue_id}")
            if link.commit_hash not in self.commits:
                problems.append(f"dangling link: unknown commit {link.commit_hash}")
        return problems

    def resolve_fix_commit(self, issue_id: str) -> str:
        """The linked fix commit; with several links, the latest committed_date wins."""
        if issue_id not in self.issues:
            raise CorpusError(f"unknown issue {issue_id}")
        linked = [l.commit_hash for l in self.links if l.issue_id == issue_id]
        if not linked:
            raise UnlinkedIssueError(f"unlinked issue {issue_id}")
        dated = []
        for h in linked:
            commit = self.commits.get(h)
            if commit is None:
                raise DanglingLinkError(f"dangling link: issue {issue_id} -> unknown commit {h}")
            dated.append((commit.committed_date, h))
        return max(dated)[1]

    # -- git extraction -----------------------------------------------------

    def _git(self, *args: str, check: bool = True) -> subprocess.CompletedProcess:
        if self.repo_path is None:
            raise CorpusError("repo_path not configured")
        if shutil.which("git") is None:
            raise CorpusError(
                "git executable not found; install git or provide pre-scanned smell vectors"
            )
        proc = subprocess.run(
            ["git", "-C", str(self.repo_path), *args],
            capture_output=True, text=True,
        )
        if check and proc.returncode != 0:
            raise CorpusError(f"git {' '.join(args)} failed: {proc.stderr.strip()}")
        return proc

    def parent_of(self, commit_hash: str) -> str | None:
        """First parent, or None for a root commit."""
        proc = self._git("rev-list", "--parents", "-n", "1", commit_hash, check=False)
        if proc.returncode != 0:
            raise CorpusError(f"unknown commit hash {commit_hash}")
        parts = proc.stdout.split()
        return parts[1] if len(parts) > 1 else None

    def is_merge_commit(self, commit_hash: str) -> bool:
        proc = self._git("rev-list", "--parents", "-n", "1", commit_hash, check=False)
        if proc.returncode != 0:
            raise CorpusError(f"unknown commit hash {commit_hash}")
        return len(proc.stdout.split()) > 2

    def _show_file(self, commit_hash: str, path: str) -> str | None:
        proc = self._git("show", f"{commit_hash}:{path}", check=False)
        if proc.returncode != 0:
            return None
        return proc.stdout

    def changed_files_with_contents(self, commit_hash: str,
                                    diagnostics: list[str] | None = None) -> list[ChangedFile]:
        """Changed source files of a commit with contents at the commit and
        its first parent; renames surface as delete+create (no rename detection)."""
        parent = self.parent_of(commit_hash)
        if diagnostics is not None and self.is_merge_commit(commit_hash):
            diagnostics.append(f"merge commit {commit_hash}: first-parent diff only")
        if parent is not None:
            proc = self._git("diff", "--numstat", "--no-renames", parent, commit_hash)
        else:
            proc = self._git("diff-tree", "--root", "--numstat", "--no-renames",
                             "--no-commit-id", "-r", commit_hash)
        entries: list[ChangedFile] = []
        for line in proc.stdout.splitlines():
            parts = line.split("\t")
            if len(parts) != 3:
                continue
            path = parts[2]
            if not path.endswith(self.source_extensions):
                continue
            cur = self._show_file(commit_hash, path)
            prev = self._show_file(parent, path) if parent else None
            if cur is None and diagnostics is not None:
                diagnostics.append(f"{commit_hash}:{path}: no content at commit (deleted?)")
            entries.append(ChangedFile(path, cur, prev))
        entries.sort(key=lambda e: e.file_path)
        return entries
