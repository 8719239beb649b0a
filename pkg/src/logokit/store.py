"""Transactional persistence of the whole entity graph plus media files.

The engine is a single SQLite file (``<root>/db``) holding one row per
entity as canonical JSON, with integrity rules (references, uniqueness,
attempt sequencing) enforced in code so errors can name the offending
entities.  Media files live beside it under ``<root>/assets/{sound,image}/``.

Concurrency contract: single writer, any number of readers.  All operations
take an internal lock and run as one SQLite transaction, so a killed process
never leaves a half-applied operation behind.
"""

from __future__ import annotations

import json
import os
import shutil
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterator, Optional

from .errors import (
    NameCollision,
    NotFound,
    ReferentialIntegrity,
    SourceMissing,
    StillReferenced,
    StoreOpenFailure,
    UniquenessViolation,
    ValidationFailed,
    WrongExtension,
)
from .jsonio import SEED_FILES, dumps_canonical, from_dict, normalized, to_dict
from .model import (
    AUDIO_EXTENSIONS,
    IMAGE_EXTENSIONS,
    AssetKind,
    Exercise,
    HomeworkAttemptRecord,
    Kind,
    MediaAsset,
    Violation,
    entity_references,
    kind_of,
    validate_attempt_record,
    validate_entity,
)

DATA_ROOT_ENV = "LOGOMON_DATA"
DEFAULT_DATA_ROOT = "logomon-data"


def default_data_root() -> Path:
    return Path(os.environ.get(DATA_ROOT_ENV) or DEFAULT_DATA_ROOT)


@dataclass(frozen=True)
class PartnerLink:
    """One paronym pair seen from a member word."""

    pair_id: int
    partner_word_id: int


class Store:
    """Entity store over a data root directory (``db`` file + asset tree)."""

    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else default_data_root()
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            for sub in ("sound", "image"):
                (self.root / "assets" / sub).mkdir(parents=True, exist_ok=True)
            self._db = sqlite3.connect(
                self.root / "db", check_same_thread=False, isolation_level=None
            )
        except (OSError, sqlite3.Error) as exc:
            raise StoreOpenFailure(f"cannot open store at {self.root}: {exc}") from exc
        self._lock = threading.RLock()
        self._txn_depth = 0
        self._db.execute("PRAGMA journal_mode=WAL")
        self._db.execute("PRAGMA synchronous=NORMAL")
        with self._txn():
            self._db.execute(
                "CREATE TABLE IF NOT EXISTS entities ("
                " kind TEXT NOT NULL, id INTEGER NOT NULL, data TEXT NOT NULL,"
                " PRIMARY KEY (kind, id))"
            )
            self._db.execute(
                "CREATE TABLE IF NOT EXISTS counters (kind TEXT PRIMARY KEY, next_id INTEGER NOT NULL)"
            )
            self._db.execute(
                "CREATE TABLE IF NOT EXISTS manifests ("
                " assignment_id INTEGER PRIMARY KEY, manifest BLOB NOT NULL, digest TEXT NOT NULL)"
            )

    # -- plumbing ----------------------------------------------------------

    def close(self) -> None:
        self._db.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    @contextmanager
    def _txn(self) -> Iterator[None]:
        """Reentrant transaction; the outermost level commits or rolls back."""
        with self._lock:
            name = f"sp{self._txn_depth}"
            self._db.execute(f"SAVEPOINT {name}")
            self._txn_depth += 1
            try:
                yield
            except BaseException:
                self._txn_depth -= 1
                self._db.execute(f"ROLLBACK TO {name}")
                self._db.execute(f"RELEASE {name}")
                raise
            else:
                self._txn_depth -= 1
                self._db.execute(f"RELEASE {name}")

    def transaction(self):
        """Public reentrant transaction scope for multi-operation writes."""
        return self._txn()

    def _alloc_id(self, kind: Kind) -> int:
        row = self._db.execute("SELECT next_id FROM counters WHERE kind=?", (kind.value,)).fetchone()
        allocated = row[0] if row else 1
        self._db.execute(
            "INSERT INTO counters (kind, next_id) VALUES (?, ?)"
            " ON CONFLICT(kind) DO UPDATE SET next_id=excluded.next_id",
            (kind.value, allocated + 1),
        )
        return allocated

    def _bump_counter(self, kind: Kind, used_id: int) -> None:
        row = self._db.execute("SELECT next_id FROM counters WHERE kind=?", (kind.value,)).fetchone()
        nxt = max(row[0] if row else 1, used_id + 1)
        self._db.execute(
            "INSERT INTO counters (kind, next_id) VALUES (?, ?)"
            " ON CONFLICT(kind) DO UPDATE SET next_id=excluded.next_id",
            (kind.value, nxt),
        )

    # -- core operations ----------------------------------------------------

    def lookup(self, kind: Kind, entity_id: int) -> Any | None:
        """Resolver protocol used by the domain validators."""
        return self.get_optional(kind, entity_id)

    def get_optional(self, kind: Kind, entity_id: int) -> Any | None:
        with self._lock:
            row = self._db.execute(
                "SELECT data FROM entities WHERE kind=? AND id=?", (kind.value, entity_id)
            ).fetchone()
        if row is None:
            return None
        return from_dict(kind, json.loads(row[0]))

    def get(self, kind: Kind, entity_id: int) -> Any:
        entity = self.get_optional(kind, entity_id)
        if entity is None:
            raise NotFound(f"{kind.value} {entity_id} not found", kind=kind.value, id=entity_id)
        return entity

    def list_all(self, kind: Kind, limit: Optional[int] = None, offset: int = 0) -> list[Any]:
        sql = "SELECT data FROM entities WHERE kind=? ORDER BY id"
        params: list[Any] = [kind.value]
        if limit is not None or offset:
            sql += " LIMIT ? OFFSET ?"
            params += [-1 if limit is None else limit, offset]
        with self._lock:
            rows = self._db.execute(sql, params).fetchall()
        return [from_dict(kind, json.loads(r[0])) for r in rows]

    def count(self, kind: Kind) -> int:
        with self._lock:
            (n,) = self._db.execute(
                "SELECT COUNT(*) FROM entities WHERE kind=?", (kind.value,)
            ).fetchone()
        return n

    def put(self, entity: Any) -> int:
        """Insert or overwrite one entity; returns its id.

        Validation order: self-pair shortcut, local field rules
        (ValidationFailed), dangling references (ReferentialIntegrity),
        relational rules (ValidationFailed), then store-wide constraints
        (UniquenessViolation / StillReferenced).
        """
        kind = kind_of(entity)
        with self._txn():
            candidate = normalized(entity)
            if kind is Kind.PARONYM and candidate.word_a_id == candidate.word_b_id:
                raise UniquenessViolation(
                    f"self-pair: a paronym pair needs two distinct words, got word "
                    f"{candidate.word_a_id} twice",
                    reason="self-pair",
                )
            local = validate_entity(candidate, resolver=None)
            if local:
                raise ValidationFailed(
                    f"invalid {kind.value}: " + "; ".join(v.message for v in local), violations=local
                )
            missing = [
                (ref_kind, ref_id)
                for _field, ref_kind, ref_id in entity_references(candidate)
                if self.get_optional(ref_kind, ref_id) is None
            ]
            if missing:
                names = ", ".join(f"{k.value}:{i}" for k, i in missing)
                raise ReferentialIntegrity(
                    f"{kind.value} references missing entities: {names}",
                    missing=[(k.value, i) for k, i in missing],
                )
            relational = validate_entity(candidate, resolver=self)
            if relational:
                raise ValidationFailed(
                    f"invalid {kind.value}: " + "; ".join(v.message for v in relational),
                    violations=relational,
                )
            self._check_store_rules(kind, candidate)
            if candidate.id is None:
                candidate = replace(candidate, id=self._alloc_id(kind))
            else:
                self._bump_counter(kind, candidate.id)
            self._db.execute(
                "INSERT INTO entities (kind, id, data) VALUES (?, ?, ?)"
                " ON CONFLICT(kind, id) DO UPDATE SET data=excluded.data",
                (kind.value, candidate.id, json.dumps(to_dict(candidate), ensure_ascii=False)),
            )
            return candidate.id

    def save(self, entity: Any) -> Any:
        """put() then read the stored (normalized, id-carrying) value back."""
        return self.get(kind_of(entity), self.put(entity))

    def delete(self, kind: Kind, entity_id: int) -> None:
        """Remove one entity; restrictive, never cascades to referrers."""
        unlink: Optional[Path] = None
        with self._txn():
            entity = self.get(kind, entity_id)
            referrers = self.referrers(kind, entity_id)
            if kind is Kind.ATTEMPT:
                # Deleting below the top attempt would leave an index gap.
                referrers += [
                    (Kind.ATTEMPT.value, other.id)
                    for other in self._attempts_like(entity)
                    if other.attempt_index > entity.attempt_index
                ]
            if kind is Kind.CONFIGURATION:
                # Shrinking the word list must not contradict recorded attempts.
                referrers += self._attempts_blocking_word_removal(entity.exercise_id)
            if referrers:
                names = ", ".join(f"{k}:{i}" for k, i in referrers)
                raise StillReferenced(
                    f"{kind.value} {entity_id} is still referenced by: {names}", referrers=referrers
                )
            self._db.execute(
                "DELETE FROM entities WHERE kind=? AND id=?", (kind.value, entity_id)
            )
            if kind is Kind.ASSIGNMENT:
                self._db.execute("DELETE FROM manifests WHERE assignment_id=?", (entity_id,))
            if kind is Kind.ASSET:
                unlink = self.asset_path(entity)
        if unlink is not None:
            unlink.unlink(missing_ok=True)

    def referrers(self, kind: Kind, entity_id: int) -> list[tuple[str, int]]:
        """All (kind, id) pairs of stored entities that reference the target."""
        out: list[tuple[str, int]] = []
        for other_kind in Kind:
            for other in self.list_all(other_kind):
                for _field, ref_kind, ref_id in entity_references(other):
                    if ref_kind is kind and ref_id == entity_id:
                        out.append((other_kind.value, other.id))
                        break
        return out

    # -- store-wide constraints ----------------------------------------------

    def _attempts_like(self, record: HomeworkAttemptRecord) -> list[HomeworkAttemptRecord]:
        return [
            a
            for a in self.list_all(Kind.ATTEMPT)
            if a.assignment_id == record.assignment_id and a.exercise_id == record.exercise_id
        ]

    def _attempts_blocking_word_removal(self, exercise_id: int) -> list[tuple[str, int]]:
        """Attempts whose wrong-word count would exceed the shrunken word list."""
        remaining = self.exercise_word_count(exercise_id) - 1
        return [
            (Kind.ATTEMPT.value, a.id)
            for a in self.list_all(Kind.ATTEMPT)
            if a.exercise_id == exercise_id and a.initially_wrong_words > remaining
        ]

    def exercise_word_count(self, exercise_id: int) -> int:
        return sum(1 for c in self.list_all(Kind.CONFIGURATION) if c.exercise_id == exercise_id)

    def _unique(self, kind: Kind, candidate: Any, key, label: str) -> None:
        mine = key(candidate)
        for other in self.list_all(kind):
            if other.id != candidate.id and key(other) == mine:
                raise UniquenessViolation(
                    f"{label} already used by {kind.value} {other.id}",
                    conflicting_id=other.id,
                )

    def _check_store_rules(self, kind: Kind, candidate: Any) -> None:
        if kind is Kind.ASSET:
            path = self.asset_path(candidate)
            if not path.is_file():
                raise ValidationFailed(
                    f"asset file missing under the managed tree: {path}",
                    violations=[Violation("filename", "file-missing", f"no file at {path}")],
                )
            self._unique(
                kind, candidate, lambda a: (a.kind, a.filename), f"filename {candidate.filename!r}"
            )
        elif kind is Kind.PARONYM:
            key = lambda p: frozenset((p.word_a_id, p.word_b_id))
            self._unique(
                kind,
                candidate,
                key,
                f"pair {{{candidate.word_a_id}, {candidate.word_b_id}}} (either orientation)",
            )
        elif kind in (Kind.EXERCISE_TYPE, Kind.EXERCISE_SUBTYPE):
            self._unique(kind, candidate, lambda t: t.name, f"name {candidate.name!r}")
        elif kind is Kind.SOUND:
            self._unique(kind, candidate, lambda s: s.label, f"label {candidate.label!r}")
        elif kind is Kind.ASSOCIATION:
            self._unique(
                kind,
                candidate,
                lambda a: (a.type_id, a.subtype_id, a.sound_id),
                f"association triple ({candidate.type_id}, {candidate.subtype_id}, {candidate.sound_id})",
            )
        elif kind is Kind.CONFIGURATION:
            self._unique(
                kind,
                candidate,
                lambda c: (c.exercise_id, c.word_id),
                f"configuration of exercise {candidate.exercise_id} for word {candidate.word_id}",
            )
            previous = (
                self.get_optional(kind, candidate.id) if candidate.id is not None else None
            )
            if previous is not None and previous.exercise_id != candidate.exercise_id:
                blocked = self._attempts_blocking_word_removal(previous.exercise_id)
                if blocked:
                    raise StillReferenced(
                        f"configuration {candidate.id} cannot leave exercise "
                        f"{previous.exercise_id}: recorded attempts depend on its word count",
                        referrers=blocked,
                    )
        elif kind is Kind.TEMPLATE:
            if candidate.id is not None and self.get_optional(kind, candidate.id) is not None:
                holders = [
                    (Kind.ASSIGNMENT.value, a.id)
                    for a in self.list_all(Kind.ASSIGNMENT)
                    if a.predefined_homework_id == candidate.id
                ]
                if holders:
                    raise StillReferenced(
                        f"template {candidate.id} is referenced by assignments and is immutable;"
                        " clone it instead",
                        referrers=holders,
                    )
        elif kind is Kind.ASSIGNMENT:
            if candidate.id is not None:
                previous = self.get_optional(kind, candidate.id)
                if previous is not None and previous.predefined_homework_id != candidate.predefined_homework_id:
                    attempts = [
                        (Kind.ATTEMPT.value, a.id)
                        for a in self.list_all(Kind.ATTEMPT)
                        if a.assignment_id == candidate.id
                    ]
                    if attempts:
                        raise StillReferenced(
                            f"assignment {candidate.id} has recorded attempts; its template cannot change",
                            referrers=attempts,
                        )
        elif kind is Kind.ATTEMPT:
            self._check_attempt_rules(candidate)

    def _check_attempt_rules(self, candidate: HomeworkAttemptRecord) -> None:
        assignment = self.get(Kind.ASSIGNMENT, candidate.assignment_id)
        template = self.get(Kind.TEMPLATE, assignment.predefined_homework_id)
        if candidate.exercise_id not in {item.exercise_id for item in template.exercise_items}:
            raise ValidationFailed(
                f"exercise {candidate.exercise_id} is not part of template "
                f"{template.id} of assignment {assignment.id}",
                violations=[
                    Violation("exerciseId", "exercise-not-in-template", "exercise not in the assignment's template")
                ],
            )
        bound = validate_attempt_record(candidate, self.exercise_word_count(candidate.exercise_id))
        if bound:
            raise ValidationFailed(
                "invalid attempt: " + "; ".join(v.message for v in bound), violations=bound
            )
        siblings = self._attempts_like(candidate)
        for other in siblings:
            if other.id != candidate.id and other.attempt_index == candidate.attempt_index:
                raise UniquenessViolation(
                    f"attempt {candidate.attempt_index} for (assignment {candidate.assignment_id},"
                    f" exercise {candidate.exercise_id}) already recorded as attempt row {other.id}",
                    conflicting_id=other.id,
                )
        existing = self.get_optional(Kind.ATTEMPT, candidate.id) if candidate.id is not None else None
        if existing is None:
            top = max((a.attempt_index for a in siblings), default=0)
            if candidate.attempt_index != top + 1:
                raise ValidationFailed(
                    f"attempt indices must be contiguous: next index for (assignment "
                    f"{candidate.assignment_id}, exercise {candidate.exercise_id}) is {top + 1},"
                    f" got {candidate.attempt_index}",
                    violations=[Violation("attemptIndex", "attempt-sequence-gap", "non-contiguous attempt index")],
                )
        elif existing.attempt_index != candidate.attempt_index:
            raise ValidationFailed(
                "stored attempts cannot change their index",
                violations=[Violation("attemptIndex", "attempt-index-immutable", "attemptIndex is immutable")],
            )

    # -- media assets ---------------------------------------------------------

    def asset_dir(self, kind: AssetKind) -> Path:
        return self.root / "assets" / kind.value

    def asset_path(self, asset: MediaAsset) -> Path:
        return self.asset_dir(asset.kind) / asset.filename

    def register_media_asset(self, kind: AssetKind, source: Path | str) -> MediaAsset:
        """Copy a file into the managed tree and persist its catalog row."""
        source = Path(source)
        if not source.is_file():
            raise SourceMissing(f"source file not found: {source}")
        allowed = AUDIO_EXTENSIONS if kind is AssetKind.SOUND else IMAGE_EXTENSIONS
        if not any(source.name.lower().endswith(ext) for ext in allowed):
            raise WrongExtension(
                f"{kind.value} assets must end in one of {sorted(allowed)}, got {source.name!r}"
            )
        destination = self.asset_dir(kind) / source.name
        with self._txn():
            existing = any(
                a.kind is kind and a.filename == source.name for a in self.list_all(Kind.ASSET)
            )
            if destination.exists() or existing:
                raise NameCollision(f"asset {source.name!r} already registered for {kind.value}")
            shutil.copyfile(source, destination)
            try:
                return self.save(MediaAsset(kind=kind, filename=source.name))
            except BaseException:
                destination.unlink(missing_ok=True)
                raise

    # -- queries ---------------------------------------------------------------

    def query_exercises(
        self,
        type_id: Optional[int] = None,
        subtype_id: Optional[int] = None,
        sound_id: Optional[int] = None,
        difficulty_min: Optional[int] = None,
        difficulty_max: Optional[int] = None,
    ) -> list[Exercise]:
        """Exercises whose association matches every present filter, ordered
        by (difficulty, title)."""
        matches = []
        for exercise in self.list_all(Kind.EXERCISE):
            if difficulty_min is not None and exercise.difficulty < difficulty_min:
                continue
            if difficulty_max is not None and exercise.difficulty > difficulty_max:
                continue
            if type_id is not None or subtype_id is not None or sound_id is not None:
                assoc = self.get_optional(Kind.ASSOCIATION, exercise.association_id)
                if assoc is None:
                    continue
                if type_id is not None and assoc.type_id != type_id:
                    continue
                if subtype_id is not None and assoc.subtype_id != subtype_id:
                    continue
                if sound_id is not None and assoc.sound_id != sound_id:
                    continue
            matches.append(exercise)
        matches.sort(key=lambda e: (e.difficulty, e.title, e.id))
        return matches

    def paronym_partner(self, word_id: int) -> list[PartnerLink]:
        """Every pair containing the word, with the other member, either orientation."""
        self.get(Kind.WORD, word_id)
        links = []
        for pair in self.list_all(Kind.PARONYM):
            if pair.word_a_id == word_id:
                links.append(PartnerLink(pair_id=pair.id, partner_word_id=pair.word_b_id))
            elif pair.word_b_id == word_id:
                links.append(PartnerLink(pair_id=pair.id, partner_word_id=pair.word_a_id))
        links.sort(key=lambda l: l.pair_id)
        return links

    # -- retained export manifests ----------------------------------------------

    def save_manifest(self, assignment_id: int, manifest: bytes, digest: str) -> None:
        with self._txn():
            self._db.execute(
                "INSERT INTO manifests (assignment_id, manifest, digest) VALUES (?, ?, ?)"
                " ON CONFLICT(assignment_id) DO UPDATE SET manifest=excluded.manifest,"
                " digest=excluded.digest",
                (assignment_id, manifest, digest),
            )

    def load_manifest(self, assignment_id: int) -> Optional[tuple[bytes, str]]:
        with self._lock:
            row = self._db.execute(
                "SELECT manifest, digest FROM manifests WHERE assignment_id=?", (assignment_id,)
            ).fetchone()
        return (bytes(row[0]), row[1]) if row else None

    # -- audit and seed files ------------------------------------------------------

    def audit(self) -> list[str]:
        """Full-graph integrity audit; empty list means the store is sound."""
        problems: list[str] = []
        seen_keys: dict[tuple, str] = {}

        def claim(key: tuple, owner: str) -> None:
            if key in seen_keys:
                problems.append(f"{owner}: duplicates {key[1:]} of {seen_keys[key]}")
            else:
                seen_keys[key] = owner

        for kind in Kind:
            for entity in self.list_all(kind):
                label = f"{kind.value} {entity.id}"
                for field, ref_kind, ref_id in entity_references(entity):
                    if self.get_optional(ref_kind, ref_id) is None:
                        problems.append(f"{label}: {field} dangles ({ref_kind.value} {ref_id})")
                for violation in validate_entity(entity, resolver=self):
                    problems.append(f"{label}: {violation.code} ({violation.message})")
        for asset in self.list_all(Kind.ASSET):
            if not self.asset_path(asset).is_file():
                problems.append(f"asset {asset.id}: file missing ({self.asset_path(asset)})")
            claim(("asset", asset.kind.value, asset.filename), f"asset {asset.id}")
        for pair in self.list_all(Kind.PARONYM):
            claim(("paronym", frozenset((pair.word_a_id, pair.word_b_id))), f"paronym {pair.id}")
        for kind in (Kind.EXERCISE_TYPE, Kind.EXERCISE_SUBTYPE):
            for t in self.list_all(kind):
                claim((kind.value, t.name), f"{kind.value} {t.id}")
        for sound in self.list_all(Kind.SOUND):
            claim(("sound", sound.label), f"sound {sound.id}")
        for assoc in self.list_all(Kind.ASSOCIATION):
            claim(
                ("association", assoc.type_id, assoc.subtype_id, assoc.sound_id),
                f"association {assoc.id}",
            )
        for config in self.list_all(Kind.CONFIGURATION):
            claim(("configuration", config.exercise_id, config.word_id), f"configuration {config.id}")

        by_pair: dict[tuple[int, int], list[HomeworkAttemptRecord]] = {}
        for attempt in self.list_all(Kind.ATTEMPT):
            by_pair.setdefault((attempt.assignment_id, attempt.exercise_id), []).append(attempt)
        for (assignment_id, exercise_id), rows in sorted(by_pair.items()):
            indices = sorted(r.attempt_index for r in rows)
            if indices != list(range(1, len(indices) + 1)):
                problems.append(
                    f"attempts for (assignment {assignment_id}, exercise {exercise_id}):"
                    f" indices {indices} are not 1..{len(indices)}"
                )
            assignment = self.get_optional(Kind.ASSIGNMENT, assignment_id)
            template = (
                self.get_optional(Kind.TEMPLATE, assignment.predefined_homework_id)
                if assignment
                else None
            )
            if template and exercise_id not in {i.exercise_id for i in template.exercise_items}:
                problems.append(
                    f"attempts for (assignment {assignment_id}, exercise {exercise_id}):"
                    f" exercise not in template {template.id}"
                )
            word_count = self.exercise_word_count(exercise_id)
            for row in rows:
                for violation in validate_attempt_record(row, word_count):
                    problems.append(f"attempt {row.id}: {violation.code} ({violation.message})")
        return problems

    def export_seed(self, directory: Path | str) -> list[Path]:
        """Write one JSON array per entity kind; returns the files written."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        with self._lock:
            for kind, filename in SEED_FILES:
                rows = [to_dict(e) for e in self.list_all(kind)]
                path = directory / filename
                path.write_text(dumps_canonical(rows), encoding="utf-8")
                written.append(path)
        return written

    def import_seed(self, directory: Path | str) -> dict[str, int]:
        """Load seed files into the store, all-or-nothing.

        Every row must carry an explicit id so cross-references line up.
        The whole import runs as one transaction; any failure rolls back
        every row.
        """
        directory = Path(directory)
        batches: list[tuple[Kind, Any]] = []
        for kind, filename in SEED_FILES:
            path = directory / filename
            if not path.exists():
                continue
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ValidationFailed(f"unreadable seed file {path}: {exc}") from exc
            if not isinstance(data, list):
                raise ValidationFailed(f"seed file {filename} must hold a JSON array")
            for i, raw in enumerate(data):
                entity = from_dict(kind, raw)
                if entity.id is None:
                    raise ValidationFailed(f"{filename}[{i}]: seed rows must carry an id")
                batches.append((kind, entity))
        counts: dict[str, int] = {}
        attempts = sorted(
            (e for k, e in batches if k is Kind.ATTEMPT),
            key=lambda a: (a.assignment_id, a.exercise_id, a.attempt_index),
        )
        ordered = [(k, e) for k, e in batches if k is not Kind.ATTEMPT]
        ordered += [(Kind.ATTEMPT, a) for a in attempts]
        with self._txn():
            for kind, entity in ordered:
                self.put(entity)
                counts[kind.value] = counts.get(kind.value, 0) + 1
        return counts
