"""Offline device bundles: checksummed export of one assignment, a simulated
device that plays it, and validated import of the returned results.

A bundle is a plain zip with ``manifest.json`` at the root and the media
files under ``assets/sound/`` and ``assets/image/``.  Entries are written in
lexicographic order with zeroed timestamps so identical store state yields
an identical archive (bar the exportedAt stamp inside the manifest).  The
manifest's SHA-256 is retained in the store and every result bundle must
carry it back, which binds results to one specific export.
"""

from __future__ import annotations

import hashlib
import json
import re
import zipfile
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from random import Random
from typing import Optional

from .errors import (
    AlreadyReported,
    AssetMissing,
    DigestMismatch,
    MalformedBundle,
    UnknownAssignment,
    ValidationFailed,
)
from .homework import ExerciseOutcome, ReportRecord, ingest_report
from .jsonio import ObjectReader, dumps_canonical
from .model import Kind, indefinite_article_for
from .store import Store

BUNDLE_FORMAT_VERSION = 1
_HEX64 = re.compile(r"[0-9a-f]{64}\Z")


@dataclass(frozen=True)
class ManifestAsset:
    relative_path: str
    digest: str


@dataclass(frozen=True)
class ManifestConfiguration:
    word_id: int
    text: str
    sound_file: str
    image_file: str
    param1: int
    param2: int
    param3: int
    article_token: Optional[str] = None
    partner_word_id: Optional[int] = None


@dataclass(frozen=True)
class ManifestExercise:
    exercise_id: int
    application_name: str
    title: str
    difficulty: int
    instructions_text: str
    success_threshold_percent: int
    configuration: tuple[ManifestConfiguration, ...]


@dataclass(frozen=True)
class BundleManifest:
    format_version: int
    assignment_id: int
    child_id: int
    exported_at: str
    repetitions_per_day: int
    exercises: tuple[ManifestExercise, ...]
    assets: tuple[ManifestAsset, ...]


@dataclass(frozen=True)
class ResultBundle:
    format_version: int
    assignment_id: int
    report_date: date
    manifest_digest: str
    records: tuple[ReportRecord, ...]


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def round_half_up_percent(numerator: int, denominator: int) -> int:
    """round(100 * numerator / denominator) with exact half-up tie breaking."""
    return (2 * 100 * numerator + denominator) // (2 * denominator)


def write_deterministic_zip(path: Path, entries: dict[str, bytes]) -> Path:
    """Zip with sorted entries, zeroed timestamps and fixed attributes."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, "w") as archive:
        for name in sorted(entries):
            info = zipfile.ZipInfo(filename=name, date_time=(1980, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            info.create_system = 3
            info.external_attr = 0o644 << 16
            archive.writestr(info, entries[name], compresslevel=6)
    return path


def _resolve_destination(destination: Path | str, default_name: str) -> Path:
    destination = Path(destination)
    if destination.is_dir():
        return destination / default_name
    return destination


# ---------------------------------------------------------------------------
# Export


def manifest_payload(manifest: BundleManifest) -> dict:
    exercises = []
    for exercise in manifest.exercises:
        configuration = []
        for c in exercise.configuration:
            entry: dict = {"wordId": c.word_id, "text": c.text}
            if c.article_token is not None:
                entry["articleToken"] = c.article_token
            entry["soundFile"] = c.sound_file
            entry["imageFile"] = c.image_file
            if c.partner_word_id is not None:
                entry["partnerWordId"] = c.partner_word_id
            entry.update({"param1": c.param1, "param2": c.param2, "param3": c.param3})
            configuration.append(entry)
        exercises.append(
            {
                "exerciseId": exercise.exercise_id,
                "applicationName": exercise.application_name,
                "title": exercise.title,
                "difficulty": exercise.difficulty,
                "instructionsText": exercise.instructions_text,
                "successThresholdPercent": exercise.success_threshold_percent,
                "configuration": configuration,
            }
        )
    return {
        "formatVersion": manifest.format_version,
        "assignmentId": manifest.assignment_id,
        "childId": manifest.child_id,
        "exportedAt": manifest.exported_at,
        "repetitionsPerDay": manifest.repetitions_per_day,
        "exercises": exercises,
        "assets": [
            {"relativePath": a.relative_path, "digest": a.digest} for a in manifest.assets
        ],
    }


def build_manifest(
    store: Store, assignment_id: int, exported_at: Optional[datetime] = None
) -> tuple[BundleManifest, dict[str, bytes]]:
    """Assemble the manifest and the asset payloads for one assignment."""
    assignment = store.get(Kind.ASSIGNMENT, assignment_id)
    if assignment.report_date is not None:
        raise AlreadyReported(f"assignment {assignment_id} is already reported; nothing to send out")
    template = store.get(Kind.TEMPLATE, assignment.predefined_homework_id)
    stamp = (exported_at or datetime.now(timezone.utc)).isoformat(timespec="seconds")

    asset_data: dict[str, bytes] = {}

    def load_asset(asset_id: int) -> tuple[str, str]:
        asset = store.get(Kind.ASSET, asset_id)
        relative = f"assets/{asset.kind.value}/{asset.filename}"
        if relative not in asset_data:
            path = store.asset_path(asset)
            try:
                asset_data[relative] = path.read_bytes()
            except OSError:
                raise AssetMissing(f"asset file missing: {asset.filename}", filename=asset.filename)
        return asset.filename, relative

    exercises = []
    for item in template.exercise_items:
        exercise = store.get(Kind.EXERCISE, item.exercise_id)
        association = store.get(Kind.ASSOCIATION, exercise.association_id)
        subtype = store.get(Kind.EXERCISE_SUBTYPE, association.subtype_id)
        ex_type = store.get(Kind.EXERCISE_TYPE, association.type_id)
        instructions = store.get(Kind.INSTRUCTIONS, exercise.instructions_id)
        configuration = []
        for config in store.list_all(Kind.CONFIGURATION):
            if config.exercise_id != exercise.id:
                continue
            word = store.get(Kind.WORD, config.word_id)
            sound_file, _ = load_asset(word.sound_asset_id)
            image_file, _ = load_asset(word.image_asset_id)
            partner = None
            if config.paronym_id is not None:
                pair = store.get(Kind.PARONYM, config.paronym_id)
                partner = pair.word_b_id if pair.word_a_id == word.id else pair.word_a_id
            configuration.append(
                ManifestConfiguration(
                    word_id=word.id,
                    text=word.text,
                    article_token=indefinite_article_for(word),
                    sound_file=sound_file,
                    image_file=image_file,
                    partner_word_id=partner,
                    param1=config.param1,
                    param2=config.param2,
                    param3=config.param3,
                )
            )
        exercises.append(
            ManifestExercise(
                exercise_id=exercise.id,
                # The subtype's application wins when both levels name one.
                application_name=subtype.application_name or ex_type.application_name,
                title=exercise.title,
                difficulty=exercise.difficulty,
                instructions_text=instructions.text,
                success_threshold_percent=item.success_threshold_percent,
                configuration=tuple(configuration),
            )
        )
    assets = tuple(
        ManifestAsset(relative_path=rel, digest=sha256_hex(data))
        for rel, data in sorted(asset_data.items())
    )
    manifest = BundleManifest(
        format_version=BUNDLE_FORMAT_VERSION,
        assignment_id=assignment_id,
        child_id=assignment.child_id,
        exported_at=stamp,
        repetitions_per_day=template.repetitions_per_day,
        exercises=tuple(exercises),
        assets=assets,
    )
    return manifest, asset_data


def export_bundle(
    store: Store,
    assignment_id: int,
    destination: Path | str,
    exported_at: Optional[datetime] = None,
) -> Path:
    """Write the assignment's bundle archive; retains the manifest in the store."""
    manifest, asset_data = build_manifest(store, assignment_id, exported_at)
    manifest_bytes = dumps_canonical(manifest_payload(manifest)).encode("utf-8")
    store.save_manifest(assignment_id, manifest_bytes, sha256_hex(manifest_bytes))
    entries = {"manifest.json": manifest_bytes, **asset_data}
    path = _resolve_destination(destination, f"assignment-{assignment_id}-bundle.zip")
    return write_deterministic_zip(path, entries)


# ---------------------------------------------------------------------------
# Bundle parsing


def _read_zip_entry(path: Path | str, name: str) -> bytes:
    try:
        with zipfile.ZipFile(path) as archive:
            return archive.read(name)
    except (OSError, KeyError, zipfile.BadZipFile) as exc:
        raise MalformedBundle(f"cannot read {name} from {path}: {exc}") from exc


def parse_manifest(data: bytes) -> BundleManifest:
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedBundle(f"manifest.json is not valid JSON: {exc}") from exc
    try:
        r = ObjectReader(obj)
        format_version = r.int_("formatVersion")
        assignment_id = r.int_("assignmentId")
        child_id = r.int_("childId")
        exported_at = r.str_("exportedAt")
        repetitions = r.int_("repetitionsPerDay")
        exercises = []
        for i, raw in enumerate(r.list_("exercises")):
            sub = ObjectReader(raw, f"exercises[{i}]")
            configuration = []
            for j, raw_config in enumerate(sub.list_("configuration")):
                cr = ObjectReader(raw_config, f"exercises[{i}].configuration[{j}]")
                configuration.append(
                    ManifestConfiguration(
                        word_id=cr.int_("wordId", default=0) or 0,
                        text=cr.str_("text", default="") or "",
                        article_token=cr.str_("articleToken", required=False),
                        sound_file=cr.str_("soundFile", default="") or "",
                        image_file=cr.str_("imageFile", default="") or "",
                        partner_word_id=cr.int_("partnerWordId", required=False),
                        param1=cr.int_("param1", default=0) or 0,
                        param2=cr.int_("param2", default=0) or 0,
                        param3=cr.int_("param3", default=0) or 0,
                    )
                )
                cr.reject_unknown()
                r.violations.extend(cr.violations)
            exercises.append(
                ManifestExercise(
                    exercise_id=sub.int_("exerciseId", default=0) or 0,
                    application_name=sub.str_("applicationName", default="") or "",
                    title=sub.str_("title", default="") or "",
                    difficulty=sub.int_("difficulty", default=0) or 0,
                    instructions_text=sub.str_("instructionsText", default="") or "",
                    success_threshold_percent=sub.int_("successThresholdPercent", default=0) or 0,
                    configuration=tuple(configuration),
                )
            )
            sub.reject_unknown()
            r.violations.extend(sub.violations)
        assets = []
        for i, raw in enumerate(r.list_("assets")):
            sub = ObjectReader(raw, f"assets[{i}]")
            assets.append(
                ManifestAsset(
                    relative_path=sub.str_("relativePath", default="") or "",
                    digest=sub.str_("digest", default="") or "",
                )
            )
            sub.reject_unknown()
            r.violations.extend(sub.violations)
        r.done("bundle manifest")
    except ValidationFailed as exc:
        raise MalformedBundle(f"bad bundle manifest: {exc.message}") from exc
    if format_version != BUNDLE_FORMAT_VERSION:
        raise MalformedBundle(f"unsupported bundle formatVersion {format_version}")

    problems = []
    known = {a.relative_path for a in assets}
    for asset in assets:
        if not _HEX64.match(asset.digest):
            problems.append(f"{asset.relative_path}: digest must be 64 lowercase hex chars")
    ids = [e.exercise_id for e in exercises]
    if len(set(ids)) != len(ids):
        problems.append("exercise ids must be distinct")
    for exercise in exercises:
        for config in exercise.configuration:
            if f"assets/sound/{config.sound_file}" not in known:
                problems.append(f"soundFile {config.sound_file!r} not among bundle assets")
            if f"assets/image/{config.image_file}" not in known:
                problems.append(f"imageFile {config.image_file!r} not among bundle assets")
    if problems:
        raise MalformedBundle("bad bundle manifest: " + "; ".join(problems))
    return BundleManifest(
        format_version=format_version,
        assignment_id=assignment_id,
        child_id=child_id,
        exported_at=exported_at,
        repetitions_per_day=repetitions,
        exercises=tuple(exercises),
        assets=tuple(assets),
    )


def read_bundle_manifest(bundle_path: Path | str) -> tuple[BundleManifest, bytes]:
    data = _read_zip_entry(bundle_path, "manifest.json")
    return parse_manifest(data), data


# ---------------------------------------------------------------------------
# Simulated device


def simulate_device(
    bundle_path: Path | str,
    error_rate: float = 0.0,
    seed: int = 0,
    report_date: Optional[date] = None,
) -> ResultBundle:
    """Pseudo-random stand-in for the handheld exercise applications.

    Plays every exercise repetitionsPerDay times; each configured word is
    initially wrong with probability ``error_rate``.  Deterministic for a
    fixed (bundle, error_rate, seed).  The report date defaults to the
    bundle's export date.
    """
    if not 0.0 <= error_rate <= 1.0:
        raise ValueError("error_rate must be within 0..1")
    manifest, manifest_bytes = read_bundle_manifest(bundle_path)
    if report_date is None:
        try:
            report_date = datetime.fromisoformat(manifest.exported_at).date()
        except ValueError as exc:
            raise MalformedBundle(f"bad exportedAt stamp: {manifest.exported_at!r}") from exc
    rng = Random(seed)
    records = []
    for exercise in manifest.exercises:
        total = len(exercise.configuration)
        for attempt in range(1, manifest.repetitions_per_day + 1):
            wrong = sum(1 for _ in range(total) if rng.random() < error_rate)
            achieved = 100 if total == 0 else round_half_up_percent(total - wrong, total)
            records.append(
                ReportRecord(
                    exercise_id=exercise.exercise_id,
                    attempt_index=attempt,
                    achieved_percent=achieved,
                    initially_wrong_words=wrong,
                )
            )
    return ResultBundle(
        format_version=BUNDLE_FORMAT_VERSION,
        assignment_id=manifest.assignment_id,
        report_date=report_date,
        manifest_digest=sha256_hex(manifest_bytes),
        records=tuple(records),
    )


def result_bundle_payload(result: ResultBundle) -> dict:
    return {
        "formatVersion": result.format_version,
        "assignmentId": result.assignment_id,
        "reportDate": result.report_date.isoformat(),
        "manifestDigest": result.manifest_digest,
        "records": [
            {
                "exerciseId": r.exercise_id,
                "attemptIndex": r.attempt_index,
                "achievedPercent": r.achieved_percent,
                "initiallyWrongWords": r.initially_wrong_words,
            }
            for r in result.records
        ],
    }


def result_bundle_bytes(result: ResultBundle) -> bytes:
    return dumps_canonical(result_bundle_payload(result)).encode("utf-8")


def write_result_bundle(result: ResultBundle, destination: Path | str) -> Path:
    path = _resolve_destination(destination, f"assignment-{result.assignment_id}-results.zip")
    return write_deterministic_zip(path, {"results.json": result_bundle_bytes(result)})


def parse_result_bundle(data: bytes) -> ResultBundle:
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedBundle(f"results.json is not valid JSON: {exc}") from exc
    try:
        r = ObjectReader(obj)
        format_version = r.int_("formatVersion")
        assignment_id = r.int_("assignmentId")
        report_date = r.date_("reportDate")
        digest = r.str_("manifestDigest", default="") or ""
        records = []
        for i, raw in enumerate(r.list_("records")):
            sub = ObjectReader(raw, f"records[{i}]")
            records.append(
                ReportRecord(
                    exercise_id=sub.int_("exerciseId", default=0) or 0,
                    attempt_index=sub.int_("attemptIndex", default=0) or 0,
                    achieved_percent=_or_minus_one(sub.int_("achievedPercent", default=-1)),
                    initially_wrong_words=_or_minus_one(sub.int_("initiallyWrongWords", default=-1)),
                )
            )
            sub.reject_unknown()
            r.violations.extend(sub.violations)
        r.done("result bundle")
    except ValidationFailed as exc:
        raise MalformedBundle(f"bad result bundle: {exc.message}") from exc
    if format_version != BUNDLE_FORMAT_VERSION:
        raise MalformedBundle(f"unsupported result formatVersion {format_version}")
    if not _HEX64.match(digest):
        raise MalformedBundle("manifestDigest must be 64 lowercase hex chars")
    assert report_date is not None
    return ResultBundle(
        format_version=format_version,
        assignment_id=assignment_id,
        report_date=report_date,
        manifest_digest=digest,
        records=tuple(records),
    )


def read_result_bundle(bundle_path: Path | str) -> ResultBundle:
    return parse_result_bundle(_read_zip_entry(bundle_path, "results.json"))


def _or_minus_one(value: Optional[int]) -> int:
    return -1 if value is None else value


# ---------------------------------------------------------------------------
# Import


def import_result_bundle(store: Store, bundle_path: Path | str) -> list[ExerciseOutcome]:
    """Verify a result bundle against the retained export and ingest it.

    Verification order: known assignment, manifest digest binding, then the
    single-report rule; a repeated import is therefore rejected with
    AlreadyReported and changes nothing.
    """
    result = read_result_bundle(bundle_path)
    if store.get_optional(Kind.ASSIGNMENT, result.assignment_id) is None:
        raise UnknownAssignment(f"assignment {result.assignment_id} is not in this store")
    retained = store.load_manifest(result.assignment_id)
    if retained is None:
        raise DigestMismatch(
            f"no exported manifest on record for assignment {result.assignment_id}"
        )
    _manifest_bytes, digest = retained
    if digest != result.manifest_digest:
        raise DigestMismatch(
            "result bundle was produced from a different export of assignment "
            f"{result.assignment_id}"
        )
    return ingest_report(store, result.assignment_id, result.report_date, list(result.records))
