"""JSON codecs for the seed/export files and the HTTP wire format.

Field names are the semantic camelCase names used across the whole artifact
(see docs/schema.md for the mapping to the legacy database columns).  Parsing
is strict: unknown keys and wrong types are rejected with field-level
violations, never silently coerced.
"""

from __future__ import annotations

import json
import unicodedata
from datetime import date
from enum import Enum
from typing import Any, Optional

from .errors import ValidationFailed
from .model import (
    Association,
    AssetKind,
    Child,
    Exercise,
    ExerciseConfiguration,
    ExerciseSubtype,
    ExerciseType,
    Gender,
    HomeworkAssignment,
    HomeworkAttemptRecord,
    Instructions,
    Kind,
    LegacyRef,
    LegacyTable,
    MediaAsset,
    ParonymPair,
    PartOfSpeech,
    PredefinedHomework,
    TargetSound,
    TemplateItem,
    Violation,
    Word,
    kind_of,
)

# Seed/export file per kind, in dependency order (parents before referrers).
SEED_FILES: list[tuple[Kind, str]] = [
    (Kind.ASSET, "assets.json"),
    (Kind.EXERCISE_TYPE, "exercise-types.json"),
    (Kind.EXERCISE_SUBTYPE, "exercise-subtypes.json"),
    (Kind.SOUND, "sounds.json"),
    (Kind.ASSOCIATION, "associations.json"),
    (Kind.INSTRUCTIONS, "instructions.json"),
    (Kind.WORD, "words.json"),
    (Kind.PARONYM, "paronyms.json"),
    (Kind.EXERCISE, "exercises.json"),
    (Kind.CONFIGURATION, "configurations.json"),
    (Kind.TEMPLATE, "templates.json"),
    (Kind.CHILD, "children.json"),
    (Kind.ASSIGNMENT, "assignments.json"),
    (Kind.ATTEMPT, "attempts.json"),
]


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def dumps_canonical(value: Any) -> str:
    """Stable human-readable JSON: UTF-8 verbatim, 2-space indent, newline-terminated."""
    return json.dumps(value, ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def _iso(d: Optional[date]) -> Optional[str]:
    return d.isoformat() if d is not None else None


def _or_default(value: Optional[int], default: int) -> int:
    return default if value is None else value


def to_dict(entity: Any) -> dict[str, Any]:
    """Entity -> wire/seed JSON object (camelCase keys, dates ISO-8601)."""
    if isinstance(entity, MediaAsset):
        return {"id": entity.id, "kind": entity.kind.value, "filename": entity.filename}
    if isinstance(entity, Word):
        return {
            "id": entity.id,
            "text": entity.text,
            "speakerFamilyName": entity.speaker_family_name,
            "speakerGivenName": entity.speaker_given_name,
            "isTherapistRecording": entity.is_therapist_recording,
            "partOfSpeech": entity.part_of_speech.value,
            "partOfSpeechLabel": entity.part_of_speech_label,
            "gender": entity.gender.value if entity.gender else None,
            "articleCompatible": entity.article_compatible,
            "soundAssetId": entity.sound_asset_id,
            "imageAssetId": entity.image_asset_id,
        }
    if isinstance(entity, ParonymPair):
        return {"id": entity.id, "wordAId": entity.word_a_id, "wordBId": entity.word_b_id}
    if isinstance(entity, (ExerciseType, ExerciseSubtype)):
        return {"id": entity.id, "name": entity.name, "applicationName": entity.application_name}
    if isinstance(entity, TargetSound):
        return {"id": entity.id, "label": entity.label}
    if isinstance(entity, Association):
        return {
            "id": entity.id,
            "typeId": entity.type_id,
            "subtypeId": entity.subtype_id,
            "soundId": entity.sound_id,
        }
    if isinstance(entity, Instructions):
        return {"id": entity.id, "text": entity.text}
    if isinstance(entity, Exercise):
        return {
            "id": entity.id,
            "title": entity.title,
            "difficulty": entity.difficulty,
            "associationId": entity.association_id,
            "instructionsId": entity.instructions_id,
        }
    if isinstance(entity, ExerciseConfiguration):
        return {
            "id": entity.id,
            "exerciseId": entity.exercise_id,
            "wordId": entity.word_id,
            "paronymId": entity.paronym_id,
            "param1": entity.param1,
            "param2": entity.param2,
            "param3": entity.param3,
        }
    if isinstance(entity, PredefinedHomework):
        return {
            "id": entity.id,
            "description": entity.description,
            "repetitionsPerDay": entity.repetitions_per_day,
            "exerciseItems": [
                {"exerciseId": item.exercise_id, "successThresholdPercent": item.success_threshold_percent}
                for item in entity.exercise_items
            ],
            "deficiencyRefs": [{"table": r.table.value, "id": r.id} for r in entity.deficiency_refs],
            "testRefs": [{"table": r.table.value, "id": r.id} for r in entity.test_refs],
        }
    if isinstance(entity, Child):
        return {"id": entity.id, "familyName": entity.family_name, "givenName": entity.given_name}
    if isinstance(entity, HomeworkAssignment):
        return {
            "id": entity.id,
            "childId": entity.child_id,
            "predefinedHomeworkId": entity.predefined_homework_id,
            "assignedDate": _iso(entity.assigned_date),
            "deadlineDays": entity.deadline_days,
            "reportDate": _iso(entity.report_date),
        }
    if isinstance(entity, HomeworkAttemptRecord):
        return {
            "id": entity.id,
            "assignmentId": entity.assignment_id,
            "exerciseId": entity.exercise_id,
            "attemptIndex": entity.attempt_index,
            "achievedPercent": entity.achieved_percent,
            "initiallyWrongWords": entity.initially_wrong_words,
        }
    raise TypeError(f"not a domain entity: {type(entity).__name__}")


class ObjectReader:
    """Strict reader over one JSON object; collects violations instead of raising early."""

    def __init__(self, data: Any, context: str = ""):
        self.context = context
        self.violations: list[Violation] = []
        if isinstance(data, dict):
            self.data = data
        else:
            self.data = {}
            self.violations.append(
                Violation(context or "$", "not-an-object", f"expected a JSON object, got {type(data).__name__}")
            )
        self._seen: set[str] = set()

    def _label(self, key: str) -> str:
        return f"{self.context}.{key}" if self.context else key

    def _get(self, key: str, required: bool, default: Any) -> tuple[bool, Any]:
        self._seen.add(key)
        if key not in self.data or self.data[key] is None:
            if required and key not in self.data:
                self.violations.append(Violation(self._label(key), "missing-field", f"{key} is required"))
            return False, default
        return True, self.data[key]

    def int_(self, key: str, required: bool = True, default: Optional[int] = None) -> Optional[int]:
        present, value = self._get(key, required, default)
        if not present:
            if required and key in self.data:  # explicit null
                self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be an integer"))
            return default
        if isinstance(value, bool) or not isinstance(value, int):
            self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be an integer"))
            return default
        return value

    def str_(self, key: str, required: bool = True, default: Optional[str] = None) -> Optional[str]:
        present, value = self._get(key, required, default)
        if not present:
            if required and key in self.data:
                self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be a string"))
            return default
        if not isinstance(value, str):
            self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be a string"))
            return default
        return value

    def bool_(self, key: str, required: bool = True, default: bool = False) -> bool:
        present, value = self._get(key, required, default)
        if not present:
            return default
        if not isinstance(value, bool):
            self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be a boolean"))
            return default
        return value

    def number_(self, key: str, required: bool = True, default: float = 0.0) -> float:
        present, value = self._get(key, required, default)
        if not present:
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be a number"))
            return default
        return float(value)

    def date_(self, key: str, required: bool = True) -> Optional[date]:
        text = self.str_(key, required)
        if text is None:
            return None
        try:
            return date.fromisoformat(text)
        except ValueError:
            self.violations.append(
                Violation(self._label(key), "bad-date", f"{key} must be an ISO-8601 date (YYYY-MM-DD)")
            )
            return None

    def enum_(self, key: str, enum_cls: type[Enum], required: bool = True) -> Any:
        text = self.str_(key, required)
        if text is None:
            return None
        try:
            return enum_cls(text)
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls)  # type: ignore[attr-defined]
            self.violations.append(
                Violation(self._label(key), "bad-enum", f"{key} must be one of: {allowed}")
            )
            return None

    def list_(self, key: str, required: bool = True) -> list[Any]:
        present, value = self._get(key, required, [])
        if not present:
            return []
        if not isinstance(value, list):
            self.violations.append(Violation(self._label(key), "bad-type", f"{key} must be an array"))
            return []
        return value

    def reject_unknown(self) -> None:
        for key in self.data:
            if key not in self._seen:
                self.violations.append(
                    Violation(self._label(key), "unknown-field", f"unknown field {key!r}")
                )

    def done(self, what: str) -> None:
        self.reject_unknown()
        if self.violations:
            raise ValidationFailed(f"invalid {what} payload", violations=self.violations)


def _read_legacy_refs(reader: ObjectReader, key: str) -> tuple[LegacyRef, ...]:
    refs = []
    for i, raw in enumerate(reader.list_(key, required=False)):
        sub = ObjectReader(raw, f"{key}[{i}]")
        table = sub.enum_("table", LegacyTable)
        ref_id = sub.int_("id")
        sub.reject_unknown()
        reader.violations.extend(sub.violations)
        if table is not None and ref_id is not None:
            refs.append(LegacyRef(table=table, id=ref_id))
    return tuple(refs)


def from_dict(kind: Kind, data: Any) -> Any:
    """Wire/seed JSON object -> entity; raises ValidationFailed on any mismatch."""
    r = ObjectReader(data)
    entity_id = r.int_("id", required=False)

    if kind is Kind.ASSET:
        asset_kind = r.enum_("kind", AssetKind)
        filename = r.str_("filename", default="")
        r.done("asset")
        return MediaAsset(kind=asset_kind, filename=filename or "", id=entity_id)
    if kind is Kind.WORD:
        word = Word(
            text=r.str_("text", default="") or "",
            speaker_family_name=r.str_("speakerFamilyName", default="") or "",
            speaker_given_name=r.str_("speakerGivenName", default="") or "",
            is_therapist_recording=r.bool_("isTherapistRecording"),
            part_of_speech=r.enum_("partOfSpeech", PartOfSpeech) or PartOfSpeech.OTHER,
            part_of_speech_label=r.str_("partOfSpeechLabel", required=False),
            gender=r.enum_("gender", Gender, required=False),
            article_compatible=r.bool_("articleCompatible", required=False),
            sound_asset_id=r.int_("soundAssetId", default=0) or 0,
            image_asset_id=r.int_("imageAssetId", default=0) or 0,
            id=entity_id,
        )
        r.done("word")
        return word
    if kind is Kind.PARONYM:
        pair = ParonymPair(
            word_a_id=r.int_("wordAId", default=0) or 0,
            word_b_id=r.int_("wordBId", default=0) or 0,
            id=entity_id,
        )
        r.done("paronym")
        return pair
    if kind in (Kind.EXERCISE_TYPE, Kind.EXERCISE_SUBTYPE):
        cls = ExerciseType if kind is Kind.EXERCISE_TYPE else ExerciseSubtype
        value = cls(
            name=r.str_("name", default="") or "",
            application_name=r.str_("applicationName", required=False, default="") or "",
            id=entity_id,
        )
        r.done(kind.value)
        return value
    if kind is Kind.SOUND:
        sound = TargetSound(label=r.str_("label", default="") or "", id=entity_id)
        r.done("sound")
        return sound
    if kind is Kind.ASSOCIATION:
        assoc = Association(
            type_id=r.int_("typeId", default=0) or 0,
            subtype_id=r.int_("subtypeId", default=0) or 0,
            sound_id=r.int_("soundId", default=0) or 0,
            id=entity_id,
        )
        r.done("association")
        return assoc
    if kind is Kind.INSTRUCTIONS:
        instructions = Instructions(text=r.str_("text", default="") or "", id=entity_id)
        r.done("instructions")
        return instructions
    if kind is Kind.EXERCISE:
        exercise = Exercise(
            title=r.str_("title", default="") or "",
            difficulty=r.int_("difficulty", default=0) or 0,
            association_id=r.int_("associationId", default=0) or 0,
            instructions_id=r.int_("instructionsId", default=0) or 0,
            id=entity_id,
        )
        r.done("exercise")
        return exercise
    if kind is Kind.CONFIGURATION:
        config = ExerciseConfiguration(
            exercise_id=r.int_("exerciseId", default=0) or 0,
            word_id=r.int_("wordId", default=0) or 0,
            paronym_id=r.int_("paronymId", required=False),
            param1=r.int_("param1", required=False, default=0) or 0,
            param2=r.int_("param2", required=False, default=0) or 0,
            param3=r.int_("param3", required=False, default=0) or 0,
            id=entity_id,
        )
        r.done("configuration")
        return config
    if kind is Kind.TEMPLATE:
        items = []
        for i, raw in enumerate(r.list_("exerciseItems")):
            sub = ObjectReader(raw, f"exerciseItems[{i}]")
            exercise_id = sub.int_("exerciseId", default=0)
            threshold = sub.int_("successThresholdPercent", default=0)
            sub.reject_unknown()
            r.violations.extend(sub.violations)
            items.append(TemplateItem(exercise_id=exercise_id or 0, success_threshold_percent=threshold or 0))
        template = PredefinedHomework(
            description=r.str_("description", required=False, default="") or "",
            repetitions_per_day=r.int_("repetitionsPerDay", default=0) or 0,
            exercise_items=tuple(items),
            deficiency_refs=_read_legacy_refs(r, "deficiencyRefs"),
            test_refs=_read_legacy_refs(r, "testRefs"),
            id=entity_id,
        )
        r.done("template")
        return template
    if kind is Kind.CHILD:
        child = Child(
            family_name=r.str_("familyName", default="") or "",
            given_name=r.str_("givenName", default="") or "",
            id=entity_id,
        )
        r.done("child")
        return child
    if kind is Kind.ASSIGNMENT:
        assignment = HomeworkAssignment(
            child_id=r.int_("childId", default=0) or 0,
            predefined_homework_id=r.int_("predefinedHomeworkId", default=0) or 0,
            assigned_date=r.date_("assignedDate") or date(1970, 1, 1),
            deadline_days=r.int_("deadlineDays", default=0) or 0,
            report_date=r.date_("reportDate", required=False),
            id=entity_id,
        )
        r.done("assignment")
        return assignment
    if kind is Kind.ATTEMPT:
        record = HomeworkAttemptRecord(
            assignment_id=r.int_("assignmentId", default=0) or 0,
            exercise_id=r.int_("exerciseId", default=0) or 0,
            attempt_index=r.int_("attemptIndex", default=0) or 0,
            achieved_percent=_or_default(r.int_("achievedPercent", default=-1), -1),
            initially_wrong_words=_or_default(r.int_("initiallyWrongWords", default=-1), -1),
            id=entity_id,
        )
        r.done("attempt")
        return record
    raise ValueError(f"unhandled kind: {kind}")


def _nfc_walk(value: Any) -> Any:
    if isinstance(value, str):
        return nfc(value)
    if isinstance(value, list):
        return [_nfc_walk(v) for v in value]
    if isinstance(value, dict):
        return {k: _nfc_walk(v) for k, v in value.items()}
    return value


def normalized(entity: Any) -> Any:
    """Copy of the entity with all text NFC-normalized (applied on every write)."""
    return from_dict(kind_of(entity), _nfc_walk(to_dict(entity)))


def violations_payload(violations: list[Violation]) -> list[dict[str, str]]:
    return [{"field": v.field, "code": v.code, "message": v.message} for v in violations]
