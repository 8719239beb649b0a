"""Pure domain types and validation rules.

No persistence and no I/O here: every type is an immutable value, every
validator is a pure function returning a (possibly empty) list of
violations.  Reference lookups are abstracted behind the ``Resolver``
protocol so validators stay usable against any backing store or fixture.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Optional, Protocol

# Extension allow-lists for media files.  Kept as module-level configuration;
# validators accept overrides for non-default deployments.
AUDIO_EXTENSIONS = frozenset({".wav", ".mp3"})
IMAGE_EXTENSIONS = frozenset({".png", ".jpg"})

MIN_DIFFICULTY = 1
MAX_DIFFICULTY = 5


class Kind(str, Enum):
    """Entity kinds understood by the store (one per persisted table)."""

    ASSET = "asset"
    WORD = "word"
    PARONYM = "paronym"
    EXERCISE_TYPE = "exercise-type"
    EXERCISE_SUBTYPE = "exercise-subtype"
    SOUND = "sound"
    ASSOCIATION = "association"
    INSTRUCTIONS = "instructions"
    EXERCISE = "exercise"
    CONFIGURATION = "configuration"
    TEMPLATE = "template"
    CHILD = "child"
    ASSIGNMENT = "assignment"
    ATTEMPT = "attempt"


class AssetKind(str, Enum):
    SOUND = "sound"
    IMAGE = "image"


class PartOfSpeech(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    OTHER = "other"


class Gender(str, Enum):
    MASCULINE = "masculine"
    FEMININE = "feminine"
    NEUTER = "neuter"


class LegacyTable(str, Enum):
    """Tables of the surrounding legacy system we only hold references into."""

    DEFICIENTE = "Deficiente"
    TESTE = "Teste"
    DATE_COPII = "DateCopii"


class AssignmentState(str, Enum):
    PENDING = "Pending"
    OVERDUE = "Overdue"
    REPORTED_ON_TIME = "ReportedOnTime"
    REPORTED_LATE = "ReportedLate"


@dataclass(frozen=True)
class Violation:
    """One broken rule on a draft; ``field`` uses the wire (camelCase) name."""

    field: str
    code: str
    message: str


class Resolver(Protocol):
    """Answers existence/identity queries for referenced entities."""

    def lookup(self, kind: Kind, entity_id: int) -> object | None: ...


# ---------------------------------------------------------------------------
# Entity types


@dataclass(frozen=True)
class MediaAsset:
    kind: AssetKind
    filename: str
    id: Optional[int] = None


@dataclass(frozen=True)
class Word:
    text: str
    speaker_family_name: str
    speaker_given_name: str
    is_therapist_recording: bool
    part_of_speech: PartOfSpeech
    sound_asset_id: int
    image_asset_id: int
    gender: Optional[Gender] = None
    article_compatible: bool = False
    part_of_speech_label: Optional[str] = None
    id: Optional[int] = None


@dataclass(frozen=True)
class ParonymPair:
    word_a_id: int
    word_b_id: int
    id: Optional[int] = None


@dataclass(frozen=True)
class ExerciseType:
    name: str
    application_name: str = ""
    id: Optional[int] = None


@dataclass(frozen=True)
class ExerciseSubtype:
    name: str
    application_name: str = ""
    id: Optional[int] = None


@dataclass(frozen=True)
class TargetSound:
    label: str
    id: Optional[int] = None


@dataclass(frozen=True)
class Association:
    """The (type, subtype, target sound) triple an exercise is created for."""

    type_id: int
    subtype_id: int
    sound_id: int
    id: Optional[int] = None


@dataclass(frozen=True)
class Instructions:
    text: str
    id: Optional[int] = None


@dataclass(frozen=True)
class Exercise:
    title: str
    difficulty: int
    association_id: int
    instructions_id: int
    id: Optional[int] = None


@dataclass(frozen=True)
class ExerciseConfiguration:
    """Per-word settings of an exercise.

    param1 is the image display time in milliseconds, param2 flags whether
    the word contains the target sound (0/1), param3 is reserved per
    subtype (see docs/schema.md) and defaults to 0.
    """

    exercise_id: int
    word_id: int
    paronym_id: Optional[int] = None
    param1: int = 0
    param2: int = 0
    param3: int = 0
    id: Optional[int] = None


@dataclass(frozen=True)
class TemplateItem:
    exercise_id: int
    success_threshold_percent: int


@dataclass(frozen=True)
class LegacyRef:
    table: LegacyTable
    id: int


@dataclass(frozen=True)
class PredefinedHomework:
    description: str
    repetitions_per_day: int
    exercise_items: tuple[TemplateItem, ...]
    deficiency_refs: tuple[LegacyRef, ...] = ()
    test_refs: tuple[LegacyRef, ...] = ()
    id: Optional[int] = None


@dataclass(frozen=True)
class Child:
    family_name: str
    given_name: str
    id: Optional[int] = None


@dataclass(frozen=True)
class HomeworkAssignment:
    child_id: int
    predefined_homework_id: int
    assigned_date: date
    deadline_days: int
    report_date: Optional[date] = None
    id: Optional[int] = None


@dataclass(frozen=True)
class HomeworkAttemptRecord:
    assignment_id: int
    exercise_id: int
    attempt_index: int
    achieved_percent: int
    initially_wrong_words: int
    id: Optional[int] = None


KIND_OF: dict[type, Kind] = {
    MediaAsset: Kind.ASSET,
    Word: Kind.WORD,
    ParonymPair: Kind.PARONYM,
    ExerciseType: Kind.EXERCISE_TYPE,
    ExerciseSubtype: Kind.EXERCISE_SUBTYPE,
    TargetSound: Kind.SOUND,
    Association: Kind.ASSOCIATION,
    Instructions: Kind.INSTRUCTIONS,
    Exercise: Kind.EXERCISE,
    ExerciseConfiguration: Kind.CONFIGURATION,
    PredefinedHomework: Kind.TEMPLATE,
    Child: Kind.CHILD,
    HomeworkAssignment: Kind.ASSIGNMENT,
    HomeworkAttemptRecord: Kind.ATTEMPT,
}

TYPE_OF: dict[Kind, type] = {kind: cls for cls, kind in KIND_OF.items()}


def kind_of(entity: object) -> Kind:
    try:
        return KIND_OF[type(entity)]
    except KeyError:
        raise TypeError(f"not a domain entity: {type(entity).__name__}") from None


def entity_references(entity: object) -> list[tuple[str, Kind, int]]:
    """All (field, kind, id) references the entity holds into other entities.

    Legacy refs (Deficiente/Teste/DateCopii) point outside the store and are
    deliberately excluded.
    """
    if isinstance(entity, Word):
        return [
            ("soundAssetId", Kind.ASSET, entity.sound_asset_id),
            ("imageAssetId", Kind.ASSET, entity.image_asset_id),
        ]
    if isinstance(entity, ParonymPair):
        return [
            ("wordAId", Kind.WORD, entity.word_a_id),
            ("wordBId", Kind.WORD, entity.word_b_id),
        ]
    if isinstance(entity, Association):
        return [
            ("typeId", Kind.EXERCISE_TYPE, entity.type_id),
            ("subtypeId", Kind.EXERCISE_SUBTYPE, entity.subtype_id),
            ("soundId", Kind.SOUND, entity.sound_id),
        ]
    if isinstance(entity, Exercise):
        return [
            ("associationId", Kind.ASSOCIATION, entity.association_id),
            ("instructionsId", Kind.INSTRUCTIONS, entity.instructions_id),
        ]
    if isinstance(entity, ExerciseConfiguration):
        refs = [
            ("exerciseId", Kind.EXERCISE, entity.exercise_id),
            ("wordId", Kind.WORD, entity.word_id),
        ]
        if entity.paronym_id is not None:
            refs.append(("paronymId", Kind.PARONYM, entity.paronym_id))
        return refs
    if isinstance(entity, PredefinedHomework):
        return [
            (f"exerciseItems[{i}].exerciseId", Kind.EXERCISE, item.exercise_id)
            for i, item in enumerate(entity.exercise_items)
        ]
    if isinstance(entity, HomeworkAssignment):
        return [
            ("childId", Kind.CHILD, entity.child_id),
            ("predefinedHomeworkId", Kind.TEMPLATE, entity.predefined_homework_id),
        ]
    if isinstance(entity, HomeworkAttemptRecord):
        return [
            ("assignmentId", Kind.ASSIGNMENT, entity.assignment_id),
            ("exerciseId", Kind.EXERCISE, entity.exercise_id),
        ]
    return []


# ---------------------------------------------------------------------------
# Validation


def _bad_id(field: str, value: object) -> Optional[Violation]:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        return Violation(field, "bad-ref", f"{field} must be a positive integer id, got {value!r}")
    return None


def _check_refs(out: list[Violation], entity: object, resolver: Optional[Resolver]) -> None:
    for field, kind, ref in entity_references(entity):
        bad = _bad_id(field, ref)
        if bad:
            out.append(bad)
        elif resolver is not None and resolver.lookup(kind, ref) is None:
            out.append(Violation(field, "missing-ref", f"{field} references missing {kind.value} {ref}"))


def validate_media_asset(
    asset: MediaAsset,
    *,
    audio_extensions: frozenset[str] = AUDIO_EXTENSIONS,
    image_extensions: frozenset[str] = IMAGE_EXTENSIONS,
) -> list[Violation]:
    out: list[Violation] = []
    name = asset.filename
    if not name:
        out.append(Violation("filename", "filename-empty", "filename must not be empty"))
        return out
    segments = name.replace("\\", "/").split("/")
    if any(seg in ("", ".", "..") for seg in segments):
        out.append(
            Violation("filename", "filename-traversal", f"filename {name!r} must be a safe relative path")
        )
    allowed = audio_extensions if asset.kind is AssetKind.SOUND else image_extensions
    if not any(name.lower().endswith(ext) for ext in allowed):
        out.append(
            Violation(
                "filename",
                "wrong-extension",
                f"{asset.kind.value} filename {name!r} must end in one of {sorted(allowed)}",
            )
        )
    return out


def validate_word(word: Word, resolver: Optional[Resolver] = None) -> list[Violation]:
    out: list[Violation] = []
    if not word.text.strip():
        out.append(Violation("text", "text-empty", "text must be non-empty after trimming"))
    is_noun = word.part_of_speech is PartOfSpeech.NOUN
    if is_noun and word.gender is None:
        out.append(Violation("gender", "gender-missing-on-noun", "nouns must carry a gender"))
    if not is_noun and word.gender is not None:
        out.append(
            Violation("gender", "gender-on-non-noun", "gender is only meaningful for nouns")
        )
    if word.article_compatible and not is_noun:
        out.append(
            Violation(
                "articleCompatible",
                "article-on-non-noun",
                "articleCompatible may be true only for nouns",
            )
        )
    if word.part_of_speech is not PartOfSpeech.OTHER and word.part_of_speech_label is not None:
        out.append(
            Violation(
                "partOfSpeechLabel",
                "pos-label-without-other",
                "partOfSpeechLabel is only allowed when partOfSpeech is 'other'",
            )
        )
    _check_refs(out, word, resolver)
    if resolver is not None:
        for field, ref, want in (
            ("soundAssetId", word.sound_asset_id, AssetKind.SOUND),
            ("imageAssetId", word.image_asset_id, AssetKind.IMAGE),
        ):
            target = resolver.lookup(Kind.ASSET, ref) if isinstance(ref, int) and ref >= 1 else None
            if isinstance(target, MediaAsset) and target.kind is not want:
                out.append(
                    Violation(
                        field,
                        "asset-kind-mismatch",
                        f"{field} must reference a {want.value} asset, asset {ref} is {target.kind.value}",
                    )
                )
    return out


def validate_paronym_pair(pair: ParonymPair, resolver: Optional[Resolver] = None) -> list[Violation]:
    out: list[Violation] = []
    _check_refs(out, pair, resolver)
    if pair.word_a_id == pair.word_b_id:
        out.append(Violation("wordBId", "self-pair", "a paronym pair needs two distinct words"))
    elif resolver is not None:
        a = resolver.lookup(Kind.WORD, pair.word_a_id)
        b = resolver.lookup(Kind.WORD, pair.word_b_id)
        if isinstance(a, Word) and isinstance(b, Word) and a.text == b.text:
            out.append(
                Violation("wordBId", "same-text", f"both words spell {a.text!r}; paronyms must differ")
            )
    return out


def _validate_named(name: str) -> list[Violation]:
    if not name.strip():
        return [Violation("name", "name-empty", "name must be non-empty")]
    return []


def validate_exercise_type(value: ExerciseType) -> list[Violation]:
    return _validate_named(value.name)


def validate_exercise_subtype(value: ExerciseSubtype) -> list[Violation]:
    return _validate_named(value.name)


def validate_target_sound(sound: TargetSound) -> list[Violation]:
    if not sound.label.strip():
        return [Violation("label", "label-empty", "label must be non-empty")]
    return []


def validate_association(assoc: Association, resolver: Optional[Resolver] = None) -> list[Violation]:
    out: list[Violation] = []
    _check_refs(out, assoc, resolver)
    return out


def validate_instructions(instructions: Instructions) -> list[Violation]:
    if not instructions.text.strip():
        return [Violation("text", "text-empty", "instructions text must be non-empty")]
    return []


def validate_exercise(exercise: Exercise, resolver: Optional[Resolver] = None) -> list[Violation]:
    out: list[Violation] = []
    if not exercise.title.strip():
        out.append(Violation("title", "title-empty", "title must be non-empty"))
    if not MIN_DIFFICULTY <= exercise.difficulty <= MAX_DIFFICULTY:
        out.append(
            Violation(
                "difficulty",
                "difficulty-range",
                f"difficulty must be {MIN_DIFFICULTY}..{MAX_DIFFICULTY}, got {exercise.difficulty}",
            )
        )
    _check_refs(out, exercise, resolver)
    return out


def validate_configuration(
    config: ExerciseConfiguration, resolver: Optional[Resolver] = None
) -> list[Violation]:
    out: list[Violation] = []
    if config.param1 < 0:
        out.append(Violation("param1", "param1-negative", "param1 (display ms) must be >= 0"))
    if config.param2 not in (0, 1):
        out.append(Violation("param2", "param2-flag", "param2 is a 0/1 flag"))
    _check_refs(out, config, resolver)
    if resolver is not None and config.paronym_id is not None:
        pair = resolver.lookup(Kind.PARONYM, config.paronym_id)
        if isinstance(pair, ParonymPair) and config.word_id not in (pair.word_a_id, pair.word_b_id):
            out.append(
                Violation(
                    "paronymId",
                    "paronym-mismatch",
                    f"paronym {config.paronym_id} does not contain word {config.word_id}",
                )
            )
    return out


def _validate_legacy_refs(out: list[Violation], field: str, refs: tuple[LegacyRef, ...], table: LegacyTable) -> None:
    for i, ref in enumerate(refs):
        if ref.id < 1:
            out.append(Violation(f"{field}[{i}].id", "bad-ref", "legacy ref ids start at 1"))
        if ref.table is not table:
            out.append(
                Violation(
                    f"{field}[{i}].table",
                    "legacy-table-mismatch",
                    f"{field} entries must point into {table.value}",
                )
            )


def validate_template(
    template: PredefinedHomework, resolver: Optional[Resolver] = None
) -> list[Violation]:
    out: list[Violation] = []
    if template.repetitions_per_day < 1:
        out.append(
            Violation("repetitionsPerDay", "repetitions-min", "repetitionsPerDay must be >= 1")
        )
    if not template.exercise_items:
        out.append(Violation("exerciseItems", "no-exercises", "a template needs at least one exercise"))
    seen: set[int] = set()
    for i, item in enumerate(template.exercise_items):
        if item.exercise_id in seen:
            out.append(
                Violation(
                    f"exerciseItems[{i}].exerciseId",
                    "duplicate-exercise",
                    f"exercise {item.exercise_id} listed twice",
                )
            )
        seen.add(item.exercise_id)
        if not 0 <= item.success_threshold_percent <= 100:
            out.append(
                Violation(
                    f"exerciseItems[{i}].successThresholdPercent",
                    "percent-range",
                    "successThresholdPercent must be 0..100",
                )
            )
    _validate_legacy_refs(out, "deficiencyRefs", template.deficiency_refs, LegacyTable.DEFICIENTE)
    _validate_legacy_refs(out, "testRefs", template.test_refs, LegacyTable.TESTE)
    _check_refs(out, template, resolver)
    return out


def validate_child(child: Child) -> list[Violation]:
    out: list[Violation] = []
    if not child.family_name.strip():
        out.append(Violation("familyName", "name-empty", "familyName must be non-empty"))
    if not child.given_name.strip():
        out.append(Violation("givenName", "name-empty", "givenName must be non-empty"))
    return out


def validate_assignment(
    assignment: HomeworkAssignment, resolver: Optional[Resolver] = None
) -> list[Violation]:
    out: list[Violation] = []
    if assignment.deadline_days < 1:
        out.append(Violation("deadlineDays", "deadline-days-min", "deadlineDays must be >= 1"))
    if assignment.report_date is not None and assignment.report_date < assignment.assigned_date:
        out.append(
            Violation(
                "reportDate",
                "report-before-assigned",
                "reportDate must not precede assignedDate",
            )
        )
    _check_refs(out, assignment, resolver)
    return out


def validate_attempt_record(
    record: HomeworkAttemptRecord, exercise_word_count: Optional[int] = None
) -> list[Violation]:
    """Local rules of one attempt row.

    ``exercise_word_count`` is the number of configuration words of the
    attempted exercise; pass None to skip the upper bound when the count is
    unknown (the store audits it separately).
    """
    out: list[Violation] = []
    if record.attempt_index < 1:
        out.append(Violation("attemptIndex", "attempt-index-min", "attemptIndex starts at 1"))
    if not 0 <= record.achieved_percent <= 100:
        out.append(Violation("achievedPercent", "percent-range", "achievedPercent must be 0..100"))
    if record.initially_wrong_words < 0:
        out.append(
            Violation("initiallyWrongWords", "wrong-count-negative", "initiallyWrongWords must be >= 0")
        )
    elif exercise_word_count is not None and record.initially_wrong_words > exercise_word_count:
        out.append(
            Violation(
                "initiallyWrongWords",
                "wrong-count-exceeds-words",
                f"initiallyWrongWords {record.initially_wrong_words} exceeds the exercise's "
                f"{exercise_word_count} configured words",
            )
        )
    return out


_VALIDATORS = {
    Kind.ASSET: validate_media_asset,
    Kind.WORD: validate_word,
    Kind.PARONYM: validate_paronym_pair,
    Kind.EXERCISE_TYPE: validate_exercise_type,
    Kind.EXERCISE_SUBTYPE: validate_exercise_subtype,
    Kind.SOUND: validate_target_sound,
    Kind.ASSOCIATION: validate_association,
    Kind.INSTRUCTIONS: validate_instructions,
    Kind.EXERCISE: validate_exercise,
    Kind.CONFIGURATION: validate_configuration,
    Kind.TEMPLATE: validate_template,
    Kind.CHILD: validate_child,
    Kind.ASSIGNMENT: validate_assignment,
}

_TAKES_RESOLVER = {
    Kind.WORD,
    Kind.PARONYM,
    Kind.ASSOCIATION,
    Kind.EXERCISE,
    Kind.CONFIGURATION,
    Kind.TEMPLATE,
    Kind.ASSIGNMENT,
}


def validate_entity(entity: object, resolver: Optional[Resolver] = None) -> list[Violation]:
    """Dispatch to the per-type validator.

    Attempt records get only their local checks here; the word-count bound
    and sequencing need store context.
    """
    kind = kind_of(entity)
    if kind is Kind.ATTEMPT:
        return validate_attempt_record(entity)  # type: ignore[arg-type]
    validator = _VALIDATORS[kind]
    if kind in _TAKES_RESOLVER:
        return validator(entity, resolver)  # type: ignore[call-arg]
    return validator(entity)  # type: ignore[call-arg]


def indefinite_article_for(word: Word) -> Optional[str]:
    """Indefinite article usable in front of the word, if any.

    "un" for masculine/neuter nouns, "o" for feminine nouns, nothing for
    non-nouns or words flagged as not article-compatible (e.g. plurals).
    Total over arbitrary Word values.
    """
    if word.part_of_speech is not PartOfSpeech.NOUN or not word.article_compatible:
        return None
    if word.gender is Gender.FEMININE:
        return "o"
    if word.gender in (Gender.MASCULINE, Gender.NEUTER):
        return "un"
    return None
