"""Speech-therapy content store, homework workflow and offline device bundles."""

from .errors import (
    AlreadyReported,
    AssetMissing,
    BadAttemptSequence,
    BindFailure,
    DigestMismatch,
    DomainError,
    MalformedBundle,
    NameCollision,
    NotFound,
    ReferentialIntegrity,
    SourceMissing,
    StillReferenced,
    StoreOpenFailure,
    UniquenessViolation,
    UnknownAssignment,
    UnknownExercise,
    ValidationFailed,
    WrongExtension,
)
from .homework import (
    AssignmentProgress,
    ExerciseOutcome,
    ProgressSummary,
    ReportRecord,
    assign_homework,
    assignment_status,
    attempt_count,
    child_progress,
    due_date,
    exercise_outcomes,
    ingest_report,
)
from .model import (
    AssignmentState,
    AssetKind,
    Association,
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
    indefinite_article_for,
    validate_attempt_record,
    validate_entity,
    validate_exercise,
    validate_word,
)
from .store import PartnerLink, Store, default_data_root
from .sync import (
    BundleManifest,
    ResultBundle,
    export_bundle,
    import_result_bundle,
    simulate_device,
    write_result_bundle,
)

__version__ = "0.1.0"
