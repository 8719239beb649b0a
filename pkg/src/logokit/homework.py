"""Homework lifecycle: assign a template to a child, track deadlines,
ingest the returned activity report, aggregate progress.

All functions are stateless over a Store; ingest_report runs as one store
transaction so a failed report never half-lands.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from fractions import Fraction
from typing import Optional

from .errors import (
    AlreadyReported,
    BadAttemptSequence,
    NotFound,
    UnknownExercise,
    ValidationFailed,
)
from .model import (
    AssignmentState,
    HomeworkAssignment,
    HomeworkAttemptRecord,
    Kind,
    PredefinedHomework,
    validate_attempt_record,
)
from .store import Store


@dataclass(frozen=True)
class ReportRecord:
    """One attempt line of the report intake format."""

    exercise_id: int
    attempt_index: int
    achieved_percent: int
    initially_wrong_words: int


@dataclass(frozen=True)
class ExerciseOutcome:
    exercise_id: int
    attempts: tuple[HomeworkAttemptRecord, ...]
    best_percent: int
    resolved: bool


@dataclass(frozen=True)
class AssignmentProgress:
    assignment_id: int
    assigned_date: date
    mean_best_percent: Fraction
    resolved_count: int
    exercise_count: int


@dataclass(frozen=True)
class ProgressSummary:
    child_id: int
    per_assignment: tuple[AssignmentProgress, ...]


def assign_homework(
    store: Store,
    child_id: int,
    template_id: int,
    assigned_date: date,
    deadline_days: int,
) -> HomeworkAssignment:
    """Instantiate a predefined template for a child; no report yet.

    The template is referenced by id and becomes immutable once assigned,
    so the exercise list and thresholds in force are reproducible later.
    """
    store.get(Kind.CHILD, child_id)
    store.get(Kind.TEMPLATE, template_id)
    assignment = HomeworkAssignment(
        child_id=child_id,
        predefined_homework_id=template_id,
        assigned_date=assigned_date,
        deadline_days=deadline_days,
    )
    return store.save(assignment)


def due_date(assignment: HomeworkAssignment) -> date:
    """assignedDate + deadlineDays calendar days; a report ON this date is on time."""
    return assignment.assigned_date + timedelta(days=assignment.deadline_days)


def assignment_status(assignment: HomeworkAssignment, today: date) -> AssignmentState:
    due = due_date(assignment)
    if assignment.report_date is None:
        return AssignmentState.PENDING if today <= due else AssignmentState.OVERDUE
    return (
        AssignmentState.REPORTED_ON_TIME
        if assignment.report_date <= due
        else AssignmentState.REPORTED_LATE
    )


def _threshold_by_exercise(template: PredefinedHomework) -> dict[int, int]:
    return {item.exercise_id: item.success_threshold_percent for item in template.exercise_items}


def _outcomes(
    store: Store, assignment: HomeworkAssignment, template: PredefinedHomework
) -> list[ExerciseOutcome]:
    attempts = [
        a for a in store.list_all(Kind.ATTEMPT) if a.assignment_id == assignment.id
    ]
    outcomes = []
    for item in template.exercise_items:
        rows = tuple(
            sorted(
                (a for a in attempts if a.exercise_id == item.exercise_id),
                key=lambda a: a.attempt_index,
            )
        )
        best = max((a.achieved_percent for a in rows), default=0)
        outcomes.append(
            ExerciseOutcome(
                exercise_id=item.exercise_id,
                attempts=rows,
                best_percent=best,
                resolved=best >= item.success_threshold_percent,
            )
        )
    return outcomes


def exercise_outcomes(store: Store, assignment_id: int) -> list[ExerciseOutcome]:
    """Per-exercise outcomes of an assignment from its persisted attempts."""
    assignment = store.get(Kind.ASSIGNMENT, assignment_id)
    template = store.get(Kind.TEMPLATE, assignment.predefined_homework_id)
    return _outcomes(store, assignment, template)


def attempt_count(store: Store, assignment_id: int, exercise_id: int) -> int:
    """Number of repetitions recorded for one exercise of an assignment
    (always equals the highest attempt index)."""
    return sum(
        1
        for a in store.list_all(Kind.ATTEMPT)
        if a.assignment_id == assignment_id and a.exercise_id == exercise_id
    )


def ingest_report(
    store: Store,
    assignment_id: int,
    report_date: date,
    records: list[ReportRecord],
) -> list[ExerciseOutcome]:
    """Persist the returned activity report atomically and mark the assignment reported.

    Every record must target an exercise of the assignment's template and the
    attempt indices per exercise must form 1..k.  On any error nothing is
    persisted and the assignment stays unreported.
    """
    assignment = store.get(Kind.ASSIGNMENT, assignment_id)
    if assignment.report_date is not None:
        raise AlreadyReported(
            f"assignment {assignment_id} was already reported on {assignment.report_date.isoformat()}"
        )
    template = store.get(Kind.TEMPLATE, assignment.predefined_homework_id)
    allowed = _threshold_by_exercise(template)

    by_exercise: dict[int, list[ReportRecord]] = {}
    for record in records:
        if record.exercise_id not in allowed:
            raise UnknownExercise(
                f"exercise {record.exercise_id} is not part of assignment {assignment_id}",
                exercise_id=record.exercise_id,
            )
        by_exercise.setdefault(record.exercise_id, []).append(record)
    for exercise_id, rows in by_exercise.items():
        indices = sorted(r.attempt_index for r in rows)
        if indices != list(range(1, len(indices) + 1)):
            raise BadAttemptSequence(
                f"attempt indices for exercise {exercise_id} must form 1..{len(rows)}, got {indices}",
                exercise_id=exercise_id,
            )
    drafts = []
    for record in records:
        draft = HomeworkAttemptRecord(
            assignment_id=assignment_id,
            exercise_id=record.exercise_id,
            attempt_index=record.attempt_index,
            achieved_percent=record.achieved_percent,
            initially_wrong_words=record.initially_wrong_words,
        )
        violations = validate_attempt_record(
            draft, store.exercise_word_count(record.exercise_id)
        )
        if violations:
            raise ValidationFailed(
                "invalid attempt record: " + "; ".join(v.message for v in violations),
                violations=violations,
            )
        drafts.append(draft)
    if report_date < assignment.assigned_date:
        raise ValidationFailed(
            f"reportDate {report_date.isoformat()} precedes assignedDate "
            f"{assignment.assigned_date.isoformat()}"
        )

    with store.transaction():
        for draft in sorted(drafts, key=lambda d: (d.exercise_id, d.attempt_index)):
            store.put(draft)
        reported = HomeworkAssignment(
            child_id=assignment.child_id,
            predefined_homework_id=assignment.predefined_homework_id,
            assigned_date=assignment.assigned_date,
            deadline_days=assignment.deadline_days,
            report_date=report_date,
            id=assignment.id,
        )
        store.put(reported)
        return _outcomes(store, reported, template)


def child_progress(store: Store, child_id: int) -> ProgressSummary:
    """One entry per reported assignment, chronological.

    The mean is over the template's full exercise list; an exercise the
    child never attempted contributes 0, so skipping work cannot raise
    the average.
    """
    store.get(Kind.CHILD, child_id)
    entries = []
    assignments = [
        a
        for a in store.list_all(Kind.ASSIGNMENT)
        if a.child_id == child_id and a.report_date is not None
    ]
    assignments.sort(key=lambda a: (a.assigned_date, a.id))
    for assignment in assignments:
        template = store.get(Kind.TEMPLATE, assignment.predefined_homework_id)
        outcomes = _outcomes(store, assignment, template)
        mean = Fraction(sum(o.best_percent for o in outcomes), len(outcomes))
        entries.append(
            AssignmentProgress(
                assignment_id=assignment.id,
                assigned_date=assignment.assigned_date,
                mean_best_percent=mean,
                resolved_count=sum(1 for o in outcomes if o.resolved),
                exercise_count=len(outcomes),
            )
        )
    return ProgressSummary(child_id=child_id, per_assignment=tuple(entries))


def outcome_payload(outcome: ExerciseOutcome) -> dict:
    """Wire shape of one outcome (shared by API responses and CLI --json)."""
    return {
        "exerciseId": outcome.exercise_id,
        "attempts": [
            {
                "attemptIndex": a.attempt_index,
                "achievedPercent": a.achieved_percent,
                "initiallyWrongWords": a.initially_wrong_words,
            }
            for a in outcome.attempts
        ],
        "bestPercent": outcome.best_percent,
        "resolved": outcome.resolved,
    }


def progress_payload(summary: ProgressSummary) -> dict:
    """Wire shape of a progress summary; the mean is emitted as a float."""
    return {
        "childId": summary.child_id,
        "perAssignment": [
            {
                "assignmentId": e.assignment_id,
                "assignedDate": e.assigned_date.isoformat(),
                "meanBestPercent": float(e.mean_best_percent),
                "resolvedCount": e.resolved_count,
                "exerciseCount": e.exercise_count,
            }
            for e in summary.per_assignment
        ],
    }


def parse_report_intake(payload: dict, expected_assignment_id: Optional[int] = None) -> tuple[int, date, list[ReportRecord]]:
    """Parse the report intake JSON: {assignmentId, reportDate, records:[...]}."""
    from .jsonio import ObjectReader

    r = ObjectReader(payload)
    assignment_id = r.int_("assignmentId", required=expected_assignment_id is None)
    report_date = r.date_("reportDate")
    records = []
    for i, raw in enumerate(r.list_("records")):
        sub = ObjectReader(raw, f"records[{i}]")
        records.append(
            ReportRecord(
                exercise_id=sub.int_("exerciseId", default=0) or 0,
                attempt_index=sub.int_("attemptIndex", default=0) or 0,
                achieved_percent=_default(sub.int_("achievedPercent", default=-1), -1),
                initially_wrong_words=_default(sub.int_("initiallyWrongWords", default=-1), -1),
            )
        )
        sub.reject_unknown()
        r.violations.extend(sub.violations)
    r.done("report intake")
    if assignment_id is None:
        assignment_id = expected_assignment_id
    elif expected_assignment_id is not None and assignment_id != expected_assignment_id:
        raise ValidationFailed(
            f"report assignmentId {assignment_id} does not match assignment {expected_assignment_id}"
        )
    assert report_date is not None  # r.done would have raised
    return assignment_id, report_date, records


def _default(value: Optional[int], fallback: int) -> int:
    return fallback if value is None else value
