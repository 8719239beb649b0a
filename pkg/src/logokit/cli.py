"""Administrative command line over the same library surface as the API.

Exit codes: 0 success, 1 domain error (code + message on stderr), 2 usage
error.  Output is line-oriented text; ``--json`` switches to the exact JSON
shapes the HTTP API returns.
"""

from __future__ import annotations

import json
from datetime import date
from pathlib import Path

import click

from .errors import DomainError
from .homework import (
    ReportRecord,
    assign_homework,
    assignment_status,
    child_progress,
    due_date,
    ingest_report,
    outcome_payload,
    parse_report_intake,
    progress_payload,
)
from .jsonio import to_dict
from .model import (
    AssetKind,
    Association,
    Child,
    Exercise,
    ExerciseConfiguration,
    ExerciseSubtype,
    ExerciseType,
    Gender,
    Instructions,
    Kind,
    LegacyRef,
    LegacyTable,
    ParonymPair,
    PartOfSpeech,
    PredefinedHomework,
    TargetSound,
    TemplateItem,
    Word,
)
from .store import Store
from .sync import export_bundle, import_result_bundle, simulate_device, write_result_bundle

GENDERS = {
    "m": Gender.MASCULINE,
    "masculine": Gender.MASCULINE,
    "f": Gender.FEMININE,
    "feminine": Gender.FEMININE,
    "n": Gender.NEUTER,
    "neuter": Gender.NEUTER,
}


class DateParam(click.ParamType):
    name = "date"

    def convert(self, value, param, ctx):
        if isinstance(value, date):
            return value
        try:
            return date.fromisoformat(value)
        except ValueError:
            self.fail(f"{value!r} is not a YYYY-MM-DD date", param, ctx)


DATE = DateParam()


class ColonSpec(click.ParamType):
    """Colon-separated integers, e.g. exercise:threshold or ex:idx:pct:wrong."""

    def __init__(self, arity: int, label: str):
        self.arity = arity
        self.label = label
        self.name = label

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        parts = value.split(":")
        if len(parts) != self.arity or not all(p.lstrip("-").isdigit() for p in parts):
            self.fail(f"{value!r} must look like {self.label}", param, ctx)
        return tuple(int(p) for p in parts)


@click.group()
@click.option("--data-root", type=click.Path(path_type=Path), default=None,
              help="Store directory (default: $LOGOMON_DATA or ./logomon-data).")
@click.option("--json", "as_json", is_flag=True, help="Emit API-shaped JSON instead of text.")
@click.pass_context
def cli(ctx, data_root, as_json):
    """Manage therapy words, exercises, homework templates and assignments."""
    ctx.obj = {"data_root": data_root, "json": as_json}


def _store(ctx) -> Store:
    return Store(ctx.obj["data_root"])


def _emit(ctx, payload, text_lines):
    if ctx.obj["json"]:
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        for line in text_lines:
            click.echo(line)


# -- word ---------------------------------------------------------------------


@cli.group()
def word():
    """Words and their recorded sound/image files."""


@word.command("add")
@click.option("--text", required=True)
@click.option("--speaker", required=True, help='Speaker as "FamilyName GivenName".')
@click.option("--therapist", is_flag=True, help="Recording made by the therapist, not a patient.")
@click.option("--pos", required=True, type=click.Choice([p.value for p in PartOfSpeech]))
@click.option("--pos-label", default=None, help="Free-text label when --pos other.")
@click.option("--gender", type=click.Choice(sorted(GENDERS)), default=None)
@click.option("--article", is_flag=True, help="Word accepts an indefinite article.")
@click.option("--sound", "sound_path", required=True, type=click.Path(path_type=Path))
@click.option("--image", "image_path", required=True, type=click.Path(path_type=Path))
@click.pass_context
def word_add(ctx, text, speaker, therapist, pos, pos_label, gender, article, sound_path, image_path):
    """Register both media files and create the word."""
    family, _, given = speaker.partition(" ")
    with _store(ctx) as store:
        copied = []
        try:
            with store.transaction():
                sound = store.register_media_asset(AssetKind.SOUND, sound_path)
                copied.append(store.asset_path(sound))
                image = store.register_media_asset(AssetKind.IMAGE, image_path)
                copied.append(store.asset_path(image))
                stored = store.save(
                    Word(
                        text=text,
                        speaker_family_name=family,
                        speaker_given_name=given,
                        is_therapist_recording=therapist,
                        part_of_speech=PartOfSpeech(pos),
                        part_of_speech_label=pos_label,
                        gender=GENDERS[gender] if gender else None,
                        article_compatible=article,
                        sound_asset_id=sound.id,
                        image_asset_id=image.id,
                    )
                )
        except BaseException:
            for path in copied:
                path.unlink(missing_ok=True)
            raise
        _emit(ctx, to_dict(stored), [str(stored.id)])


@word.command("list")
@click.option("--limit", default=100, show_default=True)
@click.option("--offset", default=0)
@click.pass_context
def word_list(ctx, limit, offset):
    with _store(ctx) as store:
        words = store.list_all(Kind.WORD, limit=limit, offset=offset)
        _emit(
            ctx,
            [to_dict(w) for w in words],
            [
                f"{w.id}\t{w.text}\t{w.part_of_speech.value}"
                f"\t{w.speaker_family_name} {w.speaker_given_name}".rstrip()
                for w in words
            ],
        )


@word.command("rm")
@click.option("--id", "word_id", required=True, type=int)
@click.pass_context
def word_rm(ctx, word_id):
    with _store(ctx) as store:
        store.delete(Kind.WORD, word_id)
        _emit(ctx, {"deleted": word_id}, [f"deleted word {word_id}"])


# -- paronym -------------------------------------------------------------------


@cli.group()
def paronym():
    """Pairs of words that differ minimally."""


@paronym.command("add")
@click.option("--word-a", required=True, type=int)
@click.option("--word-b", required=True, type=int)
@click.pass_context
def paronym_add(ctx, word_a, word_b):
    with _store(ctx) as store:
        pair = store.save(ParonymPair(word_a_id=word_a, word_b_id=word_b))
        _emit(ctx, to_dict(pair), [str(pair.id)])


@paronym.command("list")
@click.option("--word", "word_id", type=int, default=None,
              help="Show partners of one word instead of all pairs.")
@click.pass_context
def paronym_list(ctx, word_id):
    with _store(ctx) as store:
        if word_id is not None:
            links = store.paronym_partner(word_id)
            _emit(
                ctx,
                [{"pairId": l.pair_id, "partnerWordId": l.partner_word_id} for l in links],
                [f"{l.pair_id}\tpartner {l.partner_word_id}" for l in links],
            )
        else:
            pairs = store.list_all(Kind.PARONYM)
            _emit(
                ctx,
                [to_dict(p) for p in pairs],
                [f"{p.id}\t{p.word_a_id} ~ {p.word_b_id}" for p in pairs],
            )


# -- exercise -------------------------------------------------------------------


def _first_or_create(store, matches, build):
    return matches[0] if matches else store.save(build())


@cli.group()
def exercise():
    """Exercises and their per-word configurations."""


@exercise.command("add")
@click.option("--title", required=True)
@click.option("--difficulty", required=True, type=int)
@click.option("--association", "association_id", type=int, default=None,
              help="Existing association id; alternative to --type/--subtype/--sound-label.")
@click.option("--type", "type_name", default=None)
@click.option("--type-app", default="", help="Player application of the exercise type.")
@click.option("--subtype", "subtype_name", default=None)
@click.option("--subtype-app", default="", help="Player application of the subtype (preferred on devices).")
@click.option("--sound-label", default=None, help="Target sound, e.g. s or r.")
@click.option("--instructions", "instructions_text", default=None)
@click.option("--instructions-id", type=int, default=None)
@click.pass_context
def exercise_add(ctx, title, difficulty, association_id, type_name, type_app,
                 subtype_name, subtype_app, sound_label, instructions_text, instructions_id):
    """Create an exercise; names for type/subtype/sound are created on demand."""
    if association_id is None and not (type_name and subtype_name and sound_label):
        raise click.UsageError("pass --association or all of --type, --subtype, --sound-label")
    if instructions_id is None and instructions_text is None:
        raise click.UsageError("pass --instructions or --instructions-id")
    with _store(ctx) as store:
        with store.transaction():
            if association_id is None:
                ex_type = _first_or_create(
                    store,
                    [t for t in store.list_all(Kind.EXERCISE_TYPE) if t.name == type_name],
                    lambda: ExerciseType(name=type_name, application_name=type_app),
                )
                subtype = _first_or_create(
                    store,
                    [t for t in store.list_all(Kind.EXERCISE_SUBTYPE) if t.name == subtype_name],
                    lambda: ExerciseSubtype(name=subtype_name, application_name=subtype_app),
                )
                sound = _first_or_create(
                    store,
                    [s for s in store.list_all(Kind.SOUND) if s.label == sound_label],
                    lambda: TargetSound(label=sound_label),
                )
                association_id = _first_or_create(
                    store,
                    [
                        a
                        for a in store.list_all(Kind.ASSOCIATION)
                        if (a.type_id, a.subtype_id, a.sound_id)
                        == (ex_type.id, subtype.id, sound.id)
                    ],
                    lambda: Association(type_id=ex_type.id, subtype_id=subtype.id, sound_id=sound.id),
                ).id
            if instructions_id is None:
                instructions_id = store.save(Instructions(text=instructions_text)).id
            stored = store.save(
                Exercise(
                    title=title,
                    difficulty=difficulty,
                    association_id=association_id,
                    instructions_id=instructions_id,
                )
            )
        _emit(ctx, to_dict(stored), [str(stored.id)])


@exercise.command("list")
@click.option("--type-id", type=int, default=None)
@click.option("--subtype-id", type=int, default=None)
@click.option("--sound-id", type=int, default=None)
@click.option("--difficulty-min", type=int, default=None)
@click.option("--difficulty-max", type=int, default=None)
@click.pass_context
def exercise_list(ctx, type_id, subtype_id, sound_id, difficulty_min, difficulty_max):
    with _store(ctx) as store:
        rows = store.query_exercises(
            type_id=type_id,
            subtype_id=subtype_id,
            sound_id=sound_id,
            difficulty_min=difficulty_min,
            difficulty_max=difficulty_max,
        )
        _emit(
            ctx,
            [to_dict(e) for e in rows],
            [f"{e.id}\t{e.title}\tdifficulty {e.difficulty}" for e in rows],
        )


@exercise.command("configure")
@click.option("--exercise", "exercise_id", required=True, type=int)
@click.option("--word", "word_id", required=True, type=int)
@click.option("--paronym", "paronym_id", type=int, default=None)
@click.option("--param1", default=0, help="Image display time in ms.")
@click.option("--param2", default=0, help="1 when the word contains the target sound.")
@click.option("--param3", default=0)
@click.pass_context
def exercise_configure(ctx, exercise_id, word_id, paronym_id, param1, param2, param3):
    with _store(ctx) as store:
        config = store.save(
            ExerciseConfiguration(
                exercise_id=exercise_id,
                word_id=word_id,
                paronym_id=paronym_id,
                param1=param1,
                param2=param2,
                param3=param3,
            )
        )
        _emit(ctx, to_dict(config), [str(config.id)])


# -- template --------------------------------------------------------------------


@cli.group()
def template():
    """Reusable homework templates."""


@template.command("add")
@click.option("--description", default="")
@click.option("--repetitions", required=True, type=int, help="Recommended repetitions per day.")
@click.option("--item", "items", multiple=True, required=True,
              type=ColonSpec(2, "exerciseId:thresholdPercent"))
@click.option("--deficiency-ref", "deficiency_refs", multiple=True, type=int)
@click.option("--test-ref", "test_refs", multiple=True, type=int)
@click.pass_context
def template_add(ctx, description, repetitions, items, deficiency_refs, test_refs):
    with _store(ctx) as store:
        stored = store.save(
            PredefinedHomework(
                description=description,
                repetitions_per_day=repetitions,
                exercise_items=tuple(
                    TemplateItem(exercise_id=e, success_threshold_percent=t) for e, t in items
                ),
                deficiency_refs=tuple(
                    LegacyRef(table=LegacyTable.DEFICIENTE, id=i) for i in deficiency_refs
                ),
                test_refs=tuple(LegacyRef(table=LegacyTable.TESTE, id=i) for i in test_refs),
            )
        )
        _emit(ctx, to_dict(stored), [str(stored.id)])


@template.command("list")
@click.pass_context
def template_list(ctx):
    with _store(ctx) as store:
        rows = store.list_all(Kind.TEMPLATE)
        _emit(
            ctx,
            [to_dict(t) for t in rows],
            [
                f"{t.id}\t{t.description or '(no description)'}\t{len(t.exercise_items)} exercises,"
                f" {t.repetitions_per_day}x/day"
                for t in rows
            ],
        )


# -- child -----------------------------------------------------------------------


@cli.group()
def child():
    """Children enrolled in therapy."""


@child.command("add")
@click.option("--family", required=True)
@click.option("--given", required=True)
@click.pass_context
def child_add(ctx, family, given):
    with _store(ctx) as store:
        stored = store.save(Child(family_name=family, given_name=given))
        _emit(ctx, to_dict(stored), [str(stored.id)])


@child.command("list")
@click.pass_context
def child_list(ctx):
    with _store(ctx) as store:
        rows = store.list_all(Kind.CHILD)
        _emit(ctx, [to_dict(c) for c in rows], [f"{c.id}\t{c.family_name} {c.given_name}" for c in rows])


# -- assign ----------------------------------------------------------------------


@cli.group()
def assign():
    """Homework assignments for a child."""


@assign.command("create")
@click.option("--child", "child_id", required=True, type=int)
@click.option("--template", "template_id", required=True, type=int)
@click.option("--date", "assigned", required=True, type=DATE)
@click.option("--days", required=True, type=int, help="Deadline in days (termen).")
@click.pass_context
def assign_create(ctx, child_id, template_id, assigned, days):
    with _store(ctx) as store:
        assignment = assign_homework(store, child_id, template_id, assigned, days)
        _emit(ctx, to_dict(assignment), [str(assignment.id)])


@assign.command("status")
@click.option("--id", "assignment_id", required=True, type=int)
@click.option("--today", type=DATE, default=None)
@click.pass_context
def assign_status(ctx, assignment_id, today):
    with _store(ctx) as store:
        assignment = store.get(Kind.ASSIGNMENT, assignment_id)
        as_of = today or date.today()
        status = assignment_status(assignment, as_of)
        payload = {
            "assignmentId": assignment_id,
            "today": as_of.isoformat(),
            "dueDate": due_date(assignment).isoformat(),
            "status": status.value,
        }
        _emit(ctx, payload, [status.value])


@assign.command("report")
@click.option("--id", "assignment_id", type=int, default=None)
@click.option("--date", "report_date", type=DATE, default=None)
@click.option("--record", "records", multiple=True,
              type=ColonSpec(4, "exerciseId:attemptIndex:achievedPercent:initiallyWrongWords"))
@click.option("--file", "intake_file", type=click.Path(path_type=Path), default=None,
              help="Report intake JSON {assignmentId, reportDate, records}.")
@click.pass_context
def assign_report(ctx, assignment_id, report_date, records, intake_file):
    """Record the results the child brought back."""
    with _store(ctx) as store:
        if intake_file is not None:
            try:
                payload = json.loads(Path(intake_file).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise click.UsageError(f"cannot read intake file: {exc}")
            assignment_id, report_date, parsed = parse_report_intake(payload, assignment_id)
        else:
            if assignment_id is None or report_date is None:
                raise click.UsageError("pass --file, or both --id and --date")
            parsed = [ReportRecord(*r) for r in records]
        outcomes = ingest_report(store, assignment_id, report_date, parsed)
        payload = {
            "assignmentId": assignment_id,
            "reportDate": report_date.isoformat(),
            "outcomes": [outcome_payload(o) for o in outcomes],
        }
        lines = [
            f"exercise {o.exercise_id}: best {o.best_percent}%"
            f" {'resolved' if o.resolved else 'not resolved'}"
            for o in outcomes
        ]
        _emit(ctx, payload, lines)


# -- bundle / device ---------------------------------------------------------------


@cli.group()
def bundle():
    """Offline device bundles."""


@bundle.command("export")
@click.option("--assignment", "assignment_id", required=True, type=int)
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.pass_context
def bundle_export(ctx, assignment_id, out):
    with _store(ctx) as store:
        path = export_bundle(store, assignment_id, out)
        _emit(ctx, {"bundlePath": str(path)}, [str(path)])


@bundle.command("import")
@click.option("--file", "results_file", required=True, type=click.Path(path_type=Path))
@click.pass_context
def bundle_import(ctx, results_file):
    with _store(ctx) as store:
        outcomes = import_result_bundle(store, results_file)
        payload = {"outcomes": [outcome_payload(o) for o in outcomes]}
        lines = [
            f"exercise {o.exercise_id}: best {o.best_percent}%"
            f" {'resolved' if o.resolved else 'not resolved'}"
            for o in outcomes
        ]
        _emit(ctx, payload, lines)


@cli.group()
def device():
    """Simulated offline device."""


@device.command("simulate")
@click.option("--bundle", "bundle_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.option("--error-rate", default=0.0, type=click.FloatRange(0.0, 1.0), show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--report-date", type=DATE, default=None,
              help="Defaults to the bundle's export date.")
@click.pass_context
def device_simulate(ctx, bundle_path, out, error_rate, seed, report_date):
    """Play a bundle with a seeded error profile and write the results archive."""
    result = simulate_device(bundle_path, error_rate=error_rate, seed=seed, report_date=report_date)
    path = write_result_bundle(result, out)
    _emit(ctx, {"resultsPath": str(path)}, [str(path)])


# -- progress -----------------------------------------------------------------------


@cli.group()
def progress():
    """Therapy progress over time."""


@progress.command("show")
@click.option("--child", "child_id", required=True, type=int)
@click.pass_context
def progress_show(ctx, child_id):
    with _store(ctx) as store:
        summary = child_progress(store, child_id)
        lines = [
            f"{e.assigned_date.isoformat()}\tassignment {e.assignment_id}:"
            f" mean {float(e.mean_best_percent):g}%"
            f" ({e.resolved_count}/{e.exercise_count} resolved)"
            for e in summary.per_assignment
        ] or ["no reported homework yet"]
        _emit(ctx, progress_payload(summary), lines)


# -- db -------------------------------------------------------------------------------


@cli.group()
def db():
    """Store maintenance and seed files."""


@db.command("init")
@click.pass_context
def db_init(ctx):
    with _store(ctx) as store:
        _emit(ctx, {"dataRoot": str(store.root)}, [f"initialized {store.root}"])


@db.command("seed")
@click.option("--from", "source", required=True, type=click.Path(path_type=Path))
@click.pass_context
def db_seed(ctx, source):
    """Import seed JSON files (all-or-nothing)."""
    with _store(ctx) as store:
        counts = store.import_seed(source)
        _emit(
            ctx,
            {"imported": counts},
            [f"{kind}: {n}" for kind, n in sorted(counts.items())] or ["nothing to import"],
        )


@db.command("export")
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.pass_context
def db_export(ctx, out):
    """Write one JSON file per entity kind."""
    with _store(ctx) as store:
        files = store.export_seed(out)
        _emit(ctx, {"files": [str(f) for f in files]}, [str(f) for f in files])


def main(argv: list[str] | None = None) -> int:
    """Dispatch argv; returns the process exit code instead of raising."""
    try:
        cli.main(args=argv, prog_name="logokit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except DomainError as exc:
        click.echo(f"{exc.code}: {exc.message}", err=True)
        return 1
    return 0


def entrypoint() -> None:  # console script
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
