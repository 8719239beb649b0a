"""Shared fixtures: a temp store and a small but fully connected entity graph."""

from __future__ import annotations

from datetime import date
from types import SimpleNamespace

import pytest

from logokit.model import (
    AssetKind,
    Association,
    Child,
    Exercise,
    ExerciseConfiguration,
    ExerciseSubtype,
    ExerciseType,
    Gender,
    HomeworkAssignment,
    Instructions,
    LegacyRef,
    LegacyTable,
    ParonymPair,
    PartOfSpeech,
    PredefinedHomework,
    TargetSound,
    TemplateItem,
    Word,
)
from logokit.store import Store


@pytest.fixture
def store(tmp_path):
    with Store(tmp_path / "data") as s:
        yield s


def make_source(directory, name, payload: bytes | None = None):
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    path.write_bytes(payload if payload is not None else f"dummy:{name}".encode())
    return path


def register_pair(store, staging, stem):
    """Register <stem>.wav and <stem>.png, returning the two assets."""
    sound = store.register_media_asset(AssetKind.SOUND, make_source(staging, f"{stem}.wav"))
    image = store.register_media_asset(AssetKind.IMAGE, make_source(staging, f"{stem}.png"))
    return sound, image


def build_graph(store, staging) -> SimpleNamespace:
    """One of everything: two words with assets, a paronym pair, the
    type/subtype/sound association, two exercises (one with two
    configurations), a two-exercise template, a child and an assignment."""
    copil_sound, copil_image = register_pair(store, staging, "copil")
    copii_sound, copii_image = register_pair(store, staging, "copii")
    copil = store.save(
        Word(
            text="copil",
            speaker_family_name="Pop",
            speaker_given_name="Ana",
            is_therapist_recording=True,
            part_of_speech=PartOfSpeech.NOUN,
            gender=Gender.MASCULINE,
            article_compatible=True,
            sound_asset_id=copil_sound.id,
            image_asset_id=copil_image.id,
        )
    )
    copii = store.save(
        Word(
            text="copii",
            speaker_family_name="Pop",
            speaker_given_name="Ana",
            is_therapist_recording=True,
            part_of_speech=PartOfSpeech.NOUN,
            gender=Gender.MASCULINE,
            article_compatible=False,
            sound_asset_id=copii_sound.id,
            image_asset_id=copii_image.id,
        )
    )
    pair = store.save(ParonymPair(word_a_id=copil.id, word_b_id=copii.id))
    ex_type = store.save(ExerciseType(name="Auz fonematic"))
    subtype = store.save(
        ExerciseSubtype(
            name="Identificare cuvânt în perechi de paronime",
            application_name="paronime-player",
        )
    )
    sound_s = store.save(TargetSound(label="s"))
    association = store.save(
        Association(type_id=ex_type.id, subtype_id=subtype.id, sound_id=sound_s.id)
    )
    instructions = store.save(Instructions(text="Ascultă cuvântul și alege imaginea potrivită."))
    exercise_pairs = store.save(
        Exercise(
            title="Paronime cu s",
            difficulty=3,
            association_id=association.id,
            instructions_id=instructions.id,
        )
    )
    config_one = store.save(
        ExerciseConfiguration(
            exercise_id=exercise_pairs.id,
            word_id=copil.id,
            paronym_id=pair.id,
            param1=1500,
            param2=1,
        )
    )
    config_two = store.save(
        ExerciseConfiguration(
            exercise_id=exercise_pairs.id,
            word_id=copii.id,
            paronym_id=pair.id,
            param1=1500,
            param2=0,
        )
    )
    exercise_single = store.save(
        Exercise(
            title="Auz fonematic s",
            difficulty=2,
            association_id=association.id,
            instructions_id=instructions.id,
        )
    )
    config_three = store.save(
        ExerciseConfiguration(
            exercise_id=exercise_single.id, word_id=copil.id, param1=1000, param2=1
        )
    )
    template = store.save(
        PredefinedHomework(
            description="Temă paronime s",
            repetitions_per_day=2,
            exercise_items=(
                TemplateItem(exercise_id=exercise_pairs.id, success_threshold_percent=80),
                TemplateItem(exercise_id=exercise_single.id, success_threshold_percent=60),
            ),
            deficiency_refs=(LegacyRef(table=LegacyTable.DEFICIENTE, id=1),),
            test_refs=(LegacyRef(table=LegacyTable.TESTE, id=2),),
        )
    )
    child = store.save(Child(family_name="Ionescu", given_name="Maria"))
    assignment = store.save(
        HomeworkAssignment(
            child_id=child.id,
            predefined_homework_id=template.id,
            assigned_date=date(2024, 3, 1),
            deadline_days=7,
        )
    )
    return SimpleNamespace(
        copil=copil,
        copii=copii,
        copil_sound=copil_sound,
        copil_image=copil_image,
        copii_sound=copii_sound,
        copii_image=copii_image,
        pair=pair,
        ex_type=ex_type,
        subtype=subtype,
        sound_s=sound_s,
        association=association,
        instructions=instructions,
        exercise_pairs=exercise_pairs,
        exercise_single=exercise_single,
        config_one=config_one,
        config_two=config_two,
        config_three=config_three,
        template=template,
        child=child,
        assignment=assignment,
    )


@pytest.fixture
def graph(store, tmp_path):
    return build_graph(store, tmp_path / "staging")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome, mark in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, ()):
            name = report.nodeid.rsplit("::", 1)[-1]
            if "test_acceptance" in report.nodeid and name.startswith("test_criterion"):
                lines.append(f"[{mark}] {name.removeprefix('test_')}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
