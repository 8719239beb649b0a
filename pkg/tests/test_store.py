"""Store contract: round-trips, integrity, media files, queries, seeds, crashes."""

from __future__ import annotations

import json
import random
import subprocess
import sys
import textwrap
import unicodedata
from dataclasses import replace
from datetime import date

import pytest
from hypothesis import given, settings

from logokit.errors import (
    NameCollision,
    NotFound,
    ReferentialIntegrity,
    SourceMissing,
    StillReferenced,
    UniquenessViolation,
    ValidationFailed,
    WrongExtension,
)
from logokit.model import (
    AssetKind,
    Association,
    Exercise,
    ExerciseConfiguration,
    ExerciseSubtype,
    ExerciseType,
    HomeworkAssignment,
    HomeworkAttemptRecord,
    Instructions,
    Kind,
    MediaAsset,
    ParonymPair,
    PredefinedHomework,
    TargetSound,
    TemplateItem,
    Word,
)
from logokit.store import PartnerLink, Store

from conftest import build_graph, make_source
from strategies import valid_word_values


class TestRoundTrip:
    def test_first_insert_allocates_id_one(self, store, tmp_path):
        asset = store.register_media_asset(
            AssetKind.SOUND, make_source(tmp_path / "stage", "copil.wav")
        )
        assert asset.id == 1

    def test_every_kind_round_trips(self, store, graph):
        from logokit.model import KIND_OF

        assert {KIND_OF[type(e)] for e in vars(graph).values()} >= set(KIND_OF.values()) - {
            Kind.ATTEMPT
        }
        for entity in vars(graph).values():
            assert store.get(KIND_OF[type(entity)], entity.id) == entity

    def test_get_absent_raises_not_found(self, store):
        with pytest.raises(NotFound):
            store.get(Kind.WORD, 999)

    def test_diacritics_round_trip_byte_identical(self, store, tmp_path):
        from logokit.model import Gender, PartOfSpeech

        sound = store.register_media_asset(
            AssetKind.SOUND, make_source(tmp_path / "stage", "sarpe.wav")
        )
        image = store.register_media_asset(
            AssetKind.IMAGE, make_source(tmp_path / "stage", "sarpe.png")
        )
        word = store.save(
            Word(
                text="șarpe",
                speaker_family_name="Pop",
                speaker_given_name="Ion",
                is_therapist_recording=False,
                part_of_speech=PartOfSpeech.NOUN,
                gender=Gender.MASCULINE,
                article_compatible=True,
                sound_asset_id=sound.id,
                image_asset_id=image.id,
            )
        )
        fetched = store.get(Kind.WORD, word.id)
        # Oracle: compare the raw UTF-8 encodings byte for byte.
        assert fetched.text.encode("utf-8") == "șarpe".encode("utf-8")

    def test_nfc_applied_on_write(self, store, graph):
        decomposed = unicodedata.normalize("NFD", "țânțar")
        assert decomposed != "țânțar"
        word = store.save(replace(graph.copil, id=None, text=decomposed))
        assert store.get(Kind.WORD, word.id).text == "țânțar"

    def test_overwrite_by_id(self, store, graph):
        updated = replace(graph.exercise_single, title="Auz fonematic nou", difficulty=4)
        assert store.put(updated) == graph.exercise_single.id
        assert store.get(Kind.EXERCISE, graph.exercise_single.id) == updated

    def test_ids_allocated_monotonically_even_after_delete(self, store, graph):
        pair_id = graph.pair.id
        for config_id in (graph.config_one.id, graph.config_two.id):
            config = store.get(Kind.CONFIGURATION, config_id)
            store.put(replace(config, paronym_id=None))
        store.delete(Kind.PARONYM, pair_id)
        new_pair = store.save(ParonymPair(word_a_id=graph.copil.id, word_b_id=graph.copii.id))
        assert new_pair.id > pair_id


class TestReferentialIntegrity:
    def test_put_with_dangling_reference_is_rejected(self, store, graph):
        # Oracle: membership check against the set of inserted exercise ids.
        inserted = {e.id for e in store.list_all(Kind.EXERCISE)}
        assert 999 not in inserted
        with pytest.raises(ReferentialIntegrity) as err:
            store.put(ExerciseConfiguration(exercise_id=999, word_id=graph.copil.id))
        assert ("exercise", 999) in err.value.missing

    def test_dangling_word_reference_names_the_word(self, store, graph):
        with pytest.raises(ReferentialIntegrity) as err:
            store.put(ExerciseConfiguration(exercise_id=graph.exercise_single.id, word_id=777))
        assert ("word", 777) in err.value.missing

    def test_self_pair_is_a_uniqueness_violation(self, store, graph):
        with pytest.raises(UniquenessViolation, match="self-pair"):
            store.put(ParonymPair(word_a_id=graph.copil.id, word_b_id=graph.copil.id))

    def test_duplicate_pair_either_orientation(self, store, graph):
        with pytest.raises(UniquenessViolation):
            store.put(ParonymPair(word_a_id=graph.copii.id, word_b_id=graph.copil.id))

    def test_association_triple_unique(self, store, graph):
        with pytest.raises(UniquenessViolation):
            store.put(
                Association(
                    type_id=graph.ex_type.id,
                    subtype_id=graph.subtype.id,
                    sound_id=graph.sound_s.id,
                )
            )

    def test_configuration_word_unique_per_exercise(self, store, graph):
        with pytest.raises(UniquenessViolation):
            store.put(
                ExerciseConfiguration(
                    exercise_id=graph.exercise_pairs.id, word_id=graph.copil.id
                )
            )

    def test_validation_failure_reported_before_references(self, store, graph):
        with pytest.raises(ValidationFailed):
            store.put(
                Exercise(
                    title="x",
                    difficulty=9,
                    association_id=graph.association.id,
                    instructions_id=graph.instructions.id,
                )
            )


class TestDelete:
    def test_delete_word_used_by_configuration(self, store, graph):
        # Oracle: scan all junction rows for the word id.
        configs = [
            c.id for c in store.list_all(Kind.CONFIGURATION) if c.word_id == graph.copil.id
        ]
        with pytest.raises(StillReferenced) as err:
            store.delete(Kind.WORD, graph.copil.id)
        referenced_config_ids = {
            i for kind, i in err.value.referrers if kind == "configuration"
        }
        assert set(configs) <= referenced_config_ids
        assert store.get(Kind.WORD, graph.copil.id) == graph.copil

    def test_delete_unreferenced_pair(self, store, graph):
        for config_id in (graph.config_one.id, graph.config_two.id):
            config = store.get(Kind.CONFIGURATION, config_id)
            store.put(replace(config, paronym_id=None))
        store.delete(Kind.PARONYM, graph.pair.id)
        with pytest.raises(NotFound):
            store.get(Kind.PARONYM, graph.pair.id)

    def test_delete_exercise_in_template(self, store, graph):
        with pytest.raises(StillReferenced) as err:
            store.delete(Kind.EXERCISE, graph.exercise_pairs.id)
        assert ("template", graph.template.id) in err.value.referrers

    def test_delete_missing_raises_not_found(self, store):
        with pytest.raises(NotFound):
            store.delete(Kind.CHILD, 12)

    def test_delete_asset_removes_file(self, store, tmp_path):
        asset = store.register_media_asset(
            AssetKind.IMAGE, make_source(tmp_path / "stage", "lone.png")
        )
        path = store.asset_path(asset)
        assert path.is_file()
        store.delete(Kind.ASSET, asset.id)
        assert not path.exists()

    def test_delete_referenced_asset_blocked(self, store, graph):
        with pytest.raises(StillReferenced):
            store.delete(Kind.ASSET, graph.copil_sound.id)
        assert store.asset_path(graph.copil_sound).is_file()


class TestTemplateImmutability:
    def test_assigned_template_cannot_be_overwritten(self, store, graph):
        with pytest.raises(StillReferenced) as err:
            store.put(replace(graph.template, description="edited"))
        assert ("assignment", graph.assignment.id) in err.value.referrers

    def test_unassigned_template_is_editable(self, store, graph):
        fresh = store.save(
            PredefinedHomework(
                description="liber",
                repetitions_per_day=1,
                exercise_items=(
                    TemplateItem(
                        exercise_id=graph.exercise_single.id, success_threshold_percent=50
                    ),
                ),
            )
        )
        updated = store.save(replace(fresh, description="editat"))
        assert updated.description == "editat"


class TestAttemptRules:
    def _report(self, store, graph):
        from logokit.homework import ReportRecord, ingest_report

        return ingest_report(
            store,
            graph.assignment.id,
            date(2024, 3, 5),
            [
                ReportRecord(graph.exercise_pairs.id, 1, 70, 1),
                ReportRecord(graph.exercise_pairs.id, 2, 85, 0),
            ],
        )

    def test_attempt_must_belong_to_template(self, store, graph):
        rogue = store.save(
            Exercise(
                title="extern",
                difficulty=1,
                association_id=graph.association.id,
                instructions_id=graph.instructions.id,
            )
        )
        with pytest.raises(ValidationFailed, match="not part of template"):
            store.put(
                HomeworkAttemptRecord(
                    assignment_id=graph.assignment.id,
                    exercise_id=rogue.id,
                    attempt_index=1,
                    achieved_percent=10,
                    initially_wrong_words=0,
                )
            )

    def test_attempt_sequence_must_be_contiguous(self, store, graph):
        with pytest.raises(ValidationFailed, match="contiguous"):
            store.put(
                HomeworkAttemptRecord(
                    assignment_id=graph.assignment.id,
                    exercise_id=graph.exercise_pairs.id,
                    attempt_index=2,
                    achieved_percent=10,
                    initially_wrong_words=0,
                )
            )

    def test_attempt_duplicate_index_rejected(self, store, graph):
        self._report(store, graph)
        with pytest.raises(UniquenessViolation):
            store.put(
                HomeworkAttemptRecord(
                    assignment_id=graph.assignment.id,
                    exercise_id=graph.exercise_pairs.id,
                    attempt_index=1,
                    achieved_percent=50,
                    initially_wrong_words=0,
                )
            )

    def test_only_top_attempt_deletable(self, store, graph):
        self._report(store, graph)
        attempts = sorted(
            (a for a in store.list_all(Kind.ATTEMPT) if a.exercise_id == graph.exercise_pairs.id),
            key=lambda a: a.attempt_index,
        )
        with pytest.raises(StillReferenced):
            store.delete(Kind.ATTEMPT, attempts[0].id)
        store.delete(Kind.ATTEMPT, attempts[1].id)
        store.delete(Kind.ATTEMPT, attempts[0].id)
        assert store.audit() == []

    def test_wrong_words_bounded_by_configuration_count(self, store, graph):
        with pytest.raises(ValidationFailed, match="exceeds"):
            store.put(
                HomeworkAttemptRecord(
                    assignment_id=graph.assignment.id,
                    exercise_id=graph.exercise_pairs.id,
                    attempt_index=1,
                    achieved_percent=10,
                    initially_wrong_words=3,
                )
            )


class TestMediaRegistration:
    def test_copy_semantics(self, store, tmp_path):
        source = make_source(tmp_path / "stage", "copil.wav", b"RIFFdata")
        asset = store.register_media_asset(AssetKind.SOUND, source)
        assert asset.filename == "copil.wav"
        copied = store.asset_path(asset)
        assert copied.read_bytes() == b"RIFFdata"
        assert source.is_file()  # original untouched

    def test_name_collision(self, store, tmp_path):
        source = make_source(tmp_path / "stage", "copil.wav")
        store.register_media_asset(AssetKind.SOUND, source)
        with pytest.raises(NameCollision):
            store.register_media_asset(AssetKind.SOUND, source)

    def test_wrong_extension(self, store, tmp_path):
        source = make_source(tmp_path / "stage", "copil.wav")
        with pytest.raises(WrongExtension):
            store.register_media_asset(AssetKind.IMAGE, source)

    def test_source_missing(self, store, tmp_path):
        with pytest.raises(SourceMissing):
            store.register_media_asset(AssetKind.SOUND, tmp_path / "nope.wav")


class TestQueries:
    def _build_query_fixture(self, store, graph):
        rng = random.Random(42)
        type_b = store.save(ExerciseType(name="Pronunție"))
        subtype_b = store.save(ExerciseSubtype(name="Repetare cuvânt", application_name="repeta"))
        sound_r = store.save(TargetSound(label="r"))
        associations = [graph.association]
        for type_id in (graph.ex_type.id, type_b.id):
            for subtype_id in (graph.subtype.id, subtype_b.id):
                for sound_id in (graph.sound_s.id, sound_r.id):
                    if (type_id, subtype_id, sound_id) == (
                        graph.association.type_id,
                        graph.association.subtype_id,
                        graph.association.sound_id,
                    ):
                        continue
                    associations.append(
                        store.save(
                            Association(type_id=type_id, subtype_id=subtype_id, sound_id=sound_id)
                        )
                    )
        for i in range(30):
            store.save(
                Exercise(
                    title=f"exercițiu {rng.randrange(1000):03d}",
                    difficulty=rng.randint(1, 5),
                    association_id=rng.choice(associations).id,
                    instructions_id=graph.instructions.id,
                )
            )
        return SimpleFilterOracle(store)

    def test_empty_store_returns_empty(self, store):
        assert store.query_exercises(sound_id=1) == []

    def test_filters_match_brute_force_scan(self, store, graph):
        oracle = self._build_query_fixture(store, graph)
        filters = [
            {},
            {"sound_id": graph.sound_s.id},
            {"type_id": graph.ex_type.id},
            {"subtype_id": graph.subtype.id},
            {"difficulty_min": 2, "difficulty_max": 2},
            {"difficulty_min": 4},
            {"difficulty_max": 1},
            {"type_id": graph.ex_type.id, "sound_id": graph.sound_s.id, "difficulty_max": 3},
            {"type_id": 999},
        ]
        for kwargs in filters:
            assert store.query_exercises(**kwargs) == oracle.query(**kwargs), kwargs

    def test_paronym_partner_symmetry(self, store, graph):
        assert store.paronym_partner(graph.copii.id) == [
            PartnerLink(pair_id=graph.pair.id, partner_word_id=graph.copil.id)
        ]
        assert store.paronym_partner(graph.copil.id) == [
            PartnerLink(pair_id=graph.pair.id, partner_word_id=graph.copii.id)
        ]

    def test_paronym_partner_unknown_word(self, store):
        with pytest.raises(NotFound):
            store.paronym_partner(17)

    def test_paronym_partner_matches_scan_oracle(self, store, graph, tmp_path):
        words = [graph.copil, graph.copii]
        for i in range(4):
            sound = store.register_media_asset(
                AssetKind.SOUND, make_source(tmp_path / "stage", f"w{i}.wav")
            )
            image = store.register_media_asset(
                AssetKind.IMAGE, make_source(tmp_path / "stage", f"w{i}.png")
            )
            words.append(
                store.save(
                    replace(
                        graph.copil,
                        id=None,
                        text=f"cuvânt{i}",
                        sound_asset_id=sound.id,
                        image_asset_id=image.id,
                    )
                )
            )
        rng = random.Random(7)
        created = 1
        while created < 5:
            a, b = rng.sample(words, 2)
            try:
                store.put(ParonymPair(word_a_id=a.id, word_b_id=b.id))
                created += 1
            except UniquenessViolation:
                continue
        pairs = store.list_all(Kind.PARONYM)
        for word in words:
            expected = []
            for pair in pairs:  # brute force over both columns
                if pair.word_a_id == word.id:
                    expected.append(PartnerLink(pair.id, pair.word_b_id))
                elif pair.word_b_id == word.id:
                    expected.append(PartnerLink(pair.id, pair.word_a_id))
            expected.sort(key=lambda l: l.pair_id)
            assert store.paronym_partner(word.id) == expected


class SimpleFilterOracle:
    """Brute-force reference for query_exercises."""

    def __init__(self, store):
        self.store = store

    def query(
        self,
        type_id=None,
        subtype_id=None,
        sound_id=None,
        difficulty_min=None,
        difficulty_max=None,
    ):
        out = []
        for exercise in self.store.list_all(Kind.EXERCISE):
            assoc = self.store.get(Kind.ASSOCIATION, exercise.association_id)
            if type_id is not None and assoc.type_id != type_id:
                continue
            if subtype_id is not None and assoc.subtype_id != subtype_id:
                continue
            if sound_id is not None and assoc.sound_id != sound_id:
                continue
            if difficulty_min is not None and exercise.difficulty < difficulty_min:
                continue
            if difficulty_max is not None and exercise.difficulty > difficulty_max:
                continue
            out.append(exercise)
        return sorted(out, key=lambda e: (e.difficulty, e.title, e.id))


@pytest.fixture(scope="module")
def prop_store(tmp_path_factory):
    root = tmp_path_factory.mktemp("prop")
    with Store(root / "data") as s:
        s.register_media_asset(AssetKind.SOUND, make_source(root / "stage", "base.wav"))
        s.register_media_asset(AssetKind.IMAGE, make_source(root / "stage", "base.png"))
        yield s


class TestWordRoundTripProperty:
    @settings(max_examples=50, deadline=None)
    @given(word=valid_word_values(sound_id=1, image_id=2))
    def test_generated_words_round_trip(self, prop_store, word):
        stored = prop_store.save(word)
        assert prop_store.get(Kind.WORD, stored.id) == stored
        assert stored.text.encode("utf-8") == unicodedata.normalize(
            "NFC", word.text
        ).encode("utf-8")


class TestAuditAndSeeds:
    def test_graph_audits_clean(self, store, graph):
        assert store.audit() == []

    def test_audit_catches_planted_dangling_row(self, store, graph):
        # Bypass the public API to simulate corruption.
        store._db.execute(
            "INSERT INTO entities (kind, id, data) VALUES (?, ?, ?)",
            (
                Kind.CONFIGURATION.value,
                999,
                json.dumps(
                    {
                        "id": 999,
                        "exerciseId": 12345,
                        "wordId": graph.copil.id,
                        "paronymId": None,
                        "param1": 0,
                        "param2": 0,
                        "param3": 0,
                    }
                ),
            ),
        )
        problems = store.audit()
        assert any("dangles" in p for p in problems)

    def test_seed_round_trip(self, store, graph, tmp_path):
        out = tmp_path / "seed"
        store.export_seed(out)
        clone_root = tmp_path / "clone"
        with Store(clone_root) as clone:
            # Asset files must be in place before rows referencing them land.
            for asset in store.list_all(Kind.ASSET):
                target = clone.asset_path(asset)
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_bytes(store.asset_path(asset).read_bytes())
            clone.import_seed(out)
            for kind in Kind:
                assert clone.list_all(kind) == store.list_all(kind), kind
            assert clone.audit() == []

    def test_import_is_all_or_nothing(self, store, graph, tmp_path):
        out = tmp_path / "seed"
        store.export_seed(out)
        # Corrupt one exercise row (difficulty out of range).
        exercises = json.loads((out / "exercises.json").read_text())
        exercises[-1]["difficulty"] = 9
        (out / "exercises.json").write_text(json.dumps(exercises))
        clone_root = tmp_path / "clone"
        with Store(clone_root) as clone:
            for asset in store.list_all(Kind.ASSET):
                target = clone.asset_path(asset)
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_bytes(b"x")
            with pytest.raises(ValidationFailed):
                clone.import_seed(out)
            for kind in Kind:
                assert clone.list_all(kind) == [], kind


class TestCrashAtomicity:
    def test_kill_and_reopen_preserves_integrity(self, tmp_path):
        script = textwrap.dedent(
            """
            import os, sys
            from logokit.model import AssetKind, Child
            from logokit.store import Store

            root = sys.argv[1]
            staging = sys.argv[2]
            store = Store(root)
            os.makedirs(staging, exist_ok=True)
            wav = os.path.join(staging, "a.wav")
            open(wav, "wb").write(b"x")
            store.register_media_asset(AssetKind.SOUND, wav)
            store.save(Child(family_name="Pop", given_name="Dan"))
            store.save(Child(family_name="Radu", given_name="Ema"))
            os._exit(0)  # die without closing anything
            """
        )
        result = subprocess.run(
            [sys.executable, "-c", script, str(tmp_path / "data"), str(tmp_path / "stage")],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr
        with Store(tmp_path / "data") as store:
            assert store.audit() == []
            children = store.list_all(Kind.CHILD)
            assert [c.given_name for c in children] == ["Dan", "Ema"]
            assert store.count(Kind.ASSET) == 1
