"""Device bundles: export, simulated device, result import, tamper handling."""

from __future__ import annotations

import hashlib
import json
import zipfile
from datetime import date, datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logokit.errors import (
    AlreadyReported,
    AssetMissing,
    DigestMismatch,
    MalformedBundle,
    NotFound,
    UnknownAssignment,
)
from logokit.homework import ingest_report
from logokit.model import Kind
from logokit.sync import (
    export_bundle,
    import_result_bundle,
    read_bundle_manifest,
    read_result_bundle,
    result_bundle_bytes,
    round_half_up_percent,
    simulate_device,
    write_result_bundle,
)

STAMP = datetime(2024, 3, 2, 10, 0, 0, tzinfo=timezone.utc)


def export(store, graph, destination, stamp=STAMP):
    return export_bundle(store, graph.assignment.id, destination, exported_at=stamp)


def rewrite_zip_entry(path, name, transform):
    with zipfile.ZipFile(path) as archive:
        entries = {info.filename: archive.read(info.filename) for info in archive.infolist()}
    entries[name] = transform(entries[name])
    path.unlink()
    with zipfile.ZipFile(path, "w") as archive:
        for entry_name in sorted(entries):
            archive.writestr(entry_name, entries[entry_name])
    return path


class TestExport:
    def test_manifest_lists_assets_with_true_digests(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        manifest, _ = read_bundle_manifest(bundle)
        kinds = [a.relative_path.split("/")[1] for a in manifest.assets]
        assert kinds.count("sound") == 2 and kinds.count("image") == 2
        # Oracle: digest the extracted entries independently.
        with zipfile.ZipFile(bundle) as archive:
            for asset in manifest.assets:
                payload = archive.read(asset.relative_path)
                assert hashlib.sha256(payload).hexdigest() == asset.digest

    def test_manifest_carries_exercise_material(self, store, graph, tmp_path):
        manifest, _ = read_bundle_manifest(export(store, graph, tmp_path))
        assert manifest.assignment_id == graph.assignment.id
        assert manifest.child_id == graph.child.id
        assert manifest.repetitions_per_day == graph.template.repetitions_per_day
        by_id = {e.exercise_id: e for e in manifest.exercises}
        pairs = by_id[graph.exercise_pairs.id]
        assert pairs.success_threshold_percent == 80
        assert pairs.instructions_text == graph.instructions.text
        assert [c.word_id for c in pairs.configuration] == [graph.copil.id, graph.copii.id]
        copil_config = pairs.configuration[0]
        assert copil_config.article_token == "un"
        assert copil_config.partner_word_id == graph.copii.id
        copii_config = pairs.configuration[1]
        assert copii_config.article_token is None

    def test_subtype_application_name_preferred(self, store, graph, tmp_path):
        from dataclasses import replace

        manifest, _ = read_bundle_manifest(export(store, graph, tmp_path / "a"))
        assert manifest.exercises[0].application_name == graph.subtype.application_name
        store.put(replace(graph.subtype, application_name=""))
        store.put(replace(graph.ex_type, application_name="auz-player"))
        manifest, _ = read_bundle_manifest(export(store, graph, tmp_path / "b"))
        assert manifest.exercises[0].application_name == "auz-player"

    def test_deterministic_given_pinned_stamp(self, store, graph, tmp_path):
        first = export(store, graph, tmp_path / "one")
        second = export(store, graph, tmp_path / "two")
        assert first.read_bytes() == second.read_bytes()

    def test_manifests_equal_except_exported_at(self, store, graph, tmp_path):
        first = export(store, graph, tmp_path / "one", stamp=STAMP)
        second = export(
            store, graph, tmp_path / "two", stamp=datetime(2024, 3, 3, 9, 0, tzinfo=timezone.utc)
        )
        one = json.loads(zipfile.ZipFile(first).read("manifest.json"))
        two = json.loads(zipfile.ZipFile(second).read("manifest.json"))
        assert one.pop("exportedAt") != two.pop("exportedAt")
        assert one == two

    def test_missing_asset_file(self, store, graph, tmp_path):
        store.asset_path(graph.copii_image).unlink()
        with pytest.raises(AssetMissing):
            export(store, graph, tmp_path)

    def test_unknown_assignment(self, store, graph, tmp_path):
        with pytest.raises(NotFound):
            export_bundle(store, 999, tmp_path)

    def test_reported_assignment_refused(self, store, graph, tmp_path):
        ingest_report(store, graph.assignment.id, date(2024, 3, 5), [])
        with pytest.raises(AlreadyReported):
            export(store, graph, tmp_path)


class TestSimulatedDevice:
    def test_zero_error_rate_is_perfect(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        result = simulate_device(bundle, error_rate=0.0, seed=5)
        assert result.records, "device must produce attempts"
        reps = graph.template.repetitions_per_day
        assert len(result.records) == reps * len(graph.template.exercise_items)
        assert all(r.achieved_percent == 100 and r.initially_wrong_words == 0 for r in result.records)

    def test_full_error_rate_fails_every_word(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        result = simulate_device(bundle, error_rate=1.0, seed=5)
        manifest, _ = read_bundle_manifest(bundle)
        words = {e.exercise_id: len(e.configuration) for e in manifest.exercises}
        for record in result.records:
            assert record.achieved_percent == 0
            assert record.initially_wrong_words == words[record.exercise_id]

    def test_fixed_seed_reproduces_byte_identical_results(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        first = simulate_device(bundle, error_rate=0.3, seed=77)
        second = simulate_device(bundle, error_rate=0.3, seed=77)
        assert result_bundle_bytes(first) == result_bundle_bytes(second)

    def test_different_seeds_differ_somewhere(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        outcomes = {
            result_bundle_bytes(simulate_device(bundle, error_rate=0.5, seed=s)) for s in range(6)
        }
        assert len(outcomes) > 1

    def test_percent_formula_holds_for_any_rate(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        manifest, _ = read_bundle_manifest(bundle)
        words = {e.exercise_id: len(e.configuration) for e in manifest.exercises}
        for seed in range(5):
            result = simulate_device(bundle, error_rate=0.4, seed=seed)
            for record in result.records:
                total = words[record.exercise_id]
                assert record.achieved_percent == round_half_up_percent(
                    total - record.initially_wrong_words, total
                )

    def test_report_date_defaults_to_export_date(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        assert simulate_device(bundle, seed=1).report_date == STAMP.date()

    def test_round_half_up(self):
        assert round_half_up_percent(1, 3) == 33
        assert round_half_up_percent(2, 3) == 67
        assert round_half_up_percent(1, 2) == 50
        assert round_half_up_percent(5, 8) == 63  # 62.5 rounds up
        assert round_half_up_percent(0, 7) == 0
        assert round_half_up_percent(7, 7) == 100


class TestImport:
    def _deliver(self, store, graph, tmp_path, error_rate=0.0, seed=3, report_date=None):
        bundle = export(store, graph, tmp_path)
        result = simulate_device(
            bundle, error_rate=error_rate, seed=seed, report_date=report_date
        )
        return write_result_bundle(result, tmp_path)

    def test_round_trip_resolves_every_exercise(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)
        outcomes = import_result_bundle(store, results)
        assert {o.exercise_id for o in outcomes} == {
            item.exercise_id for item in graph.template.exercise_items
        }
        assert all(o.resolved for o in outcomes)
        assignment = store.get(Kind.ASSIGNMENT, graph.assignment.id)
        assert assignment.report_date == STAMP.date()
        assert store.audit() == []

    def test_duplicate_import_rejected_without_changes(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)
        import_result_bundle(store, results)
        attempts = store.list_all(Kind.ATTEMPT)
        with pytest.raises(AlreadyReported):
            import_result_bundle(store, results)
        assert store.list_all(Kind.ATTEMPT) == attempts

    def test_altered_digest_detected(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)

        def flip_digest(data: bytes) -> bytes:
            payload = json.loads(data)
            digest = payload["manifestDigest"]
            flipped = ("0" if digest[0] != "0" else "1") + digest[1:]
            payload["manifestDigest"] = flipped
            return json.dumps(payload).encode()

        rewrite_zip_entry(results, "results.json", flip_digest)
        with pytest.raises(DigestMismatch):
            import_result_bundle(store, results)
        assert store.list_all(Kind.ATTEMPT) == []
        assert store.get(Kind.ASSIGNMENT, graph.assignment.id).report_date is None

    def test_tampered_manifest_detected_on_result_import(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        # Flip one byte inside a JSON string so the bundle still parses.
        rewrite_zip_entry(
            bundle,
            "manifest.json",
            lambda data: data.replace(b"Paronime cu s", b"Paronime cu z", 1),
        )
        result = simulate_device(bundle, seed=2)
        results_path = write_result_bundle(result, tmp_path)
        with pytest.raises(DigestMismatch):
            import_result_bundle(store, results_path)
        assert store.get(Kind.ASSIGNMENT, graph.assignment.id).report_date is None

    def test_unknown_assignment(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)

        def rename(data: bytes) -> bytes:
            payload = json.loads(data)
            payload["assignmentId"] = 4242
            return json.dumps(payload).encode()

        rewrite_zip_entry(results, "results.json", rename)
        with pytest.raises(UnknownAssignment):
            import_result_bundle(store, results)

    def test_unknown_fields_rejected(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)

        def extend(data: bytes) -> bytes:
            payload = json.loads(data)
            payload["surprise"] = True
            return json.dumps(payload).encode()

        rewrite_zip_entry(results, "results.json", extend)
        with pytest.raises(MalformedBundle):
            import_result_bundle(store, results)

    def test_format_version_gate(self, store, graph, tmp_path):
        results = self._deliver(store, graph, tmp_path)

        def bump(data: bytes) -> bytes:
            payload = json.loads(data)
            payload["formatVersion"] = 2
            return json.dumps(payload).encode()

        rewrite_zip_entry(results, "results.json", bump)
        with pytest.raises(MalformedBundle):
            import_result_bundle(store, results)

    def test_garbage_archive(self, store, tmp_path):
        path = tmp_path / "junk.zip"
        path.write_bytes(b"this is not a zip")
        with pytest.raises(MalformedBundle):
            import_result_bundle(store, path)

    def test_result_bundle_reader_round_trips(self, store, graph, tmp_path):
        bundle = export(store, graph, tmp_path)
        result = simulate_device(bundle, error_rate=0.25, seed=11)
        path = write_result_bundle(result, tmp_path)
        assert read_result_bundle(path) == result


class TestRoundingProperty:
    @settings(max_examples=200, deadline=None)
    @given(wrong=st.integers(0, 30), total=st.integers(1, 30))
    def test_round_half_up_matches_decimal_oracle(self, wrong, total):
        from decimal import ROUND_HALF_UP, Decimal

        if wrong > total:
            wrong = total
        expected = int(
            (Decimal(100) * (total - wrong) / total).quantize(Decimal("1"), rounding=ROUND_HALF_UP)
        )
        assert round_half_up_percent(total - wrong, total) == expected
