#!/usr/bin/env python3
"""Record API fixtures for the console's snapshot tests.

Seeds a throwaway store with the test graph, drives the HTTP API in-process
and writes every response body the console tests assert against to
frontend/test/fixtures/.  Re-run after changing the API or the seed graph.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from conftest import build_graph  # noqa: E402

from logokit.api import create_app  # noqa: E402
from logokit.store import Store  # noqa: E402

FIXTURES = REPO / "frontend" / "test" / "fixtures"


def dump(name: str, payload) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / name).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {name}")


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        with Store(tmp_path / "data") as store:
            graph = build_graph(store, tmp_path / "staging")
            client = TestClient(create_app(store))

            report = client.post(
                f"/assignments/{graph.assignment.id}/report",
                json={
                    "assignmentId": graph.assignment.id,
                    "reportDate": "2024-03-05",
                    "records": [
                        {"exerciseId": graph.exercise_pairs.id, "attemptIndex": 1,
                         "achievedPercent": 70, "initiallyWrongWords": 1},
                        {"exerciseId": graph.exercise_pairs.id, "attemptIndex": 2,
                         "achievedPercent": 85, "initiallyWrongWords": 0},
                        {"exerciseId": graph.exercise_single.id, "attemptIndex": 1,
                         "achievedPercent": 60, "initiallyWrongWords": 0},
                    ],
                },
            )
            assert report.status_code == 200, report.text
            dump("report-response.json", report.json())

            pending = client.post(
                "/assignments",
                json={"childId": graph.child.id, "predefinedHomeworkId": graph.template.id,
                      "assignedDate": "2024-04-01", "deadlineDays": 7},
            )
            assert pending.status_code == 201

            for name, path, params in [
                ("words.json", "/words", None),
                ("paronyms.json", "/paronyms", None),
                ("sounds.json", "/sounds", None),
                ("exercise-types.json", "/exercise-types", None),
                ("exercise-subtypes.json", "/exercise-subtypes", None),
                ("associations.json", "/associations", None),
                ("exercises.json", "/exercises", None),
                ("exercises-by-sound.json", "/exercises", {"soundId": graph.sound_s.id}),
                ("configurations-1.json", f"/exercises/{graph.exercise_pairs.id}/configurations", None),
                ("templates.json", "/templates", None),
                ("children.json", "/children", None),
                ("assignments.json", "/assignments", None),
                ("status-reported.json", f"/assignments/{graph.assignment.id}/status",
                 {"today": "2024-03-08"}),
                ("status-pending.json", "/assignments/2/status", {"today": "2024-04-03"}),
                ("outcomes-1.json", f"/assignments/{graph.assignment.id}/outcomes", None),
                ("progress-1.json", f"/children/{graph.child.id}/progress", None),
                ("due-date.json", "/due-date",
                 {"assignedDate": "2024-03-01", "deadlineDays": 7}),
            ]:
                response = client.get(path, params=params)
                assert response.status_code == 200, (path, response.text)
                dump(name, response.json())

            still = client.delete(f"/words/{graph.copil.id}")
            assert still.status_code == 409
            dump("error-still-referenced.json", still.json())

            invalid = client.post(
                "/exercises",
                json={"title": "x", "difficulty": 9,
                      "associationId": graph.association.id,
                      "instructionsId": graph.instructions.id},
            )
            assert invalid.status_code == 422
            dump("error-validation.json", invalid.json())

            doubled = client.post(
                f"/assignments/{graph.assignment.id}/report",
                json={"assignmentId": graph.assignment.id, "reportDate": "2024-03-06",
                      "records": []},
            )
            assert doubled.status_code == 409
            dump("error-already-reported.json", doubled.json())


if __name__ == "__main__":
    main()
