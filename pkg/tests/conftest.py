"""Shared fixtures and the acceptance summary printed at the end of the run."""

from __future__ import annotations

import numpy as np
import pytest

from flexpoly.geometry import AmbientSpace

# criterion number -> list of (label, passed, detail)
CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, label: str, passed: bool, detail: str = "") -> None:
    CRITERIA.setdefault(criterion, []).append((label, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(CRITERIA):
        rows = CRITERIA[c]
        ok = all(p for _, p, _ in rows)
        failed = [f"{label} ({detail})" for label, p, detail in rows if not p]
        line = f"criterion {c}: {'PASS' if ok else 'FAIL'} [{sum(p for _, p, _ in rows)}/{len(rows)} checks]"
        if failed:
            line += " failing: " + "; ".join(failed)
        tr.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def true_length(space: AmbientSpace, x, y) -> float:
    """Independent distance oracle, using routes that stay accurate for short edges."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if space.kind.value == "euclidean":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    if space.kind.value == "spherical":
        c = float(np.dot(x, y))
        s = float(np.linalg.norm(y - c * x))
        return float(np.arctan2(s, c))
    d = x - y
    chord2 = float(np.dot(d[:-1], d[:-1]) - d[-1] ** 2)
    return float(2.0 * np.arcsinh(0.5 * np.sqrt(max(chord2, 0.0))))
