import re
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from eigenexpr import pnm
from eigenexpr.ingest import write_manifest

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def write_dataset(tmp_path):
    """Write (pixels, label, subject, split) tuples as 8x8-or-larger P5 files plus a manifest."""

    def _write(items, width, height, name="manifest.csv", maxval=255):
        rows = []
        for i, (pixels, label, subject, split) in enumerate(items):
            fname = f"img_{i:03d}.pgm"
            pnm.write_pgm(tmp_path / fname, pixels, width, height, maxval)
            rows.append((fname, label, subject, split))
        path = tmp_path / name
        write_manifest(path, rows)
        return path

    return _write


# one pass/fail line per acceptance criterion in the terminal summary

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    failed = report.failed
    if report.when == "call" or failed:
        _CRITERIA[n] = _CRITERIA.get(n, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
