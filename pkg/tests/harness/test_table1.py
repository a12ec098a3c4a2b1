from pathlib import Path

import pytest

from block_sparse_mac.harness.plan import InvalidPlanError
from block_sparse_mac.harness.table1 import (
    PUBLISHED_ROWS,
    Table1Row,
    largest_admissible_users,
    load_table1_rows,
    table1_report,
)

EXPECTED_ENTRIES = (
    (0, 1, 1),
    (1, 1, 1),
    (1, 2, 2),
    (0, 1, 1),
    (1, 1, 1),
    (1, 2, 2),
    (0, 0, 1),
    (1, 1, 1),
    (1, 1, 1),
)


def test_published_rows_entries():
    assert table1_report().entries == EXPECTED_ENTRIES


def test_short_block_row_at_10db_admits_nobody():
    # mu_B = 0.0066 with tau = 15 leaves no margin for a single user at 10 dB
    assert largest_admissible_users(PUBLISHED_ROWS[6], 10.0) == 0
    assert largest_admissible_users(PUBLISHED_ROWS[6], 15.0) == 1


def test_entries_grow_with_snr():
    for row in PUBLISHED_ROWS:
        entries = [largest_admissible_users(row, db) for db in (0.0, 10.0, 15.0, 30.0)]
        assert entries == sorted(entries)


def test_zero_coherence_admits_every_user():
    row = Table1Row(8, 20, 200, 1000, 14.14, 0.0, 0.0)

    assert largest_admissible_users(row, 0.0) == 20


def test_render_layout():
    rendered = table1_report(PUBLISHED_ROWS[:1], (0.0, 10.0)).render()
    header, line = rendered.splitlines()

    assert header.split(" | ") == [
        f"{cell:>7}" for cell in ("M", "N", "d", "T", "s_l", "mu_B", "tau", "0dB", "10dB")
    ]
    assert [cell.strip() for cell in line.split(" | ")] == [
        "8", "80", "200", "1000", "14.14", "0.0035", "15.00", "0", "1"
    ]
    assert rendered.endswith("\n")


def test_load_shipped_rows(plans_path: Path):
    rows = load_table1_rows(plans_path / "table1_rows.csv")

    assert rows == list(PUBLISHED_ROWS[:3])


def test_load_rows_skips_comments():
    Path("rows.csv").write_text("# header\n\n8, 80, 200, 1000, 14.14, 0.0035, 15.0  # first\n")

    assert load_table1_rows(Path("rows.csv")) == [PUBLISHED_ROWS[0]]


@pytest.mark.parametrize(
    "line, message",
    [
        ("8, 80, 200, 1000, 14.14, 0.0035", "expected 7 values"),
        ("8, 80, 200, 1000.5, 14.14, 0.0035, 15", "rows.csv:1"),
    ],
)
def test_load_rows_rejects_bad_lines(line: str, message: str):
    Path("rows.csv").write_text(line + "\n")

    with pytest.raises(InvalidPlanError, match=message):
        load_table1_rows(Path("rows.csv"))
