from snapshottest.pytest import PyTestSnapshotTest

from block_sparse_mac.harness.table1 import PUBLISHED_ROWS, table1_report


def test_published_table_report(snapshot: PyTestSnapshotTest) -> None:
    report = table1_report()

    snapshot.assert_match(report.render(), "table")

    assert len(report.entries) == len(PUBLISHED_ROWS)
    # only the short-block row stays empty at 10 dB
    assert [row for row, entries in enumerate(report.entries) if entries[1] == 0] == [6]
