"""Admissible active-user counts from tabulated coherence values.

Every row gives the dimensions (M, N, d, T) with a block norm s_l, a
block-coherence mu_B and a noise bound tau for orthogonal precoders (nu = 0).
An entry is the largest N_a for which the BOMP support condition holds.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from block_sparse_mac.analysis.coherence import CoherenceProfile
from block_sparse_mac.analysis.guarantees import separation_condition
from block_sparse_mac.harness.plan import InvalidPlanError


@dataclass(frozen=True)
class Table1Row:
    M: int
    N: int
    d: int
    T: int
    s_l: float
    mu_B: float
    tau: float

    @property
    def profile(self) -> CoherenceProfile:
        return CoherenceProfile(
            mu_B=self.mu_B, nu=0.0, s_l=self.s_l, s_u=self.s_l, tau=self.tau
        )


PUBLISHED_ROWS = (
    Table1Row(8, 80, 200, 1000, 14.14, 0.0035, 15.00),
    Table1Row(50, 500, 200, 1000, 14.14, 0.0019, 15.00),
    Table1Row(100, 1000, 200, 1000, 14.14, 0.0014, 15.00),
    Table1Row(8, 80, 200, 1000, 14.14, 0.0035, 14.20),
    Table1Row(50, 500, 200, 1000, 14.14, 0.0019, 14.20),
    Table1Row(100, 1000, 200, 1000, 14.14, 0.0014, 14.20),
    Table1Row(8, 80, 100, 500, 10.00, 0.0066, 15.00),
    Table1Row(50, 500, 100, 500, 10.00, 0.0037, 15.00),
    Table1Row(100, 1000, 100, 500, 10.00, 0.0030, 15.00),
)
PUBLISHED_ES_N0_DB = (0.0, 10.0, 15.0)


def largest_admissible_users(row: Table1Row, es_n0_db: float) -> int:
    rho0 = 10 ** (es_n0_db / 10)
    admissible = 0
    for count in range(1, row.N + 1):
        if not separation_condition(row.profile, rho0, row.M, row.d, count):
            break
        admissible = count
    return admissible


@dataclass(frozen=True)
class Table1Report:
    rows: tuple[Table1Row, ...]
    es_n0_db: tuple[float, ...]
    entries: tuple[tuple[int, ...], ...]

    def render(self) -> str:
        header = ["M", "N", "d", "T", "s_l", "mu_B", "tau"] + [
            f"{db:g}dB" for db in self.es_n0_db
        ]
        lines = [" | ".join(f"{cell:>7}" for cell in header)]
        for row, entries in zip(self.rows, self.entries):
            cells = [
                str(row.M),
                str(row.N),
                str(row.d),
                str(row.T),
                f"{row.s_l:.2f}",
                f"{row.mu_B:.4f}",
                f"{row.tau:.2f}",
            ] + [str(entry) for entry in entries]
            lines.append(" | ".join(f"{cell:>7}" for cell in cells))
        return "\n".join(lines) + "\n"


def table1_report(
    rows: Sequence[Table1Row] = PUBLISHED_ROWS,
    es_n0_db: Sequence[float] = PUBLISHED_ES_N0_DB,
) -> Table1Report:
    return Table1Report(
        rows=tuple(rows),
        es_n0_db=tuple(es_n0_db),
        entries=tuple(
            tuple(largest_admissible_users(row, db) for db in es_n0_db) for row in rows
        ),
    )


def load_table1_rows(path: Path) -> list[Table1Row]:
    """Rows as comma-separated ``M, N, d, T, s_l, mu_B, tau`` lines, ``#`` comments"""
    rows = []
    with open(path) as rows_file:
        for line_number, raw_line in enumerate(rows_file, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            cells = [cell.strip() for cell in line.split(",")]
            if len(cells) != 7:
                raise InvalidPlanError(
                    f"{path}:{line_number}: expected 7 values (M, N, d, T, s_l, mu_B, tau), found {len(cells)}"
                )
            try:
                rows.append(
                    Table1Row(
                        *(int(cell) for cell in cells[:4]),
                        *(float(cell) for cell in cells[4:]),
                    )
                )
            except ValueError as error:
                raise InvalidPlanError(f"{path}:{line_number}: {error}") from error
    return rows
