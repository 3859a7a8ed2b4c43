"""General-position tests for matrices over the local ring, with certificates.

A pair of k x k matrices M, N is in relative t-general position when every
t columns of the block matrix [M | N] admit t rows whose t x t minor is a
unit of the local ring at the origin (nonzero constant term).  Minors are
computed exactly as polynomials and only their constant terms inspected.

Columns of [M | N] are numbered 1..2k, the first k coming from M.
Verdicts come with re-checkable certificates: a witness row set per passing
column set, and the list of failing column sets (lexicographic order)
otherwise.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from .ring import LaurentPoly, VarSpec
from .poisson import PoissonStructure, SkewMatrix, log_matrix

WORKERS_ENV = "LOGSYMPLECTIC_WORKERS"


@dataclass(frozen=True)
class GenPosCertificate:
    verdict: bool
    t: int
    column_count: int
    witnesses: dict[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)
    failures: tuple[tuple[int, ...], ...] = ()

    @property
    def first_failure(self) -> tuple[int, ...] | None:
        return self.failures[0] if self.failures else None

    def serialize(self) -> dict:
        return {
            "verdict": self.verdict,
            "t": self.t,
            "column_count": self.column_count,
            "witnesses": [
                {"columns": list(cols), "rows": list(rows)}
                for cols, rows in sorted(self.witnesses.items())
            ],
            "failures": [list(cols) for cols in self.failures],
        }


def _as_rows(mat) -> list[list[LaurentPoly]]:
    if isinstance(mat, SkewMatrix):
        return [list(row) for row in mat.rows]
    return [list(row) for row in mat]


def _poly_minor(rows: list[list[LaurentPoly]], row_idx, col_idx, vs: VarSpec) -> LaurentPoly:
    from .exterior import _poly_det

    sub = [[rows[r][c] for c in col_idx] for r in row_idx]
    return _poly_det(sub, vs)


def _identity_rows(vs: VarSpec, k: int) -> list[list[LaurentPoly]]:
    one = LaurentPoly.const(vs, 1)
    zero = LaurentPoly.zero(vs)
    return [[one if i == j else zero for j in range(k)] for i in range(k)]


def _check_column_set(args):
    block, cols, t, vs, k = args
    for row_idx in itertools.combinations(range(k), t):
        minor = _poly_minor(block, row_idx, cols, vs)
        if minor.constant_term() != 0:
            return cols, tuple(r + 1 for r in row_idx)
    return cols, None


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def is_relative_t_general(m, n, t: int) -> GenPosCertificate:
    """Relative t-general position of (M, N); see the module docstring."""
    m_rows, n_rows = _as_rows(m), _as_rows(n)
    k = len(m_rows)
    if len(n_rows) != k:
        raise ValueError("M and N must have the same number of rows")
    if any(len(r) != k for r in m_rows + n_rows):
        raise ValueError("M and N must be square of equal size")
    if not 1 <= t <= k:
        raise ValueError(f"t must satisfy 1 <= t <= {k}")
    vs = None
    for row in m_rows + n_rows:
        for p in row:
            if p.has_negative_exponents():
                raise ValueError("matrix entries must lie in the local ring (no poles)")
            vs = vs or p.var_spec
            if p.var_spec != vs:
                raise ValueError("var_spec mismatch among entries")
    block = [m_rows[i] + n_rows[i] for i in range(k)]

    subsets = [
        tuple(c + 1 for c in cols) for cols in itertools.combinations(range(2 * k), t)
    ]
    tasks = [(block, tuple(c - 1 for c in cols), t, vs, k) for cols in subsets]

    workers = _worker_count()
    results: list[tuple[tuple[int, ...], tuple[int, ...] | None]] = []
    if workers > 1 and len(tasks) > 1:
        try:
            import concurrent.futures

            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_check_column_set, tasks))
        except OSError:
            results = []
    if not results:
        results = [_check_column_set(task) for task in tasks]

    witnesses: dict[tuple[int, ...], tuple[int, ...]] = {}
    failures: list[tuple[int, ...]] = []
    for (cols0, rows), labeled in zip(results, subsets):
        cols = tuple(c + 1 for c in cols0)
        assert cols == labeled
        if rows is None:
            failures.append(cols)
        else:
            witnesses[cols] = rows
    return GenPosCertificate(
        verdict=not failures,
        t=t,
        column_count=2 * k,
        witnesses=witnesses,
        failures=tuple(failures),
    )


def is_standard_t_general(m, t: int) -> GenPosCertificate:
    """t-general position of M: relative t-general position of (M, identity)."""
    m_rows = _as_rows(m)
    vs = m_rows[0][0].var_spec
    return is_relative_t_general(m_rows, _identity_rows(vs, len(m_rows)), t)


def poisson_t_general(p: PoissonStructure, t: int) -> GenPosCertificate:
    """t-general position of a Poisson structure: the test applied to its
    log-basis matrix."""
    return is_standard_t_general(log_matrix(p), t)


def verify_certificate(m, n, cert: GenPosCertificate) -> bool:
    """Recompute every claim in a certificate: witness minors must be units,
    failing column sets must admit no unit minor at all."""
    m_rows, n_rows = _as_rows(m), _as_rows(n)
    k = len(m_rows)
    vs = m_rows[0][0].var_spec
    block = [m_rows[i] + n_rows[i] for i in range(k)]
    for cols, rows in cert.witnesses.items():
        minor = _poly_minor(
            block, [r - 1 for r in rows], [c - 1 for c in cols], vs
        )
        if minor.constant_term() == 0:
            return False
    for cols in cert.failures:
        for row_idx in itertools.combinations(range(k), cert.t):
            minor = _poly_minor(block, row_idx, [c - 1 for c in cols], vs)
            if minor.constant_term() != 0:
                return False
    expected = {
        tuple(c + 1 for c in cols)
        for cols in itertools.combinations(range(2 * k), cert.t)
    }
    covered = set(cert.witnesses) | set(cert.failures)
    return covered == expected and cert.verdict == (not cert.failures)
