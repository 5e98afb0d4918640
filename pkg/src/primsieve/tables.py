"""Regenerate the elimination tables and the final list of possible exceptions.

Table ids:

1. primorial limits N for q in {5, 7, 8, 9};
2. omega and r thresholds from the omega sweep;
3. r eliminated by the hyperplane sieve with the optimal-k bound;
4. even r eliminated by the hyperplane sieve with the even-r bound;
5. r eliminated by the two counting criteria;
main. the remaining (q, r) for every q in {3, 4, 5, 7, 8, 9}.

Tables 3-5 need the factorization of q^r - 1, taken from fixtures first and
computed within the factoring budget otherwise.  Where only a partial
factorization is on file, the hyperplane sieve is run on its worst case.
Pairs that cannot be settled are listed under ``missing`` and skipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from . import __version__
from .criteria import (
    ELIMINATED,
    EVEN_R,
    GENUINE_EXCEPTION,
    KATZ_OPTIMAL_K,
    POSSIBLE_EXCEPTION,
    char_bound,
    classify,
    fr_criterion1,
    fr_criterion2,
    hypersieve_witness,
    partial_hypersieve_check,
    partial_hypersieve_witness,
)
from .fixtures import FixtureSet, PartialFactorization, bundled_fixtures, bundled_partials
from .hyperplanes import bundled_certificates
from .numtheory import Factorization, FactorizationIncomplete, factor_power_minus_one
from .omega_bounds import naive_prime_limit, table2_sweep

TABLE_QS = (9, 8, 7, 5, 4, 3)
TABLE_IDS = ("1", "2", "3", "4", "5", "main")



# below this q, q^r - 1 runs into Cunningham-size numbers; fixtures only
COMPUTE_MIN_Q = 5


class FactorSource:
    """Factorizations of q^r - 1 from fixtures, falling back to computation.

    Computation is attempted only for q >= ``COMPUTE_MIN_Q``; q in {3, 4}
    relies on fixtures.
    """

    def __init__(
        self,
        fixtures: FixtureSet | None = None,
        compute: bool = True,
        partials: dict[tuple[int, int], PartialFactorization] | None = None,
    ):
        self.fixtures = fixtures if fixtures is not None else bundled_fixtures()
        self.partials = bundled_partials() if partials is None else partials
        self.compute = compute
        self.missing: set[tuple[int, int]] = set()
        self._cache: dict[tuple[int, int], Factorization | None] = {}

    def get(self, q: int, r: int) -> Factorization | None:
        key = (q, r)
        if key in self._cache:
            return self._cache[key]
        f = self.fixtures.get(q, r)
        if f is None and self.compute and q >= COMPUTE_MIN_Q:
            try:
                f = factor_power_minus_one(q, r)
            except FactorizationIncomplete:
                f = None
        if f is None and key not in self.partials:
            self.missing.add(key)
        self._cache[key] = f
        return f

    def partial(self, q: int, r: int) -> PartialFactorization | None:
        return self.partials.get((q, r))

    def partial_witness(self, q: int, r: int, kind: str) -> int | None:
        """Core size from the worst case of a partial factorization, if it suffices."""
        part = self.partial(q, r)
        if part is None:
            return None
        return partial_hypersieve_witness(q, r, part, char_bound(kind, q, r))


def compress(values) -> str:
    """1,2,3,5,7,8 -> '1-3,5,7,8' (runs of three or more collapse)."""
    vals = sorted(values)
    if not vals:
        return "none"
    out = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        if j - i >= 2:
            out.append(f"{vals[i]}-{vals[j]}")
        else:
            out.extend(str(v) for v in vals[i : j + 1])
        i = j + 1
    return ",".join(out)


@dataclass
class TableArtifact:
    table_id: str
    columns: list[str]
    rows: list[dict]
    params: dict = field(default_factory=dict)
    missing: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "schema": 1,
            "version": __version__,
            "table": self.table_id,
            "columns": self.columns,
            "rows": self.rows,
            "params": self.params,
            "missing": [list(k) for k in self.missing],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_tsv(self) -> str:
        lines = ["\t".join(self.columns)]
        for row in self.rows:
            cells = []
            for col in self.columns:
                v = row.get(col)
                if isinstance(v, (list, tuple, set)):
                    v = compress(v)
                cells.append("" if v is None else str(v))
            lines.append("\t".join(cells))
        if self.missing:
            lines.append("# missing factorizations: " + " ".join(f"{q},{r}" for q, r in self.missing))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _table2_row(q: int):
    return table2_sweep(q)


def swept_out(q: int, r: int) -> bool:
    """True when the omega sweep alone settles (q, r)."""
    row = _table2_row(q)
    return r >= row.r_threshold and (not row.even_only or r % 2 == 0)


def r_scope(q: int) -> list[int]:
    """r values left after the omega sweep (even r only for q = 3)."""
    thr = _table2_row(q).r_threshold
    rs = range(2, thr)
    return [r for r in rs if r % 2 == 0] if q == 3 else list(rs)


def table1() -> TableArtifact:
    rows = [{"q": q, "N": naive_prime_limit(q)} for q in (5, 7, 8, 9)]
    return TableArtifact("1", ["q", "N"], rows)


def table2() -> TableArtifact:
    rows = []
    for q in TABLE_QS:
        row = _table2_row(q)
        rows.append(
            {
                "q": q,
                "omega_threshold": row.omega_threshold,
                "r_threshold": row.r_threshold,
                "even_only": row.even_only,
                "r_bound": round(row.r_bound, 4),
                "runs": [list(run) for run in row.runs],
                "worst_omega": row.worst_omega,
                "worst_t": row.worst_t,
            }
        )
    return TableArtifact("2", ["q", "omega_threshold", "r_threshold", "even_only", "r_bound"], rows)


def _hypersieve_rows(kind: str, source: FactorSource) -> list[dict]:
    rows = []
    for q in TABLE_QS:
        if kind == KATZ_OPTIMAL_K:
            if q == 3:
                continue
            checked = r_scope(q)
        else:
            after3 = [r for r in r_scope(q) if r not in _table3_hits(q, source)]
            top = max(after3) if after3 else 1
            checked = [r for r in range(4 if q == 3 else 2, top + 1, 2)]
        hits, witnesses, from_partial, unsettled = [], {}, [], []
        for r in checked:
            f = source.get(q, r)
            if f is None:
                if source.partial_witness(q, r, kind) is not None:
                    hits.append(r)
                    from_partial.append(r)
                elif source.partial(q, r) is not None:
                    unsettled.append(r)
                continue
            s = hypersieve_witness(q, r, f, char_bound(kind, q, r))
            if s is not None:
                hits.append(r)
                witnesses[r] = s
        rows.append(
            {
                "q": q,
                "checked": [min(checked), max(checked)] if checked else [],
                "eliminated": hits,
                "witness_s": {str(r): s for r, s in witnesses.items()},
                "partial_factorization": from_partial,
                "partial_unsettled": unsettled,
            }
        )
    return rows


_t3_cache: dict[int, frozenset] = {}


def _table3_hits(q: int, source: FactorSource) -> frozenset:
    if q == 3:
        return frozenset()
    key = (q, id(source))
    if key not in _t3_cache:
        hits = []
        for r in r_scope(q):
            f = source.get(q, r)
            if f is None:
                if source.partial_witness(q, r, KATZ_OPTIMAL_K) is not None:
                    hits.append(r)
            elif hypersieve_witness(q, r, f, char_bound(KATZ_OPTIMAL_K, q, r)) is not None:
                hits.append(r)
        _t3_cache[key] = frozenset(hits)
    return _t3_cache[key]


def table3(source: FactorSource | None = None) -> TableArtifact:
    source = source or FactorSource()
    rows = _hypersieve_rows(KATZ_OPTIMAL_K, source)
    return TableArtifact("3", ["q", "checked", "eliminated"], rows, missing=sorted(source.missing))


def table4(source: FactorSource | None = None) -> TableArtifact:
    source = source or FactorSource()
    rows = _hypersieve_rows(EVEN_R, source)
    return TableArtifact("4", ["q", "checked", "eliminated"], rows, missing=sorted(source.missing))


def _after_sieves(q: int, source: FactorSource) -> list[int]:
    t3 = _table3_hits(q, source)
    out = []
    for r in r_scope(q):
        if r in t3:
            continue
        f = source.get(q, r)
        if f is None:
            if r % 2 == 0 and source.partial_witness(q, r, EVEN_R) is not None:
                continue
            out.append(r)
            continue
        if r % 2 == 0 and hypersieve_witness(q, r, f, char_bound(EVEN_R, q, r)) is not None:
            continue
        out.append(r)
    return out


def table5(source: FactorSource | None = None) -> TableArtifact:
    source = source or FactorSource()
    rows = []
    for q in TABLE_QS:
        remaining = _after_sieves(q, source)
        top = max(remaining) if remaining else 1
        checked = [r for r in range(2, top + 1) if q != 3 or r % 2 == 0]
        hits, how = [], {}
        for r in checked:
            f = source.get(q, r)
            if f is None:
                continue
            c1 = fr_criterion1(q, r, f.phi())
            c2 = fr_criterion2(q, r, f.omega())
            if c1 or c2:
                hits.append(r)
                how[str(r)] = "fr_criterion1" if c1 else "fr_criterion2"
        rows.append(
            {
                "q": q,
                "checked": [min(checked), max(checked)] if checked else [],
                "eliminated": hits,
                "criterion": how,
            }
        )
    return TableArtifact("5", ["q", "checked", "eliminated"], rows, missing=sorted(source.missing))


def classify_pair(q: int, r: int, source: FactorSource):
    """Classification record, or None when the pair cannot be settled."""
    f = source.get(q, r)
    if f is None:
        part = source.partial(q, r)
        if part is None:
            return None
        rec = partial_hypersieve_check(q, r, part)
        if rec.verdict != ELIMINATED:
            source.missing.add((q, r))
            return None
        return rec
    return classify(q, r, f, f.phi(), certificate=bundled_certificates().get((q, r)))


def main_table(source: FactorSource | None = None) -> TableArtifact:
    source = source or FactorSource()
    rows = []
    for q in sorted(TABLE_QS):
        possible, genuine, unknown = [], [], []
        for r in r_scope(q):
            rec = classify_pair(q, r, source)
            if rec is None:
                unknown.append(r)
            elif rec.verdict == POSSIBLE_EXCEPTION:
                possible.append(r)
            elif rec.verdict == GENUINE_EXCEPTION:
                possible.append(r)
                genuine.append(r)
        rows.append(
            {
                "q": q,
                "possible_exceptions": possible,
                # odd r for q = 3 lie outside the sweep, so their certificates are added here
                "genuine": sorted(set(genuine) | {r for (qq, r) in bundled_certificates() if qq == q}),
                "odd_r_open": q == 3,
                "unresolved": unknown,
            }
        )
    return TableArtifact(
        "main",
        ["q", "possible_exceptions", "odd_r_open", "genuine", "unresolved"],
        rows,
        params={"note": "for q = 3 every odd r stays open"},
        missing=sorted(source.missing),
    )


def build_table(table_id: str, source: FactorSource | None = None) -> TableArtifact:
    if table_id == "1":
        return table1()
    if table_id == "2":
        return table2()
    builders = {"3": table3, "4": table4, "5": table5, "main": main_table}
    if table_id not in builders:
        raise ValueError(f"unknown table id {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    return builders[table_id](source)
