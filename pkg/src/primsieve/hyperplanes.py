"""Affine hyperplanes of F_{q^r} over F_q and the set G_A they cut out.

F_{q^r} is viewed as F_q^r through the power basis 1, x, ..., x^(r-1).  A
hyperplane is {v : L(v) = b} for a nonzero functional L (a row of r F_q
codes) and an offset b.  A set of r hyperplanes is in general position when
the functionals are linearly independent.

The exhaustive search enumerates one representative per set of hyperplanes:
functionals are normalised so their first nonzero entry is 1, the r
functionals are taken as an increasing r-subset, and every offset vector is
tried.  For a fixed basis the offsets whose hyperplanes cover every primitive
element are found at once by inclusion-exclusion over coordinate projections.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .finite_field import FieldCtx, field_9, field_25, field_27

SEARCH_MAX_ORDER = 3**6
SEARCH_CLASS_BUDGET = 20_000_000


class GeneralPositionError(ValueError):
    pass


class SearchBudgetError(RuntimeError):
    pass


# linear algebra over F_q through the field's coefficient tables ---------------

def _row_reduce(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    ring = ctx.ring
    m = [list(map(int, row)) for row in rows]
    pivots = []
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = int(ring.inv[m[rank][col]])
        m[rank] = [int(ring.mul[inv, x]) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [int(ring.add[x, ring.neg[ring.mul[c, y]]]) for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    return m[:rank], pivots


def rank_fq(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    return len(_row_reduce(ctx, rows)[0])


def nullspace_fq(ctx: FieldCtx, rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {a : sum_j rows[i][j] a_j = 0 for all i}."""
    ring = ctx.ring
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _row_reduce(ctx, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for row, pc in zip(red, pivots):
            vec[pc] = int(ring.neg[row[f]])
        basis.append(vec)
    return basis


def normalize_functional(ctx: FieldCtx, row: Sequence[int], offset: int = 0) -> tuple[tuple[int, ...], int]:
    """Scale so the first nonzero entry is 1; the offset scales along."""
    ring = ctx.ring
    lead = next((int(x) for x in row if x), None)
    if lead is None:
        raise ValueError("zero functional")
    inv = int(ring.inv[lead])
    return tuple(int(ring.mul[inv, x]) for x in row), int(ring.mul[inv, offset])


def evaluate_functional(ctx: FieldCtx, row: Sequence[int], coords: np.ndarray) -> np.ndarray:
    ring = ctx.ring
    acc = np.zeros(coords.shape[0], dtype=np.int64)
    for j, a in enumerate(row):
        if a:
            acc = ring.add[acc, ring.mul[int(a), coords[:, j]]]
    return acc


@dataclass(frozen=True)
class HyperplaneSet:
    ctx: FieldCtx
    functionals: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        r = self.ctx.r
        if len(self.functionals) != r or len(self.offsets) != r or any(len(row) != r for row in self.functionals):
            raise ValueError(f"need {r} functionals of length {r} and {r} offsets")

    @property
    def in_general_position(self) -> bool:
        return rank_fq(self.ctx, self.functionals) == self.ctx.r

    def values(self) -> np.ndarray:
        """(r, n) array: L_i evaluated at every element code."""
        coords = self.ctx.coordinates()
        return np.stack([evaluate_functional(self.ctx, row, coords) for row in self.functionals])

    def membership(self) -> np.ndarray:
        """(r, n) boolean array: element lies on C_i."""
        return self.values() == np.asarray(self.offsets)[:, None]

    def hyperplane(self, i: int) -> list[int]:
        return [int(c) for c in np.nonzero(self.membership()[i])[0]]


def hyperplane_from_span(ctx: FieldCtx, point: int, directions: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Normalised (functional, offset) of point + span(directions), an affine hyperplane."""
    dirs = [ctx.coeffs(d) for d in directions]
    if rank_fq(ctx, dirs) != ctx.r - 1:
        raise ValueError("directions must span an (r-1)-dimensional subspace")
    (row,) = nullspace_fq(ctx, dirs, ctx.r)
    coords = np.asarray([ctx.coeffs(point)])
    offset = int(evaluate_functional(ctx, row, coords)[0])
    return normalize_functional(ctx, row, offset)


def make_hyperplane_set(ctx: FieldCtx, planes: Sequence[tuple[Sequence[int], int]]) -> HyperplaneSet:
    return HyperplaneSet(ctx, tuple(tuple(int(x) for x in f) for f, _ in planes), tuple(int(b) for _, b in planes))


def make_g_a(ctx: FieldCtx, hset: HyperplaneSet) -> np.ndarray:
    """Codes of the elements on none of the hyperplanes; size is (q-1)^r."""
    if not hset.in_general_position:
        raise GeneralPositionError("functionals are linearly dependent")
    off = hset.membership().any(axis=0)
    out = np.nonzero(~off)[0]
    if len(out) != (ctx.q - 1) ** ctx.r:
        raise ArithmeticError(f"|G_A| = {len(out)}, expected {(ctx.q - 1) ** ctx.r}")
    return out


def random_general_position(ctx: FieldCtx, rng: random.Random) -> HyperplaneSet:
    q, r = ctx.q, ctx.r
    while True:
        rows = [tuple(rng.randrange(q) for _ in range(r)) for _ in range(r)]
        if rank_fq(ctx, rows) == r:
            return HyperplaneSet(ctx, tuple(rows), tuple(rng.randrange(q) for _ in range(r)))


@dataclass(frozen=True)
class ExceptionCertificate:
    """Hyperplanes whose union holds every primitive element, with a cover map."""

    q: int
    r: int
    functionals: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]
    covered: tuple[tuple[int, int], ...]

    def to_line(self) -> str:
        matrix = " ".join(str(a) for row in self.functionals for a in row)
        offs = " ".join(map(str, self.offsets))
        cov = " ".join(f"{e}->H{i}" for e, i in self.covered)
        return f"{self.q} {self.r} | {matrix} | {offs} | covered: {cov}"

    __str__ = to_line

    @classmethod
    def from_line(cls, line: str) -> ExceptionCertificate:
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4 or not parts[3].startswith("covered:"):
            raise ValueError(f"malformed certificate line: {line!r}")
        q, r = map(int, parts[0].split())
        flat = list(map(int, parts[1].split()))
        if len(flat) != r * r:
            raise ValueError("functional matrix must have r*r entries")
        functionals = tuple(tuple(flat[i * r : (i + 1) * r]) for i in range(r))
        offsets = tuple(map(int, parts[2].split()))
        covered = []
        for tok in parts[3][len("covered:") :].split():
            e, _, h = tok.partition("->H")
            covered.append((int(e), int(h)))
        return cls(q, r, functionals, offsets, tuple(covered))

    def verify(self, ctx: FieldCtx) -> bool:
        """Recheck from scratch: general position, and every primitive element covered as claimed."""
        if (ctx.q, ctx.r) != (self.q, self.r):
            raise ValueError("certificate is for a different field")
        hset = HyperplaneSet(ctx, self.functionals, self.offsets)
        if not hset.in_general_position:
            return False
        member = hset.membership()
        claimed = dict(self.covered)
        for u in ctx.primitive_elements():
            i = claimed.get(u)
            if i is None or not 1 <= i <= self.r or not member[i - 1, u]:
                return False
        return True


def certificate_for(ctx: FieldCtx, hset: HyperplaneSet) -> ExceptionCertificate | None:
    """Certificate when every primitive element is covered, else None."""
    member = hset.membership()
    covered = []
    for u in ctx.primitive_elements():
        hits = np.nonzero(member[:, u])[0]
        if not len(hits):
            return None
        covered.append((u, int(hits[0]) + 1))
    return ExceptionCertificate(ctx.q, ctx.r, hset.functionals, hset.offsets, tuple(covered))


def projective_functionals(ctx: FieldCtx) -> list[tuple[int, ...]]:
    out = []
    for row in product(range(ctx.q), repeat=ctx.r):
        lead = next((x for x in row if x), None)
        if lead == 1:
            out.append(tuple(row))
    return out


def count_search_classes(ctx: FieldCtx) -> int:
    from math import comb

    points = (ctx.q**ctx.r - 1) // (ctx.q - 1)
    return comb(points, ctx.r) * ctx.q**ctx.r


def exhaustive_exception_search(
    ctx: FieldCtx,
    *,
    max_order: int = SEARCH_MAX_ORDER,
    class_budget: int = SEARCH_CLASS_BUDGET,
) -> list[ExceptionCertificate]:
    """Every set of r hyperplanes in general position covering all primitive elements."""
    q, r = ctx.q, ctx.r
    if ctx.order > max_order:
        raise ValueError(f"exhaustive search limited to fields of order <= {max_order}")
    classes = count_search_classes(ctx)
    if classes > class_budget:
        raise SearchBudgetError(f"{classes} hyperplane sets exceed the search budget {class_budget}")
    funcs = projective_functionals(ctx)
    prim = np.asarray(ctx.primitive_elements(), dtype=np.int64)
    coords = ctx.coordinates()[prim]
    vals = np.stack([evaluate_functional(ctx, f, coords) for f in funcs])  # (#funcs, phi)

    offsets = np.asarray(list(product(range(q), repeat=r)), dtype=np.int64)  # lexicographic
    subsets = [S for k in range(r + 1) for S in combinations(range(r), k)]
    weights = {S: q ** np.arange(len(S), dtype=np.int64) for S in subsets}
    offset_proj = {S: offsets[:, list(S)] @ weights[S] if S else np.zeros(len(offsets), dtype=np.int64) for S in subsets}

    found = []
    for combo in combinations(range(len(funcs)), r):
        rows = [funcs[i] for i in combo]
        if r > 1 and rank_fq(ctx, rows) < r:
            continue
        img = vals[list(combo)]  # (r, phi)
        count = np.zeros(len(offsets), dtype=np.int64)
        for S in subsets:
            if S:
                proj = weights[S] @ img[list(S)]
                hist = np.bincount(proj, minlength=q ** len(S))
            else:
                hist = np.array([img.shape[1]])
            sign = -1 if len(S) % 2 else 1
            count += sign * hist[offset_proj[S]]
        for idx in np.nonzero(count == 0)[0]:
            hset = HyperplaneSet(ctx, tuple(rows), tuple(int(b) for b in offsets[idx]))
            cert = certificate_for(ctx, hset)
            if cert is None:
                raise ArithmeticError("inclusion-exclusion and direct covering disagree")
            found.append(cert)
    return found


# the explicit constructions, as (field factory, [(point, directions)], listed primitives)
PAPER_CONSTRUCTIONS = {
    (3, 2): (field_9, [((0,), ((1, 1),)), ((0,), ((1, 2),))]),
    (5, 2): (field_25, [((0,), ((2, 1),)), ((0,), ((3, 1),))]),
    (3, 3): (
        field_27,
        [
            ((0, 0, 2), ((1,), (0, 1))),
            ((0, 2), ((1,), (0, 0, 1))),
            ((1, 0, 1), ((0, 0, 1), (1, 1))),
        ],
    ),
}


def paper_hyperplane_set(q: int, r: int) -> tuple[FieldCtx, HyperplaneSet]:
    factory, spec = PAPER_CONSTRUCTIONS[(q, r)]
    ctx = factory()
    planes = [hyperplane_from_span(ctx, ctx.element(pt), [ctx.element(d) for d in dirs]) for pt, dirs in spec]
    return ctx, make_hyperplane_set(ctx, planes)


def verify_paper_constructions() -> list[dict]:
    """Check the three explicit exception constructions; raises on any failure."""
    report = []
    for (q, r) in PAPER_CONSTRUCTIONS:
        ctx, hset = paper_hyperplane_set(q, r)
        g_a = make_g_a(ctx, hset)
        cert = certificate_for(ctx, hset)
        if cert is None or not cert.verify(ctx):
            raise AssertionError(f"construction for (q, r) = ({q}, {r}) leaves a primitive element uncovered")
        if any(ctx.is_primitive(int(u)) for u in g_a):
            raise AssertionError(f"G_A for ({q}, {r}) contains a primitive element")
        member = hset.membership()
        report.append(
            {
                "q": q,
                "r": r,
                "generator": ctx.format(ctx.generator),
                "primitive_count": len(ctx.primitive_elements()),
                "hyperplanes": [
                    {"functional": list(f), "offset": b} for f, b in zip(hset.functionals, hset.offsets)
                ],
                "cover": {
                    ctx.format(u): [i + 1 for i in range(r) if member[i, u]] for u in ctx.primitive_elements()
                },
                "certificate": cert.to_line(),
            }
        )
    return report


CERTIFICATE_FIELDS = {(3, 2): field_9, (5, 2): field_25, (3, 3): field_27}


def parse_certificates(text: str) -> dict[tuple[int, int], ExceptionCertificate]:
    """Certificates keyed by (q, r); each is re-verified in its canonical field."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cert = ExceptionCertificate.from_line(line)
        key = (cert.q, cert.r)
        if key not in CERTIFICATE_FIELDS:
            raise ValueError(f"no canonical field presentation for (q, r) = {key}")
        if not cert.verify(CERTIFICATE_FIELDS[key]()):
            raise ValueError(f"certificate for {key} does not verify")
        out[key] = cert
    return out


_bundled_certs: dict | None = None


def bundled_certificates() -> dict[tuple[int, int], ExceptionCertificate]:
    global _bundled_certs
    if _bundled_certs is None:
        from importlib import resources

        text = resources.files("primsieve").joinpath("data/certificates.txt").read_text()
        _bundled_certs = parse_certificates(text)
    return _bundled_certs
