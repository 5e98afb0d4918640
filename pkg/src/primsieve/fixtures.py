"""Factorization fixtures for q^r - 1.

One entry per line: ``q r p1[^e1] p2[^e2] ...``, whitespace separated, ``#``
starts a comment, an omitted exponent means 1.  Every entry is re-multiplied
and every listed prime is re-tested on load.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .numtheory import Factorization, is_prime, primes_up_to


class FixtureParseError(ValueError):
    def __init__(self, lineno: int, message: str, source: str = "<fixtures>"):
        self.lineno = lineno
        super().__init__(f"{source}:{lineno}: {message}")


class FixtureValidationError(ValueError):
    def __init__(self, q: int, r: int, reason: str):
        self.key = (q, r)
        super().__init__(f"fixture ({q}, {r}): {reason}")


@dataclass
class FixtureSet:
    entries: dict[tuple[int, int], Factorization] = field(default_factory=dict)

    def __contains__(self, key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, q: int, r: int) -> Factorization | None:
        return self.entries.get((q, r))

    def merged(self, other: FixtureSet) -> FixtureSet:
        out = dict(self.entries)
        out.update(other.entries)
        return FixtureSet(out)


def _parse_token(tok: str) -> tuple[int, int]:
    base, sep, exp = tok.partition("^")
    p = int(base)
    e = int(exp) if sep else 1
    if p < 2 or e < 1:
        raise ValueError(f"bad factor {tok!r}")
    return p, e


def validate_entry(q: int, r: int, factors: list[tuple[int, int]]) -> Factorization:
    counts: dict[int, int] = {}
    for p, e in factors:
        if p in counts:
            raise FixtureValidationError(q, r, f"prime {p} listed twice")
        counts[p] = e
    for p in counts:
        if not is_prime(p):
            raise FixtureValidationError(q, r, f"{p} is not prime")
    f = Factorization.from_dict(counts)
    if f.n != q**r - 1:
        raise FixtureValidationError(q, r, f"factors multiply to {f.n}, not q^r - 1 = {q**r - 1}")
    return f


def parse_fixture_text(text: str, source: str = "<fixtures>") -> FixtureSet:
    entries: dict[tuple[int, int], Factorization] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) < 3:
            raise FixtureParseError(lineno, "expected 'q r p1[^e1] ...'", source)
        try:
            q, r = int(toks[0]), int(toks[1])
            factors = [_parse_token(t) for t in toks[2:]]
        except ValueError as exc:
            raise FixtureParseError(lineno, str(exc), source) from None
        if q < 2 or r < 1:
            raise FixtureParseError(lineno, f"bad (q, r) = ({q}, {r})", source)
        if (q, r) in entries:
            raise FixtureValidationError(q, r, f"duplicate entry on line {lineno}")
        entries[(q, r)] = validate_entry(q, r, factors)
    return FixtureSet(entries)


def parse_fixtures(path: str | os.PathLike) -> FixtureSet:
    path = Path(path)
    return parse_fixture_text(path.read_text(), str(path))


def serialize_fixtures(fixtures: FixtureSet) -> str:
    lines = ["# q r p1[^e1] p2[^e2] ...  (factorizations of q^r - 1)"]
    for (q, r) in sorted(fixtures.entries):
        f = fixtures.entries[(q, r)]
        toks = [f"{p}^{e}" if e > 1 else str(p) for p, e in f.factors]
        lines.append(f"{q} {r} " + " ".join(toks))
    return "\n".join(lines) + "\n"


_bundled: FixtureSet | None = None


def bundled_fixtures() -> FixtureSet:
    """The factorizations shipped with the package (loaded and validated once)."""
    global _bundled
    if _bundled is None:
        text = resources.files("primsieve").joinpath("data/factors.txt").read_text()
        _bundled = parse_fixture_text(text, "primsieve/data/factors.txt")
    return _bundled


# partial factorizations ------------------------------------------------------
#
# ``q r p1[^e1] ... | C1 C2 ... | B``: the listed primes times the composite
# cofactors C_j give q^r - 1, and no C_j has a prime factor below B.  Only an
# upper bound on the number of remaining primes follows, which is all the
# hyperplane sieve needs.

MAX_TRIAL_BOUND = 10**7


@dataclass(frozen=True)
class PartialFactorization:
    q: int
    r: int
    known: Factorization
    cofactors: tuple[int, ...]
    trial_bound: int

    @property
    def n(self) -> int:
        return self.q**self.r - 1

    def unknown_prime_bound(self) -> int:
        """At most this many distinct primes hide in the cofactors."""
        total = 0
        for c in self.cofactors:
            m = int(math.log(c) / math.log(self.trial_bound)) + 1
            while self.trial_bound**m > c:
                m -= 1
            total += m
        return total

    def to_line(self) -> str:
        toks = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.known.factors]
        return f"{self.q} {self.r} {' '.join(toks)} | {' '.join(map(str, self.cofactors))} | {self.trial_bound}"


_primorials: dict[int, int] = {}


def _primorial(bound: int) -> int:
    if bound not in _primorials:
        _primorials[bound] = math.prod(int(p) for p in primes_up_to(bound - 1))
    return _primorials[bound]


def validate_partial(q: int, r: int, known: list[tuple[int, int]], cofactors: list[int], bound: int) -> PartialFactorization:
    if not 2 <= bound <= MAX_TRIAL_BOUND:
        raise FixtureValidationError(q, r, f"trial bound {bound} outside [2, {MAX_TRIAL_BOUND}]")
    counts: dict[int, int] = {}
    for p, e in known:
        if p in counts:
            raise FixtureValidationError(q, r, f"prime {p} listed twice")
        if not is_prime(p):
            raise FixtureValidationError(q, r, f"{p} is not prime")
        counts[p] = e
    if not cofactors:
        raise FixtureValidationError(q, r, "no cofactor; list the entry as a full factorization")
    for c in cofactors:
        if c < bound or is_prime(c):
            raise FixtureValidationError(q, r, f"cofactor {c} must be a composite above the trial bound")
        if math.gcd(c, _primorial(bound)) != 1:
            raise FixtureValidationError(q, r, f"cofactor {c} has a prime factor below {bound}")
        if any(c % p == 0 for p in counts):
            raise FixtureValidationError(q, r, f"cofactor {c} shares a listed prime")
    known_f = Factorization.from_dict(counts)
    if known_f.n * math.prod(cofactors) != q**r - 1:
        raise FixtureValidationError(q, r, "primes and cofactors do not multiply to q^r - 1")
    return PartialFactorization(q, r, known_f, tuple(sorted(cofactors)), bound)


def parse_partial_text(text: str, source: str = "<partial>") -> dict[tuple[int, int], PartialFactorization]:
    out: dict[tuple[int, int], PartialFactorization] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [part.split() for part in line.split("|")]
        if len(parts) != 3 or len(parts[0]) < 2 or len(parts[2]) != 1:
            raise FixtureParseError(lineno, "expected 'q r p1[^e1] ... | C1 ... | B'", source)
        try:
            q, r = int(parts[0][0]), int(parts[0][1])
            known = [_parse_token(t) for t in parts[0][2:]]
            cofactors = [int(t) for t in parts[1]]
            bound = int(parts[2][0])
        except ValueError as exc:
            raise FixtureParseError(lineno, str(exc), source) from None
        if (q, r) in out:
            raise FixtureValidationError(q, r, f"duplicate entry on line {lineno}")
        out[(q, r)] = validate_partial(q, r, known, cofactors, bound)
    return out


_bundled_partial: dict | None = None


def bundled_partials() -> dict[tuple[int, int], PartialFactorization]:
    global _bundled_partial
    if _bundled_partial is None:
        path = resources.files("primsieve").joinpath("data/partial.txt")
        _bundled_partial = parse_partial_text(path.read_text(), "primsieve/data/partial.txt") if path.is_file() else {}
    return _bundled_partial
