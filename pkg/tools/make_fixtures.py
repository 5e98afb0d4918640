"""Regenerate the bundled factorization fixtures for q^r - 1.

Offline helper, not part of the package.  Each q^r - 1 = b^(kr) - 1 (q = b^k,
b prime) is split into cyclotomic values Phi_d(b), d | kr, and for b in {2, 3}
the Aurifeuillean halves are peeled off by gcd.  Pieces are factored with
python-flint in a child process under a timeout; anything that times out is
reported and the (q, r) entry is left out.  With ``--partial-out`` such
pairs are written instead as partial factorizations: primes below the trial
bound are divided out of the stubborn pieces and the rest kept as cofactors.

    python3 tools/make_fixtures.py --range 9:2-38 --range 3:2-268:even \
        --out src/primsieve/data/factors.txt --timeout 60
"""

from __future__ import annotations

import argparse
import multiprocessing as mp
import sys
import time

from primsieve.fixtures import FixtureSet, parse_fixtures, serialize_fixtures, validate_partial
from primsieve.numtheory import Factorization, is_prime, power_minus_one_pieces, primes_up_to


def _flint_worker(n: int, out) -> None:
    import flint

    out.put([(int(p), int(e)) for p, e in flint.fmpz(n).factor()])


def factor_with_timeout(n: int, timeout: float) -> list[tuple[int, int]] | None:
    if n == 1:
        return []
    if is_prime(n):
        return [(n, 1)]
    queue: mp.Queue = mp.Queue()
    proc = mp.Process(target=_flint_worker, args=(n, queue))
    proc.start()
    proc.join(timeout)
    if proc.is_alive():
        proc.kill()
        proc.join()
        return None
    return queue.get() if not queue.empty() else None


def parse_range(text: str) -> tuple[int, list[int]]:
    parts = text.split(":")
    q = int(parts[0])
    lo, hi = map(int, parts[1].split("-"))
    rs = list(range(lo, hi + 1))
    if len(parts) > 2 and parts[2] == "even":
        rs = [r for r in rs if r % 2 == 0]
    return q, rs


def partial_entry(q: int, r: int, cache: dict, bound: int, timeout: float):
    small = [int(p) for p in primes_up_to(bound - 1)]
    counts: dict[int, int] = {}
    cofactors = []

    def add(p: int, e: int) -> None:
        counts[p] = counts.get(p, 0) + e

    for piece in power_minus_one_pieces(q, r):
        if piece not in cache:
            cache[piece] = factor_with_timeout(piece, timeout)
        found = cache[piece]
        if found is not None:
            for p, e in found:
                add(p, e)
            continue
        n = piece
        for p in small:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                add(p, e)
        if n == 1:
            continue
        if is_prime(n):
            add(n, 1)
        else:
            cofactors.append(n)
    known = sorted(counts.items())
    return validate_partial(q, r, known, cofactors, bound)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--range", action="append", required=True, help="Q:LO-HI[:even]")
    ap.add_argument("--out", required=True)
    ap.add_argument("--merge", help="existing fixture file to keep entries from")
    ap.add_argument("--timeout", type=float, default=60.0)
    ap.add_argument("--partial-out", help="write partial factorizations of the missing pairs here")
    ap.add_argument("--trial-bound", type=int, default=10**5)
    args = ap.parse_args(argv)

    entries = dict(parse_fixtures(args.merge).entries) if args.merge else {}
    cache: dict[int, list[tuple[int, int]] | None] = {}
    missing = []
    for spec in args.range:
        q, rs = parse_range(spec)
        for r in rs:
            if (q, r) in entries:
                continue
            t0 = time.time()
            counts: dict[int, int] = {}
            ok = True
            for piece in power_minus_one_pieces(q, r):
                if piece not in cache:
                    cache[piece] = factor_with_timeout(piece, args.timeout)
                found = cache[piece]
                if found is None:
                    ok = False
                    break
                for p, e in found:
                    counts[p] = counts.get(p, 0) + e
            if ok:
                f = Factorization.from_dict(counts)
                assert f.n == q**r - 1
                entries[(q, r)] = f
                # write as we go so an interrupted run keeps its progress
                with open(args.out, "w") as fh:
                    fh.write(serialize_fixtures(FixtureSet(entries)))
            else:
                missing.append((q, r))
            print(f"{q} {r} {'ok' if ok else 'MISSING'} {time.time() - t0:.1f}s", file=sys.stderr, flush=True)
    with open(args.out, "w") as fh:
        fh.write(serialize_fixtures(FixtureSet(entries)))
    if missing:
        print("missing: " + " ".join(f"{q},{r}" for q, r in missing), file=sys.stderr)
    if args.partial_out:
        lines = ["# q r p1[^e1] ... | cofactors | trial bound  (partial factorizations of q^r - 1)"]
        for q, r in missing:
            lines.append(partial_entry(q, r, cache, args.trial_bound, args.timeout).to_line())
        with open(args.partial_out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
