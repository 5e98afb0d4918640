"""Show each criterion on one pair, defaulting to (q, r) = (8, 22).

    python3 demos/classify_one_pair.py 9 13
"""

import sys

from primsieve.criteria import EVEN_R, KATZ_OPTIMAL_K, char_bound, classify, fr_criterion1, fr_criterion2
from primsieve.criteria import hypersieve_witness
from primsieve.tables import FactorSource

q, r = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (8, 22)
f = FactorSource().get(q, r)
if f is None:
    sys.exit(f"no factorization of {q}^{r} - 1 on file")
print(f"{q}^{r} - 1 has {f.omega()} distinct primes: {list(f.primes)}")

kinds = [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else [])
for kind in kinds:
    s = hypersieve_witness(q, r, f, char_bound(kind, q, r))
    print(f"sieve with {kind}: " + (f"holds, sieving {s} primes" if s else "fails"))
print("first counting criterion:", fr_criterion1(q, r, f.phi()))
print("second counting criterion:", fr_criterion2(q, r, f.omega()))
rec = classify(q, r, f, f.phi())
print("verdict:", rec.verdict, rec.criterion or "")
