"""Print the hyperplane sets in F_9, F_25 and F_27 that miss every primitive element.

    python3 demos/genuine_exceptions.py
"""

from primsieve.finite_field import field_9, field_25, field_27
from primsieve.hyperplanes import exhaustive_exception_search, verify_paper_constructions

for item in verify_paper_constructions():
    print(item)

for make in (field_9, field_25, field_27):
    ctx = make()
    certs = exhaustive_exception_search(ctx)
    print(f"F_{ctx.order}: {len(certs)} exceptional sets up to equivalence")
    print("  e.g.", certs[0].to_line())
