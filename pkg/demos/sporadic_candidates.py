"""
The sporadic candidate actions
==============================

Recomputes r_max for every candidate row and runs the pipeline on each
catalog entry. Reports flag whether subgroup classes came from a complete
search, verified fixtures, or a partial search.
"""

import time

from halfflag.pipeline import classify_sporadic_cases, candidates_markdown

t0 = time.monotonic()
reports = classify_sporadic_cases()
print(candidates_markdown(reports))
for rr in reports:
    for note in rr.case.notes if rr.case else []:
        print(f"row {rr.row.row}: {note}")
print(f"{time.monotonic() - t0:.1f}s")
