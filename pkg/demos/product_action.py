"""
Product action of K wr S2 on 25 points
======================================

For each 2-transitive K of degree 5, K wr S2 acts on 25 points with
subdegrees 1, 8, 16. The search finds no design with lambda >= gcd(r,2lambda)^2.
"""

from halfflag import subdegrees, wreath_product_action
from halfflag.data import two_transitive_degree5
from halfflag.pipeline import PipelineConfig, ProductActionSpec, product_type_search
from halfflag.subgroups import SearchBudget

for name, k in two_transitive_degree5().items():
    rep = product_type_search(ProductActionSpec(5, k))
    print(f"{name} wr S2: order {wreath_product_action(k).order()}, subdegrees {list(subdegrees(wreath_product_action(k)))}, {rep.summary}")

# without the r_max filter the A5 case reaches Step 4 and still finds nothing
cfg = PipelineConfig(SearchBudget(seconds=120), rmax_filter=False)
rep = product_type_search(ProductActionSpec(5, two_transitive_degree5()["A5"]), cfg)
print(f"A5 wr S2, no r_max filter: {rep.summary} ({rep.completeness}), found {len(rep.found)}")
