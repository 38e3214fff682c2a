"""Sampled-decomposition search for geometric 3SUM-hard problems.

Exact-geometry substrates (line arrangements, zones, grids, a curved disk
subdivision), a simulated-Grover cost ledger, the recursive search engine,
five problem instantiations with brute-force oracles, and the concentration /
cost-scaling experiments.
"""

from .exact import (Rat, ExactPoint, ExactLine, ApproxPoint, PARALLEL, TAU,
                    pt, as_rat, orient, dual_of_point, line_intersection,
                    vertical_distance, triangle_area2, circle_circle_intersections)
from .ledger import (QueryLedger, AmplificationPolicy, ExhaustedRepeats,
                     grover_find, amplify, NOT_FOUND, ERROR)
from .arrangement import (BBox, Dcel, SubproblemSpec, enclosing_bbox,
                          build_arrangement, triangulate, subproblems_of,
                          CARRIER_SUPPORT)
from .engine import RqsParams, RqsResult, choose_params, rqs_solve, verify_witness

__all__ = [
    "Rat", "ExactPoint", "ExactLine", "ApproxPoint", "PARALLEL", "TAU",
    "pt", "as_rat", "orient", "dual_of_point", "line_intersection",
    "vertical_distance", "triangle_area2", "circle_circle_intersections",
    "QueryLedger", "AmplificationPolicy", "ExhaustedRepeats",
    "grover_find", "amplify", "NOT_FOUND", "ERROR",
    "BBox", "Dcel", "SubproblemSpec", "enclosing_bbox", "build_arrangement",
    "triangulate", "subproblems_of", "CARRIER_SUPPORT",
    "RqsParams", "RqsResult", "choose_params", "rqs_solve", "verify_witness",
]
