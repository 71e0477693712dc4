"""A single short MOEA/D-CDP run on CTP2 for each repair operator.

Run with ``python3 demos/quick_run.py``; takes about half a minute.
"""

import numpy as np

from repairmoea import RepairKind, RunConfig, get_problem, load_reference_front, moead_cdp_run
from repairmoea.metrics import build_reference_point

problem = get_problem("CTP2")
reference = load_reference_front("CTP2")
ref_point = build_reference_point(reference)

for kind in RepairKind:
    config = RunConfig(problem="CTP2", repair=kind, pop_size=60, budget=15_000)
    out = moead_cdp_run(problem, kind, config, np.random.default_rng(1), reference, ref_point, trace_every=50)
    last = out.trace[-1]
    print(f"{kind.value:>8}: evals {out.evals}, IGD {last.get('igd')}, HV {last.get('hv')}")
