"""A tiny experiment matrix with t-test tables, written to ``demo_results/``.

Run with ``python3 demos/mini_matrix.py``.
"""

from repairmoea.harness import make_tables, matrix_configs, run_matrix, write_tables

configs = matrix_configs(problems=["CTP4", "MCOP2"], algorithms=["nsga2"], pop_size=40, budget=4000, runs=4, seed=7)
results = run_matrix(configs, "demo_results",
                     progress=lambda r: print(r.problem, r.algorithm, r.repair, r.run_index, r.igd))
tables = make_tables(results)
write_tables(tables, "demo_results/tables")
print(tables["igd_nsga2"].to_text())
print(tables["ttest_igd_nsga2"].to_text())
