"""
The stablecut command line
==========================

Same checks through the CLI, driven from Python.  Each call prints its report
and returns the exit code (0 stable, 1 unstable, 4 inconclusive, ...).
"""
from importlib.resources import files

from stablecut.cli import main

fx = files("stablecut") / "fixtures"

print(main(["fiedler", str(fx / "fig1a.graph")]))
print(main(["certify", str(fx / "fig1a.graph"), str(fx / "fig1a_c1.cut"), "--tau", "3"]))
print(main(["certify", str(fx / "fig1b.graph"), str(fx / "fig1b_c.cut"), "--tau", "0.3"]))
print(main(["search", str(fx / "fig1a.graph"), "--tau", "3"]))
print(main(["tau", str(fx / "three_patch_rm.model")]))
print(main(["simulate", str(fx / "three_patch_rm.model"), "--perturb", "0.01",
            "--t-end", "20", "--every", "500"]))
