"""Write the CSVs behind the two figures through the command-line front end.

Usage: python demos/figure_csvs.py [OUTPUT_DIR]   (default: ./figures)
"""

import pathlib
import sys

from withholding_game.cli import main

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(parents=True, exist_ok=True)
jobs = {
    "payoff_terms_eps0.05.csv": ["payoff-surface", "p=0.4", "epsilon=0.05"],
    "payoff_terms_eps0.5.csv": ["payoff-surface", "p=0.4", "epsilon=0.5"],
    "bound_sweep.csv": ["bound-sweep", "eps_min=0.001", "eps_max=0.5", "eps_num=100",
                        "eps_scale=log", "p_values=0.1,0.5,0.9"],
}
for name, argv in jobs.items():
    status = main(argv + ["--out", str(out / name)])
    if status:
        sys.exit(status)
print(f"wrote {len(jobs)} CSV files to {out}/")
