# Dressed level curves of one ultrastrongly coupled qubit-cavity system.
#
# Sweeps the coupling from zero through the ultrastrong regime and prints
# how the lowest levels bend and how their parity labels persist along
# each tracked curve.  Writes demos/out/spectrum.csv for the plot kit.

from pathlib import Path

import numpy as np

from rabiholo import spectrum_sweep
from rabiholo.io import write_csv

out_dir = Path(__file__).parent / "out"

sweep = spectrum_sweep(omega_a=0.8, g_grid=np.linspace(0.0, 1.0, 101),
                       n_levels=6, n_fock=30)

print("lowest dressed levels (ground rescaled to zero)")
print("g       " + "  ".join(f"E{k} ({p})" for k, p in enumerate(sweep.parities[0])))
for i in range(0, len(sweep.g), 20):
    row = "  ".join(f"{e:7.4f}" for e in sweep.energies[i])
    print(f"g={sweep.g[i]:4.2f}  {row}")

print()
print("parity is conserved along every curve:")
for k in range(6):
    labels = set(sweep.parities[:, k])
    print(f"  level {k}: {labels}")

header = ["g"] + [f"E{k}" for k in range(6)] + [f"p{k}" for k in range(6)]
rows = ([sweep.g[i]] + list(sweep.energies[i]) + list(sweep.parities[i])
        for i in range(len(sweep.g)))
path = write_csv(out_dir / "spectrum.csv", header, rows)
print(f"\nwrote {path}")
