"""Regenerate tests/data/frozen.json from the independent oracles.

Run ``python3 tests/freeze_oracles.py``; the package itself is not imported.
"""
import json
from pathlib import Path

import numpy as np

import oracles

POTENTIALS = {
    "cos2pix": lambda x: np.cos(2 * np.pi * x) + 0 * x,
    "x": lambda x: x + 0.0,
    "x(1-x)": lambda x: x * (1 - x),
}


def main():
    out = {"oracle": "finite differences with Richardson extrapolation (m = 4000, 8001); "
                     "masses from DOP853 eigenfunction norms at the oracle eigenvalues",
           "potentials": {}}
    for name, q in POTENTIALS.items():
        dd = oracles.fd_eigenvalues(q, "DD", 10)
        dn = oracles.fd_eigenvalues(q, "DN", 10)
        out["potentials"][name] = {
            "DD": dd.tolist(),
            "DN": dn.tolist(),
            "mass_left": oracles.norm_masses(q, dd[:5], "left").tolist(),
            "mass_right": oracles.norm_masses(q, dd[:5], "right").tolist(),
        }
    path = Path(__file__).parent / "data" / "frozen.json"
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
