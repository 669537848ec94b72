"""Brute-force oracle for the upper-triangular detection margin.

On span{I, E12} with unit I and x = E12, no unit-ball partner y brings
the block norm |[[t I, x], [y, t I]]| down to sqrt(t^2 + 1) at t = 32.
This script grids the 2-complex-parameter ball (>= 10^4 admissible
points), refines around the best point, and freezes the resulting margin
delta into tests/fixtures/upper_partner_margin.json. The detection
residual asserted in the acceptance tests must stay above delta.

Run from the repository root:  python3 tools/make_ac5_fixture.py
"""

import json
import pathlib

import numpy as np

T = 32.0
TARGET = float(np.sqrt(T * T + 1.0))
SAFETY = 1e-4


def block_norms(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    """Norm of [[t I, E12], [y, t I]] for y = c1 I + c2 E12, batched."""
    n = c1.shape[0]
    m = np.zeros((n, 4, 4), dtype=np.complex128)
    m[:, 0, 0] = T
    m[:, 1, 1] = T
    m[:, 2, 2] = T
    m[:, 3, 3] = T
    m[:, 0, 3] = 1.0          # x = E12 in the top-right block
    m[:, 2, 0] = c1           # y block
    m[:, 2, 1] = c2
    m[:, 3, 1] = c1
    return np.linalg.svd(m, compute_uv=False)[:, 0]


def space_norms(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    """Norm of y = c1 I + c2 E12, batched (2x2 upper triangular)."""
    n = c1.shape[0]
    m = np.zeros((n, 2, 2), dtype=np.complex128)
    m[:, 0, 0] = c1
    m[:, 1, 1] = c1
    m[:, 0, 1] = c2
    return np.linalg.svd(m, compute_uv=False)[:, 0]


def grid_axis(center: float, half: float, k: int) -> np.ndarray:
    return np.linspace(center - half, center + half, k)


def evaluate(re1, im1, re2, im2):
    g = np.meshgrid(re1, im1, re2, im2, indexing="ij")
    c1 = (g[0] + 1j * g[1]).ravel()
    c2 = (g[2] + 1j * g[3]).ravel()
    keep = space_norms(c1, c2) <= 1.0
    c1, c2 = c1[keep], c2[keep]
    norms = block_norms(c1, c2)
    i = int(np.argmin(norms))
    return int(c1.shape[0]), float(norms[i]), complex(c1[i]), complex(c2[i])


def main() -> None:
    k = 17
    axes = [grid_axis(0.0, 1.0, k)] * 4
    count, best_norm, b1, b2 = evaluate(*axes)
    assert count >= 10_000, f"only {count} admissible grid points"
    grid_min_norm = best_norm
    half = 2.0 / (k - 1)
    for _ in range(4):
        axes = [grid_axis(b1.real, half, 9), grid_axis(b1.imag, half, 9),
                grid_axis(b2.real, half, 9), grid_axis(b2.imag, half, 9)]
        _, cand, c1, c2 = evaluate(*axes)
        if cand < best_norm:
            best_norm, b1, b2 = cand, c1, c2
        half /= 4.0
    fixture = {
        "t": T,
        "target": TARGET,
        "grid_points": count,
        "grid_min_norm": grid_min_norm,
        "grid_min_hinge": grid_min_norm - TARGET,
        "refined_min_norm": best_norm,
        "refined_min_hinge": best_norm - TARGET,
        "delta": best_norm - TARGET - SAFETY,
        "argmin": [[b1.real, b1.imag], [b2.real, b2.imag]],
    }
    out = pathlib.Path(__file__).resolve().parents[1] / "tests" / \
        "fixtures" / "upper_partner_margin.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, indent=2) + "\n")
    print(json.dumps(fixture, indent=2))


if __name__ == "__main__":
    main()
