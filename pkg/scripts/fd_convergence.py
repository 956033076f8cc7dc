"""Demonstrate second-order convergence of the finite-difference fallbacks.

Run from the repo root:  python3 scripts/fd_convergence.py

Compares curvature invariants computed from analytic surface jets against
the central-difference jet at a sequence of steps, and fits the slope of
the error on a log-log scale. Central differences are O(h^2) down to the
roundoff floor (~1e-16 / h^2), so the steps stay in the truncation regime.
"""

from __future__ import annotations

import numpy as np

import minksurf as mk
from minksurf.numerics import convergence_order
from minksurf.surfaces import SurfacePatch


def fd_surface(surface: SurfacePatch, step: float) -> SurfacePatch:
    return SurfacePatch(
        name=surface.name, position=surface.position, jet=None,
        domain=surface.domain, periodic=surface.periodic,
        orientation=surface.orientation, jet_source="fd", fd_step=step,
        params=surface.params)


def main() -> None:
    norm = mk.lp_norm(4.0)
    surf = mk.ellipsoid(1.0, 1.3, 0.8)
    s, t = 0.8, 2.4
    exact = mk.point_geometry(norm, surf, s, t)
    steps = np.array([4e-2, 2e-2, 1e-2, 5e-3])
    errs_K, errs_H = [], []
    for h in steps:
        pg = mk.point_geometry(norm, fd_surface(surf, float(h)), s, t)
        errs_K.append(abs(pg.K - exact.K))
        errs_H.append(abs(pg.H - exact.H))
    for name, errs in (("K", errs_K), ("H", errs_H)):
        order = convergence_order(steps, np.array(errs))
        rows = ", ".join(f"h={h:g}: {e:.3e}" for h, e in zip(steps, errs))
        print(f"{name}: {rows}  -> order {order:.3f}")


if __name__ == "__main__":
    main()
