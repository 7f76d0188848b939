"""Shared helpers and independent oracles for the test suite."""

import numpy as np

from localalg.algebra import StructureConstants

PRESETS = ("dual", "trunc:3", "trunc:4", "square:2")


def r_plus_r() -> StructureConstants:
    """The split algebra R + R: basis {1, u} with u*u = u. Not local."""
    C = np.zeros((2, 2, 2))
    C[0] = np.eye(2)
    C[1, 0, 1] = 1.0
    C[1, 1] = (0.0, 1.0)
    return StructureConstants(2, ("1", "u"), C)


def poly_mul_trunc(a, b, order):
    """Truncated polynomial product: independent convolution oracle."""
    full = np.convolve(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return full[:order]


def unit_safe_point(rng, m, n, real_scale=0.8, rad_scale=0.9):
    """Random element rows with bounded real parts; safe for the corpus
    (denominators 2+x1 and 1+x1^2 stay units, 3+x1 stays positive)."""
    pt = rng.uniform(-rad_scale, rad_scale, size=(m, n))
    pt[:, 0] = rng.uniform(-real_scale, real_scale, size=m)
    return pt


def torus_value_map(coeffs, cfg, trig):
    """A trig-coefficient function as a slot-major flat map, for defect checks."""
    n, m = cfg.n, cfg.m
    B = trig.size
    U = np.asarray(coeffs, dtype=float).reshape(n, B)

    def F(flat):
        theta = np.asarray(flat, dtype=float).reshape(m, n).T.reshape(1, -1)
        return trig.values(theta)[0] @ U.T

    return F
