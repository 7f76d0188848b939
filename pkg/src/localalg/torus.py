"""Trigonometric-polynomial function spaces on flat tori over an algebra.

A torus model for A^m uses N = n*m angular coordinates of period 2*pi,
ordered real parts first: coordinate b*m + j carries basis component b of
slot j. The first m coordinates are transversal; fixing them selects a leaf
of the canonical foliation (all leaves are closed sub-tori here).

Differentiability over A becomes a sparse linear system on trigonometric
coefficients: every Jacobian block must commute with every basis
multiplication operator, identically in the angles. Because differentiation
maps each frequency pair {cos(k.t), sin(k.t)} to itself and the commutator
conditions never mix trig indices, the system block-diagonalizes over
frequency pairs; assembly and the nullspace solve exploit that structure
while remaining equivalent to one large sparse matrix (available via
``ConstraintSystem.toarray`` for cross-checks).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import linalg
from .algebra import StandardBasisInfo, StructureConstants, standardize
from .errors import SizeCapExceeded
from .report import Report

DEFAULT_CAP = 20000
DEFAULT_NULL_TOL = 1e-8


@dataclass(frozen=True)
class TrigSpace:
    """Real trigonometric polynomials of bounded degree on the N-torus.

    Basis: index 0 is the constant; pair p contributes cos at index 1+2p and
    sin at index 2+2p. One representative per +-k pair (first nonzero entry
    positive), enumerated in lexicographic order over the frequency box.
    """

    ncoords: int
    degree: int
    freqs: np.ndarray  # (npairs, ncoords) integer representatives

    @classmethod
    def build(cls, ncoords: int, degree: int) -> "TrigSpace":
        reps = []
        for k in itertools.product(range(-degree, degree + 1), repeat=ncoords):
            for entry in k:
                if entry > 0:
                    reps.append(k)
                    break
                if entry < 0:
                    break
        freqs = np.array(reps, dtype=np.int64).reshape(len(reps), ncoords)
        return cls(ncoords, degree, freqs)

    @property
    def npairs(self) -> int:
        return self.freqs.shape[0]

    @property
    def size(self) -> int:
        """Number of real basis functions, (2d+1)^N."""
        return 1 + 2 * self.npairs

    def freq_of(self, t: int) -> tuple[int, ...]:
        if t == 0:
            return (0,) * self.ncoords
        return tuple(int(v) for v in self.freqs[(t - 1) // 2])

    def transversal_mask(self, m: int) -> np.ndarray:
        """True where a basis function only involves the first m coordinates."""
        mask = np.ones(self.size, dtype=bool)
        if self.npairs:
            basic = np.all(self.freqs[:, m:] == 0, axis=1)
            mask[1::2] = basic
            mask[2::2] = basic
        return mask

    def values(self, points: np.ndarray) -> np.ndarray:
        """Design matrix of all basis functions at the given points (P, N)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty((points.shape[0], self.size))
        out[:, 0] = 1.0
        if self.npairs:
            phases = points @ self.freqs.T.astype(float)
            out[:, 1::2] = np.cos(phases)
            out[:, 2::2] = np.sin(phases)
        return out

    def deriv_matrix(self, axis: int) -> np.ndarray:
        """Dense matrix of d/d(theta_axis) on coefficient vectors."""
        D = np.zeros((self.size, self.size))
        for p in range(self.npairs):
            k = float(self.freqs[p, axis])
            D[2 + 2 * p, 1 + 2 * p] = -k  # cos -> -k sin
            D[1 + 2 * p, 2 + 2 * p] = k  # sin ->  k cos
        return D

    def pair_blocks(self) -> Iterator[tuple[list[int], np.ndarray]]:
        """Yield (trig indices, local derivative matrices (N, nb, nb)) per pair.

        The constant comes first with a 1x1 zero derivative; each frequency
        pair follows with the 2x2 rotation generator scaled by k_axis.
        """
        yield [0], np.zeros((self.ncoords, 1, 1))
        for p in range(self.npairs):
            k = self.freqs[p].astype(float)
            D = np.zeros((self.ncoords, 2, 2))
            D[:, 1, 0] = -k  # cos -> -k sin
            D[:, 0, 1] = k  # sin ->  k cos
            yield [1 + 2 * p, 2 + 2 * p], D


@dataclass
class TorusConfig:
    """A torus over the algebra: standard-basis algebra, its info, and m."""

    algebra: StructureConstants
    info: StandardBasisInfo
    m: int

    def __post_init__(self):
        self.mults = self.algebra.basis_mult_matrices()

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def ncoords(self) -> int:
        return self.n * self.m

    def coord(self, slot: int, comp: int) -> int:
        """Torus coordinate index of component ``comp`` of slot ``slot``."""
        return comp * self.m + slot

    def trig_space(self, degree: int) -> TrigSpace:
        return TrigSpace.build(self.ncoords, degree)


def make_torus(source: StructureConstants | str, m: int) -> TorusConfig:
    """Standardize an algebra (or preset name) and build the torus model."""
    from .algebra import resolve

    A = resolve(source) if isinstance(source, str) else source
    A_std, info = standardize(A)
    return TorusConfig(A_std, info, m)


# -- constraint systems -----------------------------------------------------------


@dataclass
class Block:
    cols: np.ndarray  # global column indices
    mat: np.ndarray  # (rows, len(cols))


@dataclass
class ConstraintSystem:
    """Sparse linear constraints on trig coefficients of A-valued unknowns.

    Columns are indexed by (function, component, trig index); rows are
    scalar constraints. Storage is per frequency pair (``blocks``), which is
    exactly the sparsity pattern of the assembled matrix.
    """

    ncols: int
    ncomponents: int
    nfuncs: int
    trig: TrigSpace
    blocks: list[Block]

    def column(self, func: int, comp: int, t: int) -> int:
        return (func * self.ncomponents + comp) * self.trig.size + t

    @property
    def nrows(self) -> int:
        return sum(b.mat.shape[0] for b in self.blocks)

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols))
        row = 0
        for b in self.blocks:
            r = b.mat.shape[0]
            out[row:row + r, b.cols] = b.mat
            row += r
        return out

    def residual_inf(self, u: np.ndarray) -> float:
        """Largest constraint violation of a coefficient vector."""
        u = np.asarray(u, dtype=float).reshape(-1)
        worst = 0.0
        for b in self.blocks:
            if b.mat.shape[0]:
                worst = max(worst, float(np.abs(b.mat @ u[b.cols]).max()))
        return worst


def _local_cols(ts: list[int], nfuncs: int, n: int, B: int) -> np.ndarray:
    nb = len(ts)
    cols = np.empty(nfuncs * n * nb, dtype=np.int64)
    pos = 0
    for func in range(nfuncs):
        for comp in range(n):
            base = (func * n + comp) * B
            for t in ts:
                cols[pos] = base + t
                pos += 1
    return cols


def assemble_function_constraints(cfg: TorusConfig, degree: int,
                                  cap: int = DEFAULT_CAP) -> ConstraintSystem:
    """Linear system whose kernel is the space of A-differentiable functions.

    Unknowns: trig coefficients of the n components of one A-valued function.
    For every slot j and radical basis element e_a, the Jacobian block
    J_j (entries d g^i / d theta_{coord(j, b)}) must commute with the
    multiplication operator of e_a, identically as a trig polynomial.
    """
    n, m = cfg.n, cfg.m
    trig = cfg.trig_space(degree)
    B = trig.size
    ncols = n * B
    if ncols > cap:
        raise SizeCapExceeded(f"{ncols} columns exceed the cap {cap}")
    L = cfg.mults
    blocks = []
    for ts, D in trig.pair_blocks():
        nb = len(ts)
        rows = []
        for j in range(m):
            Dslot = [D[cfg.coord(j, b)] for b in range(n)]
            for a in range(1, n):
                La = L[a]
                for i in range(n):
                    for b in range(n):
                        R = np.zeros((nb, n * nb))
                        for c in range(n):
                            if La[c, b]:
                                R[:, i * nb:(i + 1) * nb] += La[c, b] * Dslot[c]
                            if La[i, c]:
                                R[:, c * nb:(c + 1) * nb] -= La[i, c] * Dslot[b]
                        rows.append(R)
        mat = np.vstack(rows) if rows else np.zeros((0, n * nb))
        blocks.append(Block(_local_cols(ts, 1, n, B), mat))
    return ConstraintSystem(ncols, n, 1, trig, blocks)


def solve_nullspace(system: ConstraintSystem,
                    tol: float = DEFAULT_NULL_TOL) -> np.ndarray:
    """Orthonormal nullspace basis, rows ordered by ascending singular value
    (then by first column index of the carrying block)."""
    decomps = []
    smax = 0.0
    for block in system.blocks:
        ncl = block.mat.shape[1]
        if block.mat.shape[0] == 0 or not np.any(block.mat):
            s = np.zeros(0)
            vh = np.eye(ncl)
        else:
            _, s, vh = np.linalg.svd(block.mat, full_matrices=True)
            if s.size:
                smax = max(smax, float(s[0]))
        decomps.append((block, s, vh))

    found = []
    for bi, (block, s, vh) in enumerate(decomps):
        ncl = vh.shape[0]
        mincol = int(block.cols.min())
        for idx in range(ncl - 1, -1, -1):
            sigma = float(s[idx]) if idx < s.size else 0.0
            if sigma > tol * smax:
                break
            vec = np.zeros(system.ncols)
            vec[block.cols] = vh[idx]
            found.append((sigma, mincol, bi, ncl - 1 - idx, vec))
    found.sort(key=lambda item: (item[0], item[1], item[2], item[3]))
    if not found:
        return np.zeros((0, system.ncols))
    return linalg.canonical_signs(np.vstack([item[4] for item in found]))


# -- verification suites -----------------------------------------------------------


def constant_function_vectors(cfg: TorusConfig, trig: TrigSpace) -> np.ndarray:
    """Coefficient vectors of the n constant functions e_i."""
    B = trig.size
    out = np.zeros((cfg.n, cfg.n * B))
    for i in range(cfg.n):
        out[i, i * B] = 1.0
    return out


def socle_embedding_vector(cfg: TorusConfig, trig: TrigSpace,
                           socle_vec: np.ndarray, f_coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of f(transversal) * s for a socle element s.

    ``f_coeffs`` must be supported on transversal-only basis functions; the
    result is then an exact solution of the function constraints (the
    constructive half of the decomposition theorem).
    """
    B = trig.size
    out = np.zeros(cfg.n * B)
    for i in range(cfg.n):
        out[i * B:(i + 1) * B] = socle_vec[i] * f_coeffs
    return out


def verify_constancy(solutions: np.ndarray, cfg: TorusConfig,
                     trig: TrigSpace, tol: float = 1e-8) -> Report:
    """Check that real parts are constant and e1-components are basic.

    (a) the real-part component of every solution has zero coefficient on
    every non-constant basis function; (b) the e1-component is supported on
    transversal-only frequencies (hence constant on every leaf).
    """
    B = trig.size
    tmask = trig.transversal_mask(cfg.m)
    rep = Report()
    worst_real = 0.0
    worst_e1 = 0.0
    violations: list[str] = []
    for q, u in enumerate(np.atleast_2d(solutions)):
        U = u.reshape(cfg.n, B)
        nonconst = np.abs(U[0, 1:])
        mass = float(np.linalg.norm(nonconst))
        if mass > worst_real:
            worst_real = mass
        if mass > tol and len(violations) < 8:
            t_bad = 1 + int(np.argmax(nonconst))
            violations.append(f"solution={q} freq={trig.freq_of(t_bad)}")
        e1_bad = float(np.linalg.norm(U[1, ~tmask])) if cfg.n > 1 else 0.0
        worst_e1 = max(worst_e1, e1_bad)
    rep.add("real_part_constant", worst_real <= tol, worst_real)
    rep.add("e1_component_basic", worst_e1 <= tol, worst_e1)
    rep.put("NULLSPACE_DIM", int(np.atleast_2d(solutions).shape[0]))
    rep.put("REAL_PART_NONCONST_MASS", worst_real)
    rep.put("E1_NONBASIC_MASS", worst_e1)
    for v, text in enumerate(violations):
        rep.put(f"REAL_PART_VIOLATION[{v}]", text)
    return rep


def verify_socle_decomposition(solutions: np.ndarray, cfg: TorusConfig,
                               trig: TrigSpace,
                               tol: float = 1e-8) -> Report:
    """Check each solution is a constant plus socle components times basic
    functions: all non-constant coefficient mass must sit in socle
    components with transversal-only frequencies."""
    B = trig.size
    tmask = trig.transversal_mask(cfg.m)
    socle = set(cfg.info.socle)
    allowed = np.zeros((cfg.n, B), dtype=bool)
    allowed[:, 0] = True
    for comp in range(cfg.n):
        if comp in socle:
            allowed[comp] = tmask
    rep = Report()
    worst = 0.0
    for u in np.atleast_2d(solutions):
        U = u.reshape(cfg.n, B)
        worst = max(worst, float(np.linalg.norm(U[~allowed])))
    rep.add("socle_decomposition", worst <= tol, worst)
    rep.put("SOCLE_DIM", len(socle))
    rep.put("SOCLE_RESIDUAL_MASS", worst)
    return rep


def _lattice(points_per_axis: int, ndims: int) -> np.ndarray:
    """Row-major lattice over [0, 2*pi)^ndims."""
    if ndims == 0:
        return np.zeros((1, 0))
    axes = [np.arange(points_per_axis) * (2 * np.pi / points_per_axis)] * ndims
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def verify_min_leaf(solution: np.ndarray, cfg: TorusConfig, trig: TrigSpace,
                    grid: int = 32, leaf_grid: int = 8, tol: float = 1e-8,
                    system: ConstraintSystem | None = None) -> Report:
    """Locate the leaf minimizing the leaf-average of the e1-component and
    check the real part is critical there (and in fact constant).

    The leaf average of a trig polynomial drops every frequency with a
    non-transversal entry, so it is evaluated exactly. Ties go to the
    smallest row-major grid index.
    """
    n, m, N = cfg.n, cfg.m, cfg.ncoords
    B = trig.size
    U = np.asarray(solution, dtype=float).reshape(n, B)
    g, g1 = U[0], U[1] if n > 1 else U[0]

    tmask = trig.transversal_mask(m)
    trans_pts = np.zeros((grid**m, N))
    trans_pts[:, :m] = _lattice(grid, m)
    averages = trig.values(trans_pts) @ (g1 * tmask)
    qmin = int(np.argmin(averages))

    leaf_pts = np.zeros((leaf_grid ** (N - m), N))
    leaf_pts[:, :m] = trans_pts[qmin, :m]
    leaf_pts[:, m:] = _lattice(leaf_grid, N - m)
    leaf_vals = trig.values(leaf_pts)
    grad_max = 0.0
    for axis in range(N):
        d_g = trig.deriv_matrix(axis) @ g
        grad_max = max(grad_max, float(np.abs(leaf_vals @ d_g).max()))

    g_all = np.concatenate([trig.values(trans_pts) @ g, leaf_vals @ g])
    variation = float(g_all.max() - g_all.min())

    rep = Report()
    rep.add("min_leaf_gradient", grad_max <= tol, grad_max)
    rep.add("real_part_variation", variation <= tol, variation)
    rep.put("MIN_LEAF_INDEX", qmin)
    rep.put("MIN_LEAF_AVG", float(averages[qmin]))
    rep.put("GRAD_MAX", grad_max)
    rep.put("G_VARIATION", variation)
    if system is not None:
        res = system.residual_inf(solution)
        rep.add("adiff_constraints", res <= tol, res)
        rep.put("ADIFF_RESIDUAL", res)
    return rep


def verify_min_leaf_all(solutions: np.ndarray, cfg: TorusConfig, trig: TrigSpace,
                        grid: int = 32, leaf_grid: int = 8, tol: float = 1e-8,
                        system: ConstraintSystem | None = None) -> Report:
    """Aggregate the minimizing-leaf check over every solution."""
    solutions = np.atleast_2d(solutions)
    grad_max = 0.0
    variation = 0.0
    residual = 0.0
    for u in solutions:
        sub = verify_min_leaf(u, cfg, trig, grid, leaf_grid, tol, system)
        grad_max = max(grad_max, sub.data["GRAD_MAX"])
        variation = max(variation, sub.data["G_VARIATION"])
        if system is not None:
            residual = max(residual, sub.data["ADIFF_RESIDUAL"])
    rep = Report()
    rep.add("min_leaf_gradient", grad_max <= tol, grad_max)
    rep.add("real_part_variation", variation <= tol, variation)
    rep.put("GRAD_MAX", grad_max)
    rep.put("G_VARIATION", variation)
    if system is not None:
        rep.add("adiff_constraints", residual <= tol, residual)
        rep.put("ADIFF_RESIDUAL", residual)
    return rep
