"""Generalized graphs: block-structured matrices treated as edge sets.

A matrix with q row blocks of size n belongs to the generalized-graph
class when every column is orthogonal to the synchronization directions
(the range of ones ⊗ identity); each column then acts as an edge between
the q vertices.  Connectivity notions reduce to range inclusions, their
strong (one-way) counterparts to cone inclusions:

    connected              range(M) contains all disagreement directions
    (k,l)-connected        range(M) contains range((e_k - e_l) ⊗ I_n)
    strongly connected     cone(M) contains all disagreement directions
    strongly (k,l)-conn.   cone(M) contains range((e_k - e_l) ⊗ I_n)

Cone questions are decided by nonnegative least squares; the strong
predicates split a subspace query into +/- membership tests over an
orthonormal basis, which is exact because cones are closed under positive
combinations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import disagreement_basis
from .config import DEFAULT_TOLERANCES
from .errors import (
    DimensionError,
    GraphDomainError,
    NumericalFailureError,
    UnsupportedRenderError,
)
from .numutil import EPS, equilibrated, pair_difference, range_basis


@dataclass(frozen=True, eq=False)
class GenGraph:
    """A (q*blocksize) x c matrix whose columns are generalized edges."""

    q: int
    blocksize: int
    M: np.ndarray
    is_real: bool

    @property
    def n_columns(self) -> int:
        return self.M.shape[1]


@dataclass(frozen=True, eq=False)
class Feasibility:
    """Outcome of one cone-membership program.

    certificate holds the nonnegative combination weights on membership;
    residual is the distance to the cone otherwise.  marginal flags a
    non-member whose residual lies within a decade of the threshold.
    """

    member: bool
    certificate: np.ndarray | None
    residual: float
    marginal: bool = False


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    columns: np.ndarray

    @property
    def dim(self) -> int:
        return self.columns.shape[1]


def make_graph(
    q: int,
    blocksize: int,
    M: np.ndarray,
    tol_zero: float = DEFAULT_TOLERANCES.zero,
) -> GenGraph:
    """Wrap a matrix as a generalized graph, checking the class membership.

    Every column must have (numerically) zero block sum; otherwise it is
    not orthogonal to the synchronization directions and the connectivity
    predicates below would be meaningless.
    """
    M = np.atleast_2d(np.asarray(M))
    if M.shape[0] != q * blocksize:
        raise DimensionError(
            f"graph matrix has {M.shape[0]} rows, expected q*n = {q * blocksize}"
        )
    if np.iscomplexobj(M) and not np.any(M.imag):
        M = M.real.copy()
    if M.shape[1] > 0:
        blocksums = M.reshape(q, blocksize, -1).sum(axis=0)   # (blocksize, c)
        sums = np.linalg.norm(blocksums, axis=0)
        colnorms = np.linalg.norm(M, axis=0)
        worst = np.argmax(sums - tol_zero * (1.0 + colnorms))
        if sums[worst] > tol_zero * (1.0 + colnorms[worst]):
            raise GraphDomainError(
                f"column {worst + 1} has block sum {sums[worst]:.3e}; "
                "not a generalized-graph matrix"
            )
    return GenGraph(q=q, blocksize=blocksize, M=M, is_real=not np.iscomplexobj(M))


def nnls(M: np.ndarray, v: np.ndarray, max_iter: int | None = None) -> tuple[np.ndarray, float]:
    """Nonnegative least squares by the active-set method.

    Minimizes ``||M a - v||`` over ``a >= 0`` and returns ``(a, residual)``.
    Candidate columns are admitted by lowest index rather than steepest
    gradient, which keeps runs bit-reproducible.  A column whose trial
    coefficient comes back nonpositive is numerically dependent on the
    current passive set and cannot improve the fit; it is blocked until
    the iterate moves, which breaks the classic degenerate cycle.

    Raises NumericalFailureError past ``50 * n_columns`` iterations.
    """
    M = np.asarray(M, dtype=float)
    v = np.asarray(v, dtype=float).ravel()
    m, c = M.shape
    if v.shape[0] != m:
        raise DimensionError(f"target has length {v.shape[0]}, expected {m}")
    x = np.zeros(c)
    if c == 0:
        return x, float(np.linalg.norm(v))
    if max_iter is None:
        max_iter = 50 * c

    # Work on unit columns (the cone is unchanged) and map the weights
    # back at the end; zero columns keep weight zero.
    colnorms = np.linalg.norm(M, axis=0)
    scaling = np.where(colnorms > 0.0, colnorms, 1.0)
    M = M / scaling
    wtol = 10.0 * EPS * max(m, c) * max(1.0, float(np.abs(v).max(initial=0.0)))

    def solve_on(mask):
        idx = np.flatnonzero(mask)
        z = np.zeros(c)
        sol, *_ = np.linalg.lstsq(M[:, idx], v, rcond=None)
        z[idx] = sol
        return idx, z

    passive = np.zeros(c, dtype=bool)
    blocked = np.zeros(c, dtype=bool)
    iters = 0
    while True:
        w = M.T @ (v - M @ x)
        candidates = np.flatnonzero(~passive & ~blocked & (w > wtol))
        if candidates.size == 0:
            break
        j = candidates[0]
        iters += 1
        if iters > max_iter:
            raise NumericalFailureError(
                f"nonnegative least squares exceeded {max_iter} iterations"
            )
        passive[j] = True
        idx, z = solve_on(passive)
        if z[j] <= 0.0:
            passive[j] = False
            blocked[j] = True
            continue
        # Entering coefficient positive: every clipping step below moves x
        # by a strictly positive amount, so the fit strictly improves.
        while not np.all(z[idx] > 0.0):
            iters += 1
            if iters > max_iter:
                raise NumericalFailureError(
                    f"nonnegative least squares exceeded {max_iter} iterations"
                )
            neg = idx[z[idx] <= 0.0]
            denom = x[neg] - z[neg]
            steps = np.where(denom > 0.0, x[neg] / np.where(denom > 0.0, denom, 1.0), np.inf)
            alpha = float(np.min(steps))
            if not np.isfinite(alpha):
                alpha = 0.0
            x = x + alpha * (z - x)
            x[~passive] = 0.0
            passive &= x > 0.0
            if not passive.any():
                x = np.zeros(c)
                break
            idx, z = solve_on(passive)
        else:
            x = z
        blocked[:] = False
    return x / scaling, float(np.linalg.norm(v - M @ x))


def cone_member(
    G: GenGraph, v: np.ndarray, tol_cone: float = DEFAULT_TOLERANCES.cone
) -> Feasibility:
    """Decide membership of v in the cone spanned by the graph columns."""
    if not G.is_real:
        raise GraphDomainError("cone membership is defined for real graphs only")
    v = np.asarray(v, dtype=float).ravel()
    alpha, residual = nnls(G.M, v)
    bound = tol_cone * (1.0 + float(np.linalg.norm(v)))
    member = residual <= bound
    return Feasibility(
        member=member,
        certificate=alpha if member else None,
        residual=residual,
        marginal=(not member) and residual <= 10.0 * bound,
    )


def range_contains(
    G: GenGraph, T: np.ndarray, tol_rank: float = DEFAULT_TOLERANCES.rank
) -> bool:
    """True when range(G) contains range(T); complex-aware rank test.

    Both sides are column-equilibrated first so that matrices whose
    columns span many magnitudes (powers of the dynamics) do not drown
    their small directions under a global singular-value cutoff.
    """
    T = np.atleast_2d(np.asarray(T))
    if T.ndim != 2 or T.shape[0] != G.M.shape[0]:
        raise DimensionError(
            f"target has {T.shape[0]} rows, expected {G.M.shape[0]}"
        )
    Gn = equilibrated(G.M, tol_rank)
    Tn = equilibrated(T, tol_rank)
    if Tn.shape[1] == 0:
        return True
    aug = np.hstack([Gn, Tn]) if Gn.shape[1] else Tn
    s_aug = np.linalg.svd(aug, compute_uv=False)
    smax = float(s_aug[0]) if s_aug.size else 0.0
    if smax == 0.0:
        return True
    cutoff = tol_rank * smax
    s_g = np.linalg.svd(Gn, compute_uv=False) if Gn.size else np.zeros(0)
    return int(np.sum(s_aug > cutoff)) == int(np.sum(s_g > cutoff))


def _check_pair(q: int, k: int, l: int) -> None:
    if not (1 <= k <= q and 1 <= l <= q) or k == l:
        raise DimensionError(f"vertex pair ({k},{l}) invalid for q={q} (1-based, distinct)")


def _pair_subspace(q: int, blocksize: int, k: int, l: int) -> np.ndarray:
    return np.kron(pair_difference(q, k, l)[:, None], np.eye(blocksize))


def cone_contains_subspace(
    G: GenGraph, T: np.ndarray, tol_cone: float = DEFAULT_TOLERANCES.cone
) -> tuple[bool, bool]:
    """Test cone(G) ⊇ range(T) by +/- membership over the columns of T.

    Returns (verdict, marginal); marginal reports any near-threshold
    rejection among the individual programs.
    """
    ok = True
    marginal = False
    for col in np.atleast_2d(T).T:
        for sign in (1.0, -1.0):
            feas = cone_member(G, sign * col, tol_cone)
            ok &= feas.member
            marginal |= feas.marginal
    return ok, marginal


def is_connected(G: GenGraph, tol_rank: float = DEFAULT_TOLERANCES.rank) -> bool:
    """range(G) contains every disagreement direction."""
    D = disagreement_basis(G.q)
    return range_contains(G, np.kron(D, np.eye(G.blocksize)), tol_rank)


def is_kl_connected(
    G: GenGraph, k: int, l: int, tol_rank: float = DEFAULT_TOLERANCES.rank
) -> bool:
    """range(G) contains range((e_k - e_l) ⊗ I); 1-based vertices."""
    _check_pair(G.q, k, l)
    return range_contains(G, _pair_subspace(G.q, G.blocksize, k, l), tol_rank)


def is_strongly_connected(G: GenGraph, tol_cone: float = DEFAULT_TOLERANCES.cone) -> bool:
    """cone(G) contains every disagreement direction (real graphs only)."""
    if not G.is_real:
        raise GraphDomainError("strong connectivity is defined for real graphs only")
    D = disagreement_basis(G.q)
    ok, _ = cone_contains_subspace(G, np.kron(D, np.eye(G.blocksize)), tol_cone)
    return ok


def is_strongly_kl_connected(
    G: GenGraph, k: int, l: int, tol_cone: float = DEFAULT_TOLERANCES.cone
) -> bool:
    """cone(G) contains range((e_k - e_l) ⊗ I); 1-based vertices."""
    if not G.is_real:
        raise GraphDomainError("strong connectivity is defined for real graphs only")
    _check_pair(G.q, k, l)
    ok, _ = cone_contains_subspace(G, _pair_subspace(G.q, G.blocksize, k, l), tol_cone)
    return ok


def lineality_space(
    G: GenGraph,
    tol_cone: float = DEFAULT_TOLERANCES.cone,
    tol_rank: float = DEFAULT_TOLERANCES.rank,
) -> SubspaceBasis:
    """Largest subspace contained in cone(G), as an orthonormal basis.

    For a finitely generated cone this is the span of the generators whose
    negation is itself a member, so one membership program per column
    decides it.
    """
    if not G.is_real:
        raise GraphDomainError("lineality space is defined for real graphs only")
    keep = []
    for i in range(G.n_columns):
        col = G.M[:, i]
        if float(np.linalg.norm(col)) == 0.0:
            continue
        if cone_member(G, -col, tol_cone).member:
            keep.append(i)
    if not keep:
        return SubspaceBasis(np.zeros((G.M.shape[0], 0)))
    return SubspaceBasis(range_basis(G.M[:, keep], tol_rank))


def detect_scalar_edges(
    G: GenGraph, tol_zero: float = DEFAULT_TOLERANCES.zero
) -> list[tuple[int, int, np.ndarray]] | None:
    """Factor every nonzero column as (e_i - e_j) ⊗ w and list (i, j, w).

    Vertices are 1-based.  Zero columns carry no edge and are skipped so
    that graphs missing an edge (a disconnected cell of a verdict table)
    still render.  Returns None as soon as some nonzero column touches
    more than two vertices or its two blocks are not exact negatives;
    such a column is a hyperedge and the graph has no drawing here.
    """
    q, b = G.q, G.blocksize
    edges: list[tuple[int, int, np.ndarray]] = []
    for col in G.M.T:
        scale = max(1.0, float(np.linalg.norm(col)))
        cut = tol_zero * scale
        blocks = col.reshape(q, b)
        norms = np.linalg.norm(blocks, axis=1)
        nz = np.flatnonzero(norms > cut)
        if nz.size == 0:
            continue
        if nz.size != 2:
            return None
        i, j = int(nz[0]), int(nz[1])
        w = blocks[i].copy()
        if float(np.linalg.norm(blocks[j] + w)) > cut:
            return None
        if b == 1 and G.is_real and w[0] < 0.0:
            i, j, w = j, i, -w
        edges.append((i + 1, j + 1, w))
    return edges


def _fmt_weight(w: np.ndarray) -> str:
    def one(x) -> str:
        if np.iscomplexobj(np.asarray(x)):
            x = complex(x)
            # A component twelve orders below the other is invisible at
            # four significant digits; drop the float noise.
            scale = max(abs(x.real), abs(x.imag))
            re = 0.0 if abs(x.real) <= 1e-12 * scale else x.real
            im = 0.0 if abs(x.imag) <= 1e-12 * scale else x.imag
            if im == 0.0:
                return f"{re:.4g}"
            return f"{re:.4g}{im:+.4g}j"
        return f"{float(x):.4g}"

    if w.shape[0] == 1:
        return one(w[0])
    return "(" + ", ".join(one(x) for x in w) + ")"


def to_dot(G: GenGraph, labels: list[str] | None = None) -> str:
    """Render a scalar-edge graph as Graphviz digraph text.

    One arc per detected edge, weights annotated to 4 significant digits;
    output is byte-stable for identical inputs.
    """
    edges = detect_scalar_edges(G)
    if edges is None:
        raise UnsupportedRenderError(
            "graph has a hyperedge column; only scalar-edge graphs can be drawn"
        )
    if labels is None:
        labels = [str(i + 1) for i in range(G.q)]
    if len(labels) != G.q:
        raise DimensionError(f"{len(labels)} labels for {G.q} vertices")
    lines = ["digraph {"]
    for name in labels:
        lines.append(f'  "{name}";')
    for i, j, w in edges:
        lines.append(f'  "{labels[i - 1]}" -> "{labels[j - 1]}" [label="{_fmt_weight(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def effective_conductance(
    G: GenGraph, k: int, l: int, tol_rank: float = DEFAULT_TOLERANCES.rank
) -> float:
    """Two-point effective conductance of the graph Laplacian G G*.

    Zero exactly when e_k - e_l falls outside range(G G*), which matches
    the pairwise connectivity predicate; otherwise the reciprocal of the
    pseudo-inverse quadratic form, as for a resistive network.
    """
    if G.blocksize != 1:
        raise GraphDomainError("effective conductance needs scalar vertex blocks")
    if not G.is_real:
        raise GraphDomainError("effective conductance is defined for real graphs only")
    _check_pair(G.q, k, l)
    L = G.M @ G.M.T
    e = pair_difference(G.q, k, l)
    aug = np.hstack([L, e[:, None]])
    s_aug = np.linalg.svd(aug, compute_uv=False)
    cutoff = tol_rank * float(s_aug[0]) if s_aug.size and s_aug[0] > 0 else 0.0
    s_l = np.linalg.svd(L, compute_uv=False)
    if int(np.sum(s_aug > cutoff)) != int(np.sum(s_l > cutoff)):
        return 0.0
    return float(1.0 / (e @ np.linalg.pinv(L) @ e))
