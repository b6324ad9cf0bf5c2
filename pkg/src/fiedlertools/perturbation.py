"""Pendant-vertex perturbation of the Fiedler pair.

A pendant vertex attached at anchor v with weight x > 0 deforms the Fiedler
vector continuously in x. The new vertex gets id n (the base graph keeps ids
0..n-1). For small x the perturbed vector approaches a closed-form limit in
which the pendant dominates; for a complete base graph and large x the
perturbed lambda2 follows a quadratic-root formula. Both limits are exposed
here, as is the empirical check that the pendant stays extremal up to some
anchor-dependent weight threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import ConvergenceError
from .graphs import Graph, build_graph
from .spectral import fiedler

# relative tolerance for "attains the maximum magnitude"
EXTREMUM_TIE_TOL = 1e-12
# additive slack on the Weyl upper bound lambda2(x) <= 2x
WEYL_SLACK = 1e-10


@dataclass(frozen=True)
class PendantPerturbation:
    """Base graph plus one pendant vertex at anchor_v with weight x."""

    base: Graph
    anchor_v: int
    x: float

    def __post_init__(self) -> None:
        if not 0 <= self.anchor_v < self.base.n:
            raise ValueError(f"anchor {self.anchor_v} outside range({self.base.n})")
        if not (self.x > 0.0 and math.isfinite(self.x)):
            raise ValueError(f"pendant weight must be positive and finite, got {self.x}")

    def apply(self) -> Graph:
        n = self.base.n
        return build_graph(n + 1, list(self.base.edges) + [(self.anchor_v, n, self.x)])


def attach_pendant(g: Graph, v: int, x: float) -> Graph:
    """Graph on n+1 vertices: g plus the edge (v, n) of weight x."""
    return PendantPerturbation(g, v, x).apply()


@dataclass
class PerturbedFiedler:
    """Fiedler pair of a pendant-augmented graph; phi_x[n] is the pendant entry."""

    x: float
    lambda2_x: float
    phi_x: np.ndarray
    new_vertex_is_extremum: bool
    gap: float


def perturbed_fiedler(
    g: Graph, v: int, x: float, tie_tol: float = EXTREMUM_TIE_TOL
) -> PerturbedFiedler:
    """Fiedler pair after attaching a pendant at v with weight x.

    The extremum flag asks whether the pendant attains the signed maximum
    of the vector oriented so that the pendant entry is nonnegative (ties
    within tie_tol relative to the largest magnitude). This is invariant
    under the overall sign ambiguity, and it is deliberately not a test on
    |phi|: for large x the opposite Fiedler extremum can exceed the pendant
    in magnitude while the pendant still heads its own sign class, which is
    what "the new vertex is an extremum" means here.

    Sign convention of the returned vector: when the pendant entry attains
    the maximal magnitude (within tie_tol, relative), the vector is flipped
    if needed so that the pendant entry is nonnegative; otherwise the global
    largest-entry policy from ``fiedler`` stands.
    """
    res = fiedler(attach_pendant(g, v, x))
    phi = res.phi
    n = g.n
    maxmag = float(np.max(np.abs(phi)))
    oriented = phi if phi[n] >= 0.0 else -phi
    is_extremum = float(oriented[n]) >= float(np.max(oriented[:n])) - tie_tol * maxmag
    pendant_mag = abs(float(phi[n]))
    if pendant_mag >= maxmag * (1.0 - tie_tol) and phi[n] < 0.0:
        phi = -phi
    if res.lambda2 > 2.0 * x + WEYL_SLACK:
        raise ConvergenceError(
            f"computed lambda2 {res.lambda2!r} violates the bound 2x = {2.0 * x!r}"
        )
    return PerturbedFiedler(
        x=float(x),
        lambda2_x=res.lambda2,
        phi_x=phi,
        new_vertex_is_extremum=is_extremum,
        gap=res.gap,
    )


def sweep(g: Graph, v: int, xs, tie_tol: float = EXTREMUM_TIE_TOL) -> list[PerturbedFiedler]:
    """Perturbed Fiedler pairs over an increasing grid of pendant weights.

    Successive vectors are sign-aligned (nonnegative inner product with the
    previous grid point) so per-vertex traces are continuous curves.
    """
    xs = [float(x) for x in xs]
    if not xs:
        raise ValueError("weight grid is empty")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("weight grid must be strictly increasing")
    out = [perturbed_fiedler(g, v, x, tie_tol) for x in xs]
    for prev, cur in zip(out, out[1:]):
        if float(np.dot(prev.phi_x, cur.phi_x)) < 0.0:
            cur.phi_x = -cur.phi_x
    return out


def small_x_limit(n: int) -> np.ndarray:
    """Limit of the perturbed Fiedler vector as the pendant weight tends to 0.

    Equals (-1, ..., -1, n)/sqrt(n(n+1)): in the weak-attachment limit the
    pendant carries all the variation. Unit norm, mean zero, length n+1.
    """
    if n < 1:
        raise ValueError("base graph needs at least one vertex")
    vec = np.full(n + 1, -1.0)
    vec[n] = float(n)
    return vec / math.sqrt(n * (n + 1.0))


def complete_graph_large_x(n: int, x: float) -> tuple[float, float]:
    """Bounded root of the pendant-on-K_n characteristic quadratic, and lambda2.

    The quadratic a^2 - a(2x + n - 2) + (n-1)(x-1) has one root growing like
    2x and one tending to (n-1)/2; the bounded one is returned together with
    the implied eigenvalue prediction a + 1 (which tends to (n+1)/2).
    """
    if n < 2:
        raise ValueError("complete base graph needs n >= 2")
    if x <= 0.0:
        raise ValueError("pendant weight must be positive")
    b = 2.0 * x + n - 2.0
    c = (n - 1.0) * (x - 1.0)
    disc = b * b - 4.0 * c
    if disc < 0.0:
        raise ValueError(f"quadratic has no real roots for n={n}, x={x} (disc={disc})")
    # b > 0 always; compute the small root from the product to avoid cancellation
    a_big = 0.5 * (b + math.sqrt(disc))
    a_root = c / a_big
    return a_root, a_root + 1.0


@dataclass
class Conjecture1Report:
    """Pendant extremality over a weight grid, anchored at both base extrema."""

    anchor_max: int
    anchor_min: int
    xs: list[float]
    flags_max: list[bool]
    flags_min: list[bool]
    counterexamples: list[tuple[int, float]]

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def conjecture1_check(g: Graph, x_grid) -> Conjecture1Report:
    """Test pendant extremality at every grid weight, anchored at argmax/argmin of phi.

    The conjecture asserts the pendant is a Fiedler extremum for every x > 0
    when the anchor is itself a base extremum; any grid point where the flag
    is false is recorded verbatim.
    """
    base = fiedler(g)
    anchor_max = int(np.argmax(base.phi))
    anchor_min = int(np.argmin(base.phi))
    xs = [float(x) for x in x_grid]
    flags_max = [r.new_vertex_is_extremum for r in sweep(g, anchor_max, xs)]
    flags_min = [r.new_vertex_is_extremum for r in sweep(g, anchor_min, xs)]
    counterexamples = [(anchor_max, x) for x, f in zip(xs, flags_max) if not f]
    counterexamples += [(anchor_min, x) for x, f in zip(xs, flags_min) if not f]
    return Conjecture1Report(
        anchor_max=anchor_max,
        anchor_min=anchor_min,
        xs=xs,
        flags_max=flags_max,
        flags_min=flags_min,
        counterexamples=counterexamples,
    )
