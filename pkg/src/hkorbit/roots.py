"""Strongly orthogonal root triples for the unitary orbit.

The triples (x_a, y_a, h_a) are built from matrix units: x_a carries the
unit E_aa in its top-right block, y_a = I x_a, and h_a is the diagonal
marker of the pair.  Their real span A = sum_a R x_a is a maximal abelian
subalgebra of m0, and conjugating by block-diagonal unitaries from the
SVD of the top-right block realizes every element of m0 inside Ad(K) A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraContext, Element, as_matrix, bracket,
                      check_element, dagger, frob)


@dataclass(frozen=True, eq=False)
class SOSystem:
    triples: tuple  # of (x_alpha, y_alpha, h_alpha) Element triples

    @property
    def rank(self) -> int:
        return len(self.triples)

    def x(self, alpha: int) -> Element:
        return self.triples[alpha][0]

    def y(self, alpha: int) -> Element:
        return self.triples[alpha][1]

    def h(self, alpha: int) -> Element:
        return self.triples[alpha][2]


@dataclass(frozen=True, eq=False)
class MaxAbelianCoords:
    conjugator: np.ndarray  # block-diagonal unitary in K
    coeffs: np.ndarray      # singular values, descending, length rank


def build_sos(ctx: AlgebraContext) -> SOSystem:
    """The rank = min(k, n-k) strongly orthogonal triples."""
    n, k = ctx.n, ctx.k
    triples = []
    for a in range(ctx.rank):
        x = np.zeros((n, n), dtype=complex)
        x[a, k + a] = 1.0
        x[k + a, a] = -1.0
        y = np.zeros((n, n), dtype=complex)
        y[a, k + a] = 1j
        y[k + a, a] = 1j
        h = np.zeros((n, n), dtype=complex)
        h[a, a] = 1.0
        h[k + a, k + a] = -1.0
        triples.append((Element(x, "m0"), Element(y, "m0"), Element(h, "gC")))
    return SOSystem(tuple(triples))


def abelian_element(sos: SOSystem, coeffs) -> Element:
    """sum_a v_a x_a for real coefficients v."""
    coeffs = np.asarray(coeffs, dtype=float)
    m = sum(float(v) * sos.x(a).mat for a, v in enumerate(coeffs))
    return Element(m, "m0")


def to_abelian_coords(ctx: AlgebraContext, sos: SOSystem, v) -> MaxAbelianCoords:
    """SVD normal form of V in m0: V = Ad(g)(sum_a s_a x_a), g in K.

    Signs and phases of the coefficients are absorbed into the
    block-diagonal conjugator, so the coefficients come out as the
    singular values of the top-right block, non-negative and descending.
    """
    vm = as_matrix(v)
    k = ctx.k
    z = vm[:k, k:]
    u, s, wh = np.linalg.svd(z)
    g = np.zeros((ctx.n, ctx.n), dtype=complex)
    g[:k, :k] = u
    g[k:, k:] = dagger(wh)
    return MaxAbelianCoords(conjugator=g, coeffs=s[:ctx.rank])


def reconstruct(ctx: AlgebraContext, sos: SOSystem, coords: MaxAbelianCoords) -> Element:
    g = coords.conjugator
    m = g @ abelian_element(sos, coords.coeffs).mat @ dagger(g)
    return Element(m, "m0")


def curvature_R(ctx: AlgebraContext, a, b, c, x=None, tol: float = 1e-8) -> Element:
    """Curvature R_{a,b} c = [[a, b], c] of the compact orbit at x (default 0).

    All three arguments must lie in the same m_x; mixing base points is
    rejected by the membership residual.
    """
    from .orbit import project_m_x  # local import to avoid a cycle

    elems = [as_matrix(w) for w in (a, b, c)]
    for w in elems:
        resid = frob(w - project_m_x(ctx, w, x))
        if resid > tol * max(frob(w), 1.0):
            raise ValueError("curvature_R: argument not in m_x of the given base")
    ab = elems[0] @ elems[1] - elems[1] @ elems[0]
    out = ab @ elems[2] - elems[2] @ ab
    return Element(out, "m0" if x is None else "g")
