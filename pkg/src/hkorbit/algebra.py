"""Finite-dimensional model of the unitary orbit algebra.

The ambient algebra is gl(n, C) with the trace Hermitian product
``<x, y> = Tr(x^* y)``.  The compact real form g = u(n) consists of the
skew-Hermitian matrices.  A block derivation

    D = i * kappa * (p_plus - p_minus)

splits g into the centralizer k0 (block-diagonal) and its orthogonal
complement m0 (block-off-diagonal), and splits the complexification of
m0 into the +-ic and -ic eigenspaces of ad(D) (strictly upper / lower
block matrices).  The complex structure on m0 is I = (1/c) ad(D) with
c = 2*kappa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPACE_TAGS = ("gC", "g", "k0", "m0", "mPlus", "mMinus")

DEFAULT_TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True, eq=False)
class Element:
    """An n x n complex matrix tagged with the subspace it inhabits."""

    mat: np.ndarray
    space_tag: str = "gC"

    def __post_init__(self):
        if self.space_tag not in SPACE_TAGS:
            raise ValueError(f"unknown space tag {self.space_tag!r}")
        object.__setattr__(self, "mat", np.asarray(self.mat, dtype=complex))

    @property
    def norm(self) -> float:
        return frob(self.mat)

    def __add__(self, other):
        o = as_matrix(other)
        tag = self.space_tag if isinstance(other, Element) and other.space_tag == self.space_tag else "gC"
        return Element(self.mat + o, tag)

    def __sub__(self, other):
        o = as_matrix(other)
        tag = self.space_tag if isinstance(other, Element) and other.space_tag == self.space_tag else "gC"
        return Element(self.mat - o, tag)

    def __neg__(self):
        return Element(-self.mat, self.space_tag)

    def __mul__(self, s):
        # Real scalars preserve every tag; complex scalars only gC/mPlus/mMinus.
        tag = self.space_tag
        if not np.isreal(s) and tag in ("g", "k0", "m0"):
            tag = "gC"
        return Element(self.mat * s, tag)

    __rmul__ = __mul__


def as_matrix(x) -> np.ndarray:
    """Accept an Element or a bare array and return the matrix."""
    if isinstance(x, Element):
        return x.mat
    return np.asarray(x, dtype=complex)


@dataclass(frozen=True, eq=False)
class AlgebraContext:
    """Fixed orbit datum: dimension, block size, rate and the derivation D."""

    n: int
    k: int
    kappa: float
    D: np.ndarray
    c: float
    p_plus: np.ndarray
    p_minus: np.ndarray

    @property
    def m0_dim(self) -> int:
        return 2 * self.k * (self.n - self.k)

    @property
    def rank(self) -> int:
        return min(self.k, self.n - self.k)


def build_context(n: int, k: int, kappa: float) -> AlgebraContext:
    """Assemble the orbit datum for the unitary family.

    c is read off the spectrum of D (difference of the two distinct
    eigenvalues of -iD) rather than hard-coded, and checked against the
    closed form 2*kappa.
    """
    if not (1 <= k <= n - 1):
        raise ValueError(f"k must satisfy 1 <= k <= n-1, got k={k}, n={n}")
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    p_plus = np.zeros((n, n), dtype=complex)
    p_plus[np.arange(k), np.arange(k)] = 1.0
    p_minus = np.eye(n, dtype=complex) - p_plus
    D = 1j * kappa * (p_plus - p_minus)

    evals = np.linalg.eigvalsh(-1j * D)
    c = float(evals.max() - evals.min())
    if not np.isclose(c, 2.0 * kappa, rtol=1e-12, atol=1e-12):
        raise AssertionError(f"spectral c={c} disagrees with 2*kappa={2 * kappa}")
    return AlgebraContext(n=n, k=k, kappa=float(kappa), D=D, c=c,
                          p_plus=p_plus, p_minus=p_minus)


def inner(x, y) -> complex:
    """Trace Hermitian product <x, y> = Tr(x^* y)."""
    return complex(np.trace(dagger(as_matrix(x)) @ as_matrix(y)))


def re_inner(x, y) -> float:
    """Real part of the trace product; the real inner product on g."""
    return float(np.real(inner(x, y)))


# Bracket tag arithmetic for the symmetric-pair relations
# [k0,k0] c k0, [k0,m0] c m0, [m0,m0] c k0.
_BRACKET_TAGS = {
    ("k0", "k0"): "k0",
    ("k0", "m0"): "m0",
    ("m0", "k0"): "m0",
    ("m0", "m0"): "k0",
    ("g", "g"): "g",
}


def bracket(x, y) -> Element:
    """Commutator [x, y] = xy - yx, tagged via the symmetric-pair table."""
    xm, ym = as_matrix(x), as_matrix(y)
    if xm.shape != ym.shape:
        raise ValueError("bracket: dimension mismatch")
    m = xm @ ym - ym @ xm
    tx = x.space_tag if isinstance(x, Element) else "gC"
    ty = y.space_tag if isinstance(y, Element) else "gC"
    tag = _BRACKET_TAGS.get((tx, ty))
    if tag is None:
        scale = frob(m)
        tag = "g" if frob(m + dagger(m)) <= DEFAULT_TOL * max(scale, 1.0) else "gC"
    return Element(m, tag)


def _skewh(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - dagger(m))


def _block_diag_part(ctx: AlgebraContext, m: np.ndarray) -> np.ndarray:
    return ctx.p_plus @ m @ ctx.p_plus + ctx.p_minus @ m @ ctx.p_minus


def _block_off_part(ctx: AlgebraContext, m: np.ndarray) -> np.ndarray:
    return ctx.p_plus @ m @ ctx.p_minus + ctx.p_minus @ m @ ctx.p_plus


def project(ctx: AlgebraContext, x, target: str) -> Element:
    """Orthogonal projection w.r.t. Re<.,.> onto the tagged subspace."""
    m = as_matrix(x)
    if target == "gC":
        return Element(m, "gC")
    if target == "g":
        return Element(_skewh(m), "g")
    if target == "k0":
        return Element(_block_diag_part(ctx, _skewh(m)), "k0")
    if target == "m0":
        return Element(_block_off_part(ctx, _skewh(m)), "m0")
    if target == "mPlus":
        return Element(ctx.p_plus @ m @ ctx.p_minus, "mPlus")
    if target == "mMinus":
        return Element(ctx.p_minus @ m @ ctx.p_plus, "mMinus")
    raise ValueError(f"unknown space tag {target!r}")


def check_element(ctx: AlgebraContext, e: Element, tol: float = DEFAULT_TOL) -> bool:
    """Verify the tag invariant of e to relative Frobenius tolerance."""
    m = e.mat
    scale = max(frob(m), 1.0)
    tag = e.space_tag
    if tag == "gC":
        return True
    if tag == "g":
        return frob(m + dagger(m)) <= tol * scale
    if tag == "k0":
        return (frob(m + dagger(m)) <= tol * scale
                and frob(_block_off_part(ctx, m)) <= tol * scale)
    if tag == "m0":
        return (frob(m + dagger(m)) <= tol * scale
                and frob(_block_diag_part(ctx, m)) <= tol * scale)
    if tag in ("mPlus", "mMinus"):
        sign = 1.0 if tag == "mPlus" else -1.0
        resid = bracket(Element(ctx.D), e).mat - sign * 1j * ctx.c * m
        return frob(resid) <= tol * scale
    raise ValueError(tag)


def complex_structure_I(ctx: AlgebraContext, m, x=None, tol: float = 1e-8) -> Element:
    """Apply I = (1/c) ad(x + D) to an element of m_x (base 0 when x is None).

    Elements with a nonzero centralizer component are rejected: I is only
    the complex structure on m_x and its complexification.
    """
    mm = as_matrix(m)
    base = ctx.D if x is None else as_matrix(x) + ctx.D
    if x is None:
        kpart = _block_diag_part(ctx, mm)
    else:
        # k_x is the centralizer of x + D; its component of mm is recovered
        # from the spectral projectors of the base matrix.
        pp, pm = _spectral_projectors(ctx, base)
        kpart = pp @ mm @ pp + pm @ mm @ pm
    if frob(kpart) > tol * max(frob(mm), 1.0):
        raise ValueError("complex_structure_I: element has a k-component")
    out = (base @ mm - mm @ base) / ctx.c
    # [D, m0] stays in m0 exactly (block structure); conjugated bases lose the tag.
    tag = m.space_tag if (isinstance(m, Element) and x is None and m.space_tag == "m0") else "gC"
    return Element(out, tag)


def _spectral_projectors(ctx: AlgebraContext, base: np.ndarray):
    """Eigenprojectors of a matrix similar to D (eigenvalues +-i*kappa)."""
    # (base - (-ik))/(2ik) is the projector onto the +ik eigenspace when
    # base is diagonalizable with exactly these two eigenvalues.
    ik = 1j * ctx.kappa
    pp = (base + ik * np.eye(ctx.n)) / (2.0 * ik)
    return pp, np.eye(ctx.n) - pp


def random_element(ctx: AlgebraContext, space_tag: str, seed, scale: float = 1.0) -> Element:
    """Deterministic random member of the tagged subspace, Frobenius norm = scale.

    Membership is by construction (symmetrized / block-masked), never by
    rejection, so the tag invariant holds to machine precision.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n, k = ctx.n, ctx.k
    ginibre = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if space_tag == "gC":
        m = ginibre
    elif space_tag == "g":
        m = _skewh(ginibre)
    elif space_tag == "k0":
        m = _block_diag_part(ctx, _skewh(ginibre))
    elif space_tag == "m0":
        m = _block_off_part(ctx, _skewh(ginibre))
    elif space_tag == "mPlus":
        m = ctx.p_plus @ ginibre @ ctx.p_minus
    elif space_tag == "mMinus":
        m = ctx.p_minus @ ginibre @ ctx.p_plus
    else:
        raise ValueError(f"unknown space tag {space_tag!r}")
    nrm = frob(m)
    if nrm == 0.0:  # pragma: no cover - probability zero
        raise RuntimeError("degenerate random draw")
    return Element(m * (scale / nrm), space_tag)


def m0_basis(ctx: AlgebraContext) -> np.ndarray:
    """Stack of 2k(n-k) matrices, orthonormal for Re<.,.>, spanning m0."""
    n, k = ctx.n, ctx.k
    out = np.zeros((ctx.m0_dim, n, n), dtype=complex)
    s = 1.0 / np.sqrt(2.0)
    idx = 0
    for i in range(k):
        for j in range(k, n):
            out[idx, i, j] = s
            out[idx, j, i] = -s
            idx += 1
            out[idx, i, j] = 1j * s
            out[idx, j, i] = 1j * s
            idx += 1
    return out


def coords_in_basis(basis: np.ndarray, m) -> np.ndarray:
    """Re<.,.>-coordinates of m in an orthonormal real basis stack."""
    mm = as_matrix(m)
    return np.real(np.einsum("aij,ij->a", basis.conj(), mm))


def from_coords(basis: np.ndarray, coords: np.ndarray) -> np.ndarray:
    return np.einsum("a,aij->ij", coords, basis)
