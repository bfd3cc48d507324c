"""Points of the compact and complexified orbits of the block derivation.

A point of the complex orbit is a matrix y such that y + D is conjugate
to D, i.e. has eigenvalues i*kappa (multiplicity k) and -i*kappa
(multiplicity n-k).  Compact points are additionally skew-Hermitian.
The affine action is Ad_D(g): y -> g (y + D) g^{-1} - D, and the
Kirillov-Kostant-Souriau form at the base point reads
omega_C(X, Y) = <X^*, [D, Y]> = Tr(X [D, Y]).

Subspace pairs (P, Q) with P transverse to Q give the finite-scale chart
of the restricted-Grassmannian picture: y + D = i*kappa (pi_P - pi_Q)
with pi_P the projection onto P along Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import (AlgebraContext, Element, as_matrix, dagger, frob,
                      project, re_inner)

CERT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OrbitPointC:
    """A point of the complexified orbit, certified spectrally."""

    y: np.ndarray

    @property
    def mat(self) -> np.ndarray:
        return self.y


@dataclass(frozen=True, eq=False)
class TangentVecC:
    """Tangent vector at y in rho-coordinates (c, c') with c, c' in m_x."""

    y: np.ndarray
    c: np.ndarray
    c_prime: np.ndarray

    def generator(self) -> np.ndarray:
        return self.c + 1j * self.c_prime

    def ambient(self, ctx: AlgebraContext) -> np.ndarray:
        u = self.generator()
        base = self.y + ctx.D
        return u @ base - base @ u


@dataclass(frozen=True, eq=False)
class SubspacePair:
    """Orthonormal frames of a transverse pair of subspaces."""

    P: np.ndarray  # n x k
    Q: np.ndarray  # n x (n-k)


def point_matrix(y) -> np.ndarray:
    if isinstance(y, OrbitPointC):
        return y.y
    return as_matrix(y)


def certify_orbit_point(ctx: AlgebraContext, y, tol: float = CERT_TOL) -> float:
    """Max deviation of eig(y + D) from the two-point spectrum of D."""
    ym = point_matrix(y)
    evals = np.linalg.eigvals(ym + ctx.D)
    evals = evals[np.argsort(evals.imag)]
    target = np.concatenate([np.full(ctx.n - ctx.k, -1j * ctx.kappa),
                             np.full(ctx.k, 1j * ctx.kappa)])
    resid = float(np.max(np.abs(evals - target)))
    if resid > tol:
        raise ValueError(f"not an orbit point: spectral residual {resid:.2e}")
    return resid


def orbit_point(ctx: AlgebraContext, y, tol: float = CERT_TOL) -> OrbitPointC:
    certify_orbit_point(ctx, y, tol)
    return OrbitPointC(np.asarray(point_matrix(y), dtype=complex))


def is_compact_point(ctx: AlgebraContext, y, tol: float = CERT_TOL) -> bool:
    ym = point_matrix(y)
    if frob(ym + dagger(ym)) > tol * max(frob(ym), 1.0):
        return False
    try:
        certify_orbit_point(ctx, ym, tol)
    except ValueError:
        return False
    return True


def ad_D(ctx: AlgebraContext, g: np.ndarray, y) -> OrbitPointC:
    """Affine adjoint action y -> g (y + D) g^{-1} - D."""
    ym = point_matrix(y)
    if np.linalg.cond(g) > 1e14:
        raise ValueError("ad_D: singular group element")
    conj = g @ (ym + ctx.D) @ np.linalg.inv(g)
    return orbit_point(ctx, conj - ctx.D)


def eigenframes(ctx: AlgebraContext, y, cond_max: float = 1e8):
    """Orthonormal frames (P, Q) of the +-i*kappa eigenspaces of y + D."""
    ym = point_matrix(y)
    base = ym + ctx.D
    herm_resid = frob(base + dagger(base))
    if herm_resid <= 1e-12 * max(frob(base), 1.0):
        # skew-Hermitian base: eigh gives exactly orthonormal frames
        vals, vecs = np.linalg.eigh(-1j * base)
        order = np.argsort(-vals)
        p = vecs[:, order[:ctx.k]]
        q = vecs[:, order[ctx.k:]]
        return p, q
    vals, vecs = scipy.linalg.eig(base)
    order = np.argsort(-vals.imag)
    p_raw = vecs[:, order[:ctx.k]]
    q_raw = vecs[:, order[ctx.k:]]
    p, _ = np.linalg.qr(p_raw)
    q, _ = np.linalg.qr(q_raw)
    f = np.concatenate([p, q], axis=1)
    cond = np.linalg.cond(f)
    if cond > cond_max:
        raise ValueError(f"near-degenerate orbit point (frame condition {cond:.2e})")
    return p, q


def unitary_conjugator(ctx: AlgebraContext, x) -> np.ndarray:
    """A unitary u with x = u D u^* - D, from the eigenframes of x + D."""
    p, q = eigenframes(ctx, x)
    return np.concatenate([p, q], axis=1)


def project_m_x(ctx: AlgebraContext, w, x=None, u=None) -> np.ndarray:
    """Re<.,.>-orthogonal projection of w onto m_x (x = None means base 0).

    Pass the unitary conjugator u of x when it is already known to skip
    the eigenframe computation.
    """
    wm = as_matrix(w)
    if x is None and u is None:
        return project(ctx, wm, "m0").mat
    if u is None:
        u = unitary_conjugator(ctx, x)
    return u @ project(ctx, dagger(u) @ wm @ u, "m0").mat @ dagger(u)


def random_compact_point(ctx: AlgebraContext, seed) -> tuple:
    """Haar-random compact orbit point with its unitary conjugator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = haar_unitary(ctx.n, rng)
    x = u @ ctx.D @ dagger(u) - ctx.D
    return x, u


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kks_form(ctx: AlgebraContext, X, Y, tol: float = 1e-9) -> complex:
    """omega_C(X, Y) = <X^*, [D, Y]> = Tr(X [D, Y]) at the base point 0.

    Arguments are tangent vectors at 0, either as ambient matrices in
    m0 + i m0 or as TangentVecC based at 0.  General base points are
    handled upstream by invariance: pull the vectors back to the fiber
    over 0 with the group element and evaluate here (see
    hyperkahler.omega_C).
    """
    mats = []
    for v in (X, Y):
        if isinstance(v, TangentVecC):
            if frob(v.y) > tol:
                raise ValueError("kks_form expects vectors based at 0")
            mats.append(v.ambient(ctx))
        else:
            mats.append(as_matrix(v))
    xa, ya = mats
    dy = ctx.D @ ya - ya @ ctx.D
    return complex(np.trace(xa @ dy))


def kahler_metric_O(ctx: AlgebraContext, x, c, d, tol: float = 1e-8) -> float:
    """Compact-orbit Kahler metric g_O(X^c, X^d) = c^3 Re<c, d>, c, d in m_x."""
    u = None if x is None or frob(point_matrix(x)) == 0 else unitary_conjugator(ctx, x)
    for w in (c, d):
        wm = as_matrix(w)
        proj = project_m_x(ctx, wm, u=u)
        if frob(wm - proj) > tol * max(frob(wm), 1.0):
            raise ValueError("kahler_metric_O: argument not in m_x")
    return ctx.c ** 3 * re_inner(c, d)


def point_from_pair(ctx: AlgebraContext, sp: SubspacePair) -> OrbitPointC:
    return orbit_point(ctx, point_from_frames(ctx, sp.P, sp.Q))


def point_from_frames(ctx: AlgebraContext, fp: np.ndarray, fq: np.ndarray,
                      cond_max: float = 1e8) -> np.ndarray:
    """y with y + D = i*kappa(pi_P - pi_Q), pi_P the projection onto P along Q.

    Frames need not be orthonormal; the map is rational in the frame
    entries (no re-orthonormalization), which keeps it holomorphic in
    graph coordinates.
    """
    f = np.concatenate([fp, fq], axis=1)
    cond = np.linalg.cond(f)
    if cond > cond_max:
        raise ValueError(f"non-transverse subspace pair (condition {cond:.2e})")
    e = np.zeros((ctx.n, ctx.n), dtype=complex)
    e[:ctx.k, :ctx.k] = np.eye(ctx.k)
    pi_p = f @ e @ np.linalg.inv(f)
    return 1j * ctx.kappa * (2.0 * pi_p - np.eye(ctx.n)) - ctx.D


def pair_from_point(ctx: AlgebraContext, y) -> SubspacePair:
    p, q = eigenframes(ctx, y)
    return SubspacePair(P=p, Q=q)


# --- graph chart around a subspace pair -----------------------------------
#
# Near a center pair (P0, Q0), pairs are parameterized holomorphically by
# (ZP, ZQ) with frames P0 + Q0 ZP and Q0 + P0 ZQ.  The chart map into the
# orbit is rational, hence holomorphic, and its differential is computed
# exactly from d(pi_P) = (dF E - pi_P dF) F^{-1}.

def pair_chart_point(ctx: AlgebraContext, center: SubspacePair,
                     zp: np.ndarray, zq: np.ndarray) -> np.ndarray:
    fp = center.P + center.Q @ np.asarray(zp, dtype=complex)
    fq = center.Q + center.P @ np.asarray(zq, dtype=complex)
    return point_from_frames(ctx, fp, fq)


def pair_chart_tangent(ctx: AlgebraContext, center: SubspacePair,
                       zp, zq, dzp, dzq) -> np.ndarray:
    """Exact differential of the chart map at (zp, zq) along (dzp, dzq)."""
    fp = center.P + center.Q @ np.asarray(zp, dtype=complex)
    fq = center.Q + center.P @ np.asarray(zq, dtype=complex)
    dfp = center.Q @ np.asarray(dzp, dtype=complex)
    dfq = center.P @ np.asarray(dzq, dtype=complex)
    f = np.concatenate([fp, fq], axis=1)
    df = np.concatenate([dfp, dfq], axis=1)
    finv = np.linalg.inv(f)
    e = np.zeros((ctx.n, ctx.n), dtype=complex)
    e[:ctx.k, :ctx.k] = np.eye(ctx.k)
    pi_p = f @ e @ finv
    dpi = (df @ e - pi_p @ df) @ finv
    return 2j * ctx.kappa * dpi
