"""Mostow fibration of the complex orbit over the compact orbit.

Every y in the complex orbit factors uniquely as y = Ad_D(e^{ia})(x)
with x compact and a in m_x; x is the distance minimizer of
f_y(x') = 0.5 |y - x'|^2 over the compact orbit.  The projection is
computed by Riemannian descent along orbit geodesics
x_t = Ad_D(e^{tb})(x), b in m_x, with a Newton phase near the minimum
(the distance function is strictly convex there), and the fiber
coordinate is recovered in closed form through the argsinh spectral
kernel rather than a nonlinear solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraContext, Element, as_matrix, dagger, frob,
                      m0_basis, project)
from .orbit import (OrbitPointC, TangentVecC, certify_orbit_point,
                    eigenframes, orbit_point, point_matrix, project_m_x,
                    unitary_conjugator)
from .speccalc import KERNELS, apply_ad_function

MEMBERSHIP_TOL = 1e-8
FIBER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FiberedPoint:
    """Mostow coordinates of y: compact part x, fiber coordinate a in m_x.

    The unitary conjugator u (x = u D u^* - D) is cached because every
    fiber-over-0 formula is transported through it.
    """

    x: np.ndarray
    a: np.ndarray
    conjugator: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class ProjectionDiagnostics:
    iterations: int
    grad_norm: float
    distance: float
    converged: bool


def exp_i(a) -> np.ndarray:
    """e^{i a} for skew-Hermitian a (a positive-definite Hermitian matrix)."""
    h, u = np.linalg.eigh(1j * as_matrix(a))
    return (u * np.exp(h)) @ dagger(u)


def exp_skew(b) -> np.ndarray:
    """e^{b} for skew-Hermitian b (a unitary matrix)."""
    h, u = np.linalg.eigh(-1j * as_matrix(b))
    return (u * np.exp(1j * h)) @ dagger(u)


def check_in_m_x(ctx: AlgebraContext, a, x=None, u=None, tol: float = MEMBERSHIP_TOL):
    am = as_matrix(a)
    resid = frob(am - project_m_x(ctx, am, x=x, u=u))
    if resid > tol * max(frob(am), 1.0):
        raise ValueError(f"element not in m_x (residual {resid:.2e})")
    return am


def forward(ctx: AlgebraContext, x, a, u=None) -> OrbitPointC:
    """y = Ad_D(e^{ia})(x) = e^{ia}(x + D)e^{-ia} - D for a in m_x."""
    xm = point_matrix(x)
    am = check_in_m_x(ctx, a, x=xm if u is None else None, u=u)
    g = exp_i(am)
    ginv = exp_i(-am)
    return orbit_point(ctx, g @ (xm + ctx.D) @ ginv - ctx.D)


def fiber_point(ctx: AlgebraContext, x, a, u=None) -> FiberedPoint:
    """Package (x, a) with the conjugator and forward image."""
    xm = point_matrix(x)
    if u is None:
        u = unitary_conjugator(ctx, xm)
    am = check_in_m_x(ctx, a, u=u)
    y = forward(ctx, xm, am, u=u)
    return FiberedPoint(x=xm, a=am, conjugator=u, y=y.y)


def _polar_init(ctx: AlgebraContext, ym: np.ndarray) -> np.ndarray:
    """Closest-unitary alignment of the eigenframes of y + D."""
    p, q = eigenframes(ctx, ym)
    f = np.concatenate([p, q], axis=1)
    w, _, vh = np.linalg.svd(f)
    return w @ vh


def project_pi(ctx: AlgebraContext, y, initial: np.ndarray | None = None,
               grad_tol: float = 1e-10, max_iter: int = 500,
               newton_at: float = 1e-4):
    """Distance-minimizing projection onto the compact orbit.

    Returns (x, conjugator, diagnostics).  Gradient descent with Armijo
    backtracking (steps capped inside the geodesic monotonicity window
    t|b| <= pi/4), switching to damped Newton in m0 coordinates once the
    gradient is small; convergence means the Riemannian gradient norm
    drops below grad_tol.
    """
    ym = point_matrix(y)
    certify_orbit_point(ctx, ym)
    u = initial if initial is not None else _polar_init(ctx, ym)
    basis = m0_basis(ctx)
    d = basis.shape[0]
    td_stack = np.einsum("aij,jk->aik", basis, ctx.D) - np.einsum("ij,ajk->aik", ctx.D, basis)
    c2 = ctx.c ** 2

    def compact_of(uu):
        return uu @ ctx.D @ dagger(uu) - ctx.D

    def f_of(uu):
        return 0.5 * frob(ym - compact_of(uu)) ** 2

    x = compact_of(u)
    fval = f_of(u)
    it = 0
    gnorm = np.inf
    for it in range(1, max_iter + 1):
        r = ym - x
        rt = dagger(u) @ r @ u
        delta0 = project(ctx, rt, "m0").mat
        gnorm = frob(delta0)
        if gnorm <= grad_tol:
            break

        step_dir = None
        if gnorm < newton_at:
            step_dir = _newton_direction(ctx, basis, td_stack, rt, c2, d)
        if step_dir is None:
            # geodesic generator b0 with [b0, D] = delta0
            b0 = (ctx.D @ delta0 - delta0 @ ctx.D) / c2
            slope = -gnorm ** 2
            curv = gnorm ** 2 - float(np.real(np.trace(
                dagger(rt) @ (b0 @ delta0 - delta0 @ b0))))
            t = gnorm ** 2 / curv if curv > 0 else 1.0
        else:
            b0 = step_dir
            t = 1.0
            tb = b0 @ ctx.D - ctx.D @ b0
            slope = -float(np.real(np.trace(dagger(rt) @ tb)))
            if slope >= 0:  # not a descent direction; fall back to gradient
                b0 = (ctx.D @ delta0 - delta0 @ ctx.D) / c2
                slope = -gnorm ** 2
                t = 1.0
        bnorm = frob(b0)
        cap = np.pi / (4.0 * bnorm) if bnorm > 0 else np.inf
        t = min(t, cap)
        accepted = False
        for _ in range(40):
            u_try = u @ exp_skew(t * b0)
            f_try = f_of(u_try)
            if f_try <= fval + 0.3 * t * slope:
                u, fval = u_try, f_try
                x = compact_of(u)
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break

    diag = ProjectionDiagnostics(iterations=it, grad_norm=float(gnorm),
                                 distance=float(np.sqrt(2.0 * fval)),
                                 converged=bool(gnorm <= grad_tol))
    if not diag.converged:
        raise RuntimeError(
            f"project_pi failed to converge: grad {gnorm:.2e} after {it} iterations")
    return x, u, diag


def _newton_direction(ctx, basis, td_stack, rt, c2, d):
    """Damped Newton step in pulled-back m0 coordinates, or None."""
    # grad_i = -Re<rt, [e_i, D]>
    grad = -np.real(np.einsum("aij,ij->a", td_stack.conj(), rt))
    rdag = dagger(rt)
    cstack = np.einsum("ij,ajk->aik", rdag, basis) - np.einsum("aij,jk->aik", basis, rdag)
    m2 = np.real(np.einsum("apq,bqp->ab", cstack, td_stack))
    hess = c2 * np.eye(d) - 0.5 * (m2 + m2.T)
    try:
        beta = np.linalg.solve(hess + 1e-14 * np.eye(d), -grad)
    except np.linalg.LinAlgError:
        return None
    return np.einsum("a,aij->ij", beta, basis)


def fiber_coordinate(ctx: AlgebraContext, y, x, u=None,
                     tol: float = FIBER_TOL) -> np.ndarray:
    """Closed-form fiber coordinate a with forward(x, a) = y.

    Conjugate to the base point, read the tangent-identification
    coordinate off the Hermitian part, and invert the fiber map with the
    argsinh spectral kernel.
    """
    ym = point_matrix(y)
    xm = point_matrix(x)
    if u is None:
        u = unitary_conjugator(ctx, xm)
    w = dagger(u) @ (ym + ctx.D) @ u - ctx.D
    im_part = -0.5j * (w + dagger(w))
    im_proj = project(ctx, im_part, "m0").mat
    v0 = (ctx.D @ im_proj - im_proj @ ctx.D) / ctx.c ** 2
    a0 = _f2_base(ctx, v0)
    a = u @ a0 @ dagger(u)
    resid = frob(forward(ctx, xm, a, u=u).y - ym)
    if resid > tol * max(frob(ym), 1.0):
        raise ValueError(f"y is not in the fiber over x (residual {resid:.2e})")
    return a


def _f2_base(ctx: AlgebraContext, v: np.ndarray) -> np.ndarray:
    """Fiberwise inverse of the tangent identification at the base point."""
    iv = (ctx.D @ v - v @ ctx.D) / ctx.c
    w = apply_ad_function(KERNELS["argsinh_over_x"], v, Element(iv, "m0")).mat
    return -(ctx.D @ w - w @ ctx.D) / ctx.c


def decompose(ctx: AlgebraContext, y, grad_tol: float = 1e-10) -> FiberedPoint:
    """Mostow coordinates of y; round-trips through forward to <= 1e-8.

    Compact points are their own projection (zero distance), so they skip
    the optimizer and return a = 0 exactly.
    """
    ym = point_matrix(y)
    if frob(ym + dagger(ym)) <= 1e-12 * max(frob(ym), 1.0):
        certify_orbit_point(ctx, ym)
        u = unitary_conjugator(ctx, ym)
        return FiberedPoint(x=ym, a=np.zeros_like(ym), conjugator=u, y=ym)
    x, u, _ = project_pi(ctx, ym, grad_tol=grad_tol)
    try:
        a = fiber_coordinate(ctx, ym, x, u=u)
    except ValueError:
        # one extra projection round from the current frame
        x, u, _ = project_pi(ctx, ym, initial=u, grad_tol=grad_tol * 0.1)
        a = fiber_coordinate(ctx, ym, x, u=u)
    return FiberedPoint(x=x, a=a, conjugator=u, y=ym)


def as_fibered(ctx: AlgebraContext, y) -> FiberedPoint:
    if isinstance(y, FiberedPoint):
        return y
    return decompose(ctx, y)


def rho(ctx: AlgebraContext, fp, c, c_prime=None) -> TangentVecC:
    """Tangent vector at y with ambient matrix [c + i c', y + D]."""
    fp = as_fibered(ctx, fp)
    cm = check_in_m_x(ctx, c, u=fp.conjugator)
    if c_prime is None:
        cpm = np.zeros_like(cm)
    else:
        cpm = check_in_m_x(ctx, c_prime, u=fp.conjugator)
    return TangentVecC(y=fp.y, c=cm, c_prime=cpm)


def rho_inverse(ctx: AlgebraContext, fp, ambient) -> TangentVecC:
    """Solve [c + i c', y + D] = ambient for (c, c') in m_x + i m_x.

    Well-posed because cosh(ad(-ia)) is Hermitian and injective; solved as
    a dense real least-squares system over an orthonormal m_x basis.
    """
    fp = as_fibered(ctx, fp)
    t = as_matrix(ambient)
    u = fp.conjugator
    basis = np.einsum("ij,ajk,kl->ail", u, m0_basis(ctx), dagger(u))
    base = fp.y + ctx.D
    cols = []
    for b in basis:
        cols.append(b @ base - base @ b)
    for b in basis:
        ib = 1j * b
        cols.append(ib @ base - base @ ib)
    a = np.stack(cols, axis=0).reshape(len(cols), -1).T
    areal = np.concatenate([a.real, a.imag], axis=0)
    trhs = np.concatenate([t.reshape(-1).real, t.reshape(-1).imag])
    coef, *_ = np.linalg.lstsq(areal, trhs, rcond=None)
    d = basis.shape[0]
    cm = np.einsum("a,aij->ij", coef[:d], basis)
    cpm = np.einsum("a,aij->ij", coef[d:], basis)
    resid = frob(TangentVecC(fp.y, cm, cpm).ambient(ctx) - t)
    if resid > 1e-8 * max(frob(t), 1.0):
        raise ValueError(f"rho_inverse: inconsistent tangent vector (residual {resid:.2e})")
    return TangentVecC(y=fp.y, c=cm, c_prime=cpm)


def pi_pushforward(ctx: AlgebraContext, X: TangentVecC) -> Element:
    """Horizontal component of a tangent vector: pi_* rho(c + ic') = c."""
    return Element(X.c, "g")


def hessian_form(ctx: AlgebraContext, y, c, d) -> float:
    """Hessian of the distance functional at 0 for y in the fiber over 0:
    Hess(X^c, X^d) = Re<[c, y + D], [d, D]>."""
    fp = as_fibered(ctx, y)
    if frob(fp.x) > 1e-7 * max(frob(fp.y), 1.0):
        raise ValueError("hessian_form expects y in the fiber over 0")
    cm, dm = as_matrix(c), as_matrix(d)
    base = fp.y + ctx.D
    t1 = cm @ base - base @ cm
    t2 = dm @ ctx.D - ctx.D @ dm
    return float(np.real(np.trace(dagger(t1) @ t2)))
