"""Tangent-bundle picture: the identification with the complex orbit and
the explicit metric operator.

The identification sends y to (x, V) with x = pi(y) and V the
I-rotation of the Hermitian part of y; fiberwise it is the sinh/argsinh
spectral pair

    f1(a) = -I (sinh(ad(ia))/ad(ia)) (Ia),
    f2(V) = -I (argsinh(ad(iV))/ad(iV)) (IV),

mutually inverse on m0.  (In strongly orthogonal coordinates
f1(sum a_t x_t) = 1/2 sum sinh(2 a_t) x_t, which fixes the sign
convention used throughout: the x_1-fiber over 0 maps to
+1/2 sinh(2t) x_1.)

The metric transported to the tangent bundle is block diagonal
(A_V on horizontal, A_V^{-1} on vertical labels) over the base metric
g0 = c^3 Re<.,.>, with

    A_V = Id + I R_{I V', V'},   V' = phi(I R_{IV,V})(V),
    phi(x) = ((sqrt(1+x) - 1)/x)^(1/2),

where R_{a,b} w = [[a, b], w] is the orbit curvature.  Vertical vectors
are labelled by elements of i*m_x: the label c' stands for the literal
fiber velocity i*c'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraContext, Element, as_matrix, dagger, frob,
                      m0_basis, project)
from .mostow import FiberedPoint, as_fibered, exp_i, exp_skew
from .orbit import TangentVecC, point_matrix, project_m_x, unitary_conjugator
from .speccalc import KERNELS, apply_ad_function, apply_operator_function, operator_matrix

MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TangentBundlePoint:
    """A point (x, V) of the tangent bundle of the compact orbit."""

    x: np.ndarray
    V: np.ndarray
    conjugator: np.ndarray


@dataclass(frozen=True, eq=False)
class TBVector:
    """Split tangent vector: horizontal lift label h in m_x, vertical
    label v in i*m_x (the fiber velocity is i*v)."""

    h: np.ndarray
    v: np.ndarray


def tb_point(ctx: AlgebraContext, x, V, u=None) -> TangentBundlePoint:
    xm = point_matrix(x)
    if u is None:
        u = unitary_conjugator(ctx, xm)
    vm = as_matrix(V)
    resid = frob(vm - project_m_x(ctx, vm, u=u))
    if resid > MEMBERSHIP_TOL * max(frob(vm), 1.0):
        raise ValueError("V is not in m_x")
    return TangentBundlePoint(x=xm, V=vm, conjugator=u)


def tb_vector(ctx: AlgebraContext, point: TangentBundlePoint, h, v) -> TBVector:
    hm, vm = as_matrix(h), as_matrix(v)
    u = point.conjugator
    if frob(hm - project_m_x(ctx, hm, u=u)) > MEMBERSHIP_TOL * max(frob(hm), 1.0):
        raise ValueError("horizontal label not in m_x")
    ivm = -1j * vm
    if frob(ivm - project_m_x(ctx, ivm, u=u)) > MEMBERSHIP_TOL * max(frob(vm), 1.0):
        raise ValueError("vertical label not in i*m_x")
    return TBVector(h=hm, v=vm)


def upsilon(ctx: AlgebraContext, y) -> TangentBundlePoint:
    """Orbit-to-tangent-bundle identification (commutes with the projections)."""
    fp = as_fibered(ctx, y)
    return TangentBundlePoint(x=fp.x, V=_upsilon_coordinate(ctx, fp.x, fp.y),
                              conjugator=fp.conjugator)


def _upsilon_coordinate(ctx: AlgebraContext, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    im_part = -0.5j * (y + dagger(y))
    base = x + ctx.D
    return (base @ im_part - im_part @ base) / ctx.c ** 2


def f1(ctx: AlgebraContext, a) -> Element:
    """Fiber map a -> V over the base point."""
    am = as_matrix(a)
    ia = (ctx.D @ am - am @ ctx.D) / ctx.c
    w = apply_ad_function(KERNELS["sinh_over_x"], am, Element(ia, "m0")).mat
    return Element(-(ctx.D @ w - w @ ctx.D) / ctx.c, "m0")


def f2(ctx: AlgebraContext, v) -> Element:
    """Fiberwise inverse of f1."""
    vm = as_matrix(v)
    iv = (ctx.D @ vm - vm @ ctx.D) / ctx.c
    w = apply_ad_function(KERNELS["argsinh_over_x"], vm, Element(iv, "m0")).mat
    return Element(-(ctx.D @ w - w @ ctx.D) / ctx.c, "m0")


@dataclass(frozen=True, eq=False)
class TBFrame:
    """Per-point cache: pulled-back V, m0 operator basis, and the spectral
    data of the metric operator A_V."""

    ctx: AlgebraContext
    point: TangentBundlePoint
    basis: np.ndarray        # m0 basis (pulled back frame)
    a_matrix: np.ndarray     # A_V in that basis (real symmetric)
    eigvals: np.ndarray
    eigvecs: np.ndarray

    def _apply_spectral(self, w: np.ndarray, fn, in_imx: bool) -> np.ndarray:
        """Apply fn(A_V) to w; A_V extends complex-linearly to i*m_x, so
        labels there are peeled to m_x, transformed, and re-multiplied."""
        u = self.point.conjugator
        wt = dagger(u) @ w @ u
        m = -1j * wt if in_imx else wt
        co = np.real(np.einsum("aij,ij->a", self.basis.conj(), m))
        out = self.eigvecs @ (fn(self.eigvals) * (self.eigvecs.T @ co))
        mm = np.einsum("a,aij->ij", out, self.basis)
        if in_imx:
            mm = 1j * mm
        return u @ mm @ dagger(u)

    def apply_A(self, w, in_imx: bool = False) -> np.ndarray:
        return self._apply_spectral(as_matrix(w), lambda lam: lam, in_imx)

    def apply_A_inv(self, w, in_imx: bool = True) -> np.ndarray:
        return self._apply_spectral(as_matrix(w), lambda lam: 1.0 / lam, in_imx)

    @property
    def spectrum(self) -> np.ndarray:
        return self.eigvals


def tb_frame(ctx: AlgebraContext, point: TangentBundlePoint) -> TBFrame:
    """Assemble A_V spectrally; positive-definiteness is certified here."""
    u = point.conjugator
    vt = dagger(u) @ point.V @ u
    basis = m0_basis(ctx)

    def icurv(a, b):
        ab = a @ b - b @ a
        def op(z):
            w = ab @ z - z @ ab
            return (ctx.D @ w - w @ ctx.D) / ctx.c
        return op

    iv = (ctx.D @ vt - vt @ ctx.D) / ctx.c
    r_op = icurv(iv, vt)
    v_prime = apply_operator_function(KERNELS["phi_bg"], r_op, Element(vt, "m0"),
                                      basis).mat
    ivp = (ctx.D @ v_prime - v_prime @ ctx.D) / ctx.c
    a_op = icurv(ivp, v_prime)
    amat = operator_matrix(lambda z: z + a_op(z), basis)
    amat = 0.5 * (amat + amat.T)
    lam, q = np.linalg.eigh(amat)
    if lam.min() <= 0:
        raise ValueError(f"A_V is not positive definite (min eig {lam.min():.2e})")
    return TBFrame(ctx=ctx, point=point, basis=basis, a_matrix=amat,
                   eigvals=lam, eigvecs=q)


def A_operator(ctx: AlgebraContext, point: TangentBundlePoint, w,
               frame: TBFrame | None = None) -> Element:
    """Apply the metric operator A_V to w in m_x."""
    if frame is None:
        frame = tb_frame(ctx, point)
    wm = as_matrix(w)
    u = point.conjugator
    resid = frob(wm - project_m_x(ctx, wm, u=u))
    if resid > MEMBERSHIP_TOL * max(frob(wm), 1.0):
        raise ValueError("A_operator argument not in m_x")
    return Element(frame.apply_A(wm), "g")


def g0_pair(ctx: AlgebraContext, a, b) -> float:
    """Base metric c^3 Re<.,.> on either block."""
    return ctx.c ** 3 * float(np.real(np.trace(dagger(as_matrix(a)) @ as_matrix(b))))


def metric_gtilde(ctx: AlgebraContext, point: TangentBundlePoint,
                  xi: TBVector, eta: TBVector,
                  frame: TBFrame | None = None) -> float:
    """gtilde = g0(A_V h, h') + g0(A_V^{-1} v, v'); Hor and Ver are orthogonal."""
    if frame is None:
        frame = tb_frame(ctx, point)
    return (g0_pair(ctx, frame.apply_A(xi.h), eta.h)
            + g0_pair(ctx, frame.apply_A_inv(xi.v), eta.v))


def J3(ctx: AlgebraContext, point: TangentBundlePoint, xi: TBVector,
       frame: TBFrame | None = None) -> TBVector:
    """Third complex structure (0, iA^{-1}; iA, 0) on (Hor, Ver) labels."""
    if frame is None:
        frame = tb_frame(ctx, point)
    return TBVector(h=1j * frame.apply_A_inv(xi.v), v=1j * frame.apply_A(xi.h))


def liouville_Omega3(ctx: AlgebraContext, point: TangentBundlePoint,
                     xi: TBVector, eta: TBVector) -> float:
    """Liouville 2-form through the trace identification:
    Omega3 = c^3 Re(<i xi_v, eta_h> - <i eta_v, xi_h>)."""
    t1 = np.real(np.trace(dagger(1j * xi.v) @ eta.h))
    t2 = np.real(np.trace(dagger(1j * eta.v) @ xi.h))
    return ctx.c ** 3 * float(t1 - t2)


def upsilon_pushforward(ctx: AlgebraContext, fp: FiberedPoint, X: TangentVecC,
                        step: float = 1e-4) -> TBVector:
    """Differential of the identification, split-FD along the two curve types.

    The horizontal part of X flows by the compact group (the base moves
    along a geodesic, so transvection transport is exact parallel
    transport); the vertical part flows inside the fiber (the base is
    frozen, so the covariant derivative is the plain derivative).
    """
    u = fp.conjugator
    h_label = project_m_x(ctx, X.c, u=u)
    vdot = np.zeros_like(X.c)

    if frob(X.c) > 0:
        w = {}
        for s in (step, -step):
            g = exp_skew(s * X.c)
            y_s = g @ (fp.y + ctx.D) @ dagger(g) - ctx.D
            x_s = g @ (fp.x + ctx.D) @ dagger(g) - ctx.D
            v_s = _upsilon_coordinate(ctx, x_s, y_s)
            w[s] = dagger(g) @ v_s @ g
        vdot = vdot + (w[step] - w[-step]) / (2.0 * step)

    if frob(X.c_prime) > 0:
        v = {}
        for s in (step, -step):
            g = exp_i(s * X.c_prime)
            ginv = exp_i(-s * X.c_prime)
            y_s = g @ (fp.y + ctx.D) @ ginv - ctx.D
            v[s] = _upsilon_coordinate(ctx, fp.x, y_s)
        vdot = vdot + (v[step] - v[-step]) / (2.0 * step)

    vdot = project_m_x(ctx, vdot, u=u)
    return TBVector(h=h_label, v=-1j * vdot)
