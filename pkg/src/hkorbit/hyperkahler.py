"""The hyperkahler triple on the complexified orbit.

With pi the distance-minimizing projection and rho-coordinates (c, c')
for tangent vectors (ambient matrix [c + ic', y + D]):

    K(y)             = c Re<y, pi(y)>
    g(X, Y)          = c Re<[c, y+D], [d, pi(y)+D]> + (same on the i-slots),
                       with the mixed block identically zero
    omega_1(X, Y)    = c Im(<[ic', y+D], [d, pi(y)+D]> - <[id', y+D], [c, pi(y)+D]>)
    I_1 (c, c')      = (-c', c)            (ambient multiplication by i)
    I_2 (d, d')      = (I_x d, -I_x d')    (I_x = (1/c) ad(x + D))
    I_3              = I_1 I_2

omega_C is the Kirillov-Kostant-Souriau form, evaluated by pulling
tangent generators back to the base point with the full group element
e^{ia} u of the fibered point.  The report also measures the constant
relating omega_2 + i omega_3 to omega_C; with the trace-form
normalization used here it comes out as 1 and is asserted constant
across points rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraContext, as_matrix, dagger, frob, m0_basis
from .mostow import FiberedPoint, as_fibered, exp_i
from .orbit import TangentVecC, point_matrix

__all__ = [
    "HKFrame", "hk_frame", "potential_K", "metric_g", "omega1",
    "I1", "I2", "I3", "omega_C", "quaternion_report",
]


def potential_K(ctx: AlgebraContext, y) -> float:
    """Kahler potential K(y) = c Re<y, pi(y)>."""
    fp = as_fibered(ctx, y)
    return ctx.c * float(np.real(np.trace(dagger(fp.y) @ fp.x)))


def _pairing(ctx: AlgebraContext, p, ybase, q, xbase) -> complex:
    """<[p, ybase], [q, xbase]> for the trace Hermitian product."""
    t1 = p @ ybase - ybase @ p
    t2 = q @ xbase - xbase @ q
    return complex(np.trace(dagger(t1) @ t2))


def metric_g(ctx: AlgebraContext, y, X: TangentVecC, Y: TangentVecC) -> float:
    """Hyperkahler metric in rho-coordinates; horizontal and i-slots pair
    separately, the cross block vanishes."""
    fp = as_fibered(ctx, y)
    _check_base(fp, X, Y)
    yb = fp.y + ctx.D
    xb = fp.x + ctx.D
    val = (np.real(_pairing(ctx, X.c, yb, Y.c, xb))
           + np.real(_pairing(ctx, X.c_prime, yb, Y.c_prime, xb)))
    return ctx.c * float(val)


def omega1(ctx: AlgebraContext, y, X: TangentVecC, Y: TangentVecC) -> float:
    """Kahler form of the ambient complex structure."""
    fp = as_fibered(ctx, y)
    _check_base(fp, X, Y)
    yb = fp.y + ctx.D
    xb = fp.x + ctx.D
    val = (np.imag(_pairing(ctx, 1j * X.c_prime, yb, Y.c, xb))
           - np.imag(_pairing(ctx, 1j * Y.c_prime, yb, X.c, xb)))
    return ctx.c * float(val)


def I1(ctx: AlgebraContext, X: TangentVecC) -> TangentVecC:
    """Ambient multiplication by i: (c, c') -> (-c', c)."""
    return TangentVecC(y=X.y, c=-X.c_prime, c_prime=X.c)


def I2(ctx: AlgebraContext, y, X: TangentVecC) -> TangentVecC:
    """Second complex structure: (d, d') -> (I_x d, -I_x d')."""
    fp = as_fibered(ctx, y)
    _check_base(fp, X)
    xb = fp.x + ctx.D
    ix = lambda m: (xb @ m - m @ xb) / ctx.c
    return TangentVecC(y=X.y, c=ix(X.c), c_prime=-ix(X.c_prime))


def I3(ctx: AlgebraContext, y, X: TangentVecC) -> TangentVecC:
    return I1(ctx, I2(ctx, y, X))


def omega_C(ctx: AlgebraContext, y, X: TangentVecC, Y: TangentVecC) -> complex:
    """KKS complex symplectic form, via invariance under the group element
    that moves the base point to 0."""
    fp = as_fibered(ctx, y)
    _check_base(fp, X, Y)
    w_inv = dagger(fp.conjugator) @ exp_i(-fp.a)
    w = exp_i(fp.a) @ fp.conjugator
    amb = []
    for v in (X, Y):
        p0 = w_inv @ v.generator() @ w
        amb.append(p0 @ ctx.D - ctx.D @ p0)
    dY = ctx.D @ amb[1] - amb[1] @ ctx.D
    return complex(np.trace(amb[0] @ dY))


def _check_base(fp: FiberedPoint, *vecs: TangentVecC, tol: float = 1e-7):
    for v in vecs:
        if frob(v.y - fp.y) > tol * max(frob(fp.y), 1.0):
            raise ValueError("tangent vector based at a different point")


@dataclass(frozen=True, eq=False)
class HKFrame:
    """Evaluator bundle for the hyperkahler structure at one point."""

    ctx: AlgebraContext
    fp: FiberedPoint

    def g(self, X, Y):
        return metric_g(self.ctx, self.fp, X, Y)

    def omega1(self, X, Y):
        return omega1(self.ctx, self.fp, X, Y)

    def omega_C(self, X, Y):
        return omega_C(self.ctx, self.fp, X, Y)

    def I1(self, X):
        return I1(self.ctx, X)

    def I2(self, X):
        return I2(self.ctx, self.fp, X)

    def I3(self, X):
        return I3(self.ctx, self.fp, X)

    def omega2(self, X, Y):
        return self.g(self.I2(X), Y)

    def omega3(self, X, Y):
        return self.g(self.I3(X), Y)

    def rho_basis(self):
        """Tangent basis (b_i, 0), (0, b_i) from the conjugated m0 basis."""
        u = self.fp.conjugator
        basis = np.einsum("ij,ajk,kl->ail", u, m0_basis(self.ctx), dagger(u))
        vecs = [TangentVecC(self.fp.y, b, np.zeros_like(b)) for b in basis]
        vecs += [TangentVecC(self.fp.y, np.zeros_like(b), b) for b in basis]
        return vecs

    def gram(self) -> np.ndarray:
        vecs = self.rho_basis()
        m = len(vecs)
        out = np.zeros((m, m))
        for i in range(m):
            for j in range(i, m):
                out[i, j] = out[j, i] = self.g(vecs[i], vecs[j])
        return out


def hk_frame(ctx: AlgebraContext, y) -> HKFrame:
    return HKFrame(ctx=ctx, fp=as_fibered(ctx, y))


def quaternion_report(ctx: AlgebraContext, y, samples: int = 6, seed=0) -> dict:
    """Residual record for the quaternion relations and compatibilities.

    Never raises: every named residual is reported, normalized by the
    scale of the vectors involved.  `holo_constant` is the measured ratio
    (omega_2 + i omega_3) / omega_C on the sampled pairs.
    """
    frame = hk_frame(ctx, y)
    fp = frame.fp
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = fp.conjugator
    basis = np.einsum("ij,ajk,kl->ail", u, m0_basis(ctx), dagger(u))
    d = basis.shape[0]

    def rand_vec():
        co = rng.standard_normal(2 * d)
        co /= np.linalg.norm(co)
        c = np.einsum("a,aij->ij", co[:d], basis)
        cp = np.einsum("a,aij->ij", co[d:], basis)
        return TangentVecC(fp.y, c, cp)

    def vnorm(X):
        return float(np.sqrt(frob(X.c) ** 2 + frob(X.c_prime) ** 2))

    def vdiff(X, Y):
        return float(np.sqrt(frob(X.c - Y.c) ** 2 + frob(X.c_prime - Y.c_prime) ** 2))

    pairs = [(rand_vec(), rand_vec()) for _ in range(samples)]
    res = {name: 0.0 for name in
           ("i1_sq", "i2_sq", "i3_sq", "anticommute",
            "metric_i1", "metric_i2", "metric_i3",
            "hitchin", "omega1_compat", "holo_symplectic")}
    ratios = []
    for X, Y in pairs:
        nX, nY = vnorm(X), vnorm(Y)
        scale = max(nX * nY, 1e-30)
        mi = lambda Z: TangentVecC(Z.y, -Z.c, -Z.c_prime)
        res["i1_sq"] = max(res["i1_sq"], vdiff(frame.I1(frame.I1(X)), mi(X)) / nX)
        res["i2_sq"] = max(res["i2_sq"], vdiff(frame.I2(frame.I2(X)), mi(X)) / nX)
        res["i3_sq"] = max(res["i3_sq"], vdiff(frame.I3(frame.I3(X)), mi(X)) / nX)
        anti = frame.I1(frame.I2(X))
        anti2 = frame.I2(frame.I1(X))
        res["anticommute"] = max(res["anticommute"],
                                 vdiff(anti, mi(anti2)) / nX)
        gxy = frame.g(X, Y)
        gs = max(abs(gxy), ctx.c ** 3 * scale)
        res["metric_i1"] = max(res["metric_i1"],
                               abs(frame.g(frame.I1(X), frame.I1(Y)) - gxy) / gs)
        res["metric_i2"] = max(res["metric_i2"],
                               abs(frame.g(frame.I2(X), frame.I2(Y)) - gxy) / gs)
        res["metric_i3"] = max(res["metric_i3"],
                               abs(frame.g(frame.I3(X), frame.I3(Y)) - gxy) / gs)
        res["hitchin"] = max(res["hitchin"],
                             abs(gxy - np.real(frame.omega_C(X, frame.I2(Y)))) / gs)
        res["omega1_compat"] = max(res["omega1_compat"],
                                   abs(frame.omega1(X, Y) - frame.g(frame.I1(X), Y)) / gs)
        w23 = frame.omega2(X, Y) + 1j * frame.omega3(X, Y)
        wc = frame.omega_C(X, Y)
        res["holo_symplectic"] = max(res["holo_symplectic"], abs(w23 - wc) / gs)
        if abs(wc) > 1e-6 * gs:
            ratios.append(w23 / wc)
    gram = frame.gram()
    res["gram_min_eig"] = float(np.linalg.eigvalsh(gram).min())
    res["holo_constant"] = complex(np.mean(ratios)) if ratios else complex("nan")
    return res
