"""Independent brute-force and finite-difference verifiers.

These deliberately avoid the closed-form code paths they check: the
series engine sums the literal Taylor expansion of ad-functions, the
differential-form engines use central differences in a user-supplied
chart, and the distance oracle probes the compact orbit with Haar-random
conjugations.  Only the matrix container is shared with the main code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraContext, Element, as_matrix, dagger, frob
from .orbit import haar_unitary, point_matrix
from .speccalc import AdKernel


@dataclass(frozen=True)
class FDConfig:
    step: float = 1e-4
    scheme: str = "central"
    richardson: bool = True

    def __post_init__(self):
        if not (1e-7 <= self.step <= 1e-2):
            raise ValueError("step must lie in [1e-7, 1e-2]")
        if self.scheme != "central":
            raise ValueError("only the central scheme is implemented")


def series_ad_function(kernel: AdKernel, a, y, terms: int) -> Element:
    """Literal truncated power series sum_{j<=terms} f_j ad(a)^j (y).

    Note `a` is the raw operator argument: to cross-check
    apply_ad_function(kernel, a, y) = kernel(ad(i a)), pass i*a here.
    """
    if terms < 0:
        raise ValueError("terms must be >= 0")
    if kernel.taylor is None:
        raise ValueError(f"kernel {kernel.name!r} has no stored Taylor coefficients")
    if terms >= len(kernel.taylor):
        raise ValueError(f"kernel {kernel.name!r} stores only "
                         f"{len(kernel.taylor) - 1} Taylor orders")
    am, ym = as_matrix(a), as_matrix(y)
    acc = kernel.taylor[0] * ym
    term = ym
    for j in range(1, terms + 1):
        term = am @ term - term @ am
        cj = kernel.taylor[j]
        if cj != 0.0:
            acc = acc + cj * term
    return Element(acc, "gC")


def _directional(f, z, direction, h):
    return (f(z + h * direction) - f(z - h * direction)) / (2.0 * h)


def _mixed_second(f, z, d1, d2, h):
    """Central mixed partial d_{d1} d_{d2} f at z, O(h^2)."""
    return (f(z + h * (d1 + d2)) - f(z + h * (d1 - d2))
            - f(z - h * (d1 - d2)) + f(z - h * (d1 + d2))) / (4.0 * h * h)


def _with_richardson(stencil, h, richardson):
    if not richardson:
        return stencil(h)
    return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0


def fd_ddc(kfun, at, X, Y, cfg: FDConfig = FDConfig()) -> float:
    """Numerical dd^c K (X, Y) in a holomorphic chart.

    kfun maps a complex coordinate vector to the potential; X and Y are
    constant chart directions, and J acts as multiplication by i on the
    coordinates.  With d^c = -dK o J this evaluates

        dd^c K (X, Y) = -d_X d_{JY} K + d_Y d_{JX} K,

    which reproduces 2i ddbar K on holomorphic test potentials.
    """
    z = np.asarray(at, dtype=complex)
    xv = np.asarray(X, dtype=complex)
    yv = np.asarray(Y, dtype=complex)

    def stencil(h):
        try:
            return (-_mixed_second(kfun, z, xv, 1j * yv, h)
                    + _mixed_second(kfun, z, yv, 1j * xv, h))
        except ValueError as e:
            raise ValueError("chart breakdown inside the FD stencil") from e

    return float(_with_richardson(stencil, cfg.step, cfg.richardson))


def fd_exterior_derivative(form, at, X, Y, Z, cfg: FDConfig = FDConfig()) -> float:
    """d omega (X, Y, Z) for constant-coefficient chart fields:
    d_X omega(Y,Z) - d_Y omega(X,Z) + d_Z omega(X,Y)."""
    z0 = np.asarray(at, dtype=complex)
    xv, yv, zv = (np.asarray(v, dtype=complex) for v in (X, Y, Z))

    def stencil(h):
        try:
            t1 = _directional(lambda p: form(p, yv, zv), z0, xv, h)
            t2 = _directional(lambda p: form(p, xv, zv), z0, yv, h)
            t3 = _directional(lambda p: form(p, xv, yv), z0, zv, h)
        except ValueError as e:
            raise ValueError("chart breakdown inside the FD stencil") from e
        return t1 - t2 + t3

    # first-order quantity; Richardson on the derivative stencil itself
    return float(_with_richardson(stencil, cfg.step, cfg.richardson))


def probe_min_distance(ctx: AlgebraContext, y, samples: int, seed) -> float:
    """Best distance from y to Haar-random compact-orbit probes.

    Deterministic for a fixed seed; the projection must beat this value
    (up to roundoff) for every sample count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    ym = point_matrix(y)
    z = rng.standard_normal((samples, ctx.n, ctx.n)) \
        + 1j * rng.standard_normal((samples, ctx.n, ctx.n))
    q, r = np.linalg.qr(z)
    diag = np.einsum("sii->si", r)
    q = q * (diag / np.abs(diag))[:, None, :]
    xs = np.einsum("sij,jk,slk->sil", q, ctx.D, q.conj()) - ctx.D
    dists = np.linalg.norm(ym - xs, axis=(1, 2))
    return float(dists.min())


def fd_pushforward(map_fn, curve, cfg: FDConfig = FDConfig()) -> np.ndarray:
    """Central-difference derivative of map_fn along a curve at t = 0."""
    h = cfg.step

    def stencil(hh):
        return (np.asarray(map_fn(curve(hh))) - np.asarray(map_fn(curve(-hh)))) / (2.0 * hh)

    if cfg.richardson:
        return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
    return stencil(h)
