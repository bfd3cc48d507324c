"""Analytic functions of ad(i*a) by eigen-difference (spectral) calculus.

For skew-Hermitian a the operator ad(i*a) is Hermitian for the trace
product, so f(ad(i*a))(y) can be evaluated exactly: diagonalize
i*a = U diag(h) U^*, conjugate y into that basis and multiply entrywise
by f(h_j - h_k).  Every catalogue kernel is written in a cancellation-free
form so the small-gap entries are as accurate as the large-gap ones
(the Daleckii-Krein construction needs the removable-singularity values,
not a naive quotient).

Kernels are calibrated on the eigenvalue-gap scale.  Operator functions
(`apply_operator_function`) act on assembled self-adjoint PSD operators
such as I R_{IV,V}, whose spectrum lives on the squared-gap scale; their
kernels are evaluated at the operator eigenvalues directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Callable

import numpy as np

from .algebra import Element, as_matrix, dagger, frob


def _sinhc(x) -> np.ndarray:
    """sinh(x)/x with the limit value 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    nz = x != 0
    out[nz] = np.sinh(x[nz]) / x[nz]
    return out


def _asinhc(x) -> np.ndarray:
    """argsinh(x)/x with the limit value 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    nz = x != 0
    out[nz] = np.arcsinh(x[nz]) / x[nz]
    return out


def _coshm1_over_x2(x) -> np.ndarray:
    # cosh(x) - 1 = 2 sinh(x/2)^2, so the quotient never cancels.
    return 0.5 * _sinhc(np.asarray(x, dtype=float) / 2.0) ** 2


def _phi_bg(x) -> np.ndarray:
    # ((sqrt(1+x) - 1)/x)^(1/2) = (1/(sqrt(1+x) + 1))^(1/2); even extension
    # through |x| since it is only ever applied to PSD operator spectra.
    x = np.abs(np.asarray(x, dtype=float))
    return np.sqrt(1.0 / (np.sqrt(1.0 + x) + 1.0))


def _sqrt_of(x) -> np.ndarray:
    # sqrt(1 + x^2): the gap-scale square root kernel.
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + x * x)


def _binom_half(m: int) -> float:
    """Binomial coefficient C(1/2, m)."""
    out = 1.0
    for i in range(m):
        out *= (0.5 - i) / (i + 1)
    return out


def _taylor_even(coeff_of_m: Callable[[int], float], terms: int) -> tuple:
    out = [0.0] * (terms + 1)
    for m in range(terms // 2 + 1):
        out[2 * m] = coeff_of_m(m)
    return tuple(out)


def _phi_series(n_terms: int) -> tuple:
    """Taylor coefficients of phi(x) = sqrt((sqrt(1+x)-1)/x) around 0."""
    # w = (sqrt(1+x)-1)/x has coefficients C(1/2, m+1); take the
    # power-series square root of w by the usual recurrence.
    w = [_binom_half(m + 1) for m in range(n_terms + 1)]
    p = [0.0] * (n_terms + 1)
    p[0] = float(np.sqrt(w[0]))
    for m in range(1, n_terms + 1):
        acc = w[m] - sum(p[j] * p[m - j] for j in range(1, m))
        p[m] = acc / (2.0 * p[0])
    return tuple(p)


_N_TAYLOR = 24

_EVEN_NAMES = {"coshm1_over_x2", "sinh_over_x", "cos", "cosh",
               "argsinh_over_x", "phi_bg", "sqrt_of"}


@dataclass(frozen=True)
class AdKernel:
    """A scalar kernel with explicit removable-singularity values.

    `eval` is vectorized over real arguments.  `taylor` holds coefficients
    of x^j for the series oracle; kernels without a stored expansion
    cannot be fed to the truncated-series verifier.  `even` records
    f(x) = f(-x), which is what lets the kernel act within g, k0 and m0.
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    taylor: tuple | None = None
    even: bool = False

    def __call__(self, x):
        return self.eval(x)


def composed_with_square(kernel) -> AdKernel:
    """Kernel t -> kernel(t^2); lifts an operator-scale kernel to the gap scale."""
    fn = kernel.eval if isinstance(kernel, AdKernel) else kernel
    name = kernel.name if isinstance(kernel, AdKernel) else "custom"
    tay = None
    if isinstance(kernel, AdKernel) and kernel.taylor is not None:
        tay = [0.0] * (2 * len(kernel.taylor) - 1)
        for j, cj in enumerate(kernel.taylor):
            tay[2 * j] = cj
        tay = tuple(tay)
    return AdKernel(f"{name}@square", lambda t: fn(np.asarray(t, dtype=float) ** 2),
                    tay, even=True)


def sqrt_kernel(kernel: AdKernel) -> AdKernel:
    """Pointwise square root of a positive kernel (no stored series)."""
    return AdKernel(f"sqrt[{kernel.name}]", lambda t: np.sqrt(kernel.eval(t)),
                    None, even=kernel.even)


KERNELS = {
    "coshm1_over_x2": AdKernel(
        "coshm1_over_x2", _coshm1_over_x2,
        _taylor_even(lambda m: 1.0 / factorial(2 * m + 2), _N_TAYLOR), even=True),
    "sinh_over_x": AdKernel(
        "sinh_over_x", _sinhc,
        _taylor_even(lambda m: 1.0 / factorial(2 * m + 1), _N_TAYLOR), even=True),
    "cos": AdKernel(
        "cos", np.cos,
        _taylor_even(lambda m: (-1.0) ** m / factorial(2 * m), _N_TAYLOR), even=True),
    "cosh": AdKernel(
        "cosh", np.cosh,
        _taylor_even(lambda m: 1.0 / factorial(2 * m), _N_TAYLOR), even=True),
    "argsinh_over_x": AdKernel(
        "argsinh_over_x", _asinhc,
        _taylor_even(lambda m: (-1.0) ** m * comb(2 * m, m) / (4.0 ** m * (2 * m + 1)),
                     _N_TAYLOR), even=True),
    "phi_bg": AdKernel("phi_bg", _phi_bg, _phi_series(_N_TAYLOR), even=True),
    "sqrt_of": AdKernel(
        "sqrt_of", _sqrt_of,
        _taylor_even(_binom_half, _N_TAYLOR), even=True),
    "exp": AdKernel(
        "exp", np.exp,
        tuple(1.0 / factorial(j) for j in range(_N_TAYLOR + 1))),
}


def apply_ad_function(kernel: AdKernel, a, y, tol: float = 1e-10) -> Element:
    """Evaluate kernel(ad(i*a))(y) for skew-Hermitian a.

    Exactly equals the power-series definition: in an eigenbasis of the
    Hermitian matrix i*a with eigenvalues h_j, ad(i*a) scales the (j,k)
    entry by h_j - h_k, so the kernel acts entrywise on the gap matrix.
    """
    am, ym = as_matrix(a), as_matrix(y)
    if frob(am + dagger(am)) > tol * max(frob(am), 1.0):
        raise ValueError("apply_ad_function: a must be skew-Hermitian")
    h, u = np.linalg.eigh(1j * am)
    gaps = h[:, None] - h[None, :]
    f = np.asarray(kernel.eval(gaps))
    ytil = dagger(u) @ ym @ u
    out = u @ (f * ytil) @ dagger(u)
    return Element(out, _transported_tag(kernel, a, y))


def _transported_tag(kernel: AdKernel, a, y) -> str:
    """Even kernels act within g; within k0/m0 too when a respects the split."""
    ytag = y.space_tag if isinstance(y, Element) else "gC"
    if not kernel.even or ytag == "gC":
        return "gC"
    atag = a.space_tag if isinstance(a, Element) else "gC"
    if ytag == "g":
        return "g"
    if ytag in ("k0", "m0") and atag in ("k0", "m0"):
        return ytag
    return "gC"


def operator_matrix(op: Callable[[np.ndarray], np.ndarray], basis: np.ndarray) -> np.ndarray:
    """Real matrix of a real-linear operator in an orthonormal Re<.,.> basis."""
    d = basis.shape[0]
    images = np.stack([op(basis[i]) for i in range(d)])
    # entry (i, j) = Re<b_i, op(b_j)>
    return np.real(np.einsum("aij,bij->ab", basis.conj(), images))


def apply_operator_function(kernel, op: Callable[[np.ndarray], np.ndarray], v,
                            basis: np.ndarray, asym_tol: float = 1e-8,
                            neg_tol: float = 1e-10) -> Element:
    """Spectral application of a scalar kernel to a self-adjoint PSD operator.

    The operator is assembled in the given orthonormal real basis,
    symmetrized (asymmetry beyond asym_tol is an error), and the kernel is
    evaluated at its eigenvalues.  A spectrum dipping below -neg_tol
    signals a curvature-sign bug upstream and raises.
    """
    vm = as_matrix(v)
    m = operator_matrix(op, basis)
    asym = float(np.linalg.norm(m - m.T))
    if asym > asym_tol * max(np.linalg.norm(m), 1.0):
        raise ValueError(f"operator is not self-adjoint (asymmetry {asym:.2e})")
    m = 0.5 * (m + m.T)
    lam, q = np.linalg.eigh(m)
    if lam.min() < -neg_tol * max(abs(lam).max(), 1.0):
        raise ValueError(f"operator has negative eigenvalue {lam.min():.2e}")
    lam = np.clip(lam, 0.0, None)
    coords = np.real(np.einsum("aij,ij->a", basis.conj(), vm))
    resid = vm - np.einsum("a,aij->ij", coords, basis)
    if frob(resid) > 1e-8 * max(frob(vm), 1.0):
        raise ValueError("vector does not lie in the span of the operator basis")
    fn = kernel.eval if isinstance(kernel, AdKernel) else kernel
    out_coords = q @ (np.asarray(fn(lam)) * (q.T @ coords))
    out = np.einsum("a,aij->ij", out_coords, basis)
    tag = v.space_tag if isinstance(v, Element) else "gC"
    return Element(out, tag if tag in ("m0", "g") else "gC")
