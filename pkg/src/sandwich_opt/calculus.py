"""Derivatives of the sandwiched trace functional and certified constants.

For fixed SPD A and order t in (0, 1), let f(X) = tr (A^{(1-t)/2t} X A^{(1-t)/2t})^t.
This module provides the exact gradient and Hessian action of f, two-sided
spectral bounds on -grad^2 f (strong convexity / smoothness constants), the
Bregman divergence of -f, and the derivative of the trace functional in t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import check_unit_t, geometric_mean, sandwich_trace, T_MAX, T_MIN
from .errors import NumericalError, ParameterError
from .linalg import (
    EQUAL_EIG_RTOL,
    as_hermitian,
    check_box,
    inner,
    matrix_log,
    matrix_power,
    random_hermitian,
    spectral_decompose,
    symmetrize,
)


def gradient_f(A, X, t):
    """Gradient of f(X) = tr (A^{(1-t)/2t} X A^{(1-t)/2t})^t.

    Equals t * (A^{(1-t)/t} #_{1-t} X^{-1}), a positive definite matrix.
    """
    check_unit_t(t)
    App = matrix_power(A, (1.0 - t) / t)
    return t * geometric_mean(App, matrix_power(X, -1.0), 1.0 - t)


def _power_kernel(d, t):
    # Divided differences of x -> x^{t-1}, flipped sign so the kernel is
    # entrywise nonnegative: (d_i^{t-1} - d_j^{t-1}) / (d_j - d_i), with the
    # analytic limit (1-t) d^{t-2} on near-coincident pairs.
    di = d[:, None]
    dj = d[None, :]
    with np.errstate(all="ignore"):
        K = (di ** (t - 1.0) - dj ** (t - 1.0)) / (dj - di)
        near = np.abs(di - dj) <= EQUAL_EIG_RTOL * np.maximum(di, dj)
        K = np.where(near, (1.0 - t) * ((di + dj) / 2.0) ** (t - 2.0), K)
    return K


@dataclass(frozen=True)
class HessianOperator:
    """The map Y -> -grad^2 f(X)(Y), cached in the eigenbasis of M.

    With A'' = A^{(1-t)/t} and M = A''^{1/2} X A''^{1/2} = V diag(d) V*, the
    action is t * A''^{1/2} V [K o (V* A''^{1/2} Y A''^{1/2} V)] V* A''^{1/2}
    where K is the nonnegative divided-difference kernel of x^{t-1} at d.
    Immutable after construction; safe for concurrent applications.
    """

    A: np.ndarray
    X: np.ndarray
    t: float
    root: np.ndarray = field(repr=False)    # A^{(1-t)/2t}
    vecs: np.ndarray = field(repr=False)    # V
    vals: np.ndarray = field(repr=False)    # d, descending
    kernel: np.ndarray = field(repr=False)  # K

    @property
    def n(self) -> int:
        return self.X.shape[0]


def hessian_operator(A, X, t) -> HessianOperator:
    """Build the -grad^2 f(X) operator for parameter matrix A and base point X."""
    check_unit_t(t)
    A = as_hermitian(A)
    X = as_hermitian(X)
    root = matrix_power(A, (1.0 - t) / (2.0 * t))
    dec = spectral_decompose(root @ X @ root)
    return HessianOperator(
        A=A,
        X=X,
        t=float(t),
        root=root,
        vecs=dec.eigenvectors,
        vals=dec.eigenvalues,
        kernel=_power_kernel(dec.eigenvalues, float(t)),
    )


def hessian_apply(op: HessianOperator, Y):
    """Apply -grad^2 f(X) to a Hermitian direction Y."""
    V = op.vecs
    Yt = V.conj().T @ (op.root @ as_hermitian(Y) @ op.root) @ V
    return symmetrize(op.t * op.root @ (V @ (op.kernel * Yt) @ V.conj().T) @ op.root)


def hermitian_basis(n):
    """Orthonormal basis of the real space of n x n Hermitian matrices.

    Diagonal units, then symmetric pairs / sqrt(2) and antisymmetric
    imaginary pairs / sqrt(2), under the trace inner product.
    """
    basis = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1.0
        basis.append(E)
    r = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            S = np.zeros((n, n), dtype=complex)
            S[i, j] = S[j, i] = r
            basis.append(S)
            Kk = np.zeros((n, n), dtype=complex)
            Kk[i, j] = 1j * r
            Kk[j, i] = -1j * r
            basis.append(Kk)
    return basis


def hessian_operator_matrix(op: HessianOperator):
    """The n^2 x n^2 real symmetric matrix of -grad^2 f(X) in the Hermitian basis."""
    basis = hermitian_basis(op.n)
    images = [hessian_apply(op, B) for B in basis]
    M = np.array([[inner(Bk, img) for img in images] for Bk in basis])
    return (M + M.T) / 2.0


def _power_extreme(op: HessianOperator, sigma):
    # Largest eigenvalues of H and of (sigma I - H) via power iteration with a
    # deterministic seeded start; used only beyond the explicit-matrix scale.
    def top(apply_fn):
        Y = random_hermitian(op.n, seed=0x5EED)
        Y = Y / np.linalg.norm(Y)
        lam = 0.0
        for _ in range(50_000):
            Z = apply_fn(Y)
            nz = np.linalg.norm(Z)
            if nz == 0.0:
                return 0.0
            Y_next = Z / nz
            lam_next = inner(Y_next, apply_fn(Y_next))
            if abs(lam_next - lam) <= 1e-14 * max(1.0, abs(lam_next)):
                return lam_next
            lam, Y = lam_next, Y_next
        return lam

    lam_max = top(lambda Y: hessian_apply(op, Y))
    lam_min = sigma - top(lambda Y: sigma * Y - hessian_apply(op, Y))
    return lam_min, lam_max


def hessian_extreme_eigs(op: HessianOperator):
    """Extreme eigenvalues (lam_min, lam_max) of -grad^2 f(X) as an operator.

    Exact n^2 x n^2 eigendecomposition for n <= 8; shifted power iteration
    beyond (shift 1.1x the smoothness bound from the actual spectra).
    """
    if op.n <= 8:
        w = np.linalg.eigvalsh(hessian_operator_matrix(op))
        return float(w[0]), float(w[-1])
    wA = np.linalg.eigvalsh(op.A)
    wX = np.linalg.eigvalsh(op.X)
    lo = min(wA[0], wX[0])
    hi = max(wA[-1], wX[-1])
    sigma = 1.1 * op.t * (1.0 - op.t) * hi ** (1.0 - op.t) * lo ** (op.t - 2.0)
    lam_min, lam_max = _power_extreme(op, sigma)
    return float(lam_min), float(lam_max)


@dataclass(frozen=True)
class ConvexityConstants:
    """Certified strong-convexity / smoothness constants on a spectral box.

    k1 = t(1-t) alpha^{1-t} beta^{t-2} and k2 = t(1-t) beta^{1-t} alpha^{t-2}
    bound -grad^2 f(X) from below and above whenever the spectra of A and X
    lie in [alpha, beta]; cond_bound = (beta/alpha)^{3-2t} = k2/k1 exactly.
    """

    t: float
    alpha: float
    beta: float
    k1: float
    k2: float
    cond_bound: float


def convexity_constants(t, alpha, beta) -> ConvexityConstants:
    check_unit_t(t)
    check_box(alpha, beta)
    k1 = t * (1.0 - t) * alpha ** (1.0 - t) * beta ** (t - 2.0)
    k2 = t * (1.0 - t) * beta ** (1.0 - t) * alpha ** (t - 2.0)
    return ConvexityConstants(
        t=float(t),
        alpha=float(alpha),
        beta=float(beta),
        k1=k1,
        k2=k2,
        cond_bound=(beta / alpha) ** (3.0 - 2.0 * t),
    )


def sharper_lower_bound(t, beta, lam_min_A):
    """Lower Hessian bound t(1-t) beta^{t-2} lam_min(A)^{1-t}.

    Tighter than k1 whenever lam_min(A) > alpha.
    """
    check_unit_t(t)
    return t * (1.0 - t) * beta ** (t - 2.0) * lam_min_A ** (1.0 - t)


def third_derivative_bound(t, alpha, beta):
    """Norm bound t(1-t)(2-t) beta^{1-t} alpha^{t-3} on the third derivative.

    Serves as a Lipschitz constant for the Hessian on the box; tested at
    desk scale, not used by the solvers.
    """
    check_unit_t(t)
    check_box(alpha, beta)
    return t * (1.0 - t) * (2.0 - t) * beta ** (1.0 - t) * alpha ** (t - 3.0)


def bregman(A, t, Y, X):
    """Bregman divergence of g = -f between Y and X.

    D(Y, X) = g(Y) - g(X) - <grad g(X), Y - X>; nonnegative by concavity of
    f, zero iff X = Y, and >= (k1/2) ||X - Y||_2^2 on a [alpha, beta] box.
    """
    check_unit_t(t)
    fX = sandwich_trace(A, X, t)
    fY = sandwich_trace(A, Y, t)
    G = gradient_f(A, X, t)
    return fX - fY + inner(G, as_hermitian(Y) - as_hermitian(X))


def fidelity_t_derivative(A, B, t):
    """Derivative in t of F(t) = tr (A^{(1-t)/2t} B A^{(1-t)/2t})^t.

    Equals tr[phi(t)^t (log phi(t) - (1/t) log A)] with
    phi(t) = A^{(1-t)/2t} B A^{(1-t)/2t}; at t = 1 this reduces to
    tr[B (log B - log A)].
    """
    if not (np.isfinite(t) and T_MIN < t <= T_MAX):
        raise ParameterError(f"order parameter t = {t} outside ({T_MIN}, {T_MAX}]")
    P = matrix_power(A, (1.0 - t) / (2.0 * t))
    dec = spectral_decompose(P @ B @ P)
    if dec.eigenvalues[-1] <= 0:
        raise NumericalError(
            f"sandwiched product lost positivity (min eigenvalue {dec.eigenvalues[-1]:.3e})"
        )
    w = dec.eigenvalues
    phi_t = dec.apply(w ** float(t))
    term1 = float(np.sum(w ** float(t) * np.log(w)))
    term2 = float(np.trace(phi_t @ matrix_log(A)).real) / t
    return term1 - term2
