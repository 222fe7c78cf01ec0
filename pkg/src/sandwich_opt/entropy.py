"""Divergences and distances between positive definite matrices.

The central object is the sandwiched trace functional
``tr (A^{(1-t)/2t} B A^{(1-t)/2t})^t``; the classical fidelity and the
Bures-Wasserstein distance are its t = 1/2 specialization. Everything is
evaluated through spectral decompositions (n is small, exactness of the
eigen-route dominates).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NumericalError, ParameterError
from .linalg import matrix_log, matrix_power, spectral_decompose, symmetrize

# Order parameters closer than T_MIN to the degenerate endpoints are
# rejected: conditioning of the exponent (1-t)/2t blows up as t -> 0+.
T_MIN = 1e-3
T_MAX = 64.0

# Divergence orders this close to 1 are rejected and redirected to the
# Umegaki entropy; the limit checks evaluate down to |t-1| = 1e-4.
NEAR_ONE_TOL = 1e-9


def check_unit_t(t):
    """Require t in (T_MIN, 1 - T_MIN)."""
    if not (np.isfinite(t) and T_MIN < t < 1.0 - T_MIN):
        raise ParameterError(f"order parameter t = {t} outside ({T_MIN}, {1 - T_MIN})")


def check_order_t(t):
    """Require t in (T_MIN, T_MAX] away from 1."""
    if not (np.isfinite(t) and T_MIN < t <= T_MAX):
        raise ParameterError(f"divergence order t = {t} outside ({T_MIN}, {T_MAX}]")
    if abs(t - 1.0) <= NEAR_ONE_TOL:
        raise ParameterError(
            "divergence order t = 1 is the Umegaki limit; "
            "call umegaki_relative_entropy instead"
        )


def sandwich_trace(A, B, t):
    """tr (A^{(1-t)/2t} B A^{(1-t)/2t})^t, without order-parameter guards."""
    P = matrix_power(A, (1.0 - t) / (2.0 * t))
    w = np.linalg.eigvalsh(symmetrize(P @ B @ P))
    if w[0] <= 0:
        raise NumericalError(
            f"sandwiched product lost positivity (min eigenvalue {w[0]:.3e})"
        )
    return float(np.sum(w ** float(t)))


def fidelity(A, B, t):
    """Parameterized fidelity tr (A^{(1-t)/2t} B A^{(1-t)/2t})^t, t in (0, 1)."""
    check_unit_t(t)
    return sandwich_trace(A, B, t)


def bures_distance(A, B):
    """Bures-Wasserstein distance [tr(A+B)/2 - tr(A^{1/2} B A^{1/2})^{1/2}]^{1/2}."""
    radicand = float(np.trace(A).real + np.trace(B).real) / 2.0 - sandwich_trace(A, B, 0.5)
    if radicand < -1e-10:
        raise NumericalError(f"negative Bures radicand {radicand:.3e}")
    return float(np.sqrt(max(radicand, 0.0)))


def sandwiched_divergence(A, B, t):
    """Sandwiched Rényi relative entropy of B with respect to A.

    Returns ``log(tr (A^{(1-t)/2t} B A^{(1-t)/2t})^t) / (t - 1)`` for
    t in (T_MIN, T_MAX] away from 1.
    """
    check_order_t(t)
    return float(np.log(sandwich_trace(A, B, t)) / (t - 1.0))


def renyi_classic(A, B, t):
    """Traditional Rényi relative entropy log(tr A^{1-t} B^t) / (t - 1)."""
    check_order_t(t)
    val = float(np.trace(matrix_power(A, 1.0 - t) @ matrix_power(B, t)).real)
    if val <= 0:
        raise NumericalError(f"trace of A^(1-t) B^t is not positive ({val:.3e})")
    return float(np.log(val) / (t - 1.0))


def umegaki_relative_entropy(B, A):
    """Umegaki relative entropy tr[B (log B - log A)] / tr B."""
    diff = matrix_log(B) - matrix_log(A)
    return float(np.trace(B @ diff).real / np.trace(B).real)


def thompson_metric(A, B):
    """Thompson metric max{log lam_1(A B^{-1}), log lam_1(B A^{-1})}."""
    Ami = matrix_power(A, -0.5)
    w = np.linalg.eigvalsh(symmetrize(Ami @ B @ Ami))
    return float(max(np.log(w[-1]), -np.log(w[0])))


def max_relative_entropy(A, B):
    """Max-relative entropy log lam_1(A B^{-1})."""
    Bmi = matrix_power(B, -0.5)
    w = np.linalg.eigvalsh(symmetrize(Bmi @ A @ Bmi))
    return float(np.log(w[-1]))


def geometric_mean(A, B, t):
    """Weighted geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}.

    Meaningful for every real t; for t in [0, 1] it is the geodesic from A
    to B of the affine-invariant metric.
    """
    decA = spectral_decompose(A)
    if decA.eigenvalues[-1] <= 0:
        raise NumericalError("geometric mean of a non positive definite matrix")
    root = decA.apply(np.sqrt(decA.eigenvalues))
    iroot = decA.apply(1.0 / np.sqrt(decA.eigenvalues))
    decM = spectral_decompose(iroot @ B @ iroot)
    if decM.eigenvalues[-1] <= 0:
        raise NumericalError("geometric mean of a non positive definite matrix")
    mid = decM.apply(decM.eigenvalues ** float(t))
    return symmetrize(root @ mid @ root)


def riemannian_distance(A, B):
    """Affine-invariant distance ||log A^{-1/2} B A^{-1/2}||_2."""
    Ami = matrix_power(A, -0.5)
    w = np.linalg.eigvalsh(symmetrize(Ami @ B @ Ami))
    if w[0] <= 0:
        raise NumericalError("whitened matrix lost positivity")
    return float(np.linalg.norm(np.log(w)))


DIVERGENCE_KINDS = (
    "fidelity",
    "bures",
    "sandwiched",
    "renyi_classic",
    "umegaki",
    "thompson",
    "max_relative",
    "riemannian",
)


@dataclass(frozen=True)
class DivergenceValue:
    """A computed divergence together with its kind and order parameter."""

    value: float
    kind: str
    t: float | None = None


def compute_divergence(kind, A, B, t=None) -> DivergenceValue:
    """Dispatch a divergence computation by kind.

    ``sandwiched``, ``renyi_classic``, ``fidelity`` require t. The relative
    entropies are directed: the value is D(B || A) with A the reference.
    """
    if kind in ("fidelity", "sandwiched", "renyi_classic"):
        if t is None:
            raise ParameterError(f"divergence kind {kind!r} requires an order t")
        fn = {
            "fidelity": fidelity,
            "sandwiched": sandwiched_divergence,
            "renyi_classic": renyi_classic,
        }[kind]
        return DivergenceValue(fn(A, B, t), kind, float(t))
    if kind == "umegaki":
        return DivergenceValue(umegaki_relative_entropy(B, A), kind)
    if kind == "bures":
        return DivergenceValue(bures_distance(A, B), kind)
    if kind == "thompson":
        return DivergenceValue(thompson_metric(A, B), kind)
    if kind == "max_relative":
        return DivergenceValue(max_relative_entropy(A, B), kind)
    if kind == "riemannian":
        return DivergenceValue(riemannian_distance(A, B), kind)
    raise InvalidInput(f"unknown divergence kind {kind!r}")
