"""Differentiable acyclicity functions h(B) and their gradients.

All four act on A = B o B (elementwise square).  For nonnegative A, every
variant vanishes exactly on nilpotent A, i.e. exactly when the nonzero pattern
of B is a DAG (tmpi needs truncation order k_max = d for the forward
implication).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

CONSTRAINT_KINDS = ("exp", "binomial", "logdet", "tmpi")


class LogdetDomainError(ValueError):
    """logdet constraint evaluated outside its domain s > rho(B o B)."""


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str = "exp"
    s: float = 1.0          # logdet shift; must exceed the spectral radius of B o B
    k_max: int | None = None  # tmpi truncation order; None means d (exact)

    def __post_init__(self):
        if self.kind not in CONSTRAINT_KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "logdet" and self.s <= 0:
            raise ValueError("logdet needs s > 0")
        if self.k_max is not None and self.k_max < 1:
            raise ValueError("tmpi needs k_max >= 1")


def spectral_radius(a) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def h_value_and_grad(b, spec: ConstraintSpec):
    """h(B) and dh/dB for the requested constraint kind."""
    b = np.asarray(b, dtype=float)
    d = b.shape[0]
    a = b * b

    if spec.kind == "exp":
        e = expm(a)
        value = float(np.trace(e)) - d
        grad = e.T * (2.0 * b)
    elif spec.kind == "binomial":
        m = np.eye(d) + a / d
        m_pow = np.linalg.matrix_power(m, d - 1)
        value = float(np.trace(m_pow @ m)) - d
        grad = m_pow.T * (2.0 * b)
    elif spec.kind == "logdet":
        rho = spectral_radius(a)
        if spec.s <= rho:
            raise LogdetDomainError(
                f"logdet domain violated: s={spec.s} <= spectral radius "
                f"{rho:.6g} of B o B")
        m = spec.s * np.eye(d) - a
        sign, logabsdet = np.linalg.slogdet(m)
        if sign <= 0:
            raise LogdetDomainError("det(sI - B o B) is not positive")
        value = -float(logabsdet) + d * np.log(spec.s)
        grad = np.linalg.inv(m).T * (2.0 * b)
    elif spec.kind == "tmpi":
        k_max = d if spec.k_max is None else min(spec.k_max, d)
        value = 0.0
        grad_core = np.zeros((d, d))
        power = np.eye(d)  # A^{k-1}
        for k in range(1, k_max + 1):
            grad_core += k * power.T
            power = power @ a
            value += float(np.trace(power))
        grad = grad_core * (2.0 * b)
    else:  # pragma: no cover - guarded by ConstraintSpec
        raise ValueError(spec.kind)
    return value, grad


def h_value(b, spec: ConstraintSpec) -> float:
    return h_value_and_grad(b, spec)[0]
