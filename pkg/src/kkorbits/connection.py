"""Ĝ₀-connection of a space-time carrying a metric and an electromagnetic potential.

In the adapted frame the connection matrix is

    Γ̂(U) = [[Γ(U), 0], [Γ⁵(U), 0]],   Γ⁵_ij = F_ij - 2 ∇_i A_j

with Γ the Levi-Civita connection of G and A the covariant 4-potential.
Only F enters the equation of motion

    m₀ dU^k/ds = -m₀ Γ^k_ij U^i U^j - q (G⁻¹F)^k_j U^j

so the -2A* factor of the adapted frame is carried consistently but never
observable in trajectories. Units have c = 1.

Array conventions: ``jacobian(X)[r, ...] = ∂_r value``, ``hessian(X)[r, s, ...]
= ∂_r ∂_s value``, ``Gamma[k, i, j] = Γ^k_ij``.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Callable, Literal, Optional

import numpy as np
import pandas as pd

from .errors import NumericalError

DerivativeMode = Literal["analytic", "fd"]
DETERMINANT_TOL = 1e-10
UNIT_NORM_TOL = 1e-9
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def central_difference(f: Callable[[np.ndarray], np.ndarray], X: np.ndarray, h: float) -> np.ndarray:
    """Stack of ∂_r f(X), r = 0..3, by central differences of step h."""
    X = np.asarray(X, dtype=float)
    columns = []
    for r in range(X.size):
        e = np.zeros_like(X)
        e[r] = h
        columns.append((np.asarray(f(X + e)) - np.asarray(f(X - e))) / (2.0 * h))
    return np.stack(columns)


def richardson_difference(f: Callable[[np.ndarray], np.ndarray], X: np.ndarray, h: float) -> np.ndarray:
    return (4.0 * central_difference(f, X, 0.5 * h) - central_difference(f, X, h)) / 3.0


class TensorField(ABC):
    """A tensor-valued function of the 4-position with first and second derivatives.

    Subclasses give ``value`` and, where they can, analytic derivatives;
    anything missing (or everything, in ``"fd"`` mode) falls back to central
    differences of step ``fd_step``.
    """

    def __init__(self, derivatives: DerivativeMode = "analytic", fd_step: float = 1e-4, richardson: bool = False):
        if derivatives not in ("analytic", "fd"):
            raise ValueError(f"derivatives must be 'analytic' or 'fd', got {derivatives!r}")
        if not fd_step > 0:
            raise ValueError(f"fd_step must be positive, got {fd_step}")
        self.derivatives = derivatives
        self.fd_step = fd_step
        self.richardson = richardson

    @abstractmethod
    def value(self, X: np.ndarray) -> np.ndarray:
        pass

    def analytic_jacobian(self, X: np.ndarray) -> Optional[np.ndarray]:
        return None

    def analytic_hessian(self, X: np.ndarray) -> Optional[np.ndarray]:
        return None

    def _difference(self, f, X):
        if self.richardson:
            return richardson_difference(f, X, self.fd_step)
        return central_difference(f, X, self.fd_step)

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        if self.derivatives == "analytic":
            d = self.analytic_jacobian(X)
            if d is not None:
                return d
        return self._difference(self.value, X)

    def hessian(self, X: np.ndarray) -> np.ndarray:
        if self.derivatives == "analytic":
            d = self.analytic_hessian(X)
            if d is not None:
                return d
        return self._difference(self.jacobian, X)


class FlatMetric(TensorField):
    def value(self, X):
        return ETA.copy()

    def analytic_jacobian(self, X):
        return np.zeros((4, 4, 4))

    def analytic_hessian(self, X):
        return np.zeros((4, 4, 4, 4))


class ConformalMetric(TensorField):
    """G = exp(2φ) η with φ = phi0 + k·X."""

    def __init__(self, k, phi0: float = 0.0, **kwargs):
        super().__init__(**kwargs)
        self.k = np.asarray(k, dtype=float).reshape(4)
        self.phi0 = float(phi0)

    def value(self, X):
        return np.exp(2.0 * (self.phi0 + self.k @ X)) * ETA

    def analytic_jacobian(self, X):
        return 2.0 * np.einsum("r,ij->rij", self.k, self.value(X))

    def analytic_hessian(self, X):
        return 4.0 * np.einsum("r,s,ij->rsij", self.k, self.k, self.value(X))

    def christoffel_closed_form(self) -> np.ndarray:
        """Γ^k_ij = δ^k_i ∂_jφ + δ^k_j ∂_iφ - η_ij η^kl ∂_lφ."""
        d = np.eye(4)
        return (np.einsum("ki,j->kij", d, self.k) + np.einsum("kj,i->kij", d, self.k)
                - np.einsum("ij,k->kij", ETA, ETA @ self.k))


class WeakFieldMetric(TensorField):
    """diag(1 + 2φ, -1, -1, -1) with the static Plummer potential φ = -mass / √(r² + a²)."""

    def __init__(self, mass: float, softening: float = 1.0, **kwargs):
        super().__init__(**kwargs)
        if not softening > 0:
            raise ValueError("softening must be positive")
        self.mass = float(mass)
        self.softening = float(softening)

    def potential(self, X):
        x = np.asarray(X, dtype=float)[1:]
        return -self.mass / np.sqrt(x @ x + self.softening**2)

    def potential_gradient(self, X):
        x = np.asarray(X, dtype=float)[1:]
        rho = np.sqrt(x @ x + self.softening**2)
        return np.concatenate([[0.0], self.mass * x / rho**3])

    def potential_hessian(self, X):
        x = np.asarray(X, dtype=float)[1:]
        rho = np.sqrt(x @ x + self.softening**2)
        H = np.zeros((4, 4))
        H[1:, 1:] = self.mass * (np.eye(3) / rho**3 - 3.0 * np.outer(x, x) / rho**5)
        return H

    def value(self, X):
        G = ETA.copy()
        G[0, 0] = 1.0 + 2.0 * self.potential(X)
        return G

    def analytic_jacobian(self, X):
        d = np.zeros((4, 4, 4))
        d[:, 0, 0] = 2.0 * self.potential_gradient(X)
        return d

    def analytic_hessian(self, X):
        d = np.zeros((4, 4, 4, 4))
        d[:, :, 0, 0] = 2.0 * self.potential_hessian(X)
        return d


class SphereBlockMetric(TensorField):
    """diag(1, -1, -r0², -r0² sin²θ) on coordinates (t, x, θ, ϕ)."""

    def __init__(self, radius: float = 1.0, **kwargs):
        super().__init__(**kwargs)
        self.radius = float(radius)

    def value(self, X):
        r2 = self.radius**2
        return np.diag([1.0, -1.0, -r2, -r2 * np.sin(X[2]) ** 2])

    def analytic_jacobian(self, X):
        d = np.zeros((4, 4, 4))
        d[2, 3, 3] = -self.radius**2 * np.sin(2.0 * X[2])
        return d

    def analytic_hessian(self, X):
        d = np.zeros((4, 4, 4, 4))
        d[2, 2, 3, 3] = -2.0 * self.radius**2 * np.cos(2.0 * X[2])
        return d


class CallableMetric(TensorField):
    def __init__(self, fn, jacobian_fn=None, hessian_fn=None, **kwargs):
        super().__init__(**kwargs)
        self.fn = fn
        self.jacobian_fn = jacobian_fn
        self.hessian_fn = hessian_fn

    def value(self, X):
        return np.asarray(self.fn(X), dtype=float)

    def analytic_jacobian(self, X):
        return None if self.jacobian_fn is None else np.asarray(self.jacobian_fn(X), dtype=float)

    def analytic_hessian(self, X):
        return None if self.hessian_fn is None else np.asarray(self.hessian_fn(X), dtype=float)


class ConstantPotential(TensorField):
    def __init__(self, A=(0.0, 0.0, 0.0, 0.0), **kwargs):
        super().__init__(**kwargs)
        self.A = np.asarray(A, dtype=float).reshape(4)

    def value(self, X):
        return self.A.copy()

    def analytic_jacobian(self, X):
        return np.zeros((4, 4))

    def analytic_hessian(self, X):
        return np.zeros((4, 4, 4))


class UniformMagneticPotential(TensorField):
    """Covariant A = (0, ½B₀y, -½B₀x, 0): contravariant vector potential ½ B₀ e_z × x."""

    def __init__(self, B0: float = 1.0, **kwargs):
        super().__init__(**kwargs)
        self.B0 = float(B0)

    def value(self, X):
        return np.array([0.0, 0.5 * self.B0 * X[2], -0.5 * self.B0 * X[1], 0.0])

    def analytic_jacobian(self, X):
        d = np.zeros((4, 4))
        d[2, 1] = 0.5 * self.B0
        d[1, 2] = -0.5 * self.B0
        return d

    def analytic_hessian(self, X):
        return np.zeros((4, 4, 4))


class CoulombPotential(TensorField):
    """A = (k/r, 0, 0, 0)."""

    def __init__(self, k: float = 1.0, **kwargs):
        super().__init__(**kwargs)
        self.k = float(k)

    def value(self, X):
        return np.array([self.k / np.linalg.norm(X[1:]), 0.0, 0.0, 0.0])

    def analytic_jacobian(self, X):
        x = np.asarray(X[1:], dtype=float)
        r = np.linalg.norm(x)
        d = np.zeros((4, 4))
        d[1:, 0] = -self.k * x / r**3
        return d

    def analytic_hessian(self, X):
        x = np.asarray(X[1:], dtype=float)
        r = np.linalg.norm(x)
        d = np.zeros((4, 4, 4))
        d[1:, 1:, 0] = self.k * (3.0 * np.outer(x, x) / r**5 - np.eye(3) / r**3)
        return d


class ChargedBallPotential(TensorField):
    """Static potential of a uniformly charged ball with the sign that solves the Maxwell residual.

    φ = -ρ_e(3R² - r²)/(6ε₀) inside and -ρ_e R³/(3ε₀ r) outside, so that
    div E = -ρ_e/ε₀ with E = -grad φ.
    """

    def __init__(self, charge_density: float = 1.0, radius: float = 1.0, epsilon0: float = 1.0, **kwargs):
        super().__init__(**kwargs)
        self.charge_density = float(charge_density)
        self.radius = float(radius)
        self.epsilon0 = float(epsilon0)

    def value(self, X):
        r = np.linalg.norm(X[1:])
        rho, R, eps = self.charge_density, self.radius, self.epsilon0
        phi = -rho * (3.0 * R**2 - r**2) / (6.0 * eps) if r <= R else -rho * R**3 / (3.0 * eps * r)
        return np.array([phi, 0.0, 0.0, 0.0])

    def analytic_jacobian(self, X):
        x = np.asarray(X[1:], dtype=float)
        r = np.linalg.norm(x)
        rho, R, eps = self.charge_density, self.radius, self.epsilon0
        d = np.zeros((4, 4))
        d[1:, 0] = rho * x / (3.0 * eps) if r <= R else rho * R**3 * x / (3.0 * eps * r**3)
        return d

    def analytic_hessian(self, X):
        x = np.asarray(X[1:], dtype=float)
        r = np.linalg.norm(x)
        rho, R, eps = self.charge_density, self.radius, self.epsilon0
        d = np.zeros((4, 4, 4))
        if r <= R:
            d[1:, 1:, 0] = rho * np.eye(3) / (3.0 * eps)
        else:
            d[1:, 1:, 0] = rho * R**3 / (3.0 * eps) * (np.eye(3) / r**3 - 3.0 * np.outer(x, x) / r**5)
        return d


class CallablePotential(CallableMetric):
    pass


class GaugedPotential(TensorField):
    """A + ∂h for a gauge function given by its gradient (and optionally its Hessian)."""

    def __init__(self, base: TensorField, grad_h, hess_h=None, **kwargs):
        super().__init__(**kwargs)
        self.base = base
        self.grad_h = grad_h
        self.hess_h = hess_h

    def value(self, X):
        return self.base.value(X) + np.asarray(self.grad_h(X), dtype=float)

    def _hess_h(self, X):
        if self.hess_h is not None:
            return np.asarray(self.hess_h(X), dtype=float)
        return self._difference(lambda Y: np.asarray(self.grad_h(Y), dtype=float), X)

    def analytic_jacobian(self, X):
        return self.base.jacobian(X) + self._hess_h(X)

    def analytic_hessian(self, X):
        return self.base.hessian(X) + self._difference(self._hess_h, X)


METRIC_PRESETS = {
    "flat": FlatMetric,
    "conformal": ConformalMetric,
    "weak_field": WeakFieldMetric,
    "sphere_block": SphereBlockMetric,
}
POTENTIAL_PRESETS = {
    "constant": ConstantPotential,
    "uniform_magnetic": UniformMagneticPotential,
    "coulomb": CoulombPotential,
    "charged_ball": ChargedBallPotential,
}


@dataclass(frozen=True)
class SpacetimeFields:
    metric: TensorField
    potential: TensorField


def flat_fields(potential: Optional[TensorField] = None) -> SpacetimeFields:
    return SpacetimeFields(FlatMetric(), ConstantPotential() if potential is None else potential)


def metric_and_inverse(fields: SpacetimeFields, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    G = fields.metric.value(X)
    if abs(np.linalg.det(G)) <= DETERMINANT_TOL:
        raise NumericalError(f"singular metric at X = {np.asarray(X).tolist()}")
    return G, np.linalg.inv(G)


def _christoffel_lowered_sum(dG: np.ndarray) -> np.ndarray:
    """S[i, j, r] = ∂_j G_ir + ∂_i G_jr - ∂_r G_ij."""
    return np.einsum("jir->ijr", dG) + dG - np.einsum("rij->ijr", dG)


def christoffel(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """Γ^k_ij = ½ G^kr (∂_j G_ir + ∂_i G_jr - ∂_r G_ij)."""
    _, Ginv = metric_and_inverse(fields, X)
    return 0.5 * np.einsum("kr,ijr->kij", Ginv, _christoffel_lowered_sum(fields.metric.jacobian(X)))


def christoffel_derivative(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """dΓ[l, k, i, j] = ∂_l Γ^k_ij, using ∂G⁻¹ = -G⁻¹ ∂G G⁻¹."""
    _, Ginv = metric_and_inverse(fields, X)
    dG = fields.metric.jacobian(X)
    ddG = fields.metric.hessian(X)
    dGinv = -np.einsum("ka,lab,br->lkr", Ginv, dG, Ginv)
    dS = np.einsum("ljir->lijr", ddG) + ddG - np.einsum("lrij->lijr", ddG)
    return 0.5 * (np.einsum("lkr,ijr->lkij", dGinv, _christoffel_lowered_sum(dG))
                  + np.einsum("kr,lijr->lkij", Ginv, dS))


def metric_compatibility_residual(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """∇_i G_jk = ∂_i G_jk - Γ^m_ij G_mk - Γ^m_ik G_jm."""
    G = fields.metric.value(X)
    Gamma = christoffel(fields, X)
    return (fields.metric.jacobian(X) - np.einsum("mij,mk->ijk", Gamma, G)
            - np.einsum("mik,jm->ijk", Gamma, G))


def em_field(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """F_ij = ∂_i A_j - ∂_j A_i."""
    dA = fields.potential.jacobian(X)
    return dA - dA.T


def electric_magnetic(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(E, B) of a flat-space field tensor with covariant A = (φ, -𝖠)."""
    F = np.asarray(F, dtype=float)
    return F[0, 1:].copy(), -np.array([F[2, 3], F[3, 1], F[1, 2]])


def covariant_derivative_potential(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """∇_i A_j = ∂_i A_j - Γ^k_ij A_k."""
    return fields.potential.jacobian(X) - np.einsum("kij,k->ij", christoffel(fields, X), fields.potential.value(X))


def gamma5(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """Γ⁵_ij = F_ij - 2 ∇_i A_j."""
    return em_field(fields, X) - 2.0 * covariant_derivative_potential(fields, X)


def gamma5_torsion_residual(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """Γ⁵_ij - Γ⁵_ji - 2[F_ij - (∂_i A_j - ∂_j A_i)]; vanishes for a torsion-free connection."""
    G5 = gamma5(fields, X)
    dA = fields.potential.jacobian(X)
    return G5 - G5.T - 2.0 * (em_field(fields, X) - (dA - dA.T))


@dataclass(frozen=True, eq=False)
class ParticleState:
    X: np.ndarray
    U: np.ndarray
    q: float
    m0: float
    s_arc: float = 0.0

    def __post_init__(self):
        if not self.m0 > 0:
            raise ValueError(f"rest mass must be positive, got {self.m0}")
        object.__setattr__(self, "X", np.asarray(self.X, dtype=float).reshape(4))
        object.__setattr__(self, "U", np.asarray(self.U, dtype=float).reshape(4))

    @classmethod
    def from_velocity(cls, X, v, q: float, m0: float, fields: Optional[SpacetimeFields] = None) -> "ParticleState":
        """Unit 4-velocity along (1, v), normalized with the metric at X (flat if no fields)."""
        v = np.asarray(v, dtype=float).reshape(3)
        X = np.asarray(X, dtype=float)
        G = ETA if fields is None else fields.metric.value(X)
        u = np.concatenate([[1.0], v])
        norm2 = float(u @ G @ u)
        if not norm2 > 0:
            raise ValueError(f"velocity {v.tolist()} is not timelike (|v| >= 1)")
        return cls(X, u / np.sqrt(norm2), q, m0)

    def unit_norm_drift(self, fields: SpacetimeFields) -> float:
        return abs(float(self.U @ fields.metric.value(self.X) @ self.U) - 1.0)


def _lorentz_term(fields: SpacetimeFields, X: np.ndarray, U: np.ndarray, Ginv: np.ndarray) -> np.ndarray:
    """(G⁻¹F) U"""
    return Ginv @ em_field(fields, X) @ U


def _motion_rhs(fields: SpacetimeFields, X: np.ndarray, U: np.ndarray, q: float, m0: float) -> np.ndarray:
    _, Ginv = metric_and_inverse(fields, X)
    Gamma = christoffel(fields, X)
    dU = -np.einsum("kij,i,j->k", Gamma, U, U) - (q / m0) * _lorentz_term(fields, X, U, Ginv)
    return np.concatenate([U, dU])


def motion_rhs(state: ParticleState, fields: SpacetimeFields) -> tuple[np.ndarray, np.ndarray]:
    """(dX/ds, dU/ds) with dU^k/ds = -Γ^k_ij U^i U^j - (q/m₀) (G⁻¹F)^k_j U^j."""
    rhs = _motion_rhs(fields, state.X, state.U, state.q, state.m0)
    return rhs[:4], rhs[4:]


def lorentz_force(state: ParticleState, fields: SpacetimeFields) -> np.ndarray:
    """-(q/m₀) G⁻¹F U, the force term compared against dU/ds + Γ(U)U."""
    _, Ginv = metric_and_inverse(fields, state.X)
    return -(state.q / state.m0) * _lorentz_term(fields, state.X, state.U, Ginv)


def rk4_step(rhs: Callable[[np.ndarray], np.ndarray], y: np.ndarray, ds: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * ds * k1)
    k3 = rhs(y + 0.5 * ds * k2)
    k4 = rhs(y + ds * k3)
    return y + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True, eq=False)
class Trajectory:
    s: np.ndarray
    X: np.ndarray
    U: np.ndarray
    q: float
    m0: float
    unit_norm_drift: np.ndarray
    pi_rows: Optional[np.ndarray] = None

    @property
    def max_drift(self) -> float:
        return float(np.max(self.unit_norm_drift))

    @property
    def final_state(self) -> ParticleState:
        return ParticleState(self.X[-1], self.U[-1], self.q, self.m0, float(self.s[-1]))

    def to_frame(self) -> pd.DataFrame:
        n = self.s.size
        columns = {"s": self.s}
        columns.update({f"X{k}": self.X[:, k] for k in range(4)})
        columns.update({f"U{k}": self.U[:, k] for k in range(4)})
        if self.pi_rows is not None:
            columns.update({f"Pi{k}": self.pi_rows[:, k] for k in range(4)})
        columns["q"] = np.full(n, self.q)
        columns["m0"] = np.full(n, self.m0)
        columns["unit_norm_drift"] = self.unit_norm_drift
        return pd.DataFrame(columns)


def _check_start(state0: ParticleState, fields: SpacetimeFields, ds: float, n_steps: int):
    if not ds > 0:
        raise ValueError(f"step ds must be positive, got {ds}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be non-negative, got {n_steps}")
    drift = state0.unit_norm_drift(fields)
    if drift > UNIT_NORM_TOL:
        raise ValueError(f"initial velocity is not unit normalized (|U*U - 1| = {drift:.3g})")


def _drift(fields: SpacetimeFields, X: np.ndarray, U: np.ndarray) -> float:
    return abs(float(U @ fields.metric.value(X) @ U) - 1.0)


def integrate_motion(state0: ParticleState, fields: SpacetimeFields, ds: float = 1e-3,
                     n_steps: int = 1000) -> Trajectory:
    """Fixed-step RK4 integration of the equation of motion; q and m₀ are carried unchanged."""
    _check_start(state0, fields, ds, n_steps)
    q, m0 = state0.q, state0.m0
    y = np.concatenate([state0.X, state0.U])
    states = [y]
    for step in range(1, n_steps + 1):
        y = rk4_step(lambda z: _motion_rhs(fields, z[:4], z[4:], q, m0), y, ds)
        states.append(y)
        if step % 1000 == 0:
            logging.debug(f"integrate_motion step {step}/{n_steps}, X = {y[:4]}")
    states = np.array(states)
    X, U = states[:, :4], states[:, 4:]
    drift = np.array([_drift(fields, x, u) for x, u in zip(X, U)])
    if drift.max() > UNIT_NORM_TOL:
        logging.warning(f"unit-norm drift {drift.max():.3g} exceeds {UNIT_NORM_TOL:g}")
    s = state0.s_arc + ds * np.arange(n_steps + 1)
    return Trajectory(s, X, U, q, m0, drift)


def _velocity_from_row(fields: SpacetimeFields, X: np.ndarray, pi_row: np.ndarray, q: float,
                       m0: float) -> np.ndarray:
    """U = G⁻¹(Π* + 2qA*)/m₀."""
    _, Ginv = metric_and_inverse(fields, X)
    return Ginv @ (pi_row + 2.0 * q * fields.potential.value(X)) / m0


def transport_5momentum(state0: ParticleState, fields: SpacetimeFields, ds: float = 1e-3,
                        n_steps: int = 1000) -> Trajectory:
    """Parallel transport of the 5-row (Π*, q) with Π* = m₀U* - 2qA*.

    dΠ_j/ds = Π_k Γ^k_ij U^i + q U^i Γ⁵_ij; the fifth entry q is carried as is.
    """
    _check_start(state0, fields, ds, n_steps)
    q, m0 = state0.q, state0.m0

    def rhs(z):
        X, pi_row = z[:4], z[4:]
        U = _velocity_from_row(fields, X, pi_row, q, m0)
        d_pi = np.einsum("k,kij,i->j", pi_row, christoffel(fields, X), U) + q * U @ gamma5(fields, X)
        return np.concatenate([U, d_pi])

    pi0 = m0 * fields.metric.value(state0.X) @ state0.U - 2.0 * q * fields.potential.value(state0.X)
    y = np.concatenate([state0.X, pi0])
    states = [y]
    for step in range(1, n_steps + 1):
        y = rk4_step(rhs, y, ds)
        states.append(y)
        if step % 1000 == 0:
            logging.debug(f"transport_5momentum step {step}/{n_steps}, X = {y[:4]}")
    states = np.array(states)
    X, pi_rows = states[:, :4], states[:, 4:]
    U = np.array([_velocity_from_row(fields, x, p, q, m0) for x, p in zip(X, pi_rows)])
    drift = np.array([_drift(fields, x, u) for x, u in zip(X, U)])
    s = state0.s_arc + ds * np.arange(n_steps + 1)
    return Trajectory(s, X, U, q, m0, drift, pi_rows)


def gauge_transform(fields: SpacetimeFields, grad_h: Callable[[np.ndarray], np.ndarray],
                    hess_h: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> SpacetimeFields:
    """A″* = A* + ∂h/∂X; the metric is untouched."""
    pot = fields.potential
    gauged = GaugedPotential(pot, grad_h, hess_h, derivatives=pot.derivatives, fd_step=pot.fd_step,
                             richardson=pot.richardson)
    return replace(fields, potential=gauged)
