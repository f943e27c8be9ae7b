"""Curvature and residuals of the coupled gravito-electromagnetic field equations.

Everything here is pointwise: given the metric, the potential and the matter
content at X, evaluate the left-minus-right side of

    R^ij - ½ R G^ij + Λ G^ij - k̃ [A^(i R̃^j)k_k + A_r R̃^r(ij) - ½ R̃ G^ij] = κ [(ρ+p) U^i U^j - p G^ij]
    -k̃ [∇_j F^ji + 2 A_q R^qij_j] = κ ρ_e U^i
    ∇_i [(ρ+p) U^i U_j - p δ^i_j] - ρ_e U^k F_kj = 0

Round-bracket symmetrization carries the factor ½. Indices are raised with
G⁻¹ throughout. In flat space with covariant A = (φ, -𝖠) the time component of
the Maxwell residual is -κε₀(div E + ρ_e/ε₀), the sign convention shared with
the Lorentz force of the equation of motion.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
import pandas as pd

from .connection import (ETA, SpacetimeFields, central_difference, christoffel, christoffel_derivative,
                         em_field, gamma5, metric_and_inverse)

MATTER_FD_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class MatterState:
    rho: float
    p: float
    rho_e: float
    U: np.ndarray

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError(f"energy density must be non-negative, got {self.rho}")
        object.__setattr__(self, "U", np.asarray(self.U, dtype=float).reshape(4))

    @classmethod
    def vacuum(cls) -> "MatterState":
        return cls(0.0, 0.0, 0.0, np.array([1.0, 0.0, 0.0, 0.0]))

    def check_unit(self, G: np.ndarray, tol: float = 1e-10):
        norm = float(self.U @ G @ self.U)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"matter velocity is not unit normalized (U*U = {norm:.12g})")


@dataclass(frozen=True)
class MatterField:
    """Matter content as functions of the 4-position."""
    rho: Callable[[np.ndarray], float]
    p: Callable[[np.ndarray], float]
    rho_e: Callable[[np.ndarray], float]
    U: Callable[[np.ndarray], np.ndarray]

    def at(self, X: np.ndarray) -> MatterState:
        return MatterState(float(self.rho(X)), float(self.p(X)), float(self.rho_e(X)), self.U(X))

    @classmethod
    def uniform(cls, state: MatterState) -> "MatterField":
        return cls(lambda X: state.rho, lambda X: state.p, lambda X: state.rho_e, lambda X: state.U)


@dataclass(frozen=True)
class CouplingConstants:
    kappa: float
    k_tilde: float
    epsilon0: float = 1.0
    Lambda: float = 0.0
    G_N: float = 1.0

    @classmethod
    def maxwell_limit(cls, G_N: float = 1.0, epsilon0: float = 1.0, Lambda: float = 0.0) -> "CouplingConstants":
        """κ = 8πG_N and k̃ = κε₀."""
        kappa = 8.0 * math.pi * G_N
        return cls(kappa, kappa * epsilon0, epsilon0, Lambda, G_N)

    @classmethod
    def einstein(cls, G_N: float = 1.0, Lambda: float = 0.0, k_tilde: float = 0.0) -> "CouplingConstants":
        return cls(8.0 * math.pi * G_N, k_tilde, 1.0, Lambda, G_N)


@dataclass(frozen=True, eq=False)
class Curvature:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float


def riemann(fields: SpacetimeFields, X: np.ndarray) -> Curvature:
    """R^p_ijk = Γ^p_im Γ^m_jk - Γ^p_jm Γ^m_ik + ∂_i Γ^p_jk - ∂_j Γ^p_ik, R_jk = R^p_pjk."""
    _, Ginv = metric_and_inverse(fields, X)
    Gamma = christoffel(fields, X)
    dGamma = christoffel_derivative(fields, X)
    R = (np.einsum("pim,mjk->pijk", Gamma, Gamma) - np.einsum("pjm,mik->pijk", Gamma, Gamma)
         + np.einsum("ipjk->pijk", dGamma) - np.einsum("jpik->pijk", dGamma))
    ricci = np.einsum("ppjk->jk", R)
    return Curvature(R, ricci, float(np.einsum("jk,jk->", Ginv, ricci)))


def bianchi_residual(curvature: Curvature) -> np.ndarray:
    """R^p_ijk + R^p_jki + R^p_kij."""
    R = curvature.riemann
    return R + np.einsum("pjki->pijk", R) + np.einsum("pkij->pijk", R)


def _field_derivative(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """dF[c, a, b] = ∂_c F_ab."""
    H = fields.potential.hessian(X)
    return H - np.einsum("cba->cab", H)


def covariant_field_derivative(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """∇_c F_ab = ∂_c F_ab - Γ^m_ca F_mb - Γ^m_cb F_am."""
    F = em_field(fields, X)
    Gamma = christoffel(fields, X)
    return (_field_derivative(fields, X) - np.einsum("mca,mb->cab", Gamma, F)
            - np.einsum("mcb,am->cab", Gamma, F))


@dataclass(frozen=True, eq=False)
class TildeCurvature:
    components: np.ndarray
    scalar: float


def tilde_riemann(fields: SpacetimeFields, X: np.ndarray, curvature: Optional[Curvature] = None) -> TildeCurvature:
    """R̃_ijk = ∇_k F_ji + 2 A_q R^q_ijk and R̃ = A_r G^ri G^jk R̃_ijk."""
    _, Ginv = metric_and_inverse(fields, X)
    curvature = riemann(fields, X) if curvature is None else curvature
    A = fields.potential.value(X)
    comps = (np.einsum("kji->ijk", covariant_field_derivative(fields, X))
             + 2.0 * np.einsum("q,qijk->ijk", A, curvature.riemann))
    scalar = float(np.einsum("r,ri,jk,ijk->", A, Ginv, Ginv, comps))
    return TildeCurvature(comps, scalar)


def stress_matter(matter: MatterState, G: np.ndarray, constants: CouplingConstants) -> np.ndarray:
    """T_M^ij = κ [(ρ+p) U^i U^j - p G^ij]."""
    Ginv = np.linalg.inv(G)
    U = matter.U
    return constants.kappa * ((matter.rho + matter.p) * np.outer(U, U) - matter.p * Ginv)


def _sym(T: np.ndarray) -> np.ndarray:
    return 0.5 * (T + T.T)


def stress_geom(fields: SpacetimeFields, X: np.ndarray, constants: CouplingConstants) -> np.ndarray:
    """T_G^ij = -[R^ij - ½RG^ij + ΛG^ij] + k̃ [A^(i R̃^j)k_k + A_r R̃^r(ij) - ½ R̃ G^ij]."""
    _, Ginv = metric_and_inverse(fields, X)
    curvature = riemann(fields, X)
    tilde = tilde_riemann(fields, X, curvature)
    ricci_up = Ginv @ curvature.ricci @ Ginv
    einstein = ricci_up - 0.5 * curvature.scalar * Ginv + constants.Lambda * Ginv
    A = fields.potential.value(X)
    A_up = Ginv @ A
    V = np.einsum("ja,kb,abk->j", Ginv, Ginv, tilde.components)
    tilde_up = np.einsum("ra,ib,jc,abc->rij", Ginv, Ginv, Ginv, tilde.components)
    coupling = _sym(np.outer(A_up, V)) + _sym(np.einsum("r,rij->ij", A, tilde_up)) - 0.5 * tilde.scalar * Ginv
    return -einstein + constants.k_tilde * coupling


def einstein_residual(fields: SpacetimeFields, matter: MatterState, constants: CouplingConstants,
                      X: np.ndarray) -> np.ndarray:
    """Left minus right side of the metric field equation, i.e. -(T_G + T_M)."""
    G = fields.metric.value(X)
    return -(stress_geom(fields, X, constants) + stress_matter(matter, G, constants))


def field_divergence(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """∇_j F^ji = ∂_j F^ji + Γ^j_jm F^mi + Γ^i_jm F^jm."""
    _, Ginv = metric_and_inverse(fields, X)
    dG = fields.metric.jacobian(X)
    F = em_field(fields, X)
    dF = _field_derivative(fields, X)
    dGinv = -np.einsum("ai,cij,jb->cab", Ginv, dG, Ginv)
    F_up = Ginv @ F @ Ginv
    dF_up = (np.einsum("cai,ij,jb->cab", dGinv, F, Ginv) + np.einsum("ai,cij,jb->cab", Ginv, dF, Ginv)
             + np.einsum("ai,ij,cjb->cab", Ginv, F, dGinv))
    Gamma = christoffel(fields, X)
    return (np.einsum("jji->i", dF_up) + np.einsum("jjm,mi->i", Gamma, F_up)
            + np.einsum("ijm,jm->i", Gamma, F_up))


def partial_field_divergence(fields: SpacetimeFields, X: np.ndarray) -> np.ndarray:
    """∂_j F^ji with indices raised by G⁻¹ at X only (the Galilean simplification)."""
    _, Ginv = metric_and_inverse(fields, X)
    dF_up = np.einsum("ai,cij,jb->cab", Ginv, _field_derivative(fields, X), Ginv)
    return np.einsum("jji->i", dF_up)


def curvature_coupling(fields: SpacetimeFields, X: np.ndarray, curvature: Optional[Curvature] = None) -> np.ndarray:
    """2 A_q R^qij_j = 2 A_q G^ia G^jb R^q_abj."""
    _, Ginv = metric_and_inverse(fields, X)
    curvature = riemann(fields, X) if curvature is None else curvature
    A = fields.potential.value(X)
    return 2.0 * np.einsum("q,ia,jb,qabj->i", A, Ginv, Ginv, curvature.riemann)


def maxwell_residual(fields: SpacetimeFields, matter: MatterState, constants: CouplingConstants,
                     X: np.ndarray) -> np.ndarray:
    """-k̃ [∇_j F^ji + 2 A_q R^qij_j] - κ ρ_e U^i."""
    return (-constants.k_tilde * (field_divergence(fields, X) + curvature_coupling(fields, X))
            - constants.kappa * matter.rho_e * matter.U)


def _mixed_matter_stress(fields: SpacetimeFields, matter_field: MatterField, X: np.ndarray) -> np.ndarray:
    """T^i_j = (ρ+p) U^i U_j - p δ^i_j."""
    m = matter_field.at(X)
    U_low = fields.metric.value(X) @ m.U
    return (m.rho + m.p) * np.outer(m.U, U_low) - m.p * np.eye(4)


def _mixed_divergence(fields: SpacetimeFields, T: Callable[[np.ndarray], np.ndarray], X: np.ndarray,
                      h: float) -> np.ndarray:
    """∇_i T^i_j = ∂_i T^i_j + Γ^i_im T^m_j - Γ^m_ij T^i_m."""
    Gamma = christoffel(fields, X)
    T0 = T(X)
    dT = central_difference(T, X, h)
    return (np.einsum("iij->j", dT) + np.einsum("iim,mj->j", Gamma, T0)
            - np.einsum("mij,im->j", Gamma, T0))


def matter_conservation_residual(fields: SpacetimeFields, matter_field: MatterField, X: np.ndarray,
                                 h: float = MATTER_FD_STEP) -> np.ndarray:
    """∇_i [(ρ+p) U^i U_j - p δ^i_j] - ρ_e U^k F_kj, with ∂ by central differences."""
    X = np.asarray(X, dtype=float)
    div = _mixed_divergence(fields, lambda Y: _mixed_matter_stress(fields, matter_field, Y), X, h)
    m = matter_field.at(X)
    return div - m.rho_e * m.U @ em_field(fields, X)


def charge_conservation_residual(fields: SpacetimeFields, matter_field: MatterField, X: np.ndarray,
                                 h: float = MATTER_FD_STEP) -> float:
    """∇_i (ρ_e U^i)."""
    X = np.asarray(X, dtype=float)

    def current(Y):
        m = matter_field.at(Y)
        return m.rho_e * m.U

    Gamma = christoffel(fields, X)
    return float(np.trace(central_difference(current, X, h)) + np.einsum("iim,m->", Gamma, current(X)))


def continuum_stress(fields: SpacetimeFields, matter: MatterState, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """𝒯^i_j = U^i(ρU_j - 2ρ_e A_j) + p(U^i U_j - δ^i_j) and 𝒯^i_5 = ρ_e U^i."""
    U = matter.U
    U_low = fields.metric.value(X) @ U
    A = fields.potential.value(X)
    T = np.outer(U, matter.rho * U_low - 2.0 * matter.rho_e * A) + matter.p * (np.outer(U, U_low) - np.eye(4))
    return T, matter.rho_e * U


def continuum_divergence(fields: SpacetimeFields, matter_field: MatterField, X: np.ndarray,
                         h: float = MATTER_FD_STEP) -> np.ndarray:
    """Divergence of (𝒯^i_j, 𝒯^i_5) under the Ĝ₀-connection as a 5-row.

    The first four entries equal the matter residual minus 2A_j times the charge
    residual; the fifth is the charge residual.
    """
    X = np.asarray(X, dtype=float)
    T0, J0 = continuum_stress(fields, matter_field.at(X), X)
    div_j = _mixed_divergence(fields, lambda Y: continuum_stress(fields, matter_field.at(Y), Y)[0], X, h)
    div_j = div_j - J0 @ gamma5(fields, X)
    return np.append(div_j, charge_conservation_residual(fields, matter_field, X, h))


@dataclass(frozen=True)
class NewtonianReport:
    maxwell_term: float
    coupling_term: float
    ratio: float
    galilean_divergence_gap: float
    potential_scale: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def newtonian_limit_report(fields: SpacetimeFields, matter: MatterState, constants: CouplingConstants,
                           X: np.ndarray) -> NewtonianReport:
    """Size of the Maxwell term ∇_j F^ji against the curvature coupling 2 A_q R^qij_j."""
    X = np.asarray(X, dtype=float)
    maxwell = float(np.linalg.norm(field_divergence(fields, X)))
    coupling = float(np.linalg.norm(curvature_coupling(fields, X)))
    gap = float(np.max(np.abs(field_divergence(fields, X) - partial_field_divergence(fields, X))))
    scale = float(np.max(np.abs(fields.metric.value(X) - ETA)))
    ratio = coupling / maxwell if maxwell > 0 else math.inf
    logging.debug(f"newtonian report at {X.tolist()}: maxwell {maxwell:.3g}, coupling {coupling:.3g}, "
                  f"potential scale {scale:.3g}")
    return NewtonianReport(maxwell, coupling, ratio, gap, scale)


def residual_grid(fields: SpacetimeFields, matter_field: MatterField, constants: CouplingConstants,
                  points: Iterable[np.ndarray]) -> pd.DataFrame:
    rows = []
    for X in points:
        X = np.asarray(X, dtype=float)
        matter = matter_field.at(X)
        rows.append({
            **{f"X{k}": X[k] for k in range(4)},
            "einstein": float(np.max(np.abs(einstein_residual(fields, matter, constants, X)))),
            "maxwell": float(np.max(np.abs(maxwell_residual(fields, matter, constants, X)))),
            "matter": float(np.max(np.abs(matter_conservation_residual(fields, matter_field, X)))),
            "charge": abs(charge_conservation_residual(fields, matter_field, X)),
        })
    return pd.DataFrame(rows)
