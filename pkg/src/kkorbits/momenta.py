"""Momenta of the Poincaré, Ĝ₁, Ĝ_ω and Ĝ₀ groups and their coadjoint orbits.

A momentum pairs with an algebra element Z = (δC, δP) as

    μ(Z) = -Π*δC - ½ Tr(M δP) - q δξ - Q*δb

(the last two terms only for the 5D flavors). For Ĝ_ω the same momentum is
the 5D pair Π̂ = (Π, -q/ω²), M̂ = [[M, Q], [ω⁻² Q*, 0]], so that
Π̂* = [Π*, q] and the pairing reads -Π̂*δĈ - ½ Tr(M̂ δP̂).

The pairing oracle (evaluate the definition of Ad* on the full algebra basis
and solve for the components) is the reference; closed-form actions are
checked against it.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.linalg import svdvals

from .errors import NumericalError
from .groups import (MINKOWSKI, GroupElement, GroupFlavor, algebra_basis, conjugate, inverse,
                     make_element)
from .hyperlin import KForm, Metric, adjoint, hodge, hodge_skew, matrix_rank, vector_product_map

SKEW_TOL = 1e-12
ORACLE_TOL = 1e-9
_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _star(G: Metric, v: np.ndarray) -> np.ndarray:
    return G.lower(v)


def _outer_star(G: Metric, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """u v*"""
    return np.outer(u, G.lower(v))


@dataclass(frozen=True, eq=False)
class Momentum:
    flavor: GroupFlavor
    Pi: np.ndarray
    M: np.ndarray
    q: float = 0.0
    Q: Optional[np.ndarray] = None

    def __post_init__(self):
        Pi = np.array(self.Pi, dtype=float).reshape(-1)
        M = np.array(self.M, dtype=float)
        Q = np.zeros(4) if self.Q is None else np.array(self.Q, dtype=float).reshape(-1)
        if Pi.shape != (4,) or M.shape != (4, 4) or Q.shape != (4,):
            raise ValueError(f"momentum needs Pi (4,), M (4, 4), Q (4,); got {Pi.shape}, {M.shape}, {Q.shape}")
        lowered = MINKOWSKI.gram @ M
        scale = max(1.0, float(np.max(np.abs(M))))
        if np.max(np.abs(lowered + lowered.T)) > SKEW_TOL * scale:
            raise ValueError("M must be skew-adjoint with respect to the Minkowski metric")
        if self.flavor.kind == "poincare" and (self.q != 0.0 or np.any(Q != 0.0)):
            raise ValueError("Poincare momenta carry q = 0 and Q = 0")
        for arr in (Pi, M, Q):
            arr.setflags(write=False)
        object.__setattr__(self, "Pi", Pi)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", float(self.q))

    @property
    def pi_hat(self) -> np.ndarray:
        """Contravariant 5-vector (Π, -q/ω²) of a Ĝ_ω momentum."""
        self._require_hyperbolic()
        return np.append(self.Pi, -self.q / self.flavor.omega**2)

    @property
    def M_hat(self) -> np.ndarray:
        self._require_hyperbolic()
        M_hat = np.zeros((5, 5))
        M_hat[:4, :4] = self.M
        M_hat[:4, 4] = self.Q
        M_hat[4, :4] = MINKOWSKI.lower(self.Q) / self.flavor.omega**2
        return M_hat

    def _require_hyperbolic(self):
        if not self.flavor.is_hyperbolic:
            raise ValueError(f"5D momentum form needs a G1/GOmega flavor, got {self.flavor.name}")

    @classmethod
    def from_5d(cls, flavor: GroupFlavor, pi_hat: np.ndarray, M_hat: np.ndarray) -> "Momentum":
        if not flavor.is_hyperbolic:
            raise ValueError(f"5D momentum form needs a G1/GOmega flavor, got {flavor.name}")
        pi_hat = np.asarray(pi_hat, dtype=float)
        M_hat = np.asarray(M_hat, dtype=float)
        return cls(flavor, pi_hat[:4], M_hat[:4, :4], -flavor.omega**2 * pi_hat[4], M_hat[:4, 4])

    def to_json(self) -> dict:
        return {**self.flavor.to_json(), "Pi": self.Pi.tolist(), "q": self.q,
                "M": self.M.tolist(), "Q": self.Q.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "Momentum":
        return cls(GroupFlavor.from_json(data), np.asarray(data["Pi"]), np.asarray(data["M"]),
                   float(data.get("q", 0.0)), np.asarray(data.get("Q", np.zeros(4))))


def n_coordinates(flavor: GroupFlavor) -> int:
    return flavor.dim


def to_coordinates(mu: Momentum) -> np.ndarray:
    """(Π, six entries of the lowered M, q, Q)."""
    lowered = MINKOWSKI.gram @ mu.M
    coords = [mu.Pi, [lowered[i, j] for i, j in _PAIRS]]
    if mu.flavor.space_dim == 5:
        coords += [[mu.q], mu.Q]
    return np.concatenate(coords)


def from_coordinates(flavor: GroupFlavor, x: np.ndarray) -> Momentum:
    x = np.asarray(x, dtype=float)
    if x.shape != (flavor.dim,):
        raise ValueError(f"{flavor.name} momentum has {flavor.dim} coordinates, got {x.shape}")
    lowered = np.zeros((4, 4))
    for k, (i, j) in enumerate(_PAIRS):
        lowered[i, j] = x[4 + k]
        lowered[j, i] = -x[4 + k]
    M = MINKOWSKI.raise_(lowered)
    if flavor.space_dim == 4:
        return Momentum(flavor, x[:4], M)
    return Momentum(flavor, x[:4], M, x[10], x[11:15])


def _pair_raw(mu: Momentum, dC: np.ndarray, dP: np.ndarray) -> float:
    flavor = mu.flavor
    if flavor.is_hyperbolic:
        G = flavor.metric
        return float(-_star(G, mu.pi_hat) @ dC - 0.5 * np.trace(mu.M_hat @ dP))
    value = -MINKOWSKI.lower(mu.Pi) @ dC[:4] - 0.5 * np.trace(mu.M @ dP[:4, :4])
    if flavor.kind == "g0":
        db = MINKOWSKI.raise_(dP[4, :4])
        value += -mu.q * dC[4] - MINKOWSKI.lower(mu.Q) @ db
    return float(value)


def pair(mu: Momentum, Z) -> float:
    """μ(Z) = -Π*δC - ½Tr(MδP) - qδξ - Q*δb."""
    if not mu.flavor.same_group(Z.flavor):
        raise ValueError(f"flavor mismatch: {mu.flavor.name} vs {Z.flavor.name}")
    return _pair_raw(mu, Z.dC, Z.dP)


@lru_cache(maxsize=None)
def _pairing_system(flavor: GroupFlavor):
    basis = algebra_basis(flavor)
    n = flavor.dim
    K = np.empty((n, n))
    for j in range(n):
        unit = from_coordinates(flavor, np.eye(n)[j])
        for i, Z in enumerate(basis):
            K[i, j] = _pair_raw(unit, Z.dC, Z.dP)
    K.setflags(write=False)
    return basis, K


def _coadjoint_raw(mu: Momentum, C: np.ndarray, P: np.ndarray, P_inv: np.ndarray) -> np.ndarray:
    """Coordinates of Ad*(a)μ for a = (C, P), from (Ad*(a)μ)(Z) = μ(Ad(a⁻¹)Z)."""
    basis, K = _pairing_system(mu.flavor)
    C_inv = -P_inv @ C
    rhs = np.array([_pair_raw(mu, *conjugate(C_inv, P_inv, P, Z.dC, Z.dP)) for Z in basis])
    try:
        return np.linalg.solve(K, rhs)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"singular reconstruction system for {mu.flavor.name}: {e}") from e


def coadjoint_oracle(a: GroupElement, mu: Momentum) -> Momentum:
    if not a.flavor.same_group(mu.flavor):
        raise ValueError(f"flavor mismatch: {a.flavor.name} vs {mu.flavor.name}")
    coords = _coadjoint_raw(mu, a.C, a.P, inverse(a).P)
    return from_coordinates(mu.flavor, coords)


def coadjoint_closed(a: GroupElement, mu: Momentum) -> Momentum:
    """Closed-form coadjoint action for each flavor."""
    if not a.flavor.same_group(mu.flavor):
        raise ValueError(f"flavor mismatch: {a.flavor.name} vs {mu.flavor.name}")
    G = MINKOWSKI
    if mu.flavor.kind == "poincare":
        Pi = a.P @ mu.Pi
        M = a.P @ mu.M @ adjoint(a.P, G) + _outer_star(G, a.C, Pi) - _outer_star(G, Pi, a.C)
        return Momentum(mu.flavor, Pi, M)
    if mu.flavor.kind == "g0":
        P, C, b = a.P[:4, :4], a.C[:4], a.b
        Pi = P @ (mu.Pi - mu.q * b)
        Pb, PQ = P @ b, P @ mu.Q
        M = (P @ mu.M @ adjoint(P, G) + _outer_star(G, C, Pi) - _outer_star(G, Pi, C)
             + _outer_star(G, Pb, PQ) - _outer_star(G, PQ, Pb))
        return Momentum(mu.flavor, Pi, M, mu.q, PQ + mu.q * C)
    G5 = mu.flavor.metric
    pi_hat = a.P @ mu.pi_hat
    M_hat = (a.P @ mu.M_hat @ adjoint(a.P, G5) + _outer_star(G5, a.C, pi_hat)
             - _outer_star(G5, pi_hat, a.C))
    return Momentum.from_5d(mu.flavor, pi_hat, M_hat)


_CLOSED_FORM_NAMES = {
    "poincare": "Π = PΠ', M = PM'P* + CΠ* - ΠC*",
    "g0": "Π = P(Π' - q'b), M = PM'P* + CΠ* - ΠC* + (Pb)(PQ')* - (PQ')(Pb)*, q = q', Q = PQ' + q'C",
    "g1": "Π̂ = P̂Π̂', M̂ = P̂M̂'P̂* + ĈΠ̂* - Π̂Ĉ*",
    "gomega": "Π̂ = P̂Π̂', M̂ = P̂M̂'P̂* + ĈΠ̂* - Π̂Ĉ*",
}


def momentum_distance(mu1: Momentum, mu2: Momentum) -> float:
    return float(np.max(np.abs(to_coordinates(mu1) - to_coordinates(mu2))))


def coadjoint(a: GroupElement, mu: Momentum, tol: float = ORACLE_TOL) -> Momentum:
    """Closed-form action, cross-checked against the pairing oracle.

    The oracle result is returned instead when the two disagree.
    """
    oracle = coadjoint_oracle(a, mu)
    closed = coadjoint_closed(a, mu)
    scale = max(1.0, float(np.max(np.abs(to_coordinates(oracle)))))
    err = momentum_distance(oracle, closed)
    if err > tol * scale:
        logging.warning(f"closed form {_CLOSED_FORM_NAMES[mu.flavor.kind]} disagrees with the pairing oracle "
                        f"by {err:.3g}; using the oracle")
        return oracle
    return closed


@dataclass(frozen=True)
class ItemizedLaw:
    """Displayed itemized Ĝ_ω laws next to the matrix action.

    The displayed laws use the contravariant fifth component q̂ = Π̂⁵ = -q/ω²:
    Π = PΠ' + ω² q̂' β P*⁻¹ b and q̂ = b*Π + β q̂' with the transformed Π.
    """
    pi_displayed: np.ndarray
    fifth_displayed: float
    pi_matrix: np.ndarray
    fifth_matrix: float
    pi_agrees: bool
    fifth_agrees: bool


def itemized_coadjoint(a: GroupElement, mu: Momentum, tol: float = ORACLE_TOL) -> ItemizedLaw:
    if not mu.flavor.is_hyperbolic:
        raise ValueError(f"itemized laws are stated for G1/GOmega, got {mu.flavor.name}")
    omega2 = mu.flavor.omega**2
    P, beta, b = a.P[:4, :4], a.beta, a.b
    fifth_prime = mu.pi_hat[4]
    pi_displayed = P @ mu.Pi + omega2 * fifth_prime * beta * np.linalg.solve(adjoint(P, MINKOWSKI), b)
    fifth_displayed = float(MINKOWSKI.lower(b) @ pi_displayed + beta * fifth_prime)
    pi_hat = a.P @ mu.pi_hat
    pi_agrees = bool(np.max(np.abs(pi_displayed - pi_hat[:4])) <= tol * max(1.0, np.max(np.abs(pi_hat))))
    fifth_agrees = bool(abs(fifth_displayed - pi_hat[4]) <= tol * max(1.0, abs(pi_hat[4])))
    if not pi_agrees:
        logging.warning(f"displayed law Π = PΠ' + ω²q'βP*⁻¹b disagrees with the matrix action: "
                        f"{pi_displayed} vs {pi_hat[:4]}")
    if not fifth_agrees:
        logging.warning(f"displayed law q = b*Π + βq' disagrees with the matrix action: "
                        f"{fifth_displayed:.10g} vs {pi_hat[4]:.10g}")
    return ItemizedLaw(pi_displayed, fifth_displayed, pi_hat[:4], float(pi_hat[4]), pi_agrees, fifth_agrees)


def _space(mu: Momentum):
    if mu.flavor.is_hyperbolic:
        return mu.flavor.metric, mu.pi_hat, mu.M_hat
    return MINKOWSKI, mu.Pi, mu.M


def spin_momentum(mu: Momentum, X: Optional[np.ndarray] = None, charge_form: bool = False) -> np.ndarray:
    """M₀ = M + ΠX* - XΠ* (5D analogue for Ĝ₁/Ĝ_ω).

    ``charge_form`` uses the Ĝ₀ expression M₀ = M + (1/q)(ΠQ* - QΠ*).
    """
    if charge_form:
        if mu.flavor.kind != "g0":
            raise ValueError("charge form of the spin momentum is defined for G0")
        if mu.q == 0.0:
            raise ValueError("spin form undefined, use X-form")
        return mu.M + (_outer_star(MINKOWSKI, mu.Pi, mu.Q) - _outer_star(MINKOWSKI, mu.Q, mu.Pi)) / mu.q
    G, Pi, M = _space(mu)
    X = np.zeros(G.dim) if X is None else np.asarray(X, dtype=float)
    if X.shape != (G.dim,):
        raise ValueError(f"X must have {G.dim} components")
    return M + _outer_star(G, Pi, X) - _outer_star(G, X, Pi)


def _require_timelike(G: Metric, Pi: np.ndarray) -> float:
    m2 = G.dot(Pi, Pi)
    if not m2 > 0:
        raise ValueError("classification requires timelike Π")
    return m2


def trajectory_line(mu: Momentum, tol: float = ORACLE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Point and unit direction of the line M₀(X)Π = 0, parallel to Π."""
    G, Pi, M = _space(mu)
    m2 = _require_timelike(G, Pi)
    point = M @ Pi / m2
    residual = np.max(np.abs(spin_momentum(mu, point) @ Pi))
    logging.debug(f"trajectory line residual {residual:.3g}")
    scale = max(1.0, float(np.max(np.abs(M))) * float(np.max(np.abs(Pi))))
    if residual > tol * scale:
        raise NumericalError(f"trajectory line residual {residual:.3g} exceeds {tol:.1g}")
    return point, Pi / np.sqrt(m2)


def polarization(mu: Momentum) -> np.ndarray:
    """W = (*M)Π."""
    if mu.flavor.is_hyperbolic:
        raise ValueError("4D polarization is defined for Poincare and G0; use polarization_map")
    _require_timelike(MINKOWSKI, mu.Pi)
    return hodge_skew(mu.M, MINKOWSKI) @ mu.Pi


def polarization_map(mu: Momentum, V: np.ndarray) -> np.ndarray:
    """pol(V) = (*A_M̂(Π̂, V))* with A_M̂ = Ĝ M̂."""
    if mu.flavor.kind == "g0":
        raise ValueError("Hodge undefined for degenerate metric")
    if not mu.flavor.is_hyperbolic:
        raise ValueError("polarization map is defined for G1/GOmega")
    G = mu.flavor.metric
    pi_hat = mu.pi_hat
    _require_timelike(G, pi_hat)
    star = hodge(KForm(2, G.gram @ mu.M_hat), G)
    return G.raise_(star.evaluate(pi_hat, np.asarray(V, dtype=float)).comps)


def polarization_matrix(mu: Momentum) -> np.ndarray:
    return np.column_stack([polarization_map(mu, e) for e in np.eye(5)])


def polarization_plane(mu: Momentum, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Ĝ_ω-orthonormal basis of the image of the polarization map (Gram-Schmidt)."""
    W = polarization_matrix(mu)
    G = mu.flavor.metric
    if matrix_rank(W.T, tol) == 0:
        raise ValueError("no polarization plane: spin is zero")
    images = sorted(W.T, key=lambda c: -np.linalg.norm(c))
    basis: list[np.ndarray] = []
    for c in images:
        w = c.copy()
        for u in basis:
            w = w - G.dot(w, u) / G.dot(u, u) * u
        if np.linalg.norm(w) > tol * np.linalg.norm(c):
            basis.append(w / np.sqrt(abs(G.dot(w, w))))
        if len(basis) == 2:
            return basis[0], basis[1]
    raise NumericalError("polarization map image has rank < 2")


def plane_projector(u1: np.ndarray, u2: np.ndarray, G: Metric) -> np.ndarray:
    """G-orthogonal projector onto span(u1, u2) for G-orthogonal u1, u2."""
    return sum(_outer_star(G, u, u) / G.dot(u, u) for u in (u1, u2))


@dataclass(frozen=True)
class Invariants:
    m0: float
    s: float
    q: Optional[float] = None
    spin_pseudoscalar: Optional[float] = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def invariants(mu: Momentum) -> Invariants:
    """Rest mass and spin (and charge for Ĝ₀).

    For charged Ĝ₀ momenta the spin is read from the charge-form spin momentum
    M₀, whose Lorentz invariants are orbit invariants; m₀ = √(Π*Π) is reported
    but changes with the b-part of the group since Π ↦ P(Π - qb).
    """
    if mu.flavor.is_hyperbolic:
        G = mu.flavor.metric
        m0 = np.sqrt(_require_timelike(G, mu.pi_hat))
        W = polarization_matrix(mu)
        s = np.sqrt(max(-0.5 * np.trace(W @ W), 0.0)) / m0
        return Invariants(float(m0), float(s))
    m0 = np.sqrt(_require_timelike(MINKOWSKI, mu.Pi))
    if mu.flavor.kind == "g0" and mu.q != 0.0:
        M0 = spin_momentum(mu, charge_form=True)
        s = np.sqrt(max(-0.5 * np.trace(M0 @ M0), 0.0))
        pseudo = float(np.trace(M0 @ hodge_skew(M0, MINKOWSKI)))
        return Invariants(float(m0), float(s), mu.q, pseudo)
    W = polarization(mu)
    s = np.sqrt(max(-MINKOWSKI.dot(W, W), 0.0)) / m0
    return Invariants(float(m0), float(s), mu.q if mu.flavor.kind == "g0" else None)


def casimirs(mu: Momentum) -> tuple[float, float]:
    """C₂ = Π*Π and C₄ = W*W."""
    W = polarization(mu)
    return MINKOWSKI.dot(mu.Pi, mu.Pi), MINKOWSKI.dot(W, W)


def _approx_exp(dC: np.ndarray, dP: np.ndarray, t: float):
    P = np.eye(dP.shape[0]) + t * dP + 0.5 * t**2 * dP @ dP
    C = t * dC + 0.5 * t**2 * dP @ dC
    return C, P, np.linalg.inv(P)


def coadjoint_derivative(mu: Momentum, t: float = 1e-5) -> np.ndarray:
    """Columns d/dt|₀ Ad*(exp tZ)μ over the algebra basis, by central differences."""
    basis, _ = _pairing_system(mu.flavor)
    columns = []
    for Z in basis:
        plus = _coadjoint_raw(mu, *_approx_exp(Z.dC, Z.dP, t))
        minus = _coadjoint_raw(mu, *_approx_exp(Z.dC, Z.dP, -t))
        columns.append((plus - minus) / (2.0 * t))
    return np.column_stack(columns)


def isotropy_dimension(mu: Momentum, t: float = 1e-5, tol: float = 1e-8) -> int:
    D = coadjoint_derivative(mu, t)
    sigma = svdvals(D)
    if sigma[0] == 0.0:
        return mu.flavor.dim
    normalized = sigma / sigma[0]
    logging.debug(f"isotropy spectrum for {mu.flavor.name}: {np.array2string(normalized, precision=3)}")
    if np.any((normalized >= tol) & (normalized < 10.0 * tol)):
        raise NumericalError("inconclusive rank")
    return mu.flavor.dim - int(np.sum(normalized >= tol))


def orbit_dimension(mu: Momentum, **kwargs) -> int:
    return mu.flavor.dim - isotropy_dimension(mu, **kwargs)


ParticleTag = Literal["charged-with-spin", "charged-spinless", "uncharged-with-spin", "uncharged-spinless",
                      "non-timelike"]


@dataclass(frozen=True)
class ParticleClass:
    tag: ParticleTag
    invariants: Optional[Invariants] = None

    def to_json(self) -> dict:
        data: dict = {"class": self.tag}
        if self.invariants is not None:
            data["invariants"] = self.invariants.to_json()
        return data


def classify(mu: Momentum, tol: float = 1e-9) -> ParticleClass:
    try:
        inv = invariants(mu)
    except ValueError:
        return ParticleClass("non-timelike")
    charged = abs(mu.q) > tol
    spinning = inv.s > tol
    tag = f"{'charged' if charged else 'uncharged'}-{'with-spin' if spinning else 'spinless'}"
    return ParticleClass(tag, inv)


def q_position_consistency(mu: Momentum, X: np.ndarray, tol: float = 1e-9) -> bool:
    """Q = qX."""
    return bool(np.linalg.norm(mu.Q - mu.q * np.asarray(X, dtype=float)) < tol)


def _check_frame(G: Metric, I: np.ndarray, Js: Sequence[np.ndarray], tol: float = 1e-10):
    if abs(G.dot(I, I) - 1.0) > tol:
        raise ValueError("I must be a unit timelike vector")
    for k, J in enumerate(Js):
        if abs(G.dot(J, J) + 1.0) > tol or abs(G.dot(I, J)) > tol:
            raise ValueError("J vectors must be unit spacelike and orthogonal to I")
        for J2 in Js[k + 1:]:
            if abs(G.dot(J, J2)) > tol:
                raise ValueError("J vectors must be mutually orthogonal")


def momentum_from_worldline(flavor: GroupFlavor, X: np.ndarray, I: np.ndarray, J: np.ndarray, s: float,
                            m0: float, q: float = 0.0) -> Momentum:
    """Π = m₀I, M₀ = sJ(I, J), M = M₀ - ΠX* + XΠ*, Q = qX."""
    if flavor.space_dim != 4 and flavor.kind != "g0":
        raise ValueError("use momentum_from_worldline_5d for G1/GOmega")
    X, I, J = (np.asarray(v, dtype=float) for v in (X, I, J))
    _check_frame(MINKOWSKI, I, [J])
    Pi = m0 * I
    M0 = s * vector_product_map([I, J], MINKOWSKI)
    M = M0 - _outer_star(MINKOWSKI, Pi, X) + _outer_star(MINKOWSKI, X, Pi)
    if flavor.kind == "poincare":
        if q:
            raise ValueError("Poincare momenta carry no charge")
        return Momentum(flavor, Pi, M)
    return Momentum(flavor, Pi, M, q, q * X)


def momentum_from_worldline_5d(flavor: GroupFlavor, X_hat: np.ndarray, I_hat: np.ndarray, J1: np.ndarray,
                               J2: np.ndarray, s: float, m0: float) -> Momentum:
    """Π̂ = m₀Î, M̂₀ = sJ(Î, Ĵ₁, Ĵ₂), M̂ = M̂₀ - Π̂X̂* + X̂Π̂*."""
    G = flavor.metric
    if not flavor.is_hyperbolic:
        raise ValueError("5D worldline momenta need a G1/GOmega flavor")
    X_hat, I_hat, J1, J2 = (np.asarray(v, dtype=float) for v in (X_hat, I_hat, J1, J2))
    _check_frame(G, I_hat, [J1, J2])
    pi_hat = m0 * I_hat
    M0 = s * vector_product_map([I_hat, J1, J2], G)
    M_hat = M0 - _outer_star(G, pi_hat, X_hat) + _outer_star(G, X_hat, pi_hat)
    return Momentum.from_5d(flavor, pi_hat, M_hat)


def omega_sweep(b: np.ndarray, P_L: np.ndarray, mu_template: dict, omegas: Sequence[float]) -> pd.DataFrame:
    """Charge and mass response of a fixed (b, P_L) action as ω runs down to the Ĝ₀ contraction.

    ``mu_template`` holds the components Pi, M, q, Q reused for every flavor.
    """
    rows = []
    flavors = [GroupFlavor.gomega(w) for w in omegas] + [GroupFlavor.g0()]
    for flavor in flavors:
        mu = Momentum(flavor, mu_template["Pi"], mu_template.get("M", np.zeros((4, 4))),
                      mu_template.get("q", 0.0), mu_template.get("Q"))
        a = make_element(flavor, P_L=P_L, b=b)
        out = coadjoint(a, mu)
        if flavor.kind == "g0":
            m0_in = np.sqrt(max(MINKOWSKI.dot(mu.Pi, mu.Pi), 0.0))
            m0_out = np.sqrt(max(MINKOWSKI.dot(out.Pi, out.Pi), 0.0))
            fifth_displayed = fifth_matrix = np.nan
        else:
            G = flavor.metric
            m0_in = np.sqrt(max(G.dot(mu.pi_hat, mu.pi_hat), 0.0))
            m0_out = np.sqrt(max(G.dot(out.pi_hat, out.pi_hat), 0.0))
            law = itemized_coadjoint(a, mu)
            fifth_displayed, fifth_matrix = law.fifth_displayed, law.fifth_matrix
        logging.debug(f"sweep {flavor.name} omega={flavor.omega}: q {mu.q} -> {out.q}")
        rows.append({
            "omega": 0.0 if flavor.kind == "g0" else flavor.omega,
            "flavor": flavor.name,
            "q_in": mu.q,
            "q_out": out.q,
            "dq": out.q - mu.q,
            "m0_in": m0_in,
            "m0_out": m0_out,
            "m0_drift": m0_out - m0_in,
            "fifth_displayed_law": fifth_displayed,
            "fifth_matrix": fifth_matrix,
            "isotropy_dimension": isotropy_dimension(mu),
        })
    return pd.DataFrame(rows)
