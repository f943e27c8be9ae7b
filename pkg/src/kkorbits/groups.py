"""Poincaré, Ĝ₁, Ĝ_ω and Ĝ₀ as affine matrix groups acting on ℝ⁴ / ℝ⁵.

An element acts by X' ↦ C + P X'. The 5D groups share the block structure

    P̂ = [[P, ω² β P*⁻¹ b], [b*, β]],   β = √(1 + ω² b*b),   P = P_L B

and Ĝ₀ is the ω → 0 contraction P̂ = [[P_L, 0], [b*, 1]]. Composing two Ĝ₀
elements gives b* = b₁* P₂ + b₂*, read off the block product; this law is
derived here rather than taken from a published statement.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional

import numpy as np
from scipy.spatial.transform import Rotation

from .hyperlin import AnyMetric, Metric, SemiMetric, adjoint, cross_matrix

MEMBERSHIP_TOL = 1e-12
MINKOWSKI = Metric.minkowski()
OMEGA_HAT_0 = np.array([0.0, 0.0, 0.0, 0.0, 1.0])

FlavorKind = Literal["poincare", "g1", "gomega", "g0"]
_FLAVOR_NAMES = {"poincare": "Poincare", "g1": "G1", "gomega": "GOmega", "g0": "G0"}


@lru_cache(maxsize=None)
def _flavor_metric(kind: str, omega: Optional[float]) -> AnyMetric:
    if kind == "poincare":
        return MINKOWSKI
    if kind == "g0":
        return SemiMetric(np.diag([1.0, -1.0, -1.0, -1.0, 0.0]))
    return Metric.omega(omega)


@dataclass(frozen=True)
class GroupFlavor:
    kind: FlavorKind
    omega: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _FLAVOR_NAMES:
            raise ValueError(f"unknown group flavor {self.kind!r}")
        if self.kind == "g1":
            object.__setattr__(self, "omega", 1.0)
        elif self.kind == "gomega":
            if self.omega is None or not self.omega > 0:
                raise ValueError(f"GOmega needs omega > 0, got {self.omega}")
            object.__setattr__(self, "omega", float(self.omega))
        elif self.omega is not None:
            raise ValueError(f"{_FLAVOR_NAMES[self.kind]} takes no omega")

    @classmethod
    def poincare(cls) -> "GroupFlavor":
        return cls("poincare")

    @classmethod
    def g1(cls) -> "GroupFlavor":
        return cls("g1")

    @classmethod
    def gomega(cls, omega: float) -> "GroupFlavor":
        return cls("gomega", omega)

    @classmethod
    def g0(cls) -> "GroupFlavor":
        return cls("g0")

    @property
    def name(self) -> str:
        return _FLAVOR_NAMES[self.kind]

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind in ("g1", "gomega")

    @property
    def space_dim(self) -> int:
        return 4 if self.kind == "poincare" else 5

    @property
    def dim(self) -> int:
        return 10 if self.kind == "poincare" else 15

    @property
    def metric(self) -> AnyMetric:
        return _flavor_metric(self.kind, self.omega)

    def same_group(self, other: "GroupFlavor") -> bool:
        if self.is_hyperbolic and other.is_hyperbolic:
            return self.omega == other.omega
        return self.kind == other.kind

    def to_json(self) -> dict:
        data = {"flavor": self.name}
        if self.is_hyperbolic:
            data["omega"] = self.omega
        return data

    @classmethod
    def from_json(cls, data: dict) -> "GroupFlavor":
        names = {v: k for k, v in _FLAVOR_NAMES.items()}
        if data["flavor"] not in names:
            raise ValueError(f"unknown group flavor {data['flavor']!r}")
        kind = names[data["flavor"]]
        return cls(kind, data.get("omega") if kind == "gomega" else None)


def _check_same_group(f1: GroupFlavor, f2: GroupFlavor):
    if not f1.same_group(f2):
        raise ValueError(f"flavor mismatch: {f1.name} vs {f2.name}")


def lorentz_residual(P: np.ndarray) -> float:
    return float(np.max(np.abs(adjoint(P, MINKOWSKI) @ P - np.eye(4))))


def _check_lorentz(P: np.ndarray, what: str = "P_L"):
    scale = max(1.0, float(np.max(np.abs(P)))) ** 2
    if lorentz_residual(P) > MEMBERSHIP_TOL * scale:
        raise ValueError(f"{what} is not a Lorentz transformation")
    if np.linalg.det(P) <= 0 or P[0, 0] <= 0:
        raise ValueError(f"{what} is not in the identity component")


def membership_residual(flavor: GroupFlavor, P: np.ndarray) -> float:
    """max |P*P - I| for metric flavors, deviation from the Ĝ₀ invariants otherwise."""
    P = np.asarray(P, dtype=float)
    if flavor.kind == "g0":
        g0 = flavor.metric.gram
        return float(max(np.max(np.abs(P.T @ g0 @ P - g0)), np.max(np.abs(P @ OMEGA_HAT_0 - OMEGA_HAT_0))))
    return float(np.max(np.abs(adjoint(P, flavor.metric) @ P - np.eye(flavor.space_dim))))


def check_membership(flavor: GroupFlavor, P: np.ndarray):
    n = flavor.space_dim
    if P.shape != (n, n):
        raise ValueError(f"{flavor.name} linear part must be {n}x{n}, got {P.shape}")
    scale = max(1.0, float(np.max(np.abs(P)))) ** 2
    if flavor.kind == "g0":
        if np.any(P[:4, 4] != 0.0) or P[4, 4] != 1.0:
            raise ValueError("G0 linear part must have block form [[P, 0], [b*, 1]]")
        _check_lorentz(P[:4, :4], "G0 Lorentz block")
        return
    residual = membership_residual(flavor, P)
    if residual > MEMBERSHIP_TOL * scale:
        raise ValueError(f"{flavor.name} linear part does not conserve the metric (residual {residual:.3g})")
    if np.linalg.det(P) <= 0 or P[0, 0] <= 0:
        raise ValueError(f"{flavor.name} linear part is not in the identity component")


def to_homogeneous(C: np.ndarray, P: np.ndarray, translation_row: float = 1.0) -> np.ndarray:
    n = P.shape[0]
    H = np.zeros((n + 1, n + 1))
    H[:n, :n] = P
    H[:n, n] = C
    H[n, n] = translation_row
    return H


@dataclass(frozen=True, eq=False)
class GroupElement:
    flavor: GroupFlavor
    C: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        n = self.flavor.space_dim
        C = np.array(self.C, dtype=float).reshape(-1)
        P = np.array(self.P, dtype=float)
        if C.shape != (n,):
            raise ValueError(f"{self.flavor.name} translation must have {n} components, got {C.shape}")
        check_membership(self.flavor, P)
        C.setflags(write=False)
        P.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "P", P)

    def to_homogeneous(self) -> np.ndarray:
        return to_homogeneous(self.C, self.P)

    @property
    def b(self) -> np.ndarray:
        """Boost parameter b recovered from the last row b* of P̂."""
        if self.flavor.kind == "poincare":
            return np.zeros(4)
        return MINKOWSKI.raise_(self.P[4, :4])

    @property
    def beta(self) -> float:
        return 1.0 if self.flavor.kind == "poincare" else float(self.P[4, 4])

    @property
    def xi(self) -> float:
        return 0.0 if self.flavor.kind == "poincare" else float(self.C[4])

    def to_json(self) -> dict:
        return {**self.flavor.to_json(), "C": self.C.tolist(), "P": self.P.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "GroupElement":
        return cls(GroupFlavor.from_json(data), np.asarray(data["C"]), np.asarray(data["P"]))


def lorentz_from_boost_rotation(v: np.ndarray, R: Optional[np.ndarray] = None) -> np.ndarray:
    """[[γ, γ vᵀR], [γ v, (I + γ²/(γ+1) v vᵀ) R]]."""
    v = np.asarray(v, dtype=float).reshape(3)
    R = np.eye(3) if R is None else np.asarray(R, dtype=float)
    speed2 = float(v @ v)
    if speed2 >= 1.0:
        raise ValueError(f"superluminal boost: |v| = {np.sqrt(speed2):.6g}")
    if R.shape != (3, 3) or np.max(np.abs(R.T @ R - np.eye(3))) > MEMBERSHIP_TOL or np.linalg.det(R) <= 0:
        raise ValueError("R is not a proper rotation")
    gamma = 1.0 / np.sqrt(1.0 - speed2)
    P = np.empty((4, 4))
    P[0, 0] = gamma
    P[0, 1:] = gamma * v @ R
    P[1:, 0] = gamma * v
    P[1:, 1:] = (np.eye(3) + gamma**2 / (gamma + 1.0) * np.outer(v, v)) @ R
    return P


def make_element(flavor: GroupFlavor, C: Optional[np.ndarray] = None, P_L: Optional[np.ndarray] = None,
                 b: Optional[np.ndarray] = None, xi: Optional[float] = None) -> GroupElement:
    """Canonical constructor from (C, ξ, P_L, b).

    ``C`` may be given with 4 components plus ``xi`` or with 5 components for
    the 5D flavors.
    """
    P_L = np.eye(4) if P_L is None else np.asarray(P_L, dtype=float)
    _check_lorentz(P_L)
    C = np.zeros(4) if C is None else np.asarray(C, dtype=float).reshape(-1)
    if flavor.kind == "poincare":
        if (b is not None and np.any(np.asarray(b) != 0)) or xi:
            raise ValueError("Poincare elements take no b or xi")
        return GroupElement(flavor, C, P_L)

    if C.size == 4:
        C = np.append(C, 0.0 if xi is None else float(xi))
    elif xi is not None:
        raise ValueError("xi given twice: C already has 5 components")
    b = np.zeros(4) if b is None else np.asarray(b, dtype=float).reshape(4)
    b_star = MINKOWSKI.lower(b)
    P_hat = np.zeros((5, 5))
    P_hat[4, :4] = b_star
    if flavor.kind == "g0":
        P_hat[:4, :4] = P_L
        P_hat[4, 4] = 1.0
    else:
        omega2 = flavor.omega**2
        arg = 1.0 + omega2 * float(b_star @ b)
        if arg <= 0:
            raise ValueError(f"invalid boost parameter: 1 + ω² b*b = {arg:.6g}")
        beta = np.sqrt(arg)
        B = np.eye(4) + omega2 * np.outer(b, b_star) / (beta + 1.0)
        P = P_L @ B
        P_hat[:4, :4] = P
        P_hat[:4, 4] = omega2 * beta * np.linalg.solve(adjoint(P, MINKOWSKI), b)
        P_hat[4, 4] = beta
    logging.debug(f"built {flavor.name} element with b = {b}, xi = {C[4]}")
    return GroupElement(flavor, C, P_hat)


def identity(flavor: GroupFlavor) -> GroupElement:
    n = flavor.space_dim
    return GroupElement(flavor, np.zeros(n), np.eye(n))


def compose(a1: GroupElement, a2: GroupElement) -> GroupElement:
    _check_same_group(a1.flavor, a2.flavor)
    return GroupElement(a1.flavor, a1.C + a1.P @ a2.C, a1.P @ a2.P)


def _inverse_linear(flavor: GroupFlavor, P: np.ndarray) -> np.ndarray:
    if flavor.kind == "g0":
        L_inv = adjoint(P[:4, :4], MINKOWSKI)
        P_inv = np.zeros((5, 5))
        P_inv[:4, :4] = L_inv
        P_inv[4, :4] = -P[4, :4] @ L_inv
        P_inv[4, 4] = 1.0
        return P_inv
    return adjoint(P, flavor.metric)


def inverse(a: GroupElement) -> GroupElement:
    P_inv = _inverse_linear(a.flavor, a.P)
    return GroupElement(a.flavor, -P_inv @ a.C, P_inv)


def random_element(flavor: GroupFlavor, rng: np.random.Generator, max_speed: float = 0.9,
                   b_scale: float = 0.5) -> GroupElement:
    direction = rng.normal(size=3)
    v = rng.uniform(0.0, max_speed) * direction / np.linalg.norm(direction)
    R = Rotation.from_quat(rng.normal(size=4)).as_matrix()
    P_L = lorentz_from_boost_rotation(v, R)
    C = rng.uniform(-1.0, 1.0, size=4)
    if flavor.kind == "poincare":
        return make_element(flavor, C, P_L)
    b = rng.uniform(-b_scale, b_scale, size=4)
    return make_element(flavor, C, P_L, b, xi=float(rng.uniform(-1.0, 1.0)))


def restrict_to_spacetime(a: GroupElement, tol: float = MEMBERSHIP_TOL) -> GroupElement:
    """Upper 4x4/4-block of a 5D element without boost parameter, as a Poincaré element."""
    if a.flavor.kind == "poincare":
        return a
    if np.max(np.abs(a.b)) > tol:
        raise ValueError("restriction to space-time needs b = 0")
    return GroupElement(GroupFlavor.poincare(), a.C[:4], a.P[:4, :4])


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    flavor: GroupFlavor
    dC: np.ndarray
    dP: np.ndarray

    def __post_init__(self):
        n = self.flavor.space_dim
        dC = np.array(self.dC, dtype=float).reshape(-1)
        dP = np.array(self.dP, dtype=float)
        if dC.shape != (n,) or dP.shape != (n, n):
            raise ValueError(f"{self.flavor.name} algebra element needs shapes ({n},) and ({n}, {n})")
        scale = max(1.0, float(np.max(np.abs(dP))))
        if self.flavor.kind == "g0":
            if np.any(dP[:, 4] != 0.0):
                raise ValueError("G0 algebra element must have block form [[dP, 0], [db*, 0]]")
            lowered = MINKOWSKI.gram @ dP[:4, :4]
        else:
            lowered = self.flavor.metric.gram @ dP
        if np.max(np.abs(lowered + lowered.T)) > MEMBERSHIP_TOL * scale:
            raise ValueError(f"{self.flavor.name} algebra element is not skew-adjoint")
        dC.setflags(write=False)
        dP.setflags(write=False)
        object.__setattr__(self, "dC", dC)
        object.__setattr__(self, "dP", dP)

    def to_homogeneous(self) -> np.ndarray:
        return to_homogeneous(self.dC, self.dP, translation_row=0.0)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.dC, self.dP.ravel()])


def lorentz_generators() -> list[np.ndarray]:
    """Boosts K_1..K_3 then rotations L_1..L_3."""
    gens = []
    for a in range(1, 4):
        K = np.zeros((4, 4))
        K[0, a] = K[a, 0] = 1.0
        gens.append(K)
    for a in range(3):
        L = np.zeros((4, 4))
        L[1:, 1:] = cross_matrix(np.eye(3)[a])
        gens.append(L)
    return gens


def algebra_basis(flavor: GroupFlavor) -> list[AlgebraElement]:
    """Translations, Lorentz generators, then (5D flavors) the four δb directions."""
    n = flavor.space_dim
    basis = [AlgebraElement(flavor, np.eye(n)[k], np.zeros((n, n))) for k in range(n)]
    for gen in lorentz_generators():
        dP = np.zeros((n, n))
        dP[:4, :4] = gen
        basis.append(AlgebraElement(flavor, np.zeros(n), dP))
    if n == 5:
        for k in range(4):
            db = np.eye(4)[k]
            dP = np.zeros((5, 5))
            dP[4, :4] = MINKOWSKI.lower(db)
            if flavor.is_hyperbolic:
                dP[:4, 4] = flavor.omega**2 * db
            basis.append(AlgebraElement(flavor, np.zeros(5), dP))
    return basis


def conjugate(C: np.ndarray, P: np.ndarray, P_inv: np.ndarray, dC: np.ndarray, dP: np.ndarray):
    """(δC, δP) of a Z a⁻¹ for a = (C, P) on raw matrices."""
    dP_new = P @ dP @ P_inv
    return P @ dC - dP_new @ C, dP_new


def adjoint_action(a: GroupElement, Z: AlgebraElement) -> AlgebraElement:
    """Ad(a) Z = a Z a⁻¹."""
    _check_same_group(a.flavor, Z.flavor)
    dC, dP = conjugate(a.C, a.P, _inverse_linear(a.flavor, a.P), Z.dC, Z.dP)
    return AlgebraElement(Z.flavor, dC, dP)
