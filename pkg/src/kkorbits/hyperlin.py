"""Linear algebra over (pseudo-)Euclidean spaces of dimension 3 to 5.

Adjoints with respect to Gram matrices, volume forms, the generalized vector
product of ``n - 1`` vectors and the Hodge operator on dense antisymmetric
component arrays.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import svdvals

SYMMETRY_TOL = 1e-14
DEGENERACY_TOL = 1e-12
ANTISYMMETRY_TOL = 1e-12
RANK_TOL = 1e-10
SUPPORTED_DIMS = (3, 4, 5)


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _levi_civita(n: int) -> np.ndarray:
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        eps[perm] = permutation_sign(perm)
    eps.setflags(write=False)
    return eps


def levi_civita(n: int) -> np.ndarray:
    """Levi-Civita symbol with ``eps[0, 1, ..., n-1] = 1`` (read-only)."""
    return _levi_civita(n)


def cross_matrix(u: np.ndarray) -> np.ndarray:
    """``j(u)`` with ``j(u) @ v == np.cross(u, v)``."""
    u = np.asarray(u, dtype=float)
    return np.array([
        [0.0, -u[2], u[1]],
        [u[2], 0.0, -u[0]],
        [-u[1], u[0], 0.0],
    ])


def matrix_rank(vectors: Sequence[np.ndarray], tol: float = RANK_TOL) -> int:
    stacked = np.atleast_2d(np.asarray(vectors, dtype=float))
    sigma = svdvals(stacked)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma / sigma[0] > tol))


@dataclass(frozen=True, eq=False)
class Metric:
    gram: np.ndarray
    orientation: int = 1
    declared_signature: Optional[tuple[int, int]] = None

    def __post_init__(self):
        gram = np.array(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] not in SUPPORTED_DIMS:
            raise ValueError(f"Gram matrix must be square of dimension 3, 4 or 5, got shape {gram.shape}")
        scale = max(1.0, float(np.max(np.abs(gram))))
        if np.max(np.abs(gram - gram.T)) > SYMMETRY_TOL * scale:
            raise ValueError("Gram matrix is not symmetric")
        if abs(np.linalg.det(gram)) <= DEGENERACY_TOL:
            raise ValueError("Gram matrix is degenerate, use SemiMetric")
        if self.orientation not in (1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {self.orientation}")
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        if self.declared_signature is not None:
            declared = tuple(int(x) for x in self.declared_signature)
            object.__setattr__(self, "declared_signature", declared)
            if declared != self.signature:
                raise ValueError(f"declared signature {declared} does not match computed {self.signature}")

    @classmethod
    def minkowski(cls, orientation: int = 1) -> "Metric":
        return cls(np.diag([1.0, -1.0, -1.0, -1.0]), orientation, (1, 3))

    @classmethod
    def euclidean(cls, dim: int = 3) -> "Metric":
        return cls(np.eye(dim), 1, (dim, 0))

    @classmethod
    def omega(cls, omega: float) -> "Metric":
        """5D metric diag(1, -1, -1, -1, -omega^2)."""
        if omega <= 0:
            raise ValueError(f"omega must be positive, got {omega}")
        return cls(np.diag([1.0, -1.0, -1.0, -1.0, -omega**2]), 1, (1, 4))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.linalg.inv(self.gram)
        inv.setflags(write=False)
        return inv

    @cached_property
    def signature(self) -> tuple[int, int]:
        eig = np.linalg.eigvalsh(self.gram)
        p = int(np.sum(eig > 0))
        return p, self.dim - p

    @property
    def sign(self) -> int:
        """(-1)^(n-p), the sign of det G."""
        return -1 if self.signature[1] % 2 else 1

    def lower(self, v: np.ndarray) -> np.ndarray:
        return self.gram @ np.asarray(v, dtype=float)

    def raise_(self, w: np.ndarray) -> np.ndarray:
        return self.inverse @ np.asarray(w, dtype=float)

    def dot(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.asarray(u, dtype=float) @ self.gram @ np.asarray(v, dtype=float))

    def to_json(self) -> dict:
        return {"dim": self.dim, "gram": self.gram.tolist(), "orientation": self.orientation}

    @classmethod
    def from_json(cls, data: dict) -> "Metric":
        gram = np.asarray(data["gram"], dtype=float)
        if gram.shape != (data["dim"], data["dim"]):
            raise ValueError(f"gram shape {gram.shape} does not match dim {data['dim']}")
        return cls(gram, int(data.get("orientation", 1)))


@dataclass(frozen=True, eq=False)
class SemiMetric:
    """Degenerate symmetric tensor, e.g. diag(1, -1, -1, -1, 0). Has no inverse and no Hodge operator."""
    gram: np.ndarray

    def __post_init__(self):
        gram = np.array(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {gram.shape}")
        if np.max(np.abs(gram - gram.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(gram)))):
            raise ValueError("Gram matrix is not symmetric")
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def preserved_by(self, P: np.ndarray, tol: float = 1e-12) -> bool:
        P = np.asarray(P, dtype=float)
        return bool(np.max(np.abs(P.T @ self.gram @ P - self.gram)) < tol)

    def to_json(self) -> dict:
        return {"dim": self.dim, "gram": self.gram.tolist(), "degenerate": True}


AnyMetric = Union[Metric, SemiMetric]


def adjoint_map(A: np.ndarray, G0: Optional[AnyMetric], G: AnyMetric) -> np.ndarray:
    """A* = G0^-1 A^T G for A mapping the G0-space into the G-space.

    A 1D array is read as a column vector, the source being the real line with
    its unit metric, so that ``adjoint_map(U, None, G)`` lowers ``U``.
    """
    if isinstance(G, SemiMetric) or isinstance(G0, SemiMetric):
        raise ValueError("adjoint undefined for semi-metric")
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        return A @ G.gram
    g0_inv = np.eye(A.shape[1]) if G0 is None else G0.inverse
    return g0_inv @ A.T @ G.gram


def adjoint(A: np.ndarray, G: AnyMetric) -> np.ndarray:
    return adjoint_map(A, G, G)


def bivector_map(V1: np.ndarray, V2: np.ndarray, G: Metric) -> np.ndarray:
    """Skew-adjoint map V1 V2* - V2 V1*."""
    V1 = np.asarray(V1, dtype=float)
    V2 = np.asarray(V2, dtype=float)
    return np.outer(V1, G.lower(V2)) - np.outer(V2, G.lower(V1))


def _raise_all(comps: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    for axis in range(comps.ndim):
        comps = np.moveaxis(np.tensordot(ginv, comps, axes=([1], [axis])), 0, axis)
    return comps


@dataclass(frozen=True, eq=False)
class KForm:
    degree: int
    comps: np.ndarray

    def __post_init__(self):
        comps = np.array(self.comps, dtype=float)
        if comps.ndim != self.degree:
            raise ValueError(f"{self.degree}-form needs {self.degree} indices, got array of rank {comps.ndim}")
        if comps.ndim and len(set(comps.shape)) != 1:
            raise ValueError(f"form components must be a cube, got shape {comps.shape}")
        scale = max(1.0, float(np.max(np.abs(comps)))) if comps.size else 1.0
        for axis in range(self.degree - 1):
            if np.max(np.abs(comps + np.swapaxes(comps, axis, axis + 1))) > ANTISYMMETRY_TOL * scale:
                raise ValueError(f"components are not antisymmetric in indices {axis} and {axis + 1}")
        comps.setflags(write=False)
        object.__setattr__(self, "comps", comps)

    @property
    def dim(self) -> int:
        return self.comps.shape[0] if self.degree else 0

    def evaluate(self, *vectors: np.ndarray) -> Union[float, "KForm"]:
        """Fill the first ``len(vectors)`` slots; a fully evaluated form returns a float."""
        if len(vectors) > self.degree:
            raise ValueError(f"cannot evaluate a {self.degree}-form on {len(vectors)} vectors")
        result = self.comps
        for v in vectors:
            result = np.tensordot(np.asarray(v, dtype=float), result, axes=([0], [0]))
        if len(vectors) == self.degree:
            return float(result)
        return KForm(self.degree - len(vectors), result)

    def __add__(self, other: "KForm") -> "KForm":
        return KForm(self.degree, self.comps + other.comps)

    def __mul__(self, factor: float) -> "KForm":
        return KForm(self.degree, factor * self.comps)

    __rmul__ = __mul__


def wedge(*covectors: np.ndarray) -> KForm:
    """alpha_1 ^ ... ^ alpha_q with (alpha_1 ^ ... ^ alpha_q)(V_1..V_q) = det[alpha_i(V_j)]."""
    if not covectors:
        return KForm(0, np.array(1.0))
    covs = [np.asarray(c, dtype=float) for c in covectors]
    comps = np.zeros((covs[0].size,) * len(covs))
    for perm in itertools.permutations(range(len(covs))):
        comps = comps + permutation_sign(perm) * reduce(np.multiply.outer, [covs[k] for k in perm])
    return KForm(len(covs), comps)


def form_inner(A: KForm, B: KForm, G: Metric) -> float:
    """Induced scalar product (1/q!) A_{i..} B^{i..}."""
    if A.degree != B.degree:
        raise ValueError("forms of different degree")
    return float(np.sum(A.comps * _raise_all(B.comps, G.inverse)) / math.factorial(A.degree))


def volume_form(G: AnyMetric) -> KForm:
    if isinstance(G, SemiMetric):
        raise ValueError("volume form undefined for semi-metric")
    n = G.dim
    return KForm(n, G.orientation * math.sqrt(abs(np.linalg.det(G.gram))) * levi_civita(n))


def hodge(A: KForm, G: AnyMetric) -> KForm:
    """(*A)(V_1..V_{n-q}) = (-1)^{q(n-q)} G_q(A, vol(V_1..V_{n-q}))."""
    if isinstance(G, SemiMetric):
        raise ValueError("Hodge undefined for degenerate metric")
    n, q = G.dim, A.degree
    if q and A.dim != n:
        raise ValueError(f"{n}D Hodge applied to a form on a {A.dim}D space")
    vol = volume_form(G).comps
    raised = _raise_all(A.comps, G.inverse)
    star = np.tensordot(vol, raised, axes=(list(range(n - q, n)), list(range(q))))
    return KForm(n - q, (-1) ** (q * (n - q)) * star / math.factorial(q))


def double_hodge_sign(G: Metric, q: int) -> int:
    """(-1)^{q(n-1)+n-p}."""
    n, p = G.dim, G.signature[0]
    return -1 if (q * (n - 1) + n - p) % 2 else 1


def hodge_skew(M: np.ndarray, G: Metric) -> np.ndarray:
    """Hodge operator on skew-adjoint maps of a 4D space.

    A map is identified with its lowered 2-form ``G M``; the sign is fixed so
    that ``*(V1 V2* - V2 V1*) = J(V1, V2)``.
    """
    if G.dim != 4:
        raise ValueError(f"Hodge of a skew-adjoint map needs dimension 4, got {G.dim}")
    lowered = G.gram @ np.asarray(M, dtype=float)
    return -G.inverse @ hodge(KForm(2, lowered), G).comps


def vector_product(vectors: Sequence[np.ndarray], G: Metric) -> np.ndarray:
    """J(V_1..V_{n-1}) with J* U = vol(V_1, .., V_{n-1}, U)."""
    if len(vectors) != G.dim - 1:
        raise ValueError(f"vector product in dimension {G.dim} takes {G.dim - 1} vectors, got {len(vectors)}")
    covector = volume_form(G).evaluate(*vectors)
    return G.raise_(covector.comps)


def vector_product_map(vectors: Sequence[np.ndarray], G: Metric) -> np.ndarray:
    """Matrix of V -> J(V_1..V_{n-2}, V); skew-adjoint with respect to G."""
    if len(vectors) != G.dim - 2:
        raise ValueError(f"vector product map in dimension {G.dim} takes {G.dim - 2} vectors, got {len(vectors)}")
    two_form = volume_form(G).evaluate(*vectors) if vectors else volume_form(G)
    return G.inverse @ two_form.comps.T


def vector_product_recursive(vectors: Sequence[np.ndarray], lower: Metric, last: float) -> np.ndarray:
    """Vector product in dimension n+1 from vector products in dimension n.

    The (n+1)-space carries the block metric diag(lower, last); each vector is
    split as (V_i, v_i) with v_i its last component.
    """
    n = lower.dim
    vs = [np.asarray(v, dtype=float) for v in vectors]
    if len(vs) != n or any(v.size != n + 1 for v in vs):
        raise ValueError(f"recursive vector product expects {n} vectors of size {n + 1}")
    if last == 0:
        raise ValueError("last diagonal entry must be nonzero")
    uppers = [v[:n] for v in vs]
    scale = math.sqrt(abs(last))
    upper = np.zeros(n)
    for i in range(1, n + 1):
        v_i = vs[i - 1][n]
        if v_i == 0.0:
            continue
        rest = uppers[:i - 1] + uppers[i:]
        upper += (-1) ** (n + i + 1) * v_i * vector_product(rest, lower)
    tail = volume_form(lower).evaluate(*uppers) / last
    logging.debug(f"recursive vector product in dimension {n + 1}, tail {tail}")
    return scale * np.concatenate([upper, [tail]])


def minkowski_vector_product_blocks(pis: Sequence[np.ndarray]) -> np.ndarray:
    """Displayed (m, p) block formula for J(Pi_1, Pi_2, Pi_3) in Minkowski space.

    Equals ``vector_product(pis, Metric.minkowski(orientation=-1))``, i.e. the
    argument is read in the first slot of the volume form.
    """
    (m1, p1), (m2, p2), (m3, p3) = [(float(pi[0]), np.asarray(pi[1:], dtype=float)) for pi in pis]
    head = np.linalg.det(np.column_stack([p1, p2, p3]))
    tail = m1 * np.cross(p2, p3) - m2 * np.cross(p1, p3) + m3 * np.cross(p1, p2)
    return np.concatenate([[head], tail])


def minkowski_vector_product_map_blocks(pi1: np.ndarray, pi2: np.ndarray) -> np.ndarray:
    m1, p1 = float(pi1[0]), np.asarray(pi1[1:], dtype=float)
    m2, p2 = float(pi2[0]), np.asarray(pi2[1:], dtype=float)
    cross = np.cross(p1, p2)
    out = np.zeros((4, 4))
    out[0, 1:] = cross
    out[1:, 0] = cross
    out[1:, 1:] = m1 * cross_matrix(p2) - m2 * cross_matrix(p1)
    return out
