"""Scenario documents for the command line.

One JSON document per run. Every section is checked for unknown and missing
keys; problems raise :class:`ConfigError` naming the dotted key path.
"""
import inspect
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .connection import (METRIC_PRESETS, POTENTIAL_PRESETS, ParticleState, SpacetimeFields, TensorField,
                         gauge_transform)
from .errors import ConfigError
from .fields import CouplingConstants, MatterState
from .groups import GroupElement, GroupFlavor, lorentz_from_boost_rotation, make_element
from .hyperlin import Metric
from .momenta import Momentum, momentum_from_worldline, momentum_from_worldline_5d

COMMANDS = ("classify", "act", "sweep", "integrate", "residuals", "vecprod")
_COMMON_KEYS = {"seed", "tol"}


def _join(path: str, key: Union[str, int]) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _mapping(data: Any, path: str) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'document'}: expected an object, got {type(data).__name__}")
    return data


def _check_keys(data: dict, path: str, required=(), optional=()):
    unknown = sorted(set(data) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"{path or 'document'}: unknown keys {unknown}")
    missing = [k for k in required if k not in data]
    if missing:
        raise ConfigError(f"{path or 'document'}: missing keys {missing}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{path}: expected a finite number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{path}: expected an integer >= {minimum}, got {value!r}")
    return value


def _vector(value: Any, path: str, sizes=(4,)) -> np.ndarray:
    if not isinstance(value, list) or len(value) not in sizes:
        expected = " or ".join(str(n) for n in sizes)
        raise ConfigError(f"{path}: expected {expected} components")
    return np.array([_number(x, _join(path, i)) for i, x in enumerate(value)])


def _matrix(value: Any, path: str, n: int) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"{path}: expected a {n}x{n} matrix")
    return np.array([_vector(row, _join(path, i), (n,)) for i, row in enumerate(value)])


def _wrap(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(f"{path}: {e}") from e


def parse_flavor(data: dict, path: str) -> GroupFlavor:
    return _wrap(_join(path, "flavor"), GroupFlavor.from_json, {"flavor": data.get("flavor"), "omega": data.get("omega")})


def parse_momentum(data: Any, path: str = "momentum") -> Momentum:
    data = _mapping(data, path)
    if "worldline" in data:
        _check_keys(data, path, ("flavor", "worldline"), ("omega",))
        flavor = parse_flavor(data, path)
        wl_path = _join(path, "worldline")
        wl = _mapping(data["worldline"], wl_path)
        _check_keys(wl, wl_path, ("X", "I", "J", "s", "m0"), ("q",))
        return _wrap(wl_path, momentum_from_worldline, flavor, _vector(wl["X"], _join(wl_path, "X")),
                     _vector(wl["I"], _join(wl_path, "I")), _vector(wl["J"], _join(wl_path, "J")),
                     _number(wl["s"], _join(wl_path, "s")), _number(wl["m0"], _join(wl_path, "m0")),
                     _number(wl.get("q", 0.0), _join(wl_path, "q")))
    if "worldline_5d" in data:
        _check_keys(data, path, ("flavor", "worldline_5d"), ("omega",))
        flavor = parse_flavor(data, path)
        wl_path = _join(path, "worldline_5d")
        wl = _mapping(data["worldline_5d"], wl_path)
        _check_keys(wl, wl_path, ("X", "I", "J1", "J2", "s", "m0"))
        vecs = [_vector(wl[k], _join(wl_path, k), (5,)) for k in ("X", "I", "J1", "J2")]
        return _wrap(wl_path, momentum_from_worldline_5d, flavor, *vecs, _number(wl["s"], _join(wl_path, "s")),
                     _number(wl["m0"], _join(wl_path, "m0")))
    _check_keys(data, path, ("flavor", "Pi"), ("omega", "M", "q", "Q"))
    flavor = parse_flavor(data, path)
    M = _matrix(data["M"], _join(path, "M"), 4) if "M" in data else np.zeros((4, 4))
    Q = _vector(data["Q"], _join(path, "Q")) if "Q" in data else None
    return _wrap(path, Momentum, flavor, _vector(data["Pi"], _join(path, "Pi")), M,
                 _number(data.get("q", 0.0), _join(path, "q")), Q)


def parse_lorentz(data: dict, path: str) -> np.ndarray:
    """``P_L`` as a matrix, or ``boost`` velocity with an optional ``rotation`` matrix."""
    if "P_L" in data:
        if "boost" in data or "rotation" in data:
            raise ConfigError(f"{path}: give either P_L or boost/rotation")
        return _matrix(data["P_L"], _join(path, "P_L"), 4)
    v = _vector(data["boost"], _join(path, "boost"), (3,)) if "boost" in data else np.zeros(3)
    R = _matrix(data["rotation"], _join(path, "rotation"), 3) if "rotation" in data else None
    return _wrap(path, lorentz_from_boost_rotation, v, R)


def parse_element(data: Any, flavor: GroupFlavor, path: str = "element") -> GroupElement:
    data = _mapping(data, path)
    _check_keys(data, path, (), ("C", "xi", "P_L", "boost", "rotation", "b"))
    C = _vector(data["C"], _join(path, "C"), (4, 5)) if "C" in data else None
    xi = _number(data["xi"], _join(path, "xi")) if "xi" in data else None
    b = _vector(data["b"], _join(path, "b")) if "b" in data else None
    return _wrap(path, make_element, flavor, C, parse_lorentz(data, path), b, xi)


def _preset(registry: dict, data: Any, path: str) -> TensorField:
    data = _mapping(data, path)
    _check_keys(data, path, ("name",), set(data) - {"name"})
    name = data["name"]
    if name not in registry:
        raise ConfigError(f"{_join(path, 'name')}: unknown preset {name!r}, expected one of {sorted(registry)}")
    cls = registry[name]
    allowed = set(inspect.signature(cls.__init__).parameters) | set(inspect.signature(TensorField.__init__).parameters)
    allowed -= {"self", "kwargs"}
    params = {k: v for k, v in data.items() if k != "name"}
    _check_keys(params, path, (), allowed)
    converted = {}
    for key, value in params.items():
        if isinstance(value, list):
            converted[key] = _vector(value, _join(path, key))
        elif isinstance(value, (str, bool)):
            converted[key] = value
        else:
            converted[key] = _number(value, _join(path, key))
    logging.debug(f"building preset {name} with {sorted(converted)}")
    return _wrap(path, cls, **converted)


def parse_fields(data: Any, path: str = "fields") -> SpacetimeFields:
    """``{"metric": {"name": ...}, "potential": {"name": ...}, "gauge": {"gradient": [...]}}``."""
    data = _mapping(data, path)
    _check_keys(data, path, (), ("metric", "potential", "gauge"))
    metric = _preset(METRIC_PRESETS, data.get("metric", {"name": "flat"}), _join(path, "metric"))
    potential = _preset(POTENTIAL_PRESETS, data.get("potential", {"name": "constant"}), _join(path, "potential"))
    fields = SpacetimeFields(metric, potential)
    if "gauge" in data:
        gauge_path = _join(path, "gauge")
        gauge = _mapping(data["gauge"], gauge_path)
        _check_keys(gauge, gauge_path, ("gradient",))
        c = _vector(gauge["gradient"], _join(gauge_path, "gradient"))
        fields = gauge_transform(fields, lambda X: c, lambda X: np.zeros((4, 4)))
    return fields


def parse_constants(data: Any, path: str = "constants") -> CouplingConstants:
    data = _mapping(data, path)
    preset = data.get("preset", "maxwell_limit")
    numbers = {k: _number(v, _join(path, k)) for k, v in data.items() if k != "preset"}
    if preset == "maxwell_limit":
        _check_keys(data, path, (), ("preset", "G_N", "epsilon0", "Lambda"))
        return CouplingConstants.maxwell_limit(**numbers)
    if preset == "einstein":
        _check_keys(data, path, (), ("preset", "G_N", "Lambda", "k_tilde"))
        return CouplingConstants.einstein(**numbers)
    if preset == "custom":
        _check_keys(data, path, ("kappa", "k_tilde"), ("preset", "epsilon0", "Lambda", "G_N"))
        return CouplingConstants(**numbers)
    raise ConfigError(f"{_join(path, 'preset')}: unknown preset {preset!r}")


def parse_matter(data: Any, path: str = "matter") -> MatterState:
    data = _mapping(data, path)
    _check_keys(data, path, (), ("rho", "p", "rho_e", "U"))
    U = _vector(data["U"], _join(path, "U")) if "U" in data else np.array([1.0, 0.0, 0.0, 0.0])
    return _wrap(path, MatterState, _number(data.get("rho", 0.0), _join(path, "rho")),
                 _number(data.get("p", 0.0), _join(path, "p")), _number(data.get("rho_e", 0.0), _join(path, "rho_e")),
                 U)


def parse_metric(data: Any, path: str = "metric") -> Metric:
    data = _mapping(data, path)
    if "omega" in data:
        _check_keys(data, path, ("omega",))
        return _wrap(path, Metric.omega, _number(data["omega"], _join(path, "omega")))
    if data.get("name") == "minkowski":
        _check_keys(data, path, ("name",), ("orientation",))
        return _wrap(path, Metric.minkowski, int(_number(data.get("orientation", 1), _join(path, "orientation"))))
    _check_keys(data, path, ("gram",), ("orientation",))
    gram = data["gram"]
    n = len(gram) if isinstance(gram, list) else 0
    return _wrap(path, Metric, _matrix(gram, _join(path, "gram"), n),
                 int(_number(data.get("orientation", 1), _join(path, "orientation"))))


@dataclass(frozen=True)
class ClassifyConfig:
    momentum: Momentum


@dataclass(frozen=True)
class ActConfig:
    momentum: Momentum
    element: Optional[GroupElement] = None
    random_count: int = 0


@dataclass(frozen=True)
class SweepConfig:
    b: np.ndarray
    P_L: np.ndarray
    template: dict
    omegas: list


@dataclass(frozen=True)
class IntegrateConfig:
    fields: SpacetimeFields
    state: ParticleState
    ds: float = 1e-3
    n_steps: int = 1000
    method: str = "motion"


@dataclass(frozen=True)
class ResidualsConfig:
    fields: SpacetimeFields
    matter: MatterState
    constants: CouplingConstants
    points: list
    newtonian: bool = False


@dataclass(frozen=True)
class VecprodConfig:
    metric: Metric
    vectors: list


@dataclass(frozen=True)
class Scenario:
    command: str
    body: Any
    seed: int = 0
    tol: float = 1e-9


def _parse_classify(data):
    _check_keys(data, "", ("momentum",), _COMMON_KEYS)
    return ClassifyConfig(parse_momentum(data["momentum"]))


def _parse_act(data):
    _check_keys(data, "", ("momentum",), _COMMON_KEYS | {"element", "random_count"})
    mu = parse_momentum(data["momentum"])
    element = parse_element(data["element"], mu.flavor) if "element" in data else None
    count = _integer(data.get("random_count", 0), "random_count")
    if element is None and count == 0:
        raise ConfigError("document: act needs an element or random_count > 0")
    return ActConfig(mu, element, count)


def _parse_sweep(data):
    _check_keys(data, "", ("b", "momentum", "omegas"), _COMMON_KEYS | {"P_L", "boost", "rotation"})
    tmpl = _mapping(data["momentum"], "momentum")
    _check_keys(tmpl, "momentum", ("Pi",), ("M", "q", "Q"))
    template = {"Pi": _vector(tmpl["Pi"], "momentum.Pi"), "q": _number(tmpl.get("q", 0.0), "momentum.q")}
    if "M" in tmpl:
        template["M"] = _matrix(tmpl["M"], "momentum.M", 4)
    if "Q" in tmpl:
        template["Q"] = _vector(tmpl["Q"], "momentum.Q")
    omegas = data["omegas"]
    if not isinstance(omegas, list) or not omegas:
        raise ConfigError("omegas: expected a non-empty list")
    omegas = [_number(w, _join("omegas", i)) for i, w in enumerate(omegas)]
    if any(w <= 0 for w in omegas):
        raise ConfigError("omegas: values must be positive, the omega -> 0 row is added automatically")
    return SweepConfig(_vector(data["b"], "b"), parse_lorentz(data, ""), template, omegas)


def _parse_integrate(data):
    _check_keys(data, "", ("fields", "particle"), _COMMON_KEYS | {"ds", "n_steps", "method"})
    fields = parse_fields(data["fields"])
    particle = _mapping(data["particle"], "particle")
    _check_keys(particle, "particle", ("v", "q", "m0"), ("X",))
    X = _vector(particle["X"], "particle.X") if "X" in particle else np.zeros(4)
    state = _wrap("particle", ParticleState.from_velocity, X, _vector(particle["v"], "particle.v", (3,)),
                  _number(particle["q"], "particle.q"), _number(particle["m0"], "particle.m0"), fields)
    ds = _number(data.get("ds", 1e-3), "ds")
    if ds <= 0:
        raise ConfigError("ds: must be positive")
    method = data.get("method", "motion")
    if method not in ("motion", "transport"):
        raise ConfigError(f"method: expected 'motion' or 'transport', got {method!r}")
    return IntegrateConfig(fields, state, ds, _integer(data.get("n_steps", 1000), "n_steps"), method)


def _parse_residuals(data):
    _check_keys(data, "", ("fields", "points"), _COMMON_KEYS | {"matter", "constants", "newtonian"})
    points = data["points"]
    if not isinstance(points, list) or not points:
        raise ConfigError("points: expected a non-empty list")
    newtonian = data.get("newtonian", False)
    if not isinstance(newtonian, bool):
        raise ConfigError("newtonian: expected true or false")
    return ResidualsConfig(parse_fields(data["fields"]), parse_matter(data.get("matter", {})),
                           parse_constants(data.get("constants", {})),
                           [_vector(p, _join("points", i)) for i, p in enumerate(points)], newtonian)


def _parse_vecprod(data):
    _check_keys(data, "", ("metric", "vectors"), _COMMON_KEYS)
    metric = parse_metric(data["metric"])
    vectors = data["vectors"]
    if not isinstance(vectors, list):
        raise ConfigError("vectors: expected a list")
    return VecprodConfig(metric, [_vector(v, _join("vectors", i), (metric.dim,)) for i, v in enumerate(vectors)])


_PARSERS = {
    "classify": _parse_classify,
    "act": _parse_act,
    "sweep": _parse_sweep,
    "integrate": _parse_integrate,
    "residuals": _parse_residuals,
    "vecprod": _parse_vecprod,
}


def parse_scenario(command: str, data: Any) -> Scenario:
    if command not in _PARSERS:
        raise ConfigError(f"unknown command {command!r}")
    data = _mapping(data, "")
    seed = _integer(data.get("seed", 0), "seed")
    tol = _number(data.get("tol", 1e-9), "tol")
    if tol <= 0:
        raise ConfigError("tol: must be positive")
    return Scenario(command, _PARSERS[command](data), seed, tol)


def load_scenario(command: str, path: Union[str, Path]) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_scenario(command, data)
