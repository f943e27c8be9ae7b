from .errors import ConfigError, NumericalError
from .groups import GroupElement, GroupFlavor, make_element
from .hyperlin import KForm, Metric, SemiMetric
from .momenta import Momentum, classify, coadjoint, invariants

__all__ = [
    "ConfigError",
    "GroupElement",
    "GroupFlavor",
    "KForm",
    "Metric",
    "Momentum",
    "NumericalError",
    "SemiMetric",
    "classify",
    "coadjoint",
    "invariants",
    "make_element",
]
