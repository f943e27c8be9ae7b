import argparse
import json
import logging
import math
import sys
from typing import Optional

import numpy as np
import pandas as pd

from .config import COMMANDS, Scenario, load_scenario
from .connection import FlatMetric, UniformMagneticPotential, integrate_motion, transport_5momentum
from .errors import ConfigError, NumericalError
from .fields import MatterField, newtonian_limit_report, residual_grid
from .groups import random_element
from .hyperlin import Metric, vector_product, vector_product_recursive
from .momenta import (Momentum, classify, coadjoint, coadjoint_closed, invariants, isotropy_dimension,
                      itemized_coadjoint, momentum_distance, omega_sweep)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def pretty_prefix(x: float) -> str:
    """Summary value with an SI prefix, as printed next to CSV output.

    :param x: Residual, drift or any other float of the summary.
    :returns: Mantissa in [1, 1000) and the prefix, plain %g outside yocto..yotta.
    """
    if x == 0 or not math.isfinite(x):
        return f"{x:g}"
    exponent = math.floor(math.log10(abs(x)))
    div, mod = divmod(exponent, 3)
    prefixes = " kMGTPEZYyzafpnµm"
    if not -8 <= div <= 8:
        return f"{x:.3g}"
    return "%.3g %s" % (x * 10 ** (-exponent + mod), prefixes[div])


def _invariant_row(mu: Momentum, suffix: str) -> dict:
    try:
        inv = invariants(mu)
    except ValueError:
        return {f"m0_{suffix}": math.nan, f"s_{suffix}": math.nan}
    return {f"m0_{suffix}": inv.m0, f"s_{suffix}": inv.s}


def cmd_classify(scenario: Scenario):
    mu = scenario.body.momentum
    particle = classify(mu, scenario.tol)
    iso = isotropy_dimension(mu)
    report = {
        **particle.to_json(),
        "flavor": mu.flavor.name,
        "isotropy_dimension": iso,
        "orbit_dimension": mu.flavor.dim - iso,
        "invariant_count": iso,
        "momentum": mu.to_json(),
    }
    return None, report


def cmd_act(scenario: Scenario):
    body = scenario.body
    mu = body.momentum
    elements = [] if body.element is None else [body.element]
    rng = np.random.default_rng(scenario.seed)
    elements += [random_element(mu.flavor, rng) for _ in range(body.random_count)]
    rows = []
    for k, a in enumerate(elements):
        out = coadjoint(a, mu, scenario.tol)
        row = {"action": k, "q_before": mu.q, "q_after": out.q, **_invariant_row(mu, "before"),
               **_invariant_row(out, "after"), "closed_form_error": momentum_distance(out, coadjoint_closed(a, mu))}
        if mu.flavor.is_hyperbolic:
            law = itemized_coadjoint(a, mu, scenario.tol)
            row["fifth_displayed_law"] = law.fifth_displayed
            row["fifth_matrix"] = law.fifth_matrix
        rows.append(row)
    table = pd.DataFrame(rows)
    summary = {"flavor": mu.flavor.name, "actions": len(rows),
               "max_closed_form_error": float(table["closed_form_error"].max())}
    if body.element is not None:
        summary["momentum_after"] = coadjoint(body.element, mu, scenario.tol).to_json()
    return table, summary


def cmd_sweep(scenario: Scenario):
    body = scenario.body
    table = omega_sweep(body.b, body.P_L, body.template, body.omegas)
    return table, {"rows": len(table), "g0_dq": float(table["dq"].iloc[-1])}


def _circle_radius(x: np.ndarray, y: np.ndarray) -> float:
    A = np.column_stack([2.0 * x, 2.0 * y, np.ones_like(x)])
    (a, b, c), *_ = np.linalg.lstsq(A, x**2 + y**2, rcond=None)
    return float(np.sqrt(c + a**2 + b**2))


def cmd_integrate(scenario: Scenario):
    body = scenario.body
    integrate = transport_5momentum if body.method == "transport" else integrate_motion
    trajectory = integrate(body.state, body.fields, body.ds, body.n_steps)
    summary = {"method": body.method, "steps": body.n_steps, "max_unit_norm_drift": trajectory.max_drift,
               "final_X": trajectory.X[-1].tolist(), "q": trajectory.q, "m0": trajectory.m0}
    potential = body.fields.potential
    if isinstance(body.fields.metric, FlatMetric) and isinstance(potential, UniformMagneticPotential) \
            and body.state.q != 0 and potential.B0 != 0 and body.n_steps >= 3:
        expected = body.state.m0 * np.linalg.norm(body.state.U[1:3]) / abs(body.state.q * potential.B0)
        radius = _circle_radius(trajectory.X[:, 1], trajectory.X[:, 2])
        summary.update({"radius": radius, "expected_radius": float(expected),
                        "radius_error": abs(radius - expected) / expected})
    return trajectory.to_frame(), summary


def cmd_residuals(scenario: Scenario):
    body = scenario.body
    matter_field = MatterField.uniform(body.matter)
    table = residual_grid(body.fields, matter_field, body.constants, body.points)
    if body.newtonian:
        reports = [newtonian_limit_report(body.fields, body.matter, body.constants, X) for X in body.points]
        table["maxwell_term"] = [r.maxwell_term for r in reports]
        table["coupling_term"] = [r.coupling_term for r in reports]
        table["coupling_ratio"] = [r.ratio for r in reports]
    summary = {k: float(table[k].max()) for k in ("einstein", "maxwell", "matter", "charge")}
    return table, summary


def cmd_vecprod(scenario: Scenario):
    body = scenario.body
    J = vector_product(body.vectors, body.metric)
    summary = {"J": J.tolist(), "dim": body.metric.dim}
    gram = body.metric.gram
    if body.metric.dim > 3 and body.metric.orientation == 1 and not np.any(gram[-1, :-1]):
        lower = Metric(gram[:-1, :-1])
        recursive = vector_product_recursive(body.vectors, lower, gram[-1, -1])
        summary["recursive_difference"] = float(np.max(np.abs(recursive - J)))
    return pd.DataFrame([{f"J{k}": J[k] for k in range(J.size)}]), summary


COMMAND_HANDLERS = {
    "classify": cmd_classify,
    "act": cmd_act,
    "sweep": cmd_sweep,
    "integrate": cmd_integrate,
    "residuals": cmd_residuals,
    "vecprod": cmd_vecprod,
}


def _emit(table: Optional[pd.DataFrame], summary: dict, output_format: str, out: Optional[str]):
    if output_format == "csv" and table is not None:
        if out:
            table.to_csv(out, index=False)
        else:
            table.to_csv(sys.stdout, index=False)
        for key, value in summary.items():
            shown = pretty_prefix(value) if isinstance(value, float) else value
            print(f"{key}: {shown}", file=sys.stderr)
        return
    document = dict(summary)
    if table is not None:
        document["table"] = json.loads(table.to_json(orient="records", double_precision=15))
    text = json.dumps(document, indent=2)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kkorbits", description="Coadjoint orbits of Kaluza-Klein groups")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="scenario JSON document")
    parser.add_argument("--out", default=None, help="output file, stdout if omitted")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--seed", type=int, default=None, help="overrides the seed of the document")
    parser.add_argument("--tol", type=float, default=None, help="overrides the tolerance of the document")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def run(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(module)s: %(message)s")
    try:
        scenario = load_scenario(args.command, args.config)
        if args.seed is not None:
            scenario = Scenario(scenario.command, scenario.body, args.seed, scenario.tol)
        if args.tol is not None:
            scenario = Scenario(scenario.command, scenario.body, scenario.seed, args.tol)
        logging.debug(f"running {args.command} with seed {scenario.seed}, tol {scenario.tol}")
        table, summary = COMMAND_HANDLERS[args.command](scenario)
        _emit(table, summary, args.format, args.out)
    except ConfigError as e:
        logging.error(f"invalid scenario {args.config}: {e}")
        return EXIT_INVALID
    except ValueError as e:
        logging.error(f"{args.command} rejected its input: {e}")
        return EXIT_INVALID
    except NumericalError as e:
        logging.error(f"{args.command} failed numerically: {e}")
        return EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(run())
