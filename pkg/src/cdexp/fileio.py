"""Channel files, result files, and the curve CSV format.

Channel files are JSON with ``input_alphabet``, ``output_alphabet``, a
``transition`` matrix, and an optional ``cost`` vector. Row sums within
1e-9 of one are renormalized silently, within 1e-6 with a warning, and
anything worse is rejected. All-zero output columns are dropped with a
warning; an all-zero row is an error. Result files are JSON with sorted
keys and a fixed layout, so two runs with the same inputs produce
byte-identical files apart from the ``metadata`` block.
"""

from __future__ import annotations

import datetime as _dt
import json
import math

import numpy as np

from .core import Channel, InvalidInputError, JointDistribution
from .oracle import OracleResult
from .solvers import RunReport, SolverConfig

__all__ = [
    "load_channel",
    "result_payload",
    "oracle_payload",
    "save_result",
    "load_result",
    "format_curve_csv",
    "save_curve_csv",
    "parse_grid_range",
]

RESULT_FORMAT = "exponent-result-v1"

_SILENT_ROW_TOL = 1e-9
_WARN_ROW_TOL = 1e-6


def load_channel(path) -> tuple[Channel, list[str]]:
    """Read a channel JSON file; returns the channel and any warnings."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read channel file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"channel file {path} is not valid JSON (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(data, dict):
        raise InvalidInputError("channel file must contain a JSON object")
    for key in ("input_alphabet", "output_alphabet", "transition"):
        if key not in data:
            raise InvalidInputError(f"channel file is missing the {key!r} field")

    in_labels = [str(s) for s in data["input_alphabet"]]
    out_labels = [str(s) for s in data["output_alphabet"]]
    if len(set(in_labels)) != len(in_labels) or len(set(out_labels)) != len(out_labels):
        raise InvalidInputError("alphabet labels must be unique")

    try:
        trans = np.asarray(data["transition"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"transition matrix is not numeric: {exc}") from exc
    if trans.ndim != 2 or trans.shape != (len(in_labels), len(out_labels)):
        raise InvalidInputError(
            f"transition shape {trans.shape} does not match alphabets"
            f" ({len(in_labels)} x {len(out_labels)})"
        )
    if not np.all(np.isfinite(trans)) or np.any(trans < 0):
        raise InvalidInputError("transition entries must be finite and non-negative")

    warnings: list[str] = []
    row_sums = trans.sum(axis=1)
    for i, s in enumerate(row_sums):
        if s == 0.0:
            raise InvalidInputError(f"input letter {in_labels[i]!r} has an all-zero transition row")
        off = abs(s - 1.0)
        if off > _WARN_ROW_TOL:
            raise InvalidInputError(
                f"transition row for input {in_labels[i]!r} sums to {s!r}, outside tolerance"
            )
        if off > _SILENT_ROW_TOL:
            warnings.append(
                f"renormalized transition row for input {in_labels[i]!r} (sum was {s!r})"
            )
    trans = trans / row_sums[:, None]

    dead = np.flatnonzero(trans.sum(axis=0) == 0.0)
    if dead.size:
        dropped = [out_labels[j] for j in dead]
        warnings.append(f"dropped unreachable output letters: {', '.join(dropped)}")
        keep = np.setdiff1d(np.arange(trans.shape[1]), dead)
        trans = trans[:, keep]
        out_labels = [out_labels[j] for j in keep]
        trans = trans / trans.sum(axis=1)[:, None]

    cost = None
    if data.get("cost") is not None:
        try:
            cost = np.asarray(data["cost"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"cost vector is not numeric: {exc}") from exc
        if cost.shape != (len(in_labels),):
            raise InvalidInputError("cost vector length must match the input alphabet")

    channel = Channel(
        transition=trans,
        input_labels=tuple(in_labels),
        output_labels=tuple(out_labels),
        cost=cost,
    )
    return channel, warnings


def _channel_block(channel: Channel) -> dict:
    return {
        "input_alphabet": list(channel.input_labels),
        "output_alphabet": list(channel.output_labels),
        "transition": channel.transition.tolist(),
        "cost": None if channel.cost is None else channel.cost.tolist(),
    }


def _config_block(config: SolverConfig) -> dict:
    return {
        "scheme": config.scheme,
        "family": config.family,
        "a": config.a,
        "b": config.b,
        "c": config.c,
        "rate": config.rate,
        "alpha": config.alpha,
        "rho": config.rho,
        "eta": config.eta,
        "tol": config.tol,
        "max_iter": config.max_iter,
        "dual_tol": config.dual_tol,
        "rho_cap": config.rho_cap,
        "eta_max": config.eta_max,
    }


def _joint_block(joint: JointDistribution) -> dict:
    return {
        "matrix": joint.joint.tolist(),
        "input_marginal": joint.input_marginal.tolist(),
        "output_marginal": joint.output_marginal.tolist(),
        "forward_conditional": joint.forward_conditional.tolist(),
        "reverse_conditional": joint.reverse_conditional.tolist(),
    }


def result_payload(
    command: str, channel: Channel, report: RunReport, extra_warnings=()
) -> dict:
    """Assemble the JSON payload for one solver run."""
    return {
        "format": RESULT_FORMAT,
        "command": command,
        "config": _config_block(report.config),
        "channel": _channel_block(channel),
        "value_nats": report.value,
        "value_bits": report.value / math.log(2.0),
        "converged": report.converged,
        "iterations": report.iterations,
        "objective_history": list(report.objective_history),
        "final_joint": _joint_block(report.final_joint),
        "dual": None
        if report.dual is None
        else {"rho": report.dual[0], "eta": report.dual[1]},
        "duality_gap": report.duality_gap,
        "warnings": list(extra_warnings) + list(report.warnings),
        "metadata": {"created": _dt.datetime.now(_dt.timezone.utc).isoformat()},
    }


def oracle_payload(
    command: str,
    channel: Channel,
    result: OracleResult,
    *,
    rate: float | None,
    alpha: float | None,
    resolution: int,
    extra_warnings=(),
) -> dict:
    """Assemble the JSON payload for one grid-oracle run."""
    return {
        "format": RESULT_FORMAT,
        "command": command,
        "config": {"rate": rate, "alpha": alpha, "resolution": resolution},
        "channel": _channel_block(channel),
        "value_nats": result.value,
        "value_bits": result.value / math.log(2.0),
        "accuracy_bound": result.accuracy_bound,
        "evaluations": result.evaluations,
        "final_joint": _joint_block(result.joint),
        "warnings": list(extra_warnings),
        "metadata": {"created": _dt.datetime.now(_dt.timezone.utc).isoformat()},
    }


def save_result(path, payload: dict) -> None:
    """Write a result payload as deterministic JSON (sorted keys, LF endings)."""
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")


def load_result(path) -> dict:
    """Read back a result file written by save_result."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read result file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"result file {path} is not valid JSON (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(data, dict) or data.get("format") != RESULT_FORMAT:
        raise InvalidInputError(f"result file {path} does not carry format {RESULT_FORMAT!r}")
    return data


def format_curve_csv(points) -> str:
    """Render curve points as CSV: comma separator, '.' decimals, 17 significant digits."""
    lines = ["rho,eta,R,alpha,E0,Ec_point"]
    for p in points:
        alpha = "" if p.alpha is None else f"{p.alpha:.17g}"
        lines.append(
            f"{p.rho:.17g},{p.eta:.17g},{p.rate:.17g},{alpha},{p.e0:.17g},{p.exponent:.17g}"
        )
    return "\n".join(lines) + "\n"


def save_curve_csv(path, points) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_curve_csv(points))


def parse_grid_range(text: str) -> tuple[float, ...]:
    """Parse 'lo:hi:step' into an inclusive tuple of grid values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidInputError(f"grid range must look like lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise InvalidInputError(f"grid range {text!r} is not numeric") from exc
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise InvalidInputError(f"grid range {text!r} must be finite")
    if step <= 0 or hi < lo:
        raise InvalidInputError(f"grid range {text!r} needs step > 0 and hi >= lo")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(lo + i * step for i in range(count))
