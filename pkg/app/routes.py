"""
Route definitions. JSON mirror of the command-line reports.
"""

import logging
from typing import Any, Callable, List, Tuple

from flask import Blueprint, current_app, jsonify, request

from app.core import config
from app.core.errors import StrataError
from app.core.report_engine import (
    Report,
    betti_report,
    bounds_document,
    brute_report,
    count_report,
    e1_report,
    euler_report,
    render_json,
    series_report,
)

logger = logging.getLogger(__name__)
bp = Blueprint("api", __name__, url_prefix="/")

# Request-size guards for the synchronous HTTP surface.
HTTP_LIMITS = {
    "d": 12,
    "n": 12,
    "d_max": 10,
    "n_max": 8,
    "order": 200,
    "max_degree": 40,
    "brute_params": 8,
}


@bp.route("/health", methods=["GET"])
def health():
    """
    Lightweight health check for production monitoring.
    Returns 200 and minimal JSON. No heavy operations.
    """
    return jsonify({"status": "ok", "service": "strata-backend"}), 200


class _BadRequest(ValueError):
    pass


def _int_arg(name: str, default: int | None = None, required: bool = True) -> int | None:
    raw = request.args.get(name)
    if raw is None or raw == "":
        if default is None and required:
            raise _BadRequest(f"Missing required parameter: {name}.")
        return default
    try:
        value = int(raw)
    except ValueError:
        raise _BadRequest(f"Invalid value for {name}") from None
    limit = HTTP_LIMITS.get(name)
    if limit is not None and value > limit:
        raise _BadRequest(f"{name}={value} is above the HTTP limit of {limit}; use the CLI for larger requests")
    return value


def _convention_arg() -> str:
    raw = (request.args.get("convention") or config.STRATA_DEFAULT_CONVENTION).strip().lower()
    if raw not in config.CONVENTIONS:
        raise _BadRequest("Invalid value for convention")
    return raw


def _respond(op: str, build: Callable[[], Report]):
    """Run a report builder and map engine errors the way every route does."""
    logger.info("%s | called | %s", op, dict(request.args))
    try:
        report = build()
    except (TypeError, ValueError) as e:
        logger.warning("%s | invalid input | %s", op, e)
        return jsonify({"error": str(e)}), 400
    except StrataError as e:
        logger.warning("%s | unprocessable | %s", op, e)
        return jsonify({"error": str(e)}), 422
    logger.info("%s | success | ok=%s", op, report.ok)
    return current_app.response_class(render_json(report), mimetype="application/json"), 200


@bp.route("/count", methods=["GET"])
def count():
    return _respond("count", lambda: count_report(_int_arg("d"), _int_arg("n"), _int_arg("q", required=False)))


@bp.route("/euler", methods=["GET"])
def euler():
    return _respond("euler", lambda: euler_report(_int_arg("d_max", 8), _int_arg("n_max", 6)))


@bp.route("/bounds", methods=["GET"])
def bounds():
    return _respond("bounds", lambda: bounds_document(_int_arg("d"), _int_arg("n")))


@bp.route("/series", methods=["GET"])
def series():
    partition = request.args.get("partition")

    def build() -> Report:
        d = None if partition else _int_arg("d")
        return series_report(d, _int_arg("order", 20), _convention_arg(), partition)

    return _respond("series", build)


@bp.route("/betti", methods=["GET"])
def betti():
    return _respond("betti", lambda: betti_report(_int_arg("d"), _int_arg("max_degree", 11), _convention_arg()))


@bp.route("/e1", methods=["GET"])
def e1():
    return _respond("e1", lambda: e1_report(_int_arg("d"), _int_arg("max_degree", 10), _convention_arg()))


def _validate_brute_payload(data: Any) -> Tuple[List[Tuple[int, int, int]] | None, str | None]:
    """
    Validate {"params": [[d, n, p], ...]}. Returns (params, None) if valid,
    or (None, error_message) if invalid.
    """
    if not isinstance(data, dict):
        return None, "Request body must be a JSON object."
    raw = data.get("params")
    if not isinstance(raw, list) or not raw:
        return None, "Missing required fields: params."
    if len(raw) > HTTP_LIMITS["brute_params"]:
        return None, f"At most {HTTP_LIMITS['brute_params']} parameter triples per request."
    params = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 3 and all(isinstance(x, int) for x in item)):
            return None, "Invalid value for params"
        params.append(tuple(item))
    return params, None


@bp.route("/brute/verify", methods=["POST"])
def brute_verify():
    """Cross-validate the sieve against the counting polynomials for each triple."""
    logger.info("brute_verify | called")

    if not request.is_json:
        logger.warning("brute_verify | invalid input | content-type not json")
        return jsonify({"error": "Content-Type must be application/json."}), 400

    params, validation_error = _validate_brute_payload(request.get_json(silent=True))
    if validation_error:
        logger.warning("brute_verify | invalid input | %s", validation_error)
        return jsonify({"error": validation_error}), 400

    return _respond("brute_verify", lambda: brute_report(params))
