"""
Application package. Initializes Flask app via factory pattern.
"""

import logging
import sys
from typing import TextIO

from flask import Flask, current_app, jsonify, request

from app.core import config as strata_config


def configure_logging(stream: TextIO = sys.stdout) -> None:
    """
    One root handler on the given stream. The web app logs to stdout; the
    CLI passes stderr so stdout carries only the emitted document.
    """
    log_format = "%(asctime)s | %(levelname)s | %(module)s | %(message)s"
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(log_format))
    root = logging.getLogger()
    root.setLevel(getattr(logging, strata_config.STRATA_LOG_LEVEL, logging.INFO))
    root.handlers.clear()
    root.addHandler(handler)


def create_app(config=None):
    """
    Application factory. Creates and configures the Flask application.
    Registers blueprints. No business logic here.
    """
    configure_logging(sys.stdout)

    app = Flask(__name__)

    if config is not None:
        app.config.update(config)

    @app.route("/api")
    def api_docs():
        return jsonify({
            "service": "Stable cohomology and point counts of irreducible polynomials",
            "endpoints": [
                "GET /health",
                "GET /count?d=&n=&q=",
                "GET /euler?d_max=&n_max=",
                "GET /bounds?d=&n=",
                "GET /series?d=&order=&convention= (or partition=)",
                "GET /betti?d=&max_degree=&convention=",
                "GET /e1?d=&max_degree=&convention=",
                "POST /brute/verify {\"params\": [[d, n, p], ...]}",
            ],
        })

    from app.routes import bp as routes_bp
    app.register_blueprint(routes_bp)

    @app.after_request
    def add_cors_headers(response):
        response.headers["Access-Control-Allow-Origin"] = "*"
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
        response.headers["Access-Control-Allow-Headers"] = "Content-Type"
        return response

    @app.before_request
    def handle_preflight():
        if request.method == "OPTIONS":
            resp = current_app.make_response(("", 204))
            resp.headers["Access-Control-Allow-Origin"] = "*"
            resp.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
            resp.headers["Access-Control-Allow-Headers"] = "Content-Type"
            resp.headers["Access-Control-Max-Age"] = "86400"
            return resp

    return app
