#!/usr/bin/env python3
"""
Development server for local testing with Flask
POST /<command> with a JSON body carries the same keys as the command line event;
inputs may be given as file paths (program, coef, tactics) or inline (program_text, ...).
"""
import logging
from typing import Any, Dict, Tuple

from flask import Flask, jsonify, request
from flask_cors import CORS

from src.routes.command_routes import COMMANDS, handle_command
from src.utils.config import load_settings

logger = logging.getLogger(__name__)

# exit code -> HTTP status
HTTP_STATUS = {0: 200, 1: 200, 2: 400, 3: 422, 4: 422, 5: 422, 6: 503, 7: 422}


def create_app() -> Flask:
    app = Flask(__name__)
    CORS(app)  # Enable CORS for all origins
    settings = load_settings()

    @app.route("/status", methods=["GET"])
    def status() -> Tuple[Any, int]:
        """Health check"""
        return jsonify({"status": "ok", "commands": list(COMMANDS)}), 200

    @app.route("/<command>", methods=["POST"])
    def run_command(command: str) -> Tuple[Any, int]:
        """
        Route a command through the same handler the CLI uses
        """
        body: Dict[str, Any] = request.get_json(silent=True) or {}
        event = dict(body, command=command)
        logger.info(f"Received {command} request")
        response = handle_command(event, settings)
        return jsonify(response), HTTP_STATUS.get(response["exitCode"], 500)

    @app.errorhandler(404)
    def not_found(error: Exception) -> Tuple[Any, int]:
        """Handle 404 errors"""
        return (
            jsonify({"error": "Not found", "message": "The requested endpoint does not exist"}),
            404,
        )

    return app


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    print("logamort development server")
    print("Running on http://localhost:3000")
    print("  GET  /status")
    print("  POST /check | /run | /validate | /export")
    create_app().run(debug=True, host="0.0.0.0", port=3000)
