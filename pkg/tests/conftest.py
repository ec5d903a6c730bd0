import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


class _FakeInferenceHandler(BaseHTTPRequestHandler):
    """Tiny inference server honoring the predict/vocab_check protocol.

    Behavior is scripted through ``server.responses``: a dict mapping
    masked_text to a candidates list, plus ``server.vocab`` (a set) and
    ``server.fail_next`` to simulate transient errors.
    """

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        server = self.server
        if server.fail_next > 0:
            server.fail_next -= 1
            self.send_response(500)
            self.end_headers()
            return
        if self.path == "/predict":
            candidates = server.responses.get(body["masked_text"])
            if candidates is None:
                payload = {"candidates": []}
            else:
                payload = {
                    "candidates": [
                        {"token": token, "confidence": conf} for token, conf in candidates
                    ]
                }
        elif self.path == "/vocab_check":
            payload = {"in_vocab": body["word"] in server.vocab}
        else:
            self.send_response(404)
            self.end_headers()
            return
        encoded = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(encoded)))
        self.end_headers()
        self.wfile.write(encoded)

    def log_message(self, *args):
        pass


@pytest.fixture
def fake_inference_server():
    server = HTTPServer(("127.0.0.1", 0), _FakeInferenceHandler)
    server.responses = {}
    server.vocab = set()
    server.fail_next = 0
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.endpoint = f"http://127.0.0.1:{server.server_port}"
    yield server
    server.shutdown()
    thread.join(timeout=5)
