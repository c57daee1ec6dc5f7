"""Read-only HTTP serving of a bundle directory plus the explorer assets.

Two URL prefixes only: /bundle/<one of the seven bundle files> and
/app/<static explorer asset>. Everything is GET/HEAD; there are no write
endpoints and no dynamic state, so concurrent reads are trivially safe.
"""

import os
import posixpath
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .pipeline import BUNDLE_FILES, validate_bundle

_CONTENT_TYPES = {
    ".json": "application/json; charset=utf-8",
    ".csv": "text/csv; charset=utf-8",
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json; charset=utf-8",
}


def webapp_dir():
    """Directory holding the built explorer, if it was shipped."""
    return os.path.join(os.path.dirname(__file__), "webapp")


class BundleRequestHandler(BaseHTTPRequestHandler):
    server_version = "hardmap"

    def _send_file(self, path):
        try:
            with open(path, "rb") as fh:
                body = fh.read()
        except OSError:
            self.send_error(404, "not found")
            return
        ext = posixpath.splitext(path)[1].lower()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(ext, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def _resolve(self):
        path = self.path.split("?", 1)[0].split("#", 1)[0]
        if path == "/":
            return "redirect", "/app/index.html"
        if path.startswith("/bundle/"):
            name = path[len("/bundle/"):]
            if name in BUNDLE_FILES:
                return "file", os.path.join(self.server.bundle_dir, name)
            return None, None
        if path.startswith("/app/"):
            name = path[len("/app/"):] or "index.html"
            # flat asset directory: no separators, no traversal
            if name and "/" not in name and not name.startswith("."):
                return "file", os.path.join(self.server.app_dir, name)
        return None, None

    def do_GET(self):
        kind, target = self._resolve()
        if kind == "redirect":
            self.send_response(302)
            self.send_header("Location", target)
            self.end_headers()
        elif kind == "file":
            self._send_file(target)
        else:
            self.send_error(404, "not found")

    do_HEAD = do_GET

    def do_POST(self):
        self.send_error(405, "read-only server")

    do_PUT = do_DELETE = do_PATCH = do_POST

    def log_message(self, fmt, *args):  # quiet by default; tests hate chatter
        if self.server.verbose:
            super().log_message(fmt, *args)


def serve_bundle(bundle_dir, port=8765, host="127.0.0.1", app_dir=None, verbose=False):
    """Validate the bundle and return a ready (not yet running) HTTP server.

    Call serve_forever() on the result, or use it from a thread in tests and
    shutdown() when done. Raises BundleValidationError before binding when
    the directory is not a complete bundle.
    """
    validate_bundle(bundle_dir)
    server = ThreadingHTTPServer((host, port), BundleRequestHandler)
    server.bundle_dir = os.path.abspath(bundle_dir)
    server.app_dir = os.path.abspath(app_dir) if app_dir else webapp_dir()
    server.verbose = verbose
    return server
