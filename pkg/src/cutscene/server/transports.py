"""Wire transports: newline-delimited stdio and HTTP with an SSE event stream."""

from __future__ import annotations

import json
import queue
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import TextIO

from .core import CutsceneServer

SSE_KEEPALIVE_SECONDS = 15.0


def serve_stdio(server: CutsceneServer, stdin: TextIO | None = None, stdout: TextIO | None = None) -> None:
    """Answer one JSON-RPC message per input line until EOF."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        frame = line.rstrip("\r\n")
        if not frame.strip():
            continue
        response = server.handle_text(frame)
        if response is not None:
            stdout.write(response + "\n")
            stdout.flush()


class _EventHub:
    def __init__(self) -> None:
        self._subscribers: list[queue.Queue] = []
        self._lock = threading.Lock()

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def publish(self, text: str | None) -> None:
        with self._lock:
            for q in self._subscribers:
                q.put(text)


class _Server(ThreadingHTTPServer):
    # The stdlib default backlog of 5 resets bursts of concurrent clients.
    request_queue_size = 128
    daemon_threads = True


class HttpTransport:
    """``POST /rpc`` answers in the response body and also broadcasts the
    response on ``GET /events`` as a server-sent event."""

    def __init__(self, server: CutsceneServer, host: str = "127.0.0.1", port: int = 8731) -> None:
        self.server = server
        self.hub = _EventHub()
        self._stopping = threading.Event()
        handler = self._make_handler()
        self.httpd = _Server((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        host, port = self.httpd.server_address[:2]
        return str(host), int(port)

    @property
    def url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def start(self) -> "HttpTransport":
        self._thread = threading.Thread(target=self.httpd.serve_forever, name="cutscene-http", daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def stop(self) -> None:
        self._stopping.set()
        self.hub.publish(None)
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def _make_handler(self):
        transport = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, fmt, *args):  # keep test output quiet
                pass

            def _send(self, status: int, body: bytes, content_type: str = "application/json") -> None:
                self.send_response(status)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_POST(self):
                if self.path != "/rpc":
                    self._send(404, b'{"error": "not found"}')
                    return
                length = int(self.headers.get("Content-Length") or 0)
                raw = self.rfile.read(length)
                try:
                    text = raw.decode("utf-8")
                except UnicodeDecodeError:
                    text = "\x00"  # forces a parse error response
                response = transport.server.handle_text(text)
                if response is None:
                    self._send(202, b"")
                    return
                transport.hub.publish(response)
                self._send(200, response.encode("utf-8"))

            def do_GET(self):
                if self.path != "/events":
                    self._send(404, b'{"error": "not found"}')
                    return
                self.send_response(200)
                self.send_header("Content-Type", "text/event-stream")
                self.send_header("Cache-Control", "no-cache")
                self.send_header("Connection", "close")
                self.end_headers()
                self.close_connection = True
                q = transport.hub.subscribe()
                try:
                    self.wfile.write(b": connected\n\n")
                    self.wfile.flush()
                    while not transport._stopping.is_set():
                        try:
                            item = q.get(timeout=SSE_KEEPALIVE_SECONDS)
                        except queue.Empty:
                            self.wfile.write(b": keepalive\n\n")
                            self.wfile.flush()
                            continue
                        if item is None:
                            break
                        self.wfile.write(f"data: {item}\n\n".encode("utf-8"))
                        self.wfile.flush()
                except (BrokenPipeError, ConnectionResetError):
                    pass
                finally:
                    transport.hub.unsubscribe(q)

        return Handler


def parse_sse(lines) -> list[dict]:
    """Collect ``data:`` payloads from an iterable of SSE text lines."""
    events, buf = [], []
    for line in lines:
        line = line.rstrip("\r\n")
        if line.startswith("data:"):
            buf.append(line[5:].lstrip())
        elif line == "" and buf:
            events.append(json.loads("\n".join(buf)))
            buf = []
    if buf:
        events.append(json.loads("\n".join(buf)))
    return events
