"""Clients speaking the server's JSON-RPC dialect.

All three expose the same small surface (``request``, ``call_tool``,
``list_tools``, ``state``), so the agent harness can run against an
in-process server, a child process over stdio, or a remote HTTP endpoint.
"""

from __future__ import annotations

import itertools
import json
import subprocess
import threading
import urllib.request
from typing import Any, Sequence

from .core import CutsceneServer, RpcError


class _ClientBase:
    def __init__(self) -> None:
        self._ids = itertools.count(1)

    def _roundtrip(self, msg: dict[str, Any]) -> dict[str, Any]:
        raise NotImplementedError

    def request(self, method: str, params: dict[str, Any] | None = None) -> Any:
        msg = {"jsonrpc": "2.0", "id": next(self._ids), "method": method, "params": params or {}}
        resp = self._roundtrip(msg)
        if "error" in resp:
            err = resp["error"]
            raise RpcError(err.get("code", 0), err.get("message", ""), err.get("data"))
        return resp["result"]

    def initialize(self) -> dict[str, Any]:
        return self.request("initialize")

    def list_tools(self, scope: str | None = None) -> list[dict[str, Any]]:
        params = {"scope": scope} if scope else {}
        return self.request("tools/list", params)["tools"]

    def call_tool(self, name: str, arguments: dict[str, Any] | None = None, scope: str | None = None) -> dict[str, Any]:
        params: dict[str, Any] = {"name": name, "arguments": arguments or {}}
        if scope:
            params["scope"] = scope
        return self.request("tools/call", params)

    def state(self) -> str:
        return self.request("state/get")["document"]

    def project_context(self) -> str:
        return self.request("prompts/project_context")["text"]

    def create_scope(self, tools: Sequence[str]) -> str:
        return self.request("scopes/create", {"tools": list(tools)})["scope"]

    def close_scope(self, scope: str) -> dict[str, Any]:
        return self.request("scopes/close", {"scope": scope})

    def trajectory(self) -> list[dict[str, Any]]:
        return self.request("trajectory/export")


class InProcessClient(_ClientBase):
    """Talks to a server object directly, still through the JSON framing."""

    def __init__(self, server: CutsceneServer) -> None:
        super().__init__()
        self.server = server

    def _roundtrip(self, msg):
        return json.loads(self.server.handle_text(json.dumps(msg)))


class StdioClient(_ClientBase):
    """Drives a server child process over newline-delimited stdio."""

    def __init__(self, argv: Sequence[str], **popen_kwargs: Any) -> None:
        super().__init__()
        self.proc = subprocess.Popen(
            list(argv), stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, encoding="utf-8", bufsize=1,
            **popen_kwargs,
        )
        self._lock = threading.Lock()

    def send_raw(self, line: str) -> dict[str, Any]:
        with self._lock:
            self.proc.stdin.write(line.rstrip("\n") + "\n")
            self.proc.stdin.flush()
            reply = self.proc.stdout.readline()
        if not reply:
            raise ConnectionError("server closed stdout")
        return json.loads(reply)

    def _roundtrip(self, msg):
        return self.send_raw(json.dumps(msg))

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.stdin.close()
            try:
                self.proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                self.proc.kill()
        self.proc.stdout.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class HttpClient(_ClientBase):
    def __init__(self, base_url: str, timeout: float = 30.0) -> None:
        super().__init__()
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._lock = threading.Lock()

    def send_raw(self, body: str) -> dict[str, Any]:
        req = urllib.request.Request(
            self.base_url + "/rpc", data=body.encode("utf-8"), headers={"Content-Type": "application/json"}
        )
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            return json.loads(resp.read().decode("utf-8"))

    def _roundtrip(self, msg):
        return self.send_raw(json.dumps(msg))

    def request(self, method, params=None):
        with self._lock:  # ids must stay unique across threads
            msg_id = next(self._ids)
        msg = {"jsonrpc": "2.0", "id": msg_id, "method": method, "params": params or {}}
        resp = self._roundtrip(msg)
        if "error" in resp:
            err = resp["error"]
            raise RpcError(err.get("code", 0), err.get("message", ""), err.get("data"))
        return resp["result"]
