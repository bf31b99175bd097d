"""JSON-RPC 2.0 front end for the toolkit.

The server owns one live :class:`Toolkit`.  Every ``tools/call`` is pushed
onto a single-worker executor, so calls from any number of transport threads
execute one at a time, and the call is appended to the trajectory from inside
that worker.  Trajectory order is therefore the execution order.

Methods::

    initialize                 -> session info
    tools/list {scope?}        -> tool schemas (filtered by scope whitelist)
    tools/call {name, arguments, scope?} -> result envelope
    prompts/project_context    -> configured project prompt text
    state/get                  -> serialized sequence (not recorded)
    scopes/create {tools}      -> {scope}
    scopes/close {scope}       -> {calls, violations}
    trajectory/export          -> list of call records
"""

from __future__ import annotations

import itertools
import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from .. import _json
from ..toolkit import TOOL_NAMES, Toolkit, error

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603

PROTOCOL_VERSION = "2024-11-05"


class RpcError(Exception):
    def __init__(self, code: int, message: str, data: Any = None) -> None:
        super().__init__(message)
        self.code = code
        self.message = message
        self.data = data

    def to_dict(self) -> dict[str, Any]:
        doc = {"code": self.code, "message": self.message}
        if self.data is not None:
            doc["data"] = self.data
        return doc


def canonical_args(args: Any) -> Any:
    """Arguments as they would read back from a canonical dump."""
    return json.loads(_json.dumps(args, indent=None))


@dataclass
class Scope:
    scope_id: str
    tools: frozenset[str]
    calls: int = 0
    violations: int = 0


@dataclass
class Session:
    session_id: str
    toolkit: Toolkit
    trajectory: list[dict[str, Any]] = field(default_factory=list)


class CutsceneServer:
    def __init__(
        self,
        toolkit: Toolkit | None = None,
        project_context: str = "",
        toolkit_factory: Callable[[], Toolkit] | None = None,
    ) -> None:
        self.session = Session(uuid.uuid4().hex[:12], toolkit or (toolkit_factory or Toolkit)())
        self.project_context = project_context
        self._queue = ThreadPoolExecutor(max_workers=1, thread_name_prefix="cutscene-exec")
        self._scopes: dict[str, Scope] = {}
        self._scope_ids = itertools.count(1)
        self._scope_lock = threading.Lock()
        self._methods: dict[str, Callable[[dict[str, Any]], Any]] = {
            "initialize": self._initialize,
            "tools/list": self._tools_list,
            "tools/call": self._tools_call,
            "prompts/project_context": self._project_context,
            "state/get": self._state_get,
            "scopes/create": self._scopes_create,
            "scopes/close": self._scopes_close,
            "trajectory/export": self._trajectory_export,
        }

    @property
    def toolkit(self) -> Toolkit:
        return self.session.toolkit

    def close(self) -> None:
        self._queue.shutdown(wait=True)

    # -- framing ----------------------------------------------------------

    def handle_text(self, text: str) -> str | None:
        """One framed message in, one framed response out (None for notifications)."""
        try:
            msg = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return json.dumps(_error_response(None, RpcError(PARSE_ERROR, f"parse error: {exc}")))
        resp = self.handle(msg)
        return None if resp is None else json.dumps(resp, ensure_ascii=False)

    def handle(self, msg: Any) -> dict[str, Any] | None:
        if not isinstance(msg, dict):
            return _error_response(None, RpcError(INVALID_REQUEST, "request must be a JSON object"))
        req_id = msg.get("id")
        is_notification = "id" not in msg
        if msg.get("jsonrpc") != "2.0" or not isinstance(msg.get("method"), str):
            return _error_response(req_id, RpcError(INVALID_REQUEST, "expected jsonrpc '2.0' and a string method"))
        if req_id is not None and (isinstance(req_id, bool) or not isinstance(req_id, (int, float, str))):
            return _error_response(None, RpcError(INVALID_REQUEST, "id must be a number, string or null"))
        params = msg.get("params", {})
        if params is None:
            params = {}
        try:
            method = self._methods.get(msg["method"])
            if method is None:
                raise RpcError(METHOD_NOT_FOUND, f"method not found: {msg['method']}")
            if not isinstance(params, dict):
                raise RpcError(INVALID_PARAMS, "params must be an object")
            result = method(params)
        except RpcError as exc:
            return None if is_notification else _error_response(req_id, exc)
        except Exception as exc:  # never let a handler bug kill the transport
            return None if is_notification else _error_response(req_id, RpcError(INTERNAL_ERROR, str(exc)))
        if is_notification:
            return None
        return {"jsonrpc": "2.0", "id": req_id, "result": result}

    # -- methods ----------------------------------------------------------

    def _initialize(self, params):
        return {
            "protocolVersion": PROTOCOL_VERSION,
            "serverInfo": {"name": "cutscene-toolkit", "version": "0.1.0"},
            "capabilities": {"tools": {}, "prompts": {}},
            "session_id": self.session.session_id,
        }

    def _scope(self, params) -> Scope | None:
        scope_id = params.get("scope")
        if scope_id is None:
            return None
        with self._scope_lock:
            scope = self._scopes.get(scope_id)
        if scope is None:
            raise RpcError(INVALID_PARAMS, f"unknown scope {scope_id!r}")
        return scope

    def _tools_list(self, params):
        scope = self._scope(params)
        names = [n for n in TOOL_NAMES if scope is None or n in scope.tools]
        return {"tools": Toolkit.schemas(names)}

    def _tools_call(self, params):
        name = params.get("name")
        args = params.get("arguments", {})
        if not isinstance(name, str) or not name:
            raise RpcError(INVALID_PARAMS, "tools/call needs a string 'name'")
        if args is None:
            args = {}
        if not isinstance(args, dict):
            raise RpcError(INVALID_PARAMS, "tools/call 'arguments' must be an object")
        scope = self._scope(params)
        return self._queue.submit(self._execute, name, args, scope).result()

    def _execute(self, name: str, args: dict[str, Any], scope: Scope | None) -> dict[str, Any]:
        # Runs on the single worker thread.
        try:
            recorded_args = canonical_args(args)
        except (TypeError, ValueError):
            recorded_args = {}
            envelope = error("schema-violation", "arguments are not JSON-serializable")
        else:
            if scope is not None and name not in scope.tools:
                scope.violations += 1
                envelope = error(
                    "whitelist-violation", f"tool {name!r} is not available in this scope",
                    allowed=sorted(scope.tools),
                )
            else:
                # Execute exactly what gets recorded so replays are faithful.
                envelope = self.toolkit.call(name, recorded_args)
        if scope is not None:
            scope.calls += 1
        trajectory = self.session.trajectory
        trajectory.append(
            {"index": len(trajectory), "tool": name, "args": recorded_args, "status": envelope["status"]}
        )
        return envelope

    def _project_context(self, params):
        return {"text": self.project_context}

    def _state_get(self, params):
        return {"document": self._queue.submit(self.toolkit.state_text).result()}

    def _scopes_create(self, params):
        tools = params.get("tools")
        if not isinstance(tools, list) or not all(isinstance(t, str) for t in tools):
            raise RpcError(INVALID_PARAMS, "scopes/create needs a list of tool names")
        unknown = sorted(set(tools) - set(TOOL_NAMES))
        if unknown:
            raise RpcError(INVALID_PARAMS, f"unknown tools in scope: {unknown}")
        with self._scope_lock:
            scope_id = f"scope-{next(self._scope_ids)}"
            self._scopes[scope_id] = Scope(scope_id, frozenset(tools))
        return {"scope": scope_id}

    def _scopes_close(self, params):
        scope = self._scope(params)
        if scope is None:
            raise RpcError(INVALID_PARAMS, "scopes/close needs 'scope'")
        # Drain the queue so the counts include every submitted call.
        self._queue.submit(lambda: None).result()
        with self._scope_lock:
            self._scopes.pop(scope.scope_id, None)
        return {"scope": scope.scope_id, "calls": scope.calls, "violations": scope.violations}

    def _trajectory_export(self, params):
        return self._queue.submit(lambda: [dict(r) for r in self.session.trajectory]).result()


def _error_response(req_id: Any, exc: RpcError) -> dict[str, Any]:
    return {"jsonrpc": "2.0", "id": req_id, "error": exc.to_dict()}
