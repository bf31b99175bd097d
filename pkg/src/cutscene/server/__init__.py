from .client import HttpClient, InProcessClient, StdioClient
from .core import (
    INVALID_PARAMS,
    INVALID_REQUEST,
    METHOD_NOT_FOUND,
    PARSE_ERROR,
    CutsceneServer,
    RpcError,
    canonical_args,
)
from .transports import HttpTransport, parse_sse, serve_stdio

__all__ = [
    "CutsceneServer",
    "HttpClient",
    "HttpTransport",
    "INVALID_PARAMS",
    "INVALID_REQUEST",
    "InProcessClient",
    "METHOD_NOT_FOUND",
    "PARSE_ERROR",
    "RpcError",
    "StdioClient",
    "canonical_args",
    "parse_sse",
    "serve_stdio",
]
