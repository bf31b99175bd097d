"""Expose the toolkit over HTTP and watch the event stream.

Starts the server on a free local port, subscribes to the SSE feed, makes a
handful of calls through the HTTP client, and prints the recorded trajectory.

    python demos/02_tools_over_http.py
"""

import threading
import urllib.request

from cutscene.server import CutsceneServer, HttpClient, HttpTransport, parse_sse

server = CutsceneServer(project_context="A ferry terminal at dawn.")
transport = HttpTransport(server, port=0).start()
print("listening on", transport.url)

seen = []
opened = threading.Event()


def listen():
    with urllib.request.urlopen(transport.url + "/events", timeout=30) as stream:
        for raw in stream:
            line = raw.decode()
            if line.startswith(":"):
                opened.set()
            seen.append(line)


threading.Thread(target=listen, daemon=True).start()
opened.wait(5)

client = HttpClient(transport.url)
print("server:", client.initialize()["serverInfo"])
print("context:", client.project_context())
print("tools:", len(client.list_tools()))

client.call_tool("add_character", {"name": "PILOT", "identifier": "char_002"})
client.call_tool("add_camera", {"camera_name": "Bridge"})
bad = client.call_tool("add_camera", {"camera_name": "Bridge"})
print("second add_camera:", bad["status"], bad["data"]["error"])

# Scopes restrict what a caller may touch.
scope = client.create_scope(["get_sequence_content"])
denied = client.call_tool("add_camera", {"camera_name": "Sneaky"}, scope)
print("outside the scope:", denied["data"]["error"])
print("scope closed:", client.close_scope(scope))

print("\ntrajectory:")
for rec in client.trajectory():
    print(f"  #{rec['index']} {rec['tool']:24s} {rec['status']}")

transport.stop()
server.close()
print(f"\n{len(parse_sse(seen))} responses were mirrored on the event stream")
