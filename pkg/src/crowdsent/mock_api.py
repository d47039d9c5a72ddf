"""Bundled mock HTTP server speaking the gateway wire protocol.

Serves a CorpusStore over loopback for tests and demos. Supports fault
injection (429 with Retry-After, 5xx) and counts requests per route so
tests can assert pagination behavior.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlparse

from .corpus import CorpusStore


@dataclass
class _Injected:
    status: int
    retry_after: float | None = None


class MockApiServer:
    def __init__(self, store: CorpusStore, host: str = "127.0.0.1", port: int = 0):
        self.store = store
        self.requests: list[str] = []  # raw paths, in arrival order
        self._injected: list[_Injected] = []
        self._lock = threading.Lock()

        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # quiet test output
                pass

            def do_GET(self):
                server._handle(self)

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    # -- lifecycle -----------------------------------------------------------

    @property
    def base_url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockApiServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self) -> "MockApiServer":
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    # -- fault injection and counters ----------------------------------------

    def inject(self, status: int, retry_after: float | None = None, times: int = 1) -> None:
        """Make the next `times` requests fail with the given status."""
        with self._lock:
            self._injected.extend(_Injected(status, retry_after) for _ in range(times))

    def request_count(self, prefix: str = "") -> int:
        with self._lock:
            return sum(1 for path in self.requests if path.startswith(prefix))

    def reset_counters(self) -> None:
        with self._lock:
            self.requests.clear()

    # -- request handling ------------------------------------------------------

    def _handle(self, handler: BaseHTTPRequestHandler) -> None:
        parsed = urlparse(handler.path)
        with self._lock:
            self.requests.append(handler.path)
            injected = self._injected.pop(0) if self._injected else None
        if injected is not None:
            headers = {}
            if injected.retry_after is not None:
                headers["Retry-After"] = f"{injected.retry_after:g}"
            self._send(handler, injected.status, {"error": f"injected {injected.status}"}, headers)
            return

        query = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        parts = [unquote(p) for p in parsed.path.split("/") if p]
        try:
            if parts == ["lists"] and "member" in query:
                self._send(handler, 200, self._lists_containing(query["member"]))
            elif len(parts) == 3 and parts[0] == "lists" and parts[2] == "members":
                self._send(handler, 200, self._list_members(parts[1]))
            elif len(parts) == 3 and parts[0] == "users" and parts[2] == "timeline":
                status, payload = self._timeline(parts[1], query)
                self._send(handler, status, payload)
            else:
                self._send(handler, 404, {"error": "no such route"})
        except BrokenPipeError:
            pass

    def _send(self, handler, status: int, payload: dict, headers: dict | None = None) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        handler.send_response(status)
        handler.send_header("Content-Type", "application/json; charset=utf-8")
        handler.send_header("Content-Length", str(len(body)))
        for key, value in (headers or {}).items():
            handler.send_header(key, value)
        handler.end_headers()
        handler.wfile.write(body)

    # -- route bodies ----------------------------------------------------------

    def _lists_containing(self, user_id: str) -> dict:
        records = self.store.lists_containing(user_id)
        return {"lists": [record.to_json() for record in records]}

    def _list_members(self, list_id: str) -> dict:
        record = self.store.lists.get(list_id)
        if record is None:
            return {"users": []}
        users = []
        for member_id in sorted(record.member_ids):
            profile = self.store.users.get(member_id)
            if profile is not None:
                users.append(profile.to_json())
            else:
                users.append({"id": member_id, "handle": member_id, "display_name": "",
                              "location": None, "description": None, "protected": False})
        return {"users": users}

    def _timeline(self, user_id: str, query: dict) -> tuple[int, dict]:
        profile = self.store.users.get(user_id)
        if profile is not None and profile.protected:
            return 403, {"error": "protected account"}
        count = max(1, int(query.get("count", "200")))
        offset = int(query.get("cursor", "0") or "0")
        timeline = self.store.tweets_by_user(user_id)
        page = timeline[offset : offset + count]
        next_offset = offset + len(page)
        next_cursor = str(next_offset) if next_offset < len(timeline) else None
        return 200, {
            "tweets": [tweet.to_json() for tweet in page],
            "next_cursor": next_cursor,
        }


def main(argv=None):
    import argparse

    from .corpus import load_corpus

    parser = argparse.ArgumentParser(description="Serve a JSONL corpus over the mock API.")
    parser.add_argument("--users", required=True)
    parser.add_argument("--lists", required=True)
    parser.add_argument("--tweets", required=True)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8410)
    args = parser.parse_args(argv)

    store = load_corpus(args.users, args.lists, args.tweets)
    server = MockApiServer(store, host=args.host, port=args.port)
    print(f"mock API serving at {server.base_url}")
    server._thread.start()
    try:
        server._thread.join()
    except KeyboardInterrupt:
        server.stop()


if __name__ == "__main__":
    main()
