"""Network edge of the gateway.

A single listening port speaks three things, sniffed from the first
request line of each connection:

  * newline-delimited JSON over plain TCP (headless clients, tests)
  * the same JSON messages over WebSocket text frames (the browser UI)
  * plain HTTP GET for the UI's static asset bundle

One client owns one session: connections are served one at a time and
each gets a fresh engine, so calibration state is never shared.
"""

from __future__ import annotations

import base64
import hashlib
import json
import socket
import struct
from pathlib import Path

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
_HTTP_METHODS = (b"GET ", b"POST ", b"HEAD ", b"OPTIONS ")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".png": "image/png",
}


def _ws_accept_value(key: str) -> str:
    digest = hashlib.sha1((key + _WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def _read_ws_frame(reader) -> tuple[int, bytes] | None:
    """Read one frame; returns (opcode, payload) or None on EOF.

    Reassembles continuation fragments; client frames must be masked per
    RFC 6455.
    """
    opcode = None
    payload = bytearray()
    while True:
        head = reader.read(2)
        if len(head) < 2:
            return None
        fin = head[0] & 0x80
        op = head[0] & 0x0F
        masked = head[1] & 0x80
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack(">H", reader.read(2))[0]
        elif length == 127:
            length = struct.unpack(">Q", reader.read(8))[0]
        mask = reader.read(4) if masked else b""
        data = reader.read(length) if length else b""
        if len(data) < length:
            return None
        if masked:
            data = bytes(b ^ mask[i % 4] for i, b in enumerate(data))
        if op != 0:
            opcode = op
        payload.extend(data)
        if fin:
            return opcode or 0, bytes(payload)


def _ws_frame(opcode: int, payload: bytes) -> bytes:
    head = bytearray([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head.append(n)
    elif n < 1 << 16:
        head.append(126)
        head.extend(struct.pack(">H", n))
    else:
        head.append(127)
        head.extend(struct.pack(">Q", n))
    return bytes(head) + payload


def encode_line(msg: dict) -> bytes:
    return (json.dumps(msg, separators=(",", ":")) + "\n").encode("utf-8")


class GatewayServer:
    def __init__(self, host: str, port: int, engine_factory, ui_dir=None, on_session_end=None):
        self.engine_factory = engine_factory
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.on_session_end = on_session_end
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen(1)
        self.host, self.port = self._listener.getsockname()[:2]
        self._closed = False

    def close(self) -> None:
        self._closed = True
        try:
            self._listener.close()
        except OSError:
            pass

    def serve_forever(self) -> None:
        while not self._closed:
            try:
                conn, _addr = self._listener.accept()
            except OSError:
                return
            try:
                self._handle_conn(conn)
            except (ConnectionError, TimeoutError, OSError):
                pass
            finally:
                try:
                    conn.close()
                except OSError:
                    pass

    # -- connection handling ----------------------------------------------

    def _handle_conn(self, conn: socket.socket) -> None:
        reader = conn.makefile("rb")
        first = reader.readline(8192)
        if not first:
            return
        if first.startswith(_HTTP_METHODS):
            self._handle_http(conn, reader, first)
        else:
            self._handle_tcp(conn, reader, first)

    def _run_session(self, send, recv_text) -> None:
        """Shared message loop: decode, hand to the engine, send replies."""
        engine = self.engine_factory()
        try:
            while True:
                text = recv_text()
                if text is None:
                    break
                try:
                    msg = json.loads(text)
                except json.JSONDecodeError:
                    send({"type": "error", "reason": "invalid JSON"})
                    continue
                for out in engine.handle(msg):
                    send(out)
        finally:
            engine.finish()
            if self.on_session_end:
                self.on_session_end(engine)

    def _handle_tcp(self, conn: socket.socket, reader, first: bytes) -> None:
        pending = [first]

        def recv_text():
            if pending:
                return pending.pop().decode("utf-8", errors="replace")
            line = reader.readline(1 << 20)
            if not line:
                return None
            return line.decode("utf-8", errors="replace")

        def send(msg: dict):
            conn.sendall(encode_line(msg))

        self._run_session(send, recv_text)

    # -- HTTP / WebSocket ---------------------------------------------------

    def _handle_http(self, conn: socket.socket, reader, request_line: bytes) -> None:
        try:
            method, path, _version = request_line.decode("latin-1").split(" ", 2)
        except ValueError:
            self._http_response(conn, 400, b"bad request")
            return
        headers = {}
        while True:
            line = reader.readline(8192)
            if not line or line in (b"\r\n", b"\n"):
                break
            if b":" in line:
                k, v = line.split(b":", 1)
                headers[k.strip().lower().decode("latin-1")] = v.strip().decode("latin-1")
        if headers.get("upgrade", "").lower() == "websocket":
            self._handle_websocket(conn, reader, headers)
            return
        if method != "GET":
            self._http_response(conn, 405, b"method not allowed")
            return
        self._serve_static(conn, path)

    def _handle_websocket(self, conn: socket.socket, reader, headers: dict) -> None:
        key = headers.get("sec-websocket-key")
        if not key:
            self._http_response(conn, 400, b"missing websocket key")
            return
        conn.sendall(
            (
                "HTTP/1.1 101 Switching Protocols\r\n"
                "Upgrade: websocket\r\n"
                "Connection: Upgrade\r\n"
                f"Sec-WebSocket-Accept: {_ws_accept_value(key)}\r\n\r\n"
            ).encode("latin-1")
        )

        def recv_text():
            while True:
                frame = _read_ws_frame(reader)
                if frame is None:
                    return None
                opcode, payload = frame
                if opcode == 0x8:  # close
                    try:
                        conn.sendall(_ws_frame(0x8, payload[:2]))
                    except OSError:
                        pass
                    return None
                if opcode == 0x9:  # ping
                    conn.sendall(_ws_frame(0xA, payload))
                    continue
                if opcode == 0x1:
                    return payload.decode("utf-8", errors="replace")
                # ignore binary/pong frames

        def send(msg: dict):
            conn.sendall(_ws_frame(0x1, json.dumps(msg, separators=(",", ":")).encode("utf-8")))

        self._run_session(send, recv_text)

    def _serve_static(self, conn: socket.socket, path: str) -> None:
        if self.ui_dir is None:
            self._http_response(conn, 404, b"no UI bundle configured")
            return
        rel = path.split("?", 1)[0]
        if rel in ("", "/"):
            rel = "/index.html"
        try:
            target = (self.ui_dir / rel.lstrip("/")).resolve()
        except OSError:
            self._http_response(conn, 404, b"not found")
            return
        if not target.is_relative_to(self.ui_dir) or not target.is_file():
            self._http_response(conn, 404, b"not found")
            return
        body = target.read_bytes()
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._http_response(conn, 200, body, ctype)

    @staticmethod
    def _http_response(conn: socket.socket, status: int, body: bytes, ctype: str = "text/plain") -> None:
        reason = {200: "OK", 400: "Bad Request", 404: "Not Found", 405: "Method Not Allowed"}.get(
            status, "Error"
        )
        head = (
            f"HTTP/1.1 {status} {reason}\r\n"
            f"Content-Type: {ctype}\r\n"
            f"Content-Length: {len(body)}\r\n"
            "Connection: close\r\n\r\n"
        ).encode("latin-1")
        try:
            conn.sendall(head + body)
        except OSError:
            pass
