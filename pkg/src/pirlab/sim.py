"""Multi-server execution: in-process simulation and a TCP transport.

Both transports move exactly the codec-defined payload bytes, so measured
sizes agree bit-for-bit; the TCP framing (a 9-byte header per message plus
the HELLO/CONFIG handshake) is accounted separately.

Wire format: every message is a frame

    magic "PIR1" | msg_type (1 byte) | length (4 bytes LE) | payload

with types QUERY 0x01, ANSWER 0x02, ERROR 0x03, HELLO 0x04, CONFIG 0x05.
A HELLO carries the client's parameter digest; the server answers with a
CONFIG echoing the protocol id and its own digest, which lets mismatched
deployments fail fast without shipping full parameters.  Servers are
stateless per request and serve concurrent connections against an
immutable database.

Database files are raw bit-packed little-endian vectors with an 8-byte
little-endian length header.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import math
import socket
import socketserver
import struct
import threading
import time
from dataclasses import dataclass, field
from typing import Sequence

from .engine import Scheme, answer, comm_cost, query_gen, reconstruct
from .errors import (
    MalformedQuery,
    ParamDigestMismatch,
    ParamError,
    Timeout,
    TransportError,
)

MAGIC = b"PIR1"
MSG_QUERY = 0x01
MSG_ANSWER = 0x02
MSG_ERROR = 0x03
MSG_HELLO = 0x04
MSG_CONFIG = 0x05
FRAME_HEADER_LEN = 9

ERR_BAD_FRAME = 1
ERR_BAD_QUERY = 2
ERR_DIGEST = 3
ERR_INTERNAL = 4

DEFAULT_TIMEOUT = 5.0


def encode_frame(msg_type: int, payload: bytes) -> bytes:
    if not 0 <= msg_type <= 0xFF:
        raise ParamError("message type must fit one byte")
    return MAGIC + bytes([msg_type]) + struct.pack("<I", len(payload)) + payload


def decode_frame(data: bytes) -> tuple[int, bytes]:
    if len(data) < FRAME_HEADER_LEN:
        raise TransportError("frame shorter than its header")
    if data[:4] != MAGIC:
        raise TransportError(f"bad magic {data[:4]!r}")
    msg_type = data[4]
    (length,) = struct.unpack("<I", data[5:9])
    payload = data[9:]
    if len(payload) != length:
        raise TransportError(f"declared {length} payload bytes, got {len(payload)}")
    return msg_type, payload


def _recv_exact(sock: socket.socket, length: int) -> bytes:
    chunks = []
    got = 0
    while got < length:
        chunk = sock.recv(length - got)
        if not chunk:
            raise TransportError("connection closed mid-frame")
        chunks.append(chunk)
        got += len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket) -> tuple[int, bytes]:
    header = _recv_exact(sock, FRAME_HEADER_LEN)
    if header[:4] != MAGIC:
        raise TransportError(f"bad magic {header[:4]!r}")
    msg_type = header[4]
    (length,) = struct.unpack("<I", header[5:9])
    payload = _recv_exact(sock, length) if length else b""
    return msg_type, payload


def write_frame(sock: socket.socket, msg_type: int, payload: bytes) -> int:
    frame = encode_frame(msg_type, payload)
    sock.sendall(frame)
    return len(frame)


def param_digest(scheme: Scheme) -> str:
    """Stable hash of the protocol id and every public parameter, including
    derived ingredients, so two independently built endpoints agree iff they
    built the same deployment."""
    text = "\n".join(f"{k} = {scheme.report[k]!r}" for k in sorted(scheme.report))
    text = f"{scheme.name}|n={scheme.n}|k={scheme.k}|t={scheme.t}\n" + text
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class ServerEntry:
    server: int
    query_payload_bytes: int
    answer_payload_bytes: int
    query_framed_bytes: int = 0
    answer_framed_bytes: int = 0
    rtt_seconds: float = 0.0


@dataclass
class Transcript:
    """Byte counts per server, payload and framing kept separate.

    aux never appears here: it stays on the client side.
    """

    protocol: str
    entries: list[ServerEntry] = field(default_factory=list)

    @property
    def payload_bytes(self) -> int:
        return sum(
            e.query_payload_bytes + e.answer_payload_bytes for e in self.entries
        )

    @property
    def framing_bytes(self) -> int:
        framed = sum(
            e.query_framed_bytes + e.answer_framed_bytes for e in self.entries
        )
        return framed - self.payload_bytes if framed else 0


def run_inprocess(
    scheme: Scheme, x: Sequence[int], i: int, seed: int, check: bool = True
) -> tuple[int, Transcript]:
    """Full query/answer/reconstruct round trip with exact byte accounting."""
    queries, aux = query_gen(scheme, i, seed)
    transcript = Transcript(protocol=scheme.name)
    answers = []
    for j, q in enumerate(queries):
        q_bytes = scheme.level_codec.encode(q)
        # Decode on the "server side" so the wire codec is genuinely exercised.
        t0 = time.perf_counter()
        a = answer(scheme, x, scheme.level_codec.decode(q_bytes))
        a_bytes = scheme.answer_codec.encode(scheme.flatten_answer(a))
        transcript.entries.append(
            ServerEntry(
                server=j + 1,
                query_payload_bytes=len(q_bytes),
                answer_payload_bytes=len(a_bytes),
                rtt_seconds=time.perf_counter() - t0,
            )
        )
        answers.append(scheme.unflatten_answer(scheme.answer_codec.decode(a_bytes)))
    bit = reconstruct(scheme, aux, answers)
    if check and bit != x[i]:
        raise AssertionError(f"round trip returned {bit}, database holds {x[i]}")
    return bit, transcript


@dataclass(frozen=True)
class ServerNode:
    """One server's whole world: its id, the scheme parameters, and the
    database.  There is deliberately no field for a retrieval index or aux;
    a node's behaviour is a function of (query, database) only."""

    server_id: int
    scheme: Scheme
    database: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.server_id <= self.scheme.k:
            raise ParamError(
                f"server id {self.server_id} out of range [1, {self.scheme.k}]"
            )
        if len(self.database) != self.scheme.n:
            raise ParamError("database length does not match the scheme")
        if any(bit not in (0, 1) for bit in self.database):
            raise ParamError("database entries must be bits")

    def answer_payload(self, query_payload: bytes) -> bytes:
        q = self.scheme.level_codec.decode(query_payload)
        a = answer(self.scheme, self.database, q)
        return self.scheme.answer_codec.encode(self.scheme.flatten_answer(a))


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        node: ServerNode = self.server.node  # type: ignore[attr-defined]
        digest = self.server.digest  # type: ignore[attr-defined]
        sock = self.request
        sock.settimeout(DEFAULT_TIMEOUT)
        try:
            while True:
                try:
                    msg_type, payload = read_frame(sock)
                except TransportError:
                    return
                if msg_type == MSG_HELLO:
                    if payload and payload.decode(errors="replace") != digest:
                        write_frame(
                            sock, MSG_ERROR, bytes([ERR_DIGEST]) + digest.encode()
                        )
                        continue
                    reply = f"{node.scheme.name} {digest}".encode()
                    write_frame(sock, MSG_CONFIG, reply)
                elif msg_type == MSG_QUERY:
                    try:
                        out = node.answer_payload(payload)
                    except MalformedQuery as exc:
                        write_frame(
                            sock, MSG_ERROR, bytes([ERR_BAD_QUERY]) + str(exc).encode()
                        )
                        continue
                    write_frame(sock, MSG_ANSWER, out)
                else:
                    write_frame(sock, MSG_ERROR, bytes([ERR_BAD_FRAME]))
        except (OSError, socket.timeout):
            return


class PirServer(socketserver.ThreadingTCPServer):
    """A long-running server daemon for one node; stateless per request."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, node: ServerNode, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.node = node
        self.digest = param_digest(node.scheme)
        self._thread: threading.Thread | None = None

    @property
    def endpoint(self) -> tuple[str, int]:
        return self.server_address[:2]

    def start(self):
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=2)


def serve(node: ServerNode, host: str = "127.0.0.1", port: int = 0) -> PirServer:
    """Start a server daemon; returns the running server (caller stops it)."""
    return PirServer(node, host, port).start()


def _query_one(endpoint, digest, q_bytes, timeout):
    host, port = endpoint
    t0 = time.perf_counter()
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except OSError as exc:
        # Refused and timed-out connections both mean "this server is down".
        raise Timeout(f"server {host}:{port} unreachable: {exc}") from exc
    with sock:
        sock.settimeout(timeout)
        try:
            hello_len = write_frame(sock, MSG_HELLO, digest.encode())
            msg_type, payload = read_frame(sock)
            if msg_type == MSG_ERROR and payload and payload[0] == ERR_DIGEST:
                raise ParamDigestMismatch(
                    f"server {host}:{port} reports digest {payload[1:].decode()!r}, "
                    f"client has {digest!r}"
                )
            if msg_type != MSG_CONFIG:
                raise TransportError(f"expected CONFIG, got type {msg_type}")
            q_framed = write_frame(sock, MSG_QUERY, q_bytes)
            msg_type, payload = read_frame(sock)
        except (socket.timeout, TimeoutError) as exc:
            raise Timeout(f"server {host}:{port} timed out") from exc
        if msg_type == MSG_ERROR:
            code = payload[0] if payload else 0
            raise TransportError(
                f"server {host}:{port} error code {code}: {payload[1:].decode(errors='replace')}"
            )
        if msg_type != MSG_ANSWER:
            raise TransportError(f"expected ANSWER, got type {msg_type}")
        return payload, q_framed, FRAME_HEADER_LEN + len(payload), time.perf_counter() - t0


def client_retrieve(
    endpoints: Sequence[tuple[str, int]],
    scheme: Scheme,
    i: int,
    seed: int,
    timeout: float = DEFAULT_TIMEOUT,
) -> tuple[int, Transcript]:
    """Send each query to its server concurrently, gather, reconstruct."""
    if len(endpoints) != scheme.k:
        raise ParamError(
            f"protocol needs exactly {scheme.k} endpoints, got {len(endpoints)}"
        )
    queries, aux = query_gen(scheme, i, seed)
    digest = param_digest(scheme)
    query_bytes = [scheme.level_codec.encode(q) for q in queries]
    transcript = Transcript(protocol=scheme.name)
    answers: list = [None] * scheme.k
    with concurrent.futures.ThreadPoolExecutor(max_workers=scheme.k) as pool:
        futures = {
            pool.submit(_query_one, ep, digest, qb, timeout): j
            for j, (ep, qb) in enumerate(zip(endpoints, query_bytes))
        }
        for fut in concurrent.futures.as_completed(futures):
            j = futures[fut]
            payload, q_framed, a_framed, rtt = fut.result()
            answers[j] = scheme.unflatten_answer(scheme.answer_codec.decode(payload))
            transcript.entries.append(
                ServerEntry(
                    server=j + 1,
                    query_payload_bytes=len(query_bytes[j]),
                    answer_payload_bytes=len(payload),
                    query_framed_bytes=q_framed,
                    answer_framed_bytes=a_framed,
                    rtt_seconds=rtt,
                )
            )
    transcript.entries.sort(key=lambda e: e.server)
    return reconstruct(scheme, aux, answers), transcript


def save_database(path, x: Sequence[int]) -> None:
    """8-byte LE length header, then bit-packed little-endian data."""
    n = len(x)
    packed = bytearray(struct.pack("<Q", n))
    byte = 0
    for j, bit in enumerate(x):
        if bit not in (0, 1):
            raise ParamError("database entries must be bits")
        byte |= bit << (j % 8)
        if j % 8 == 7:
            packed.append(byte)
            byte = 0
    if n % 8:
        packed.append(byte)
    with open(path, "wb") as fh:
        fh.write(packed)


def load_database(path) -> tuple[int, ...]:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 8:
        raise ParamError(f"{path}: missing length header")
    (n,) = struct.unpack("<Q", data[:8])
    body = data[8:]
    if len(body) != (n + 7) // 8:
        raise ParamError(f"{path}: expected {(n + 7) // 8} data bytes, got {len(body)}")
    return tuple((body[j // 8] >> (j % 8)) & 1 for j in range(n))


def bench(
    build,
    n_values: Sequence[int],
    trials: int = 3,
    seed: int = 0,
    timing: bool = False,
) -> list[dict]:
    """Payload sizes (and optionally times) across a grid of database sizes.

    ``build`` maps n to a Scheme.  Sizes are database-independent, so each
    row also carries the closed-form prediction and the k^2/(k-1) * log2(n)
    lower-bound baseline for context.
    """
    rows = []
    for idx, n in enumerate(n_values):
        scheme = build(n)
        cost = comm_cost(scheme)
        x = tuple((j * 2654435761 >> 7) & 1 for j in range(n))
        answer_time = 0.0
        total_time = 0.0
        for trial in range(trials):
            i = (trial * 7919) % n
            t0 = time.perf_counter()
            _, transcript = run_inprocess(scheme, x, i, seed + trial)
            total_time += time.perf_counter() - t0
            answer_time += sum(e.rtt_seconds for e in transcript.entries)
        row = {
            "protocol": scheme.name,
            "n": n,
            "k": scheme.k,
            "payload_bytes": cost.payload_bytes,
            "raw_bits": round(cost.raw_bits, 3),
            "predicted_bits": round(cost.raw_bits, 3),
            "lower_bound_bits": round(
                scheme.k**2 / (scheme.k - 1) * math.log2(n) if n > 1 else 0.0, 3
            ),
        }
        if timing:
            row["server_time_s"] = round(answer_time / trials, 6)
            row["client_time_s"] = round(total_time / trials, 6)
        rows.append(row)
    return rows
