"""Graph serialization: graph6, plain edge lists, and JSON label tables."""

from __future__ import annotations

import json

from .errors import ParameterError
from .graph import Graph


def _n_to_graph6(n: int) -> bytes:
    if n < 0:
        raise ParameterError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> (6 * k)) & 63) + 63 for k in range(5, -1, -1)])
    raise ParameterError("vertex count too large for graph6")


def _n_from_graph6(data: bytes) -> tuple[int, int]:
    """Returns (n, bytes consumed)."""
    if data[0] != 126:
        return data[0] - 63, 1
    if data[1] != 126:
        vals = [b - 63 for b in data[1:4]]
        return (vals[0] << 12) | (vals[1] << 6) | vals[2], 4
    vals = [b - 63 for b in data[2:8]]
    n = 0
    for v in vals:
        n = (n << 6) | v
    return n, 8


def to_graph6(G: Graph) -> bytes:
    """graph6 encoding (single line, no trailing newline)."""
    n = G.n
    out = bytearray(_n_to_graph6(n))
    bits = []
    for j in range(1, n):
        col = G.adj[j]
        for i in range(j):
            bits.append(col >> i & 1)
    for k in range(0, len(bits), 6):
        group = bits[k : k + 6]
        group += [0] * (6 - len(group))
        val = 0
        for b in group:
            val = (val << 1) | b
        out.append(val + 63)
    return bytes(out)


def from_graph6(data: bytes, labels=None) -> Graph:
    """Decode a graph6 line; labels default to 0..n-1."""
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data or any(not 63 <= b <= 126 for b in data):
        raise ParameterError("not a graph6 line")
    n, consumed = _n_from_graph6(data)
    body = data[consumed:]
    expected = (n * (n - 1) // 2 + 5) // 6
    if len(body) != expected:
        raise ParameterError(f"graph6 body length {len(body)}, expected {expected}")
    bits = []
    for byte in body:
        v = byte - 63
        if not 0 <= v <= 63:
            raise ParameterError("invalid graph6 byte")
        bits.extend((v >> k) & 1 for k in range(5, -1, -1))
    adj = [0] * n
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            idx += 1
    if labels is None:
        labels = range(n)
    return Graph(labels, adj)


def to_edge_list(G: Graph) -> str:
    """Plain text: header line 'n m', then 'u v' per edge, 0-based, u < v, sorted."""
    lines = [f"{G.n} {G.edge_count()}"]
    for u in range(G.n):
        row = G.adj[u] >> (u + 1) << (u + 1)
        v = u + 1
        r = row >> v
        while r:
            if r & 1:
                lines.append(f"{u} {v}")
            r >>= 1
            v += 1
    return "\n".join(lines) + ("\n" if lines else "")


def from_edge_list(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty edge list")
    n_s, m_s = lines[0].split()
    n, m = int(n_s), int(m_s)
    edges = []
    for line in lines[1:]:
        u_s, v_s = line.split()
        u, v = int(u_s), int(v_s)
        if u == v:
            raise ParameterError("loop in edge list")
        if not (0 <= u < n and 0 <= v < n):
            raise ParameterError("edge endpoint out of range")
        edges.append((u, v))
    if len(edges) != m:
        raise ParameterError(f"edge list header claims {m} edges, found {len(edges)}")
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(range(n), adj)


def label_table_json(G: Graph, label_encoder=None) -> str:
    """JSON array mapping vertex index -> label description."""
    if label_encoder is None:
        label_encoder = _default_label_encoder
    return json.dumps([label_encoder(lab) for lab in G.labels], separators=(",", ":"))


def _default_label_encoder(lab):
    if hasattr(lab, "to_json"):
        return lab.to_json()
    if isinstance(lab, tuple):
        return list(lab)
    return lab
