"""Directed graphs, the incidence-style matrix N_E, and path-algebra
invariants.

For a finite directed graph the matrix N_E has one row per vertex and one
column per regular vertex (a vertex emitting at least one edge), with
entry (v, w) = delta_{v,w} - #{edges from w to v}.  The even/odd
dimensions of the invariants of the Leavitt path algebra over the fraction
field are coker and ker of N_E; the Cohn path algebra contributes one even
dimension per vertex.  The integer Smith normal form is reported as
auxiliary integral data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scalars import PrimeConfig


@dataclass(frozen=True)
class DirectedGraph:
    """A finite directed graph; parallel edges and loops are allowed."""

    vertices: tuple
    edges: tuple  # (source, range) pairs

    def __post_init__(self):
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise ValueError("vertex names must be distinct")
        for s, r in self.edges:
            if s not in names or r not in names:
                raise ValueError(f"edge ({s}, {r}) uses undeclared vertex")

    @classmethod
    def from_json(cls, data: dict) -> "DirectedGraph":
        return cls(tuple(data["vertices"]),
                   tuple((e["s"], e["r"]) for e in data["edges"]))

    @classmethod
    def loop(cls, loops: int = 1) -> "DirectedGraph":
        return cls(("v",), (("v", "v"),) * loops)


def regular_vertices(g: DirectedGraph) -> tuple:
    """Vertices emitting at least one edge, in declaration order."""
    sources = {s for s, _ in g.edges}
    return tuple(v for v in g.vertices if v in sources)


@dataclass(frozen=True)
class IncidenceNE:
    matrix: tuple  # rows over vertices, columns over regular vertices
    row_vertices: tuple
    col_vertices: tuple


def incidence_NE(g: DirectedGraph) -> IncidenceNE:
    """(v, w) -> delta_{v,w} - #(edges w -> v)."""
    reg = regular_vertices(g)
    count = {}
    for s, r in g.edges:
        count[(r, s)] = count.get((r, s), 0) + 1
    rows = tuple(
        tuple((1 if v == w else 0) - count.get((v, w), 0) for w in reg)
        for v in g.vertices)
    return IncidenceNE(rows, tuple(g.vertices), reg)


def smith_normal_form(M) -> tuple:
    """U, D, W with U M W = D, U and W unimodular, d1 | d2 | ... >= 0.

    Deterministic: the pivot is the entry of smallest absolute value in
    the remaining block, ties broken by position.
    """
    M = np.array(M, dtype=object)
    if M.ndim != 2:
        M = M.reshape(len(M), -1)
    m, n = M.shape
    D = M.copy()
    U = np.eye(m, dtype=object)
    W = np.eye(n, dtype=object)
    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    v = abs(D[i, j])
                    if v and (best is None or v < best[0]):
                        best = (v, i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != k:
                D[[k, bi]] = D[[bi, k]]
                U[[k, bi]] = U[[bi, k]]
            if bj != k:
                D[:, [k, bj]] = D[:, [bj, k]]
                W[:, [k, bj]] = W[:, [bj, k]]
            pivot = D[k, k]
            done = True
            for i in range(k + 1, m):
                if D[i, k]:
                    q = D[i, k] // pivot
                    D[i] -= q * D[k]
                    U[i] -= q * U[k]
                    if D[i, k]:
                        done = False
            for j in range(k + 1, n):
                if D[k, j]:
                    q = D[k, j] // pivot
                    D[:, j] -= q * D[:, k]
                    W[:, j] -= q * W[:, k]
                    if D[k, j]:
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = None
                for i in range(k + 1, m):
                    for j in range(k + 1, n):
                        if D[i, j] % pivot:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                D[k] += D[bad]
                U[k] += U[bad]
        if D[k, k] < 0:
            D[k] = -D[k]
            U[k] = -U[k]
    return U, D, W


def snf_diagonal(M) -> tuple:
    M = np.array(M, dtype=object)
    if 0 in M.shape:
        return ()
    _, D, _ = smith_normal_form(M)
    return tuple(int(D[i, i]) for i in range(min(D.shape)))


@dataclass(frozen=True)
class HAResult:
    """F-dimensions in even/odd degree plus the integer elementary
    divisors."""

    dim_ha0: int
    dim_ha1: int
    snf_invariants: tuple = field(default=())

    def as_dict(self):
        return {"ha0": self.dim_ha0, "ha1": self.dim_ha1,
                "snf": list(self.snf_invariants)}


def ha_leavitt(g: DirectedGraph, cfg: PrimeConfig | None = None) -> HAResult:
    """Even/odd dimensions coker(N_E), ker(N_E) over the fraction field."""
    ne = incidence_NE(g)
    diag = snf_diagonal(ne.matrix)
    rank = sum(1 for d in diag if d)
    return HAResult(len(g.vertices) - rank,
                    len(ne.col_vertices) - rank, diag)


def ha_cohn(g: DirectedGraph, cfg: PrimeConfig | None = None) -> HAResult:
    """One even dimension per vertex, nothing odd."""
    return HAResult(len(g.vertices), 0, ())
