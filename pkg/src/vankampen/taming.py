"""The taming loop: replace offending icicle bodies until the combing is graph f-tame."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .combing import (
    TameFunction,
    build_crossing_dag,
    graph_to_full_tame,
    main_f_argument,
    obstruction_level,
    tameness_profile,
    violating_edges,
)
from .diagram import PlanarDiagram, boundary_word, coarse_distance_field, validate_diagram, vertex_distances
from .geodesics import SpanningTree, bfs_geodesic_tree, check_tree, verify_partial_geodesic_extension
from .icicle import IcicleBuilder, check_decomposition, flow_function, maximal_icicles
from .oracle import Oracle
from .presentation import Presentation, Word, serialize_presentation
from .surgery import PadContext, SurgeryError, excise_and_replace_many, prop5_pipeline

CERT_VERSION = 1


class OracleGap(RuntimeError):
    """The run needs an oracle value that is not known exactly."""


@dataclass(frozen=True)
class FProvenance:
    """Where f comes from: IDiam by word length, M_P, and which entries are exact."""

    idiam: Mapping[int, int]  # word length -> quarters
    exact: Mapping[int, bool]
    m_p: int
    m_p_exact: bool
    max_faces: int

    def idiam_at(self, length: int) -> tuple[int, bool]:
        if length in self.idiam:
            return self.idiam[length], self.exact[length]
        top = max(self.idiam)
        # IDiam is non-decreasing in the length, so the last entry bounds it below
        return self.idiam[top], False

    def f(self, q: int) -> tuple[int, bool]:
        v, ex = self.idiam_at(main_f_argument(q))
        return v + q + self.m_p + 4, ex and self.m_p_exact

    def to_dict(self) -> dict:
        return {
            "formula": "f(q) = IDiam[(q+1)//2 + 1] + q + M_P + 4 (quarters); lengths past the table use its last entry",
            "idiam": [[n, self.idiam[n], self.exact[n]] for n in sorted(self.idiam)],
            "M_P": self.m_p,
            "M_P_exact": self.m_p_exact,
            "max_faces": self.max_faces,
        }


def provenance_from_oracle(oracle: Oracle, table_len: int) -> FProvenance:
    table = oracle.idiam_function(table_len)
    mp = oracle.compute_M_P()
    return FProvenance(
        {n: r.value for n, r in table.items()},
        {n: r.exhaustive for n, r in table.items()},
        mp.value,
        mp.exhaustive,
        oracle.budget.max_faces,
    )


@dataclass
class StepRecord:
    N: int | None
    violators: list[int] = field(default_factory=list)
    replaced: list[dict] = field(default_factory=list)
    edges: int = 0
    faces: int = 0

    def to_dict(self) -> dict:
        if self.N is None:
            return {"N": None, "edges": self.edges, "faces": self.faces}
        return {"N": self.N, "E": self.violators, "F": self.replaced, "edges": self.edges, "faces": self.faces}


@dataclass
class TamingCertificate:
    word: Word
    presentation: Presentation
    diagram: PlanarDiagram
    tree: SpanningTree
    profile: Any  # TamenessProfile
    f: TameFunction
    provenance: FProvenance
    g: TameFunction | None
    trace: list[StepRecord]

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1

    def to_dict(self) -> dict:
        return {
            "version": CERT_VERSION,
            "presentation": serialize_presentation(self.presentation),
            "word": self.word.compact(),
            "diagram": self.diagram.to_dict(),
            "tree": self.tree.to_dict(),
            "profile": self.profile.to_dict() if self.profile is not None else None,
            "f": {"table": [[q, v] for q, v in self.f.table.items()], "provenance": self.provenance.to_dict()},
            "g": None if self.g is None else {"rho": self.presentation.rho, "table": [[q, v] for q, v in self.g.table.items()]},
            "trace": [s.to_dict() for s in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


def _f_for(d: PlanarDiagram, prov: FProvenance) -> TameFunction:
    """f on every quarter point where the run or certify may evaluate it."""
    fld = coarse_distance_field(d)
    top = max([fld.edge(e) for e in d.edges] + [0])
    return TameFunction({q: prov.f(q)[0] for q in range(0, top + 4)}, "theorem_main_f")


def _analyse(d: PlanarDiagram, t: SpanningTree):
    ib = IcicleBuilder(d, t)
    ics = ib.all_icicles()
    flow = flow_function(d, t, ics)
    check_decomposition(d, ics)
    dag = build_crossing_dag(d, t, flow)
    prof = tameness_profile(d, t, dag, ics)
    return ics, prof


def tame(
    w: Word,
    p: Presentation,
    oracle: Oracle,
    start: PlanarDiagram | None = None,
    table_len: int = 6,
    max_iterations: int = 1000,
    assume_tables: bool = False,
) -> TamingCertificate:
    """Run the replacement loop from ``start`` (or the oracle's smallest-IDiam filling).

    f at a violation level must come from exact table entries unless
    ``assume_tables`` is set. Elsewhere a lower-bound entry is harmless: it
    only makes the no-violation test stricter.
    """
    if start is None:
        r = oracle.idiam_of_word(w)
        if r.diagram is None:
            raise OracleGap(f"oracle found no filling of {w}")
        d = r.diagram
    else:
        d = validate_diagram(p, start)
    if boundary_word(d) != w:
        raise ValueError(f"start diagram reads {boundary_word(d)}, not {w}")
    prov = provenance_from_oracle(oracle, table_len)
    ctx = PadContext(oracle)
    t = bfs_geodesic_tree(d)
    trace: list[StepRecord] = []
    last_n: int | None = None
    for _ in range(max_iterations):
        check_tree(d, t)
        if not d.dart_count:
            prof = None
            n = None
        else:
            ics, prof = _analyse(d, t)
            n = obstruction_level(prof, lambda q: prov.f(q)[0])
        if n is None:
            trace.append(StepRecord(None, edges=d.edge_count, faces=d.face_count))
            break
        f_n, exact = prov.f(n)
        if not exact and not assume_tables:
            raise OracleGap(f"violation at N={n} quarters needs IDiam({main_f_argument(n)}) beyond the exact table")
        if last_n is not None and n >= last_n:
            raise SurgeryError(f"N did not decrease: {last_n} -> {n}")
        last_n = n
        viol = violating_edges(prof, lambda q: prov.f(q)[0], n)
        tops = maximal_icicles([ics[e] for e in viol])
        step = StepRecord(n, viol, [], d.edge_count, d.face_count)
        reps = []
        for ic in tops:
            wj = ic.eta_word(d)
            # |gamma_j| <= 2 N + 1 - 2 |alpha_j|, in quarters
            if 4 * len(wj) > 2 * n + 4 - 8 * len(ic.tail):
                raise SurgeryError(f"replaced word {wj} too long for N={n}")
            reps.append(prop5_pipeline(wj, ctx))
            step.replaced.append({"edge": ic.edge, "word": wj.compact(), "tail": len(ic.tail)})
        res = excise_and_replace_many(d, t, tops, reps, p)
        new = res.diagram
        vmap, dmap = res.vertex_maps[0], res.dart_maps[0]
        old_dist = vertex_distances(d)
        new_dist = vertex_distances(new)
        for v, q in vmap.items():
            if new_dist[q] != old_dist[v]:
                raise SurgeryError(f"kept vertex {v} changed distance")
        kept_v = set(vmap.values())
        fld = coarse_distance_field(new)
        for x in range(new.dart_count):
            if new.origin[x] not in kept_v or new.head(x) not in kept_v:
                if fld.edge(new.edge_of(x)) > f_n:
                    raise SurgeryError("the distance bound fails on a replaced region")
        for v in range(new.vertex_count):
            if v not in kept_v and fld.vertex[v] > f_n:
                raise SurgeryError("the distance bound fails on a replaced vertex")
        kept_parent, kept_depth = {}, {}
        for v, q in vmap.items():
            pd = t.parent_dart[v]
            if pd < 0:
                kept_depth[q] = t.depth[v]
            elif pd in dmap:
                kept_parent[q] = dmap[pd]
                kept_depth[q] = t.depth[v]
        t = verify_partial_geodesic_extension(new, kept_parent, kept_depth)
        d = new
        trace.append(step)
    else:
        raise SurgeryError("iteration cap reached")
    if boundary_word(d) != w:
        raise SurgeryError("taming changed the boundary word")
    f = _f_for(d, prov)
    g = graph_to_full_tame(f, p.rho) if len(f.table) > 3 else None
    return TamingCertificate(w, p, d, t, prof, f, prov, g, trace)
