"""JSON graph and partition files (schema 1) with exact rational weights."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .graph import ContractionMap, Instance, InstanceError, as_weight
from .planar.embedding import EmbeddedInstance, from_neighbor_rotation

SCHEMA = 1


def format_weight(w) -> str:
    w = Fraction(w)
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


@dataclass
class GraphFile:
    instance: Instance
    embedding: EmbeddedInstance | None = None
    labels: Mapping[str, str] | None = None

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "GraphFile":
        if doc.get("schema", SCHEMA) != SCHEMA:
            raise InstanceError(f"unsupported schema {doc.get('schema')!r}")
        for key in ("vertices", "terminals", "edges"):
            if key not in doc:
                raise InstanceError(f"graph file lacks {key!r}")
        edges = []
        for rec in doc["edges"]:
            try:
                u, v, w = rec["u"], rec["v"], rec["w"]
            except (KeyError, TypeError) as exc:
                raise InstanceError(f"malformed edge record {rec!r}") from exc
            mult = rec.get("mult", 1)
            if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
                raise InstanceError(f"mult must be a positive integer, got {mult!r}")
            w = as_weight(w)
            edges.extend([(str(u), str(v), w)] * mult)
        g = Instance.build([str(v) for v in doc["vertices"]], edges, [str(t) for t in doc["terminals"]])
        emb = None
        if "rotation" in doc:
            emb = from_neighbor_rotation(g, doc["rotation"], doc.get("outer_face"))
        labels = doc.get("labels")
        if labels is not None:
            labels = {str(k): str(v) for k, v in labels.items()}
        return cls(g, emb, labels)

    def to_dict(self) -> dict:
        g = self.instance
        doc: dict[str, Any] = {
            "schema": SCHEMA,
            "vertices": list(g.vertices),
            "terminals": list(g.terminals),
            "edges": [{"u": e.u, "v": e.v, "w": format_weight(e.w)} for e in g.edges],
        }
        if self.embedding is not None:
            doc["rotation"] = self.embedding.neighbor_rotation()
            doc["outer_face"] = self.embedding.outer_pair()
        if self.labels is not None:
            doc["labels"] = dict(self.labels)
        return doc


def read_graph(path) -> GraphFile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from exc
    return GraphFile.from_dict(doc)


def write_graph(path, gf: GraphFile | Instance) -> None:
    if isinstance(gf, Instance):
        gf = GraphFile(gf)
    Path(path).write_text(json.dumps(gf.to_dict(), indent=1) + "\n")


def partition_to_dict(m: ContractionMap) -> dict:
    return {"schema": SCHEMA, "classes": [list(p) for p in m.parts], "names": list(m.representative)}


def partition_from_dict(doc: Mapping[str, Any], terminals) -> ContractionMap:
    if doc.get("schema", SCHEMA) != SCHEMA or "classes" not in doc:
        raise InstanceError("partition file needs 'classes'")
    classes = [[str(v) for v in c] for c in doc["classes"]]
    names = doc.get("names")
    return ContractionMap.from_groups(classes, terminals, names=[str(x) for x in names] if names else None)


def read_partition(path, terminals) -> ContractionMap:
    return partition_from_dict(json.loads(Path(path).read_text()), terminals)


def write_partition(path, m: ContractionMap) -> None:
    Path(path).write_text(json.dumps(partition_to_dict(m), indent=1) + "\n")
