"""Bundled and user-supplied benchmark networks.

Bundled files live in the package ``data`` directory and are listed in
``manifest.tsv`` as ``name<TAB>nodes<TAB>edges<TAB>sha256``. Further
networks can be placed in the directory named by ``GSCRANK_DATA`` as
``<name>.txt`` (edge list) or ``<name>.gml``; such a directory may carry its
own ``manifest.tsv``. Files without a manifest record are checked against
the published node and edge counts when the name is a known dataset.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import EDGE_LIST, GML, Graph, generate_watts_strogatz, load_edge_list
from .reference_values import TABLE1

DATA_ENV = "GSCRANK_DATA"

# synthetic stand-in for the small-world row
WS_PARAMS = {"n": 2000, "k": 6, "p": 0.1, "seed": 2000}


class DatasetError(ValueError):
    """Unknown dataset, missing file, or manifest mismatch."""


@dataclass(frozen=True)
class ManifestRecord:
    name: str
    nodes: int
    edges: int
    sha256: str


def read_manifest(path: Path) -> dict[str, ManifestRecord]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise DatasetError(f"{path}:{lineno}: expected 4 tab-separated fields")
        name, nodes, edges, digest = parts
        out[name] = ManifestRecord(name, int(nodes), int(edges), digest.strip())
    return out


def bundled_dir() -> Path:
    return Path(str(resources.files("gscrank") / "data"))


def _search_dirs() -> list[Path]:
    dirs = [bundled_dir()]
    extra = os.environ.get(DATA_ENV)
    if extra:
        dirs.append(Path(extra))
    return dirs


def _find_file(name: str) -> tuple[Path, str, dict[str, ManifestRecord]] | None:
    for d in _search_dirs():
        manifest = d / "manifest.tsv"
        records = read_manifest(manifest) if manifest.exists() else {}
        for suffix, fmt in ((".txt", EDGE_LIST), (".gml", GML)):
            p = d / f"{name}{suffix}"
            if p.exists():
                return p, fmt, records
    return None


def available() -> list[str]:
    """Names that ``load_dataset`` can resolve right now."""
    names = {"ws"}
    for d in _search_dirs():
        if d.is_dir():
            names.update(p.stem for p in d.iterdir() if p.suffix in (".txt", ".gml"))
    return sorted(names)


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_dataset(name: str) -> Graph:
    """
    Load a named network and verify it.

    Raises
    ------
    DatasetError
        If the name cannot be resolved, the file digest disagrees with its
        manifest record, or node/edge counts disagree with the record or
        the published counts.
    """
    name = name.lower()
    if name == "ws":
        return generate_watts_strogatz(**WS_PARAMS)
    found = _find_file(name)
    if found is None:
        raise DatasetError(
            f"unknown dataset {name!r}; available: {', '.join(available())}"
            f" (place more under ${DATA_ENV})")
    path, fmt, records = found
    rec = records.get(name)
    if rec is not None:
        digest = sha256_file(path)
        if digest != rec.sha256:
            raise DatasetError(f"{path}: sha256 {digest} does not match manifest {rec.sha256}")
        expected = (rec.nodes, rec.edges)
    elif name in TABLE1:
        expected = TABLE1[name][:2]
    else:
        expected = None
    g = load_edge_list(str(path), fmt)
    if expected is not None and (g.n, g.m) != tuple(expected):
        raise DatasetError(
            f"{path}: got {g.n} nodes / {g.m} edges, expected {expected[0]} / {expected[1]}")
    return g


def default_beta(name: str) -> float | None:
    row = TABLE1.get(name.lower())
    return row[5] if row else None
