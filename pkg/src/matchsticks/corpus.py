"""Access to the bundled corpus of figure drawings.

Twenty-one segment files ship with the package (fig1a..fig5c), each carrying
the claimed vertex count, degree profile, and rigidity of its graph as
metadata.  Set the environment variable MATCHSTICKS_CORPUS to a directory of
``.seg`` files to substitute a different corpus.
"""

from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ingest import MergePolicy, SegmentFile, build_graph, parse_segment_file
from .model import EmbeddedGraph

CORPUS_ENV = "MATCHSTICKS_CORPUS"

#: bundled figure names, in figure order
CORPUS_NAMES = (
    "fig1a", "fig1b", "fig1c", "fig1d",
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig2g", "fig2h",
    "fig3a", "fig3b",
    "fig4a", "fig4b", "fig4c", "fig4d",
    "fig5a", "fig5b", "fig5c",
)


class CorpusError(KeyError):
    """Unknown corpus graph name."""


def _override_dir() -> Path | None:
    path = os.environ.get(CORPUS_ENV)
    return Path(path) if path else None


def corpus_names() -> tuple[str, ...]:
    """Names available in the active corpus (env override or bundled)."""
    override = _override_dir()
    if override is not None:
        return tuple(sorted(p.stem for p in override.glob("*.seg")))
    return CORPUS_NAMES


def load_segments(name: str) -> SegmentFile:
    """The raw segment file for a corpus graph."""
    override = _override_dir()
    if override is not None:
        path = override / f"{name}.seg"
        if not path.exists():
            raise CorpusError(f"no corpus file {path}")
        return parse_segment_file(path.read_text())
    if name not in CORPUS_NAMES:
        raise CorpusError(f"unknown corpus graph {name!r}")
    text = resources.files(__package__).joinpath(f"corpus/{name}.seg").read_text()
    return parse_segment_file(text)


def load_graph(name: str, policy: MergePolicy = MergePolicy()) -> EmbeddedGraph:
    """The raw embedded graph for a corpus entry (original drawing units)."""
    return build_graph(load_segments(name), policy)


@lru_cache(maxsize=None)
def refined_graph(name: str) -> EmbeddedGraph:
    """The corpus graph refined to unit edge lengths (unit = 1), cached.

    Raises RuntimeError if the corpus data does not converge, which would mean
    the bundled files are corrupt.
    """
    from .refine import RefineOptions, refine  # deferred to keep imports acyclic

    result = refine(load_graph(name), RefineOptions())
    if not result.converged:
        raise RuntimeError(
            f"corpus graph {name} did not refine "
            f"(final residual {result.final_residual:.3e})"
        )
    return result.graph
