"""k-edge-colored graph toolkit: formats, invariants, and counterexample searches."""

from graphrl._core import (
    Agent,
    Graph,
    RunConfig,
    check,
    convert,
    evaluate,
    format_names,
    invariant_names,
    load_config,
    make_agent,
    run,
)

__all__ = [
    "Agent",
    "Graph",
    "RunConfig",
    "check",
    "convert",
    "evaluate",
    "format_names",
    "invariant_names",
    "load_config",
    "make_agent",
    "run",
]
