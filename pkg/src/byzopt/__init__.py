"""Byzantine fault-tolerant multi-agent optimization: simulators and checks."""

from byzopt import (  # noqa: F401
    adversaries,
    analysis,
    assignment,
    consensus,
    decoding,
    functions,
    graphs,
    harness,
    schedules,
)

__version__ = "0.1.0"
