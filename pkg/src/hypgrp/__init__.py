"""Automata for word-hyperbolic groups: short-lex automatic structures, geodesic
word acceptors and thinness constants of short-lex geodesic triangles."""

__version__ = "0.1.0"

from .errors import HypGrpError, InputError, ResourceLimitError, StateError  # noqa: E402,F401
