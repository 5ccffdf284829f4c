"""Property B, extremal set families and t-improper list colouring."""

from .core import (
    FormatError,
    Graph,
    ListAssignment,
    SetFamily,
    ValidationError,
    Witness,
    parse_family,
    parse_graph,
    parse_lists,
    serialize_family,
    serialize_graph,
    serialize_lists,
)

__version__ = "0.1.0"
