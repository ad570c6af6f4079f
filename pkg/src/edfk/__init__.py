"""Minor search, elimination distance and F-deletion tooling for small graphs."""
from .errors import ContractViolation, EdfkError, GraphParseError, InvalidArgument, ResourceLimitExceeded, StructuralMismatch
from .graph_core import Graph, LabeledBoundariedGraph, canonical_key, glue, parse_graph, serialize_graph
from .minors import Flavor, find_minor_model, is_minor
from .elim import compute_ed, ed_value
from .solvers import hitting_q_labeled, hitting_q_unlabeled, opt_deletion

__version__ = "0.1.0"
