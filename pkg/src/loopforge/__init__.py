"""Finite loops: Cayley tables, commutator-associator calculus, central series and word identities."""

from .calculus import (
    NormalSubloop,
    Subloop,
    assoc_alpha,
    assoc_beta,
    assoc_bracket,
    ca_subloop,
    center,
    commutator_bracket,
    commutator_paren,
    normal_closure,
    nuclei,
    relative_center,
    subloop_generated,
)
from .catalog import builtin_catalog, enumerate_loops
from .errors import LoopError
from .loop import CayleyLoop, chein_double, direct_product, parse_table, quotient, serialize_table
from .mappings import Perm, PermGroup, inner_mapping_group, multiplication_group
from .properties import is_aloop, is_ip, is_moufang
from .series import (
    SeriesReport,
    lower_central_series,
    nilpotency_class,
    series_report,
    upper_central_series,
    verify_structure,
    weight_subloop,
)
from .terms import Term, evaluate, gen_weight_words, holds_identity, parse_term, print_term

__version__ = "0.1.0"
