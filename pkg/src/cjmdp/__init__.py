"""Complete j-MDP convolutional codes: finite fields, code matrices, minor checks, erasure decoding and code search."""

from .code import (
    CodeError,
    CodeParams,
    ConvCode,
    code_new,
    is_left_prime,
    parse_code,
    partial_matrix,
    resultant,
    reverse_code,
    reverse_sliding_matrix,
    sliding_matrix,
)
from .decoding import (
    DecodeReport,
    ErasurePattern,
    ReceivedStream,
    decode_low_delay,
    decode_oracle,
    decode_windowed,
    encode_stream,
    gen_pattern,
    parse_pattern,
    render_pattern,
)
from .gf import GF, Element, FieldError, field, parse_field
from .minors import (
    ColumnSetKind,
    Kind,
    PropertyReport,
    column_distance_oracle,
    complete_index,
    has_nontrivial_term,
    is_complete_j_mdp,
    is_jth_distance_maximal,
    is_mdp,
    is_reverse_mdp,
    nontrivial_column_sets,
)
from .search import (
    SearchReport,
    SearchSpec,
    exhaustive_search,
    family_f13,
    family_f16,
    randomized_search,
    verify_family,
)

__all__ = [name for name in dir() if not name.startswith("_")]
