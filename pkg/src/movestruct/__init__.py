"""Move structures for runny permutations with linear-time balancing, and
LCP array construction from a run-length encoded BWT."""

from .errors import (CapacityError, FormatError, MoveStructError, ParameterError,
                     SinkError, StateError, ValidationError)
from .intervals import (IntervalMap, OutputStarts, intervals_from_permutation,
                        invert_interval_map, invert_tau, output_starts,
                        validate_interval_map)
from .movequery import MoveStructure, deserialize, serialize
from .balancer import BalancedPair, DualLists, balance, init_lists
from .rlbwt import Rlbwt, read_rlbwt
from .lcp import PlcpPlus, irreducible_plcp, lcp_array, lcp_stream

__version__ = "0.1.0"
