"""Primitivity and block systems of groups generated by cipher round functions."""

from .blocks import (BlockSystemReport, crosscheck_block_cosets, difference_closure,
                     find_linear_block_systems, group_action_blocks, minimal_block_through)
from .cipher import CipherSpec, Partition, SBoxTable, aes_spec, parse_preset, toy_spec
from .errors import (EnumerationTooLarge, InconsistentOracle, SingularMatrix, SpecFormatError,
                     UsageError)
from .gf2 import BitMatrix, BitVector, Subspace, count_subspaces, enumerate_subspaces
from .gf2m import FieldSpec
from .primitivity import CERTIFIED_PRIMITIVE, INCONCLUSIVE, verify_primitivity
from .trapdoor import build_trapdoor_cipher, coset_key_recovery, truncated_distinguisher

__version__ = "0.1.0"
