"""Exact trace/norm and toric point counts over finite fields."""

from tracenorm.bounds import improved_bound, katz_bound, prime_degree_interval, toric_bound
from tracenorm.characters import MultiplicativeCharacter, gauss_sum
from tracenorm.counting import count_toric, count_trace_norm, lemma21_check, make_record
from tracenorm.fields import build_field, build_tower, field_from_spec, tower_from_spec

__version__ = "0.1.0"

__all__ = [
    "MultiplicativeCharacter",
    "build_field",
    "build_tower",
    "count_toric",
    "count_trace_norm",
    "field_from_spec",
    "gauss_sum",
    "improved_bound",
    "katz_bound",
    "lemma21_check",
    "make_record",
    "prime_degree_interval",
    "toric_bound",
    "tower_from_spec",
]
