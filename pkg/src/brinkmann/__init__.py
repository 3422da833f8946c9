"""Decision procedures for orbit problems in free groups and in products of two free groups."""

from .decision import BoundExceeded, Decision, Found, Refuted
from .freeorbit import OracleConfig
from .maps import FreeMap, InvalidEndomorphism, ProductElement, ProductEndo, parse_element, parse_endo
from .productorbit import decide_conj, decide_eq
from .words import Word, format_word, parse_word

__all__ = [
    "BoundExceeded",
    "Decision",
    "Found",
    "Refuted",
    "OracleConfig",
    "FreeMap",
    "InvalidEndomorphism",
    "ProductElement",
    "ProductEndo",
    "parse_element",
    "parse_endo",
    "decide_conj",
    "decide_eq",
    "Word",
    "format_word",
    "parse_word",
]
