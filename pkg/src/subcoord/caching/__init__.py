"""Linear coded-caching schemes: model, file format, built-ins and audits."""

from .builtins import NAMES as BUILTIN_NAMES, builtin
from .fileformat import ParseError, parse_family, parse_scheme, serialize_family, serialize_scheme
from .model import CachingScheme, memory_rate, verify_scheme

__all__ = [
    "BUILTIN_NAMES", "builtin", "ParseError", "parse_family", "parse_scheme", "serialize_family",
    "serialize_scheme", "CachingScheme", "memory_rate", "verify_scheme",
]
