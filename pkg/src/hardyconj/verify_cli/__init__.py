"""Symbol files, the case registry and the command line front end."""

from .registry import DATA, REGISTRY, CaseResult, RunOptions, case_ids, run_case
from .symfile import SymbolFileError, SymbolSpecFile, parse_symbol_file, serialize, to_document

__all__ = [
    "DATA",
    "REGISTRY",
    "CaseResult",
    "RunOptions",
    "SymbolFileError",
    "SymbolSpecFile",
    "case_ids",
    "parse_symbol_file",
    "run_case",
    "serialize",
    "to_document",
]
