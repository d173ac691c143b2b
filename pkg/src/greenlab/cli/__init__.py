"""Configuration grammar, canonical printer and the `greenlab` command."""

from .main import build_parser, main, run
from .parser import (ArityError, ConfigDocument, GrammarSyntaxError, ParseError, UnknownIdentifier,
                     parse_config)
from .printer import print_config, print_document

__all__ = ["ArityError", "ConfigDocument", "GrammarSyntaxError", "ParseError", "UnknownIdentifier",
           "build_parser", "main", "parse_config", "print_config", "print_document", "run"]
