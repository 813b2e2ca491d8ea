"""Selective magic parsing for typed feature grammars."""

__version__ = "0.1.0"
