"""Kotlin/Java cross-language code smell analyzer."""

__version__ = "0.1.0"
