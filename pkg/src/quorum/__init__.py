"""Crowd-powered consensus organization of item corpora."""

__version__ = "0.1.0"
