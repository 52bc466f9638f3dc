"""Graded monoidal models of computation: grades, string diagrams, a WHILE machine and its measures."""

__version__ = "0.1.0"
