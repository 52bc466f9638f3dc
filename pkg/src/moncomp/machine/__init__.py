"""A small tree-valued WHILE machine with exact time and space accounting."""

from .codec import DecodeError, decode_program, decode_trace, encode_program, encode_trace
from .interp import Halted, OutOfFuel, Trace, cost_model, run
from .syntax import Program, parse_program, print_program
from .tree import FALSE, NIL, TRUE, Tree, cons, format_tree, nat, nat_value, parse_tree

__all__ = [
    "DecodeError", "decode_program", "decode_trace", "encode_program", "encode_trace",
    "Halted", "OutOfFuel", "Trace", "cost_model", "run",
    "Program", "parse_program", "print_program",
    "FALSE", "NIL", "TRUE", "Tree", "cons", "format_tree", "nat", "nat_value", "parse_tree",
]
