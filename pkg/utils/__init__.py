"""
Helpers for endtrace: GF(2) linear algebra, DOT and JSON output, table-family import.
"""
