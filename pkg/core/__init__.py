"""
Graph families, quotients, free groups and commutator length.
"""
