"""Dimension groups and homology of symbolically presented Smale spaces."""
