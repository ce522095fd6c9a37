"""Order-three elements and the 2-subgroups they normalize, by brute force and by formula."""

__version__ = "0.1.0"
