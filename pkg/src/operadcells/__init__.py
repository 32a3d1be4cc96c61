"""Cell-by-cell simplicial models of the W-construction associahedra,
the W-version 2-associahedra, and the planar configuration operad built
from them, with machine checks of the CW and operad structure."""

__version__ = "0.1.0"
