"""syzygy: exact covariant machinery for plane cubics and the genus-2
gluing of elliptic curves along 3-torsion."""

__version__ = "0.1.0"
