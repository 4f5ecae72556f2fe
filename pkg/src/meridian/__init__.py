"""Exact projective-line structures over odd prime fields and the rationals.

Subpackages cover scalar arithmetic, canonical homographies, abstract
involution families with a brute-force verification engine, field
reconstruction from lookups, ternary libra algebra, cube-face loads with the
quinary operator, quadriad classes with the cross ratio, and the square-cone
orientation/arc machinery.  The ``meridian`` CLI ties the suites together.
"""

from .scalar import GF, INF, QQ, FieldSpec, Point, Scalar, SquareClass

__all__ = ["GF", "INF", "QQ", "FieldSpec", "Point", "Scalar", "SquareClass"]
__version__ = "0.1.0"
