"""gmtwist: exact certification of Godsil-McKay switching on Grassmann graphs.

Constructs Grassmann and twisted Grassmann graphs over GF(q), performs
Godsil-McKay switching with a polarity-paired partition, and machine-checks
equitability, the switching hypothesis, cospectrality, the switched-adjacency
rule, the design parameters, and the explicit isomorphisms, all in exact
integer arithmetic.
"""

__version__ = "0.1.0"

from .construct import Parameters  # noqa: F401
from .gf import make_field  # noqa: F401
