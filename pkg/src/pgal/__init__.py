"""pgal: central embedding problems of p-groups, computationally.

Groups are explicit multiplication tables, cohomology is 2-cocycles with
mu_p coefficients, obstructions are formal p-cyclic algebra symbols with
exact splitting decisions over Q for p = 2, and solutions are symbolic
Kummer towers.
"""

__version__ = "0.1.0"

from .groups import Group, GroupHom, Subgroup  # noqa: F401
from .catalog import build_group  # noqa: F401
from .cohomology import Cocycle2, ExtensionClass  # noqa: F401
from .symbols import FieldElem, SymbolProduct  # noqa: F401
