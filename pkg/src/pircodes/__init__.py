"""k-server PIR codes from partial packings, finite geometries and
configurations, with an upper-bound ledger for P(s, k)."""

from .errors import PirError
from .gf import make_field
from .packing import PartialPacking
from .design import IncidenceStructure
from .pircode import PirCode, code_from_packing, code_from_configuration, verify_recovery_plan

__all__ = [
    "PirError",
    "make_field",
    "PartialPacking",
    "IncidenceStructure",
    "PirCode",
    "code_from_packing",
    "code_from_configuration",
    "verify_recovery_plan",
]
