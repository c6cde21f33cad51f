"""Three-hole color-center states, couplings and spin-polarization dynamics."""

from ._core import (
    __version__,
    catalog_check,
    cgc,
    character_table,
    coupling_table_check,
    fc_overlap,
    isc_rate_first_order,
    simulate,
    soc_table,
    states,
    verify,
)

__all__ = [
    "__version__",
    "catalog_check",
    "cgc",
    "character_table",
    "coupling_table_check",
    "fc_overlap",
    "isc_rate_first_order",
    "simulate",
    "soc_table",
    "states",
    "verify",
]
