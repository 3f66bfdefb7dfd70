"""Partial APN (x0-APN) functions over GF(2^n).

Modules: ``gf2n`` (field arithmetic), ``vbf`` (functions and expressions),
``spectral`` (Walsh spectra and moments), ``differential`` (DDT and
x0-APN tests), ``identities`` (moment identities), ``families``
(0-APN class criteria), ``search`` (exhaustive scans), ``cli``.
"""

from .gf2n import FieldSpec, field_new
from .vbf import VBF, from_expression, from_power, modify_at

__all__ = ["FieldSpec", "VBF", "field_new", "from_expression", "from_power", "modify_at"]
__version__ = "0.1.0"
