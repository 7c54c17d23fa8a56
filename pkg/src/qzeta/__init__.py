"""qzeta: exact finite-level Eisenstein q-expansions and p-adic zeta constant terms."""

from .padic import PadicNumber, ZetaExtNumber, encode_rational, teichmuller, plog, pexp, hensel_proot

__all__ = [
    "PadicNumber",
    "ZetaExtNumber",
    "encode_rational",
    "teichmuller",
    "plog",
    "pexp",
    "hensel_proot",
]
