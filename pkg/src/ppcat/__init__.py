"""ppcat: exact computation with bound quiver representations, pp formulas,
functor categories realized over Auslander algebras, Serre localization,
and induced tensor products on functor categories."""

from .exactfield import QQ, GF, FieldSpec, Matrix

__all__ = ["QQ", "GF", "FieldSpec", "Matrix"]
__version__ = "0.1.0"
