"""Complete polynomial-times-entire vector fields on C^2 with first or second integrals."""
from . import cli, exprcore, families, fields, flows, integrals, riccati

__version__ = "0.1.0"

__all__ = ["exprcore", "fields", "families", "integrals", "riccati", "flows", "cli", "__version__"]
