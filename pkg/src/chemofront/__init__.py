"""Bacterial colony and fungal front model with chemotactic coupling."""
from .params import TABLE1, Parameters, RunConfig

__all__ = ["TABLE1", "Parameters", "RunConfig"]
__version__ = "0.1.0"
