"""Exact verification of Bott vanishing for GIT quotients of (P^1)^n by PGL2."""

__version__ = "0.1.0"
