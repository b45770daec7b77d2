"""Dynamic geometric measure structures and reduction gadgets."""

__version__ = "0.1.0"
