"""q-weighted Robinson-Schensted column insertion, q-Whittaker functions and q-TASEP."""
__version__ = "0.1.0"
