"""Mixed multiplicities of monomial ideal systems"""

__version__ = "0.1.0"
