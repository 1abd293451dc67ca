"""
Test package for algmat
"""

__version__ = '1.0.0'
