"""Demazure roots of affine toric varieties and their restriction to subtori."""

__version__ = "0.1.0"
