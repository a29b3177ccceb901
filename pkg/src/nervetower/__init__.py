"""Čech cohomology and Steenrod homology of compacta presented by towers of finite covers."""

__version__ = "0.1.0"
