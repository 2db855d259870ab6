"""Compact-model simulator for voltage-controlled JJFET/nTron cryogenic logic."""

__version__ = "0.1.0"
