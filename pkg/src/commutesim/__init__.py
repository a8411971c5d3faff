"""Commute-mode choice simulator."""
