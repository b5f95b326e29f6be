"""Synthetic scenes, accuracy metrics and experiment drivers."""
