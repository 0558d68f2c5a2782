"""Pendulum simulation, synthetic rotated glyphs and IDX ingestion."""
