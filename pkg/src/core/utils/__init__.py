"""Serialization helpers for JSON, YAML and delimited tables."""
