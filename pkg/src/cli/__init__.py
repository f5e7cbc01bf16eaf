"""Command-line application: simulate, score, attribute, experiment, calibrate."""
