"""Input file parsers."""
