"""Command line interface and the input document format."""
