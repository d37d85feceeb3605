"""Helper package for automation scripts."""
