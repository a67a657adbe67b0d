"""Bundled synthetic case: a typical year (``synthetic_tmy.csv``) and its run configuration."""
