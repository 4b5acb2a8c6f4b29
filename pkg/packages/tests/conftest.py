"""Pytest configuration and shared fixtures."""

# The gaussquare testing plugin is registered via a ``pytest11`` entry
# point (pyproject.toml) for external consumers.  In our own test suite we
# disable it (``-p no:gaussquare``) and load it explicitly here instead,
# because conftest-based loading happens after ``pytest-cov`` starts
# tracing, so the gaussquare import chain is measured.
pytest_plugins = ["gaussquare.testing._plugin"]
