"""Public test-support utilities for gaussquare.

- :func:`make_settings` — ``ExperimentSettings`` without env or ``.env`` sources.

The process-model fixtures live in :mod:`gaussquare.testing._plugin`.
"""

from gaussquare.testing._settings import make_settings

__all__ = ["make_settings"]
