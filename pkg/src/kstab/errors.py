"""Error type shared by every module.

Each failure carries a short machine-readable ``code`` (``"empty-interval"``,
``"basis-mismatch"``, ...) so callers such as the case runner can map
failures onto exit statuses without parsing messages.
"""

from __future__ import annotations


class KStabError(ValueError):
    """Raised for any contract violation; ``code`` identifies the failure."""

    def __init__(self, code: str, detail: str = "") -> None:
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)
