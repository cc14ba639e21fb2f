"""Builder factory for creating germ builder instances"""

import logging

from .base import BaseGermBuilder
from .classical import ClassicalGermBuilder
from .dual import DualGermBuilder
from ...utils import UsageError

logger = logging.getLogger(__name__)


class BuilderFactory:
    """Factory for creating germ builder instances"""

    # Map of monoid kinds to builder classes
    BUILDER_TYPES = {
        "classical": ClassicalGermBuilder,
        "dual": DualGermBuilder,
    }

    @classmethod
    def create_builder(cls, kind: str) -> BaseGermBuilder:
        """
        Create builder instance.

        Args:
            kind: Monoid kind (classical, dual)

        Returns:
            Builder instance
        """
        if kind not in cls.BUILDER_TYPES:
            raise UsageError(
                f"Unknown builder kind: {kind}. "
                f"Available: {list(cls.BUILDER_TYPES.keys())}"
            )
        return cls.BUILDER_TYPES[kind]()

    @classmethod
    def list_builders(cls) -> list:
        """List available builder kinds"""
        return list(cls.BUILDER_TYPES.keys())
