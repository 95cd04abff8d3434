"""
Base parser class for configuration documents
"""

from abc import ABC, abstractmethod
import logging
from typing import Any, Iterable, Mapping, Optional

from .exceptions import ConfigurationError


class BaseParser(ABC):
    """
    Abstract base class for parsers.

    Provides common helpers for validating and normalizing mapping-shaped
    documents before they are turned into typed objects.
    """

    def __init__(self):
        """Initialize the base parser."""
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def parse(self, data: Any, **kwargs) -> Any:
        """
        Parse raw data into a typed object. Must be implemented by subclasses.

        Args:
            data: Raw data to parse
            **kwargs: Parser-specific parameters

        Returns:
            Parsed object
        """
        pass

    def validate(
        self,
        data: Any,
        section: str,
        required_fields: Optional[Iterable[str]] = None,
        allowed_fields: Optional[Iterable[str]] = None
    ) -> bool:
        """
        Validate one mapping section.

        Args:
            data: Section contents
            section: Section name, used in error messages
            required_fields: Keys that must be present
            allowed_fields: Keys that may be present (others are errors)

        Returns:
            True if the section is valid

        Raises:
            ConfigurationError: If the section is malformed
        """
        if data is None:
            raise ConfigurationError(f"Section [{section}] is missing")
        if not isinstance(data, Mapping):
            raise ConfigurationError(f"Section [{section}] must be a mapping")

        if required_fields:
            missing = [name for name in required_fields if name not in data]
            if missing:
                raise ConfigurationError(f"Section [{section}] is missing fields: {missing}")

        if allowed_fields is not None:
            unknown = sorted(set(map(str, data)) - set(allowed_fields))
            if unknown:
                raise ConfigurationError(f"Section [{section}] has unknown fields: {unknown}")

        return True

    def normalize(self, data: Any, section: str = 'document') -> dict:
        """
        Normalize keys to stripped strings.

        Args:
            data: Mapping to normalize
            section: Section name, used in error messages

        Returns:
            Normalized dictionary

        Raises:
            ConfigurationError: If the section is not a mapping
        """
        if not isinstance(data, Mapping):
            raise ConfigurationError(
                f"Section [{section}] must be a mapping, got {type(data).__name__}"
            )
        return {str(key).strip(): value for key, value in data.items()}
