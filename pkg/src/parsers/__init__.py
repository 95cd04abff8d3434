"""
Configuration parsing modules
"""

from .config_parser import RunConfig, RunConfigParser

__all__ = ['RunConfig', 'RunConfigParser']
