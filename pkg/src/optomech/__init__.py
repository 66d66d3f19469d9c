"""Periodically modulated hybrid optomechanics simulation toolkit."""

__version__ = "0.1.0"

from .model import (DriveSpec, EngineeredCoupling, FirstMoments,
                    SystemParams, drive_value, validate_params)

__all__ = ["DriveSpec", "EngineeredCoupling", "FirstMoments",
           "SystemParams", "drive_value", "validate_params",
           "__version__"]
