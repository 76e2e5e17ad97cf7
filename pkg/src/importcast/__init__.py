"""importcast: import-forecasting engine.

Annual trade series in, mean-preserving quarterly disaggregation, from-scratch
stacked LSTM trained by full-batch Adam with exact backpropagation through
time, 20-quarter recursive forecast and error report out.
"""

__version__ = "0.1.0"

from importcast.errors import (
    ConfigError,
    ImportcastError,
    NumericError,
    ParseError,
    TrainingDivergedError,
    ValidationError,
)

__all__ = [
    "__version__",
    "ImportcastError",
    "ParseError",
    "ValidationError",
    "NumericError",
    "TrainingDivergedError",
    "ConfigError",
]
