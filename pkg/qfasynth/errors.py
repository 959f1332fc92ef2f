"""
Exception hierarchy for qfasynth

Every error raised on purpose by the package derives from QfaSynthError, so
callers (the CLI in particular) can separate user mistakes from bugs.
"""


class QfaSynthError(Exception):
    """Base class for all qfasynth errors"""


class ConfigError(QfaSynthError, ValueError):
    """Invalid configuration file or environment value"""


class SpecError(QfaSynthError, ValueError):
    """Invalid automaton parameters (p, K, d, xi, t, input length)"""


class CircuitError(QfaSynthError, ValueError):
    """Malformed gate or circuit, or a circuit too large to elaborate"""


class AncillaError(CircuitError):
    """A multi-controlled gate needs a free qubit that is not available"""


class DimensionError(QfaSynthError, ValueError):
    """Matrices or circuits of different sizes were compared"""


class RewriteError(QfaSynthError):
    """A gate cannot be rewritten into the hardware basis"""


class RoutingError(QfaSynthError, ValueError):
    """Bad topology size or initial target position"""


class CircuitFormatError(QfaSynthError, ValueError):
    """Text circuit file could not be parsed"""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no
