"""
Exception hierarchy for DeepMap.
"""


class DeepMapError(Exception):
    """Base class for all DeepMap errors."""
    pass


class ArgumentError(DeepMapError, ValueError):
    """An argument violates an operation's preconditions."""
    pass


class DatasetFormatError(DeepMapError):
    """A dataset file is missing or malformed."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


class IntegrityError(DeepMapError):
    """Data is well-formed but internally inconsistent."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(message)
        self.line = line


class TrainingError(DeepMapError):
    """Training cannot proceed (non-finite values, degenerate labels)."""
    pass


class MissingInputError(DeepMapError, FileNotFoundError):
    """A required input file does not exist."""

    def __init__(self, path: str):
        super().__init__(f"Input not found: {path}")
        self.path = path


class OverwriteRefusedError(DeepMapError):
    """Output already exists and overwriting was not requested."""

    def __init__(self, path: str):
        super().__init__(f"Refusing to overwrite existing output: {path} (use --force)")
        self.path = path


class VerificationError(DeepMapError):
    """One or more verification checks failed."""

    def __init__(self, failed: list):
        super().__init__(f"Verification failed: {', '.join(failed)}")
        self.failed = failed


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ARGUMENT = 2
EXIT_REFUSED = 3
EXIT_MISSING_INPUT = 4
EXIT_VERIFICATION = 5


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the command-line exit code."""
    if isinstance(error, OverwriteRefusedError):
        return EXIT_REFUSED
    if isinstance(error, (MissingInputError, FileNotFoundError)):
        return EXIT_MISSING_INPUT
    if isinstance(error, VerificationError):
        return EXIT_VERIFICATION
    if isinstance(error, ValueError):
        return EXIT_ARGUMENT
    return EXIT_FAILURE
