from .utils import oxford_comma


class ValidationError(Exception):
    def __init__(self, message='', choices: list = None):
        if choices:
            choices = oxford_comma(choices)
            self.message = message or f'Arguments can only be: {choices}.'
        else:
            self.message = message or 'Arguments must use the correct value or selection of values.'
        super().__init__(self.message)

    def __str__(self):
        return self.message


class ConfigError(ValidationError):
    """A run configuration that parses but cannot be run as written."""
    pass


class NumericError(Exception):
    """Base class for every numerical failure raised by the library."""
    def __init__(self, message=''):
        self.message = message or self.__class__.__name__
        super().__init__(self.message)

    def __str__(self):
        return self.message


class InvalidParam(NumericError):
    pass


class OutOfConvergenceRegion(NumericError):
    pass


class NonConvergent(NumericError):
    pass


class DimensionTooLarge(NumericError):
    pass


class BracketFailure(NumericError):
    pass


class QuadratureFailure(NumericError):
    pass
