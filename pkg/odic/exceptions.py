class OdicError(Exception):
    """
    The base odic error. Useful to catch all kinds of odic errors at once
    """


class ArgumentError(OdicError, ValueError):
    """
    Occurs when an operation is called with arguments outside of its preconditions
    """


class DegenerateInputError(OdicError, ValueError):
    """
    Occurs when the input makes the requested quantity undefined (constant maps, zero weight sums)
    """


class ConfigError(OdicError):
    """
    Occurs when a config file or an environment setting can't be used
    """
