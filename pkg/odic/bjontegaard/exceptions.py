from odic.exceptions import ArgumentError


class CurveError(ArgumentError):
    """
    Occurs when an RD curve has too few points, duplicates or is not monotone
    """


class NoOverlapError(ArgumentError):
    """
    Occurs when two RD curves share no integration interval
    """
