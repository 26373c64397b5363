from odic.exceptions import OdicError


class PlotError(OdicError):
    """
    Occurs when an RD plot can't be written
    """
