from odic.exceptions import OdicError


class ImageDecodeError(OdicError):
    """
    Occurs when an image or raster file can't be read or decoded
    """


class UnsupportedFormatError(ImageDecodeError):
    """
    Occurs when a file is neither PNG nor binary PGM/PPM, or can't be written in the requested format
    """


class ManifestError(OdicError):
    """
    Occurs when a corpus manifest is malformed or references missing/inconsistent files
    """
